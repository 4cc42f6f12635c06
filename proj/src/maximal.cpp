#include "nlp/maximal.hpp"

#include "nlp/error.hpp"
#include "nlp/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nlp {

namespace {

Problem regularized_problem(const Problem& raw, const RegularizedDatum& datum) {
    return raw.with_initial(datum.values, datum.epsilon);
}

Problem shifted_problem(const Problem& raw, double delta) {
    std::vector<double> values = raw.initial;
    for (double& v : values) {
        v += delta;
    }
    return raw.with_initial(std::move(values), delta);
}

bool datum_is_zero(const Problem& raw) {
    return std::all_of(raw.initial.begin(), raw.initial.end(), [](double v) { return v == 0.0; });
}

/// Largest c over interior samples; ties go to the earliest level, then to
/// the node nearest the middle.
Witness interior_source_witness(const Problem& raw) {
    const Grid& grid = raw.grid;
    Witness w;
    w.condition = Condition::interior_source;
    w.value = -std::numeric_limits<double>::infinity();
    double best_offset = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < grid.level_count(); ++j) {
        for (std::size_t i = 1; i + 1 < grid.node_count(); ++i) {
            const double v = raw.spec.c(grid.x(i), grid.t(j));
            const double offset = std::abs(grid.x(i) - grid.length() / 2.0);
            if (v > w.value || (v == w.value && grid.t(j) == w.t0 && offset < best_offset)) {
                w.value = v;
                w.x0 = grid.x(i);
                w.t0 = grid.t(j);
                best_offset = offset;
            }
        }
    }
    w.holds = raw.spec.p > 0.0 && raw.spec.p < 1.0 && w.value > 0.0;
    return w;
}

/// Largest min over both endpoints of k(xi, y, t) over samples.
Witness boundary_source_witness(const Problem& raw) {
    const Grid& grid = raw.grid;
    Witness w;
    w.condition = Condition::boundary_source;
    w.value = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < grid.level_count(); ++j) {
        for (std::size_t i = 0; i < grid.node_count(); ++i) {
            const double v = std::min(raw.spec.k(Side::left, grid.x(i), grid.t(j)),
                                      raw.spec.k(Side::right, grid.x(i), grid.t(j)));
            if (v > w.value) {
                w.value = v;
                w.x0 = grid.x(i);
                w.t0 = grid.t(j);
            }
        }
    }
    w.holds = raw.spec.l > 0.0 && raw.spec.l < 1.0 && w.value > 0.0;
    return w;
}

Witness source_near_zero_witness(const Problem& raw) {
    const Grid& grid = raw.grid;
    Witness w;
    w.condition = Condition::source_near_zero;
    w.value = 0.0;
    // The first positive level, looked for among the earliest few.
    const std::size_t last = std::min<std::size_t>(grid.level_count() - 1, 4);
    for (std::size_t j = 1; j <= last && w.value <= 0.0; ++j) {
        for (std::size_t i = 1; i + 1 < grid.node_count(); ++i) {
            const double v = raw.spec.c(grid.x(i), grid.t(j));
            if (v > w.value) {
                w.value = v;
                w.x0 = grid.x(i);
                w.t0 = grid.t(j);
            }
        }
    }
    w.holds = raw.spec.p > 0.0 && raw.spec.p < 1.0 && w.value > 0.0;
    return w;
}

Witness flux_near_zero_witness(const Problem& raw) {
    const Grid& grid = raw.grid;
    Witness w;
    w.condition = Condition::flux_near_zero;
    w.value = std::numeric_limits<double>::infinity();
    bool all = true;
    for (int k = 0; k < 8; ++k) {
        const double t = grid.dt() * std::ldexp(1.0, -k);
        w.samples.push_back(t);
        double best = -std::numeric_limits<double>::infinity();
        double best_y = 0.0;
        for (double y : {0.0, grid.length()}) {
            const double v = std::min(raw.spec.k(Side::left, y, t), raw.spec.k(Side::right, y, t));
            if (v > best) {
                best = v;
                best_y = y;
            }
        }
        all = all && best > 0.0;
        if (best < w.value) {
            w.value = best;
            w.x0 = best_y;
            w.t0 = t;
        }
    }
    w.holds = raw.spec.l > 0.0 && raw.spec.l < 1.0 && all;
    return w;
}

/// value = largest decrease of c or k between consecutive levels.
Witness monotone_in_time_witness(const Problem& raw) {
    const Grid& grid = raw.grid;
    Witness w;
    w.condition = Condition::nondecreasing_in_t;
    w.value = 0.0;
    for (std::size_t j = 0; j + 1 < grid.level_count(); ++j) {
        const double t0 = grid.t(j);
        const double t1 = grid.t(j + 1);
        for (std::size_t i = 0; i < grid.node_count(); ++i) {
            const double x = grid.x(i);
            double drop = raw.spec.c(x, t0) - raw.spec.c(x, t1);
            for (Side side : kSides) {
                drop = std::max(drop, raw.spec.k(side, x, t0) - raw.spec.k(side, x, t1));
            }
            if (drop > w.value) {
                w.value = drop;
                w.x0 = x;
                w.t0 = t0;
            }
        }
    }
    w.holds = w.value <= 1e-14;
    return w;
}

}  // namespace

std::vector<double> ladder_epsilons(const LadderConfig& config) {
    std::vector<double> eps;
    for (int m = 0; m < config.count; ++m) {
        eps.push_back(std::ldexp(1.0, -(config.first_exponent + m)));
    }
    return eps;
}

EpsilonLadder epsilon_ladder(const Problem& raw, const LadderConfig& config, const GreenKernel& kernel) {
    require(config.count >= 3, "epsilon_ladder: needs at least 3 rungs");
    require(config.first_exponent >= 1, "epsilon_ladder: epsilons must lie in (0, 1)");
    EpsilonLadder ladder{ladder_epsilons(config), {}, {}, Trajectory(raw.grid, 0.0)};
    const auto family = regularize_family(raw, ladder.epsilons);

    const std::function<Trajectory(std::size_t)> solve = [&](std::size_t m) {
        try {
            return picard_solve(regularized_problem(raw, family[m]), config.picard, kernel).trajectory;
        } catch (const ContractionFailure& e) {
            std::ostringstream msg;
            msg << "epsilon_ladder: rung " << m << " (epsilon = " << ladder.epsilons[m] << ") failed: " << e.what();
            throw Error(ErrorKind::ladder_failure, msg.str());
        }
    };
    ladder.rungs = parallel_map<Trajectory>(family.size(), solve);

    const Grid& grid = raw.grid;
    const std::size_t size = grid.node_count() * grid.level_count();
    for (std::size_t m = 1; m < ladder.rungs.size(); ++m) {
        const OrderingReport order = compare_traj(ladder.rungs[m - 1], ladder.rungs[m], config.monotonicity_tol);
        if (!order.ordered) {
            std::ostringstream msg;
            msg << "epsilon_ladder: rung " << m << " exceeds rung " << m - 1 << " by " << order.worst << " at (x="
                << order.x << ", t=" << order.t << ")";
            fail(ErrorKind::internal_error, msg.str());
        }
        ladder.gaps.push_back(sup_distance(ladder.rungs[m - 1], ladder.rungs[m]));
    }
    for (std::size_t m = 2; m < ladder.gaps.size(); ++m) {
        if (ladder.gaps[m] > ladder.gaps[m - 1] * (1.0 + 1e-9) + 1e-14) {
            ladder.gaps_nonincreasing = false;
        }
    }
    ladder.error_bar = ladder.gaps.back();

    // Per-node extrapolation from the observed contraction of the last gaps.
    const std::size_t last = ladder.rungs.size() - 1;
    const auto c = ladder.rungs[last].values();
    const auto b = ladder.rungs[last - 1].values();
    const auto a = ladder.rungs[last - 2].values();
    const bool have_prev = ladder.rungs.size() >= 4;
    std::vector<double> limit(c.begin(), c.end());
    std::size_t extrapolated = 0;
    for (std::size_t k = 0; k < size; ++k) {
        const double g0 = a[k] - b[k];
        const double g1 = b[k] - c[k];
        if (!(g0 > 1e-300) || !(g1 > 0.0)) {
            continue;
        }
        const double rho = g1 / g0;
        if (!(rho > 0.0 && rho < 1.0)) {
            continue;
        }
        if (have_prev) {
            const double gm = ladder.rungs[last - 3].values()[k] - a[k];
            if (!(gm > 1e-300) || std::abs(g0 / gm - rho) > 0.1) {
                continue;
            }
        }
        limit[k] = std::clamp(c[k] - g1 * rho / (1.0 - rho), 0.0, c[k]);
        ++extrapolated;
    }
    ladder.extrapolated_fraction = static_cast<double>(extrapolated) / static_cast<double>(size);
    ladder.limit = Trajectory(grid, std::move(limit));
    return ladder;
}

std::string_view condition_label(Condition c) noexcept {
    switch (c) {
        case Condition::interior_source:
            return "4.1";
        case Condition::boundary_source:
            return "4.2";
        case Condition::source_near_zero:
            return "4.3";
        case Condition::flux_near_zero:
            return "4.4";
        case Condition::nondecreasing_in_t:
            return "4.7";
    }
    return "?";
}

std::string_view to_string(CertificateKind kind) noexcept {
    return kind == CertificateKind::nonuniqueness ? "nonuniqueness" : "uniqueness-probe";
}

std::string_view to_string(CertificateStatus status) noexcept {
    switch (status) {
        case CertificateStatus::certified:
            return "certified";
        case CertificateStatus::inconclusive:
            return "inconclusive";
        case CertificateStatus::partial:
            return "partial";
    }
    return "inconclusive";
}

Certificate nonuniqueness_certificate(const Problem& raw, const CertificateConfig& config,
                                      const GreenKernel& kernel) {
    require(datum_is_zero(raw), "nonuniqueness_certificate: needs u0 = 0");
    const Grid& grid = raw.grid;
    const double t_star = config.t_star > 0.0 ? config.t_star : 4.0 * grid.dt();
    const double tol = consistency_tolerance(grid);

    Certificate cert;
    cert.kind = CertificateKind::nonuniqueness;
    auto stage_failed = [&](const std::string& stage) {
        if (cert.failing_stage.empty()) {
            cert.failing_stage = stage;
        }
    };

    const Witness interior = interior_source_witness(raw);
    const Witness boundary = boundary_source_witness(raw);
    cert.witnesses = {interior, boundary};

    const Trajectory zero(grid, 0.0);
    const OrderReport trivial = classify(zero, raw, tol);
    cert.evidence["trivial_interior_residual"] = trivial.interior.value;
    cert.evidence["trivial_boundary_residual"] = trivial.boundary.value;
    if (trivial.verdict != Verdict::solution) {
        stage_failed("trivial-solution");
    }
    if (!interior.holds && !boundary.holds) {
        stage_failed("hypothesis");
        cert.notes.push_back("neither a 4.1 nor a 4.2 witness: p >= 1 or c = 0, and l >= 1 or k vanishes");
    }

    const EpsilonLadder ladder = epsilon_ladder(raw, config.ladder, kernel);
    const Trajectory& limit = ladder.limit;
    cert.evidence["limit_sup"] = limit.sup();
    {
        const auto final_level = limit.level(grid.level_count() - 1);
        cert.evidence["limit_sup_at_horizon"] = *std::max_element(final_level.begin(), final_level.end());
    }
    cert.evidence["ladder_error_bar"] = ladder.error_bar;
    cert.evidence["ladder_smallest_epsilon"] = ladder.epsilons.back();
    cert.evidence["ladder_extrapolated_fraction"] = ladder.extrapolated_fraction;

    const PositivityReport positive =
        positivity_check(limit, t_star, interior.holds ? Region::everywhere : Region::boundary);
    cert.evidence["t_star"] = t_star;
    cert.evidence["limit_min_after_t_star"] = positive.min;
    if (!(positive.min > 0.0)) {
        stage_failed("positivity");
    }

    if (interior.holds) {
        InteriorSubsolution sub;
        sub.p = raw.spec.p;
        sub.t0 = interior.t0;
        double half = std::min(interior.x0, grid.length() - interior.x0) / 2.0;
        double floor = 0.0;
        for (int shrink = 0; shrink < 6 && !(floor > 0.0); ++shrink, half /= 2.0) {
            floor = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < grid.level_count(); ++j) {
                if (grid.t(j) < sub.t0) {
                    continue;
                }
                for (std::size_t i = 0; i < grid.node_count(); ++i) {
                    if (std::abs(grid.x(i) - interior.x0) < half) {
                        floor = std::min(floor, raw.spec.c(grid.x(i), grid.t(j)));
                    }
                }
            }
            sub.a = interior.x0 - half;
            sub.b = interior.x0 + half;
        }
        if (floor > 0.0 && std::isfinite(floor)) {
            sub.c0 = floor;
            sub.amplitude = 0.9 * sub.amplitude_cap();
            const Trajectory lower = interior_subsolution(sub, grid);
            const OrderingReport order = compare_traj(limit, lower, config.order_tol);
            cert.evidence["interior_subsolution_sup"] = lower.sup();
            cert.evidence["interior_subsolution_excess"] = order.worst;
            if (!order.ordered) {
                stage_failed("interior-subsolution");
            }
        } else {
            stage_failed("interior-subsolution");
            cert.notes.push_back("no neighbourhood of the 4.1 witness keeps c bounded away from 0");
        }
    }

    if (boundary.holds) {
        BoundaryLayerSubsolution spec = config.boundary_layer;
        spec.t0 = std::max(spec.t0, boundary.t0);
        spec.t3 = std::min(spec.t3, grid.horizon());
        try {
            const BoundaryLayerResult sub = boundary_layer_subsolution(spec, raw);
            const Grid& cut = sub.trajectory.grid();
            double excess = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < cut.level_count(); ++j) {
                for (std::size_t i = 0; i < cut.node_count(); ++i) {
                    if (sub.trajectory(j, i) > 0.0) {
                        excess = std::max(excess, sub.trajectory(j, i) - limit(j, i));
                    }
                }
            }
            cert.evidence["boundary_layer_xi0"] = sub.xi0;
            cert.evidence["boundary_layer_sup"] = sub.trajectory.sup();
            cert.evidence["boundary_layer_excess"] = std::isfinite(excess) ? excess : 0.0;
            if (excess > config.order_tol) {
                stage_failed("boundary-layer-subsolution");
            }
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::construction_failure && e.kind() != ErrorKind::invalid_argument) {
                throw;
            }
            stage_failed("boundary-layer-subsolution");
            cert.notes.push_back(e.what());
        }
    }

    cert.status = cert.failing_stage.empty() ? CertificateStatus::certified : CertificateStatus::inconclusive;
    cert.limit = limit;
    return cert;
}

Certificate uniqueness_probe(const Problem& raw, const CertificateConfig& config, const GreenKernel& kernel) {
    const Grid& grid = raw.grid;
    const bool zero_datum = datum_is_zero(raw);
    const bool lipschitz = std::min(raw.spec.p, raw.spec.l) >= 1.0;

    Certificate cert;
    cert.kind = CertificateKind::uniqueness_probe;
    cert.witnesses = {source_near_zero_witness(raw), flux_near_zero_witness(raw), monotone_in_time_witness(raw)};

    // Routes: 0 = Picard on raw data or ladder limit, 1 = MOL, 2 = perturbed data.
    const char* names[] = {lipschitz ? "picard" : "ladder", "mol", "perturbed"};
    std::vector<std::string> route_errors(3);
    const std::function<std::optional<Trajectory>(std::size_t)> route = [&](std::size_t r) -> std::optional<Trajectory> {
        try {
            if (r == 0) {
                if (lipschitz) {
                    return picard_solve(raw, config.ladder.picard, kernel).trajectory;
                }
                return epsilon_ladder(raw, config.ladder, kernel).limit;
            }
            if (r == 1) {
                MolResult mol = mol_solve(raw, config.mol);
                if (mol.status != MolStatus::completed) {
                    route_errors[r] = std::string("mol stopped: ") + std::string(to_string(mol.status)) + " " +
                                      mol.message;
                    return std::nullopt;
                }
                return std::move(mol.trajectory);
            }
            // Plain shifts u0 + delta: the integral form needs no compatibility
            // corrector, and one would not vanish with delta for incompatible data.
            const Trajectory uc = picard_solve(shifted_problem(raw, config.delta_coarse), config.ladder.picard, kernel).trajectory;
            const Trajectory uf = picard_solve(shifted_problem(raw, config.delta_fine), config.ladder.picard, kernel).trajectory;
            const double w = config.delta_fine / (config.delta_coarse - config.delta_fine);
            std::vector<double> v(uf.values().begin(), uf.values().end());
            for (std::size_t k = 0; k < v.size(); ++k) {
                v[k] -= (uc.values()[k] - v[k]) * w;
            }
            return Trajectory(grid, std::move(v));
        } catch (const Error& e) {
            route_errors[r] = e.what();
            return std::nullopt;
        }
    };
    const auto routes = parallel_map<std::optional<Trajectory>>(3, route);

    std::vector<std::size_t> compared;
    for (std::size_t r = 0; r < 3; ++r) {
        if (!routes[r]) {
            cert.notes.push_back(std::string(names[r]) + " route failed: " + route_errors[r]);
            continue;
        }
        if (zero_datum && r == 1) {
            cert.notes.push_back("mol route follows the trivial branch from u0 = 0 and is excluded: uniqueness "
                                 "is claimed among positive solutions");
            cert.evidence["mol_sup"] = routes[r]->sup();
            continue;
        }
        compared.push_back(r);
    }

    double divergence = 0.0;
    for (std::size_t a = 0; a < compared.size(); ++a) {
        for (std::size_t b = a + 1; b < compared.size(); ++b) {
            const double d = sup_distance(*routes[compared[a]], *routes[compared[b]]);
            cert.evidence[std::string("divergence_") + names[compared[a]] + "_" + names[compared[b]]] = d;
            divergence = std::max(divergence, d);
        }
    }
    cert.evidence["divergence"] = divergence;
    cert.evidence["cross_solver_tol"] = config.cross_solver_tol;

    const std::size_t expected = zero_datum ? 2 : 3;
    bool agree = compared.size() >= 2 && divergence <= config.cross_solver_tol;

    if (zero_datum && routes[0]) {
        // u(x,t) <= u(x,t+tau) on the maximal solution, sampled shifts.
        const Trajectory& u = *routes[0];
        double violation = -std::numeric_limits<double>::infinity();
        for (std::size_t s : {1u, 2u, 4u, 8u}) {
            for (std::size_t j = 0; j + s < grid.level_count(); ++j) {
                for (std::size_t i = 0; i < grid.node_count(); ++i) {
                    violation = std::max(violation, u(j, i) - u(j + s, i));
                }
            }
        }
        cert.evidence["time_shift_violation"] = violation;
        if (violation > config.order_tol) {
            agree = false;
            cert.failing_stage = "time-shift";
        }
    }

    if (agree && compared.size() == expected) {
        cert.status = CertificateStatus::certified;
    } else if (agree) {
        cert.status = CertificateStatus::partial;
        cert.failing_stage = "route-failure";
    } else {
        cert.status = CertificateStatus::inconclusive;
        if (cert.failing_stage.empty()) {
            cert.failing_stage = compared.size() < 2 ? "route-failure" : "route-agreement";
        }
    }
    if (routes[0]) {
        cert.limit = *routes[0];
    }
    return cert;
}

double UniformOde::blowup_time() const {
    if (p > 1.0 && u0 > 0.0 && c0 > 0.0) {
        return std::pow(u0, 1.0 - p) / (c0 * (p - 1.0));
    }
    return std::numeric_limits<double>::infinity();
}

double UniformOde::operator()(double t) const {
    require(u0 >= 0.0 && c0 >= 0.0, "uniform_oracle: needs u0 >= 0 and c0 >= 0");
    require(t >= 0.0, "uniform_oracle: needs t >= 0");
    if (t >= blowup_time()) {
        std::ostringstream msg;
        msg << "uniform_oracle: t = " << t << " is at or past the blowup time " << blowup_time();
        fail(ErrorKind::domain_error, msg.str());
    }
    if (c0 == 0.0) {
        return u0;
    }
    if (p == 1.0) {
        return u0 * std::exp(c0 * t);
    }
    if (p > 1.0 && u0 == 0.0) {
        return 0.0;
    }
    const double base = std::pow(u0, 1.0 - p) + c0 * (1.0 - p) * t;
    return std::pow(base, 1.0 / (1.0 - p));
}

Trajectory uniform_oracle(const UniformOde& ode, const Grid& grid) {
    std::vector<double> values(grid.node_count() * grid.level_count());
    for (std::size_t j = 0; j < grid.level_count(); ++j) {
        const double v = ode(grid.t(j));
        std::fill_n(values.begin() + static_cast<std::ptrdiff_t>(j * grid.node_count()), grid.node_count(), v);
    }
    return Trajectory(grid, std::move(values));
}

}  // namespace nlp

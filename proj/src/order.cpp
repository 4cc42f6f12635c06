#include "nlp/order.hpp"

#include "nlp/error.hpp"
#include "nlp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace nlp {

namespace {

double positive_power(double u, double q) {
    if (u <= 0.0) {
        return 0.0;
    }
    return q == 1.0 ? u : std::pow(u, q);
}

}  // namespace

std::string_view to_string(Verdict verdict) noexcept {
    switch (verdict) {
        case Verdict::supersolution:
            return "supersolution";
        case Verdict::subsolution:
            return "subsolution";
        case Verdict::solution:
            return "solution";
        case Verdict::neither:
            return "neither";
    }
    return "neither";
}

double consistency_tolerance(const Grid& grid) {
    return 10.0 * (grid.h() * grid.h() + std::pow(grid.dt(), 1.5));
}

ResidualFields solution_residual(const Trajectory& traj, const Problem& problem) {
    const Grid& grid = traj.grid();
    require(grid.node_count() >= 3 && grid.level_count() >= 3,
            "solution_residual: need at least 3 nodes and 3 levels");
    require(grid.domain() == problem.grid.domain() && grid.n_cells() == problem.grid.n_cells(),
            "solution_residual: trajectory and problem use different spatial grids");
    const std::size_t nx = grid.node_count();
    const std::size_t nt = grid.level_count();
    const double h = grid.h();
    const double dt = grid.dt();
    const ProblemSpec& spec = problem.spec;

    ResidualFields out{grid, std::vector<double>(nx * nt, 0.0), std::vector<double>(2 * nt, 0.0),
                       std::vector<double>(nx, 0.0)};
    const bool reacting = !spec.c.is_zero();
    for (std::size_t j = 1; j < nt; ++j) {
        const double t = grid.t(j);
        for (std::size_t i = 1; i + 1 < nx; ++i) {
            double ut = 0.0;
            if (j + 1 < nt) {
                ut = (traj(j + 1, i) - traj(j - 1, i)) / (2.0 * dt);
            } else {
                ut = (3.0 * traj(j, i) - 4.0 * traj(j - 1, i) + traj(j - 2, i)) / (2.0 * dt);
            }
            const double uxx = (traj(j, i - 1) - 2.0 * traj(j, i) + traj(j, i + 1)) / (h * h);
            const double source = reacting ? spec.c(grid.x(i), t) * positive_power(traj(j, i), spec.p) : 0.0;
            out.interior[j * nx + i] = ut - uxx - source;
        }
        const auto level = traj.level(j);
        const EndpointPair flux = nonlocal_flux(level, spec.k, spec.l, t, grid);
        for (Side side : kSides) {
            out.boundary[j * 2 + (side == Side::left ? 0 : 1)] =
                boundary_normal_derivative(level, h, side) - flux[side];
        }
    }
    for (std::size_t i = 0; i < nx; ++i) {
        out.initial[i] = traj(0, i) - problem.initial[i];
    }
    return out;
}

OrderReport classify(const Trajectory& traj, const Problem& problem, double tol) {
    require(tol >= 0.0, "classify: tolerance must be nonnegative");
    const ResidualFields r = solution_residual(traj, problem);
    const Grid& grid = r.grid;
    const std::size_t nx = grid.node_count();
    const std::size_t nt = grid.level_count();
    const double tol_bd = 2.0 * tol;

    OrderReport report;
    report.tolerance = tol;
    bool super = true;
    bool sub = true;
    auto note = [&](double v, double band) {
        super = super && v >= -band;
        sub = sub && v <= band;
    };

    double worst = -1.0;
    for (std::size_t j = 1; j < nt; ++j) {
        for (std::size_t i = 1; i + 1 < nx; ++i) {
            const double v = r.interior[j * nx + i];
            note(v, tol);
            if (std::abs(v) > worst) {
                worst = std::abs(v);
                report.interior = {grid.x(i), grid.t(j), v};
            }
        }
    }
    worst = -1.0;
    for (std::size_t j = 1; j < nt; ++j) {
        for (Side side : kSides) {
            const double v = r.boundary[j * 2 + (side == Side::left ? 0 : 1)];
            note(v, tol_bd);
            if (std::abs(v) > worst) {
                worst = std::abs(v);
                report.boundary = {side, grid.t(j), v};
            }
        }
    }
    worst = -1.0;
    for (std::size_t i = 0; i < nx; ++i) {
        const double v = r.initial[i];
        note(v, tol);
        if (std::abs(v) > worst) {
            worst = std::abs(v);
            report.initial = {grid.x(i), v};
        }
    }
    sub = sub && traj.min() >= 0.0;

    if (super && sub) {
        report.verdict = Verdict::solution;
    } else if (super) {
        report.verdict = Verdict::supersolution;
    } else if (sub) {
        report.verdict = Verdict::subsolution;
    } else {
        report.verdict = Verdict::neither;
    }
    return report;
}

OrderingReport compare_traj(const Trajectory& u, const Trajectory& v, double tol) {
    require(u.grid() == v.grid(), "compare_traj: trajectories live on different grids");
    const Grid& grid = u.grid();
    OrderingReport out;
    out.worst = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < grid.level_count(); ++j) {
        for (std::size_t i = 0; i < grid.node_count(); ++i) {
            const double gap = v(j, i) - u(j, i);
            if (gap > out.worst) {
                out.worst = gap;
                out.x = grid.x(i);
                out.t = grid.t(j);
            }
        }
    }
    out.ordered = out.worst <= tol;
    return out;
}

PositivityReport positivity_check(const Trajectory& traj, double from_t, Region region) {
    const Grid& grid = traj.grid();
    PositivityReport out;
    out.min = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < grid.level_count(); ++j) {
        if (!(grid.t(j) > from_t)) {
            continue;
        }
        for (std::size_t i = 0; i < grid.node_count(); ++i) {
            if (region == Region::boundary && i != 0 && i + 1 != grid.node_count()) {
                continue;
            }
            if (traj(j, i) < out.min) {
                out.min = traj(j, i);
                out.x = grid.x(i);
                out.t = grid.t(j);
            }
        }
    }
    require(std::isfinite(out.min), "positivity_check: no level lies after from_t");
    return out;
}

double InteriorSubsolution::amplitude_cap() const {
    return std::pow(c0 * (1.0 - p), 1.0 / (1.0 - p));
}

Trajectory interior_subsolution(const InteriorSubsolution& spec, const Grid& grid) {
    require(spec.p > 0.0 && spec.p < 1.0, "interior_subsolution: needs 0 < p < 1");
    require(spec.c0 > 0.0, "interior_subsolution: needs c0 > 0");
    require(spec.a > 0.0 && spec.b < grid.length() && spec.a < spec.b,
            "interior_subsolution: U must lie strictly inside the interval");
    require(spec.amplitude > 0.0, "interior_subsolution: amplitude must be positive");
    if (spec.amplitude > spec.amplitude_cap() * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "interior_subsolution: amplitude " << spec.amplitude << " exceeds the cap " << spec.amplitude_cap();
        fail(ErrorKind::invalid_argument, msg.str());
    }
    const double width = spec.b - spec.a;
    const double rate = std::numbers::pi * std::numbers::pi / (width * width);
    const double power = 1.0 / (1.0 - spec.p);
    const std::size_t nx = grid.node_count();
    std::vector<double> values(nx * grid.level_count(), 0.0);
    for (std::size_t j = 0; j < grid.level_count(); ++j) {
        const double tau = grid.t(j) - spec.t0;
        if (tau <= 0.0) {
            continue;
        }
        const double scale = spec.amplitude * std::pow(tau, power) * std::exp(-rate * tau);
        for (std::size_t i = 0; i < nx; ++i) {
            const double x = grid.x(i);
            if (x > spec.a && x < spec.b) {
                values[j * nx + i] = scale * std::sin(std::numbers::pi * (x - spec.a) / width);
            }
        }
    }
    return Trajectory(grid, std::move(values));
}

Trajectory boundary_layer_profile(const BoundaryLayerSubsolution& spec, double xi0, const Grid& grid) {
    const std::size_t levels = grid.level_at_or_before(spec.t3) + 1;
    const Grid cut = grid.truncated(std::max<std::size_t>(levels, 3));
    const std::size_t nx = cut.node_count();
    std::vector<double> values(nx * cut.level_count(), 0.0);
    for (std::size_t j = 0; j < cut.level_count(); ++j) {
        const double tau = cut.t(j) - spec.t0;
        if (tau <= 0.0) {
            continue;
        }
        const double root = std::sqrt(tau);
        const double scale = std::pow(tau, spec.alpha);
        for (std::size_t i = 0; i < nx; ++i) {
            const double s = std::min(cut.x(i), cut.length() - cut.x(i));
            const double q = xi0 - s / root;
            if (q > 0.0) {
                values[j * nx + i] = scale * q * q * q;
            }
        }
    }
    return Trajectory(cut, std::move(values));
}

BoundaryLayerResult boundary_layer_subsolution(const BoundaryLayerSubsolution& spec, const Problem& problem) {
    const double l = problem.spec.l;
    require(l > 0.0 && l < 1.0, "boundary_layer_subsolution: needs 0 < l < 1");
    require(spec.alpha > 1.0 / (1.0 - l), "boundary_layer_subsolution: needs alpha > 1/(1-l)");
    require(spec.xi0 > 0.0 && spec.xi0 <= 1.0, "boundary_layer_subsolution: needs 0 < xi0 <= 1");
    require(spec.t3 > spec.t0 && spec.t0 >= 0.0, "boundary_layer_subsolution: needs 0 <= t0 < T3");
    const Grid& grid = problem.grid;
    require(spec.t3 <= grid.horizon() * (1.0 + 1e-12), "boundary_layer_subsolution: T3 beyond the grid horizon");

    // The flux kernel must charge the layer at both endpoints over [t0, T3].
    for (std::size_t j = 0; j < grid.level_count() && grid.t(j) <= spec.t3; ++j) {
        if (grid.t(j) < spec.t0) {
            continue;
        }
        for (Side side : kSides) {
            for (double y : {0.0, grid.length()}) {
                if (!(problem.spec.k(side, y, grid.t(j)) > 0.0)) {
                    std::ostringstream msg;
                    msg << "boundary_layer_subsolution: k vanishes at (" << to_string(side) << ", y=" << y
                        << ", t=" << grid.t(j) << ")";
                    fail(ErrorKind::invalid_argument, msg.str());
                }
            }
        }
    }

    double xi0 = spec.xi0;
    std::ostringstream trace;
    for (int halvings = 0; halvings <= spec.max_halvings; ++halvings) {
        Trajectory profile = boundary_layer_profile(spec, xi0, grid);
        const OrderReport report = classify(profile, problem, consistency_tolerance(grid));
        if (report.verdict == Verdict::subsolution || report.verdict == Verdict::solution) {
            return {std::move(profile), xi0, halvings, report};
        }
        trace << " xi0=" << xi0 << ": interior " << report.interior.value << ", boundary " << report.boundary.value
              << ";";
        xi0 /= 2.0;
    }
    fail(ErrorKind::construction_failure, "boundary_layer_subsolution: no admissible xi0 found;" + trace.str());
}

}  // namespace nlp

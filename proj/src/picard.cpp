#include "nlp/picard.hpp"

#include "nlp/error.hpp"
#include "nlp/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

namespace nlp {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMap = Eigen::Map<RowMatrix>;
using ConstRowMap = Eigen::Map<const RowMatrix>;

double positive_power(double u, double q) {
    if (u <= 0.0) {
        return 0.0;
    }
    return q == 1.0 ? u : std::pow(u, q);
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

double PicardDiagnostics::tail_ratio(std::size_t count) const {
    double worst = 0.0;
    const std::size_t start = ratio.size() > count ? ratio.size() - count : 0;
    for (std::size_t k = start; k < ratio.size(); ++k) {
        if (!std::isnan(ratio[k])) {
            worst = std::max(worst, ratio[k]);
        }
    }
    return worst;
}

IntegralOperator::IntegralOperator(const Problem& problem, const GreenKernel& kernel)
    : problem_(problem), conv_(kernel, problem.grid) {
    const Grid& grid = problem_.grid;
    require(problem_.initial.size() == grid.node_count(), "IntegralOperator: initial field size mismatch");
    require(kernel.t_min() <= grid.dt() / 2.0 * (1.0 + 1e-12),
            "IntegralOperator: kernel window must reach down to dt/2");
    const std::size_t nx = grid.node_count();
    const std::size_t nt = grid.level_count();

    if (!problem_.spec.c.is_zero()) {
        reaction_ = sample_reaction(problem_.spec.c, grid);
    }
    if (!problem_.spec.k.is_zero()) {
        const auto w = simpson_weights(grid.n_cells(), grid.h());
        flux_weights_.resize(2 * nt * nx);
        for (Side side : kSides) {
            const auto k = sample_flux_kernel(problem_.spec.k, side, grid);
            const std::size_t offset = (side == Side::left ? 0 : 1) * nt * nx;
            for (std::size_t j = 0; j < nt; ++j) {
                for (std::size_t i = 0; i < nx; ++i) {
                    flux_weights_[offset + j * nx + i] = k[j * nx + i] * w[i];
                }
            }
        }
    }
    initial_modes_ = project_datum();
}

std::vector<double> IntegralOperator::project_datum() const {
    const Grid& grid = problem_.grid;
    const std::vector<double>& u0 = problem_.initial;
    const std::size_t nx = grid.node_count();
    const std::size_t nm = conv_.mode_count();
    if (nx < 3) {
        return conv_.project(u0);
    }
    // A datum with nonzero endpoint slope has a kink in its even extension, and
    // the node-based cosine projection would alias that kink into low modes
    // where the flux term's high modes can no longer cancel it. The slopes are
    // carried instead by the Neumann resolvent R_s (outward slope 1 at side s,
    // zero mean), whose modes are known exactly; only the smooth rest is projected.
    const double h = grid.h();
    const double slope_left = (3.0 * u0[0] - 4.0 * u0[1] + u0[2]) / (2.0 * h);
    const double slope_right = (3.0 * u0[nx - 1] - 4.0 * u0[nx - 2] + u0[nx - 3]) / (2.0 * h);
    std::vector<double> smooth = u0;
    std::vector<double> modes(nm, 0.0);
    for (Side side : kSides) {
        const double slope = side == Side::left ? slope_left : slope_right;
        if (slope == 0.0) {
            continue;
        }
        const auto coeff = conv_.boundary_coefficients(side);
        std::vector<double> r(nm, 0.0);
        for (std::size_t m = 1; m < nm; ++m) {
            r[m] = coeff[m] / conv_.kernel().eigenvalue(static_cast<int>(m));
        }
        const std::vector<double> nodal = conv_.synthesize(r);
        const auto tail = conv_.boundary_tail(side);
        for (std::size_t i = 0; i < nx; ++i) {
            smooth[i] -= slope * (nodal[i] + tail[i]);
        }
        for (std::size_t m = 0; m < nm; ++m) {
            modes[m] += slope * r[m];
        }
    }
    const std::vector<double> rest = conv_.project(smooth);
    for (std::size_t m = 0; m < nm; ++m) {
        modes[m] += rest[m];
    }
    return modes;
}

std::vector<double> IntegralOperator::evolve(const std::vector<double>& interior, const std::vector<double>& boundary,
                                             const std::vector<double>& initial_modes) const {
    const Grid& grid = problem_.grid;
    const auto nx = static_cast<Eigen::Index>(grid.node_count());
    const auto nt = static_cast<Eigen::Index>(grid.level_count());
    const auto nm = static_cast<Eigen::Index>(conv_.mode_count());

    RowMatrix source = RowMatrix::Zero(nt, nm);
    if (!interior.empty()) {
        const ConstRowMap f(interior.data(), nt, nx);
        const ConstRowMap p(conv_.projection().data(), nx, nm);
        source.noalias() += f * p;
    }
    RowMatrix bd;
    if (!boundary.empty()) {
        bd = ConstRowMap(boundary.data(), nt, 2);
        RowMatrix coeff(2, nm);
        RowMatrix tail(2, nx);
        for (Side side : kSides) {
            const Eigen::Index s = side == Side::left ? 0 : 1;
            const auto c = conv_.boundary_coefficients(side);
            const auto t = conv_.boundary_tail(side);
            for (Eigen::Index m = 0; m < nm; ++m) {
                coeff(s, m) = c[static_cast<std::size_t>(m)];
            }
            for (Eigen::Index i = 0; i < nx; ++i) {
                tail(s, i) = t[static_cast<std::size_t>(i)];
            }
        }
        source.noalias() += bd * coeff;
        bd = bd * tail;  // quasi-static high-mode part, nt x nx
    }

    const auto decay = conv_.decay();
    const auto lead = conv_.lead_weight();
    const auto trail = conv_.trail_weight();
    RowMatrix modes(nt, nm);
    for (Eigen::Index m = 0; m < nm; ++m) {
        modes(0, m) = initial_modes.empty() ? 0.0 : initial_modes[static_cast<std::size_t>(m)];
    }
    for (Eigen::Index j = 0; j + 1 < nt; ++j) {
        for (Eigen::Index m = 0; m < nm; ++m) {
            const auto mm = static_cast<std::size_t>(m);
            modes(j + 1, m) = decay[mm] * modes(j, m) + lead[mm] * source(j, m) + trail[mm] * source(j + 1, m);
        }
    }

    std::vector<double> out(static_cast<std::size_t>(nt * nx));
    RowMap u(out.data(), nt, nx);
    const ConstRowMap phi(conv_.synthesis().data(), nx, nm);
    u.noalias() = modes * phi.transpose();
    if (!boundary.empty()) {
        u.bottomRows(nt - 1) += bd.bottomRows(nt - 1);
    }
    return out;
}

Trajectory IntegralOperator::apply(const Trajectory& history) const {
    const Grid& grid = problem_.grid;
    require(history.grid() == grid, "apply_L: history grid differs from the problem grid");
    const std::size_t nx = grid.node_count();
    const std::size_t nt = grid.level_count();
    const auto values = history.values();

    // Only the powers u^p and u^l need u >= 0; a pure heat problem may carry a
    // sign-changing datum.
    const bool reads_history = !reaction_.empty() || !flux_weights_.empty();
    const double scale = std::max(1.0, history.sup());
    for (std::size_t k = 0; reads_history && k < values.size(); ++k) {
        if (values[k] < -1e-9 * scale) {
            std::ostringstream msg;
            msg << "apply_L: history is negative (" << values[k] << ") at level " << k / nx << ", node " << k % nx;
            fail(ErrorKind::invalid_argument, msg.str());
        }
    }

    std::vector<double> interior;
    if (!reaction_.empty()) {
        interior.resize(values.size());
        const double p = problem_.spec.p;
        for (std::size_t k = 0; k < values.size(); ++k) {
            interior[k] = reaction_[k] * positive_power(values[k], p);
        }
    }
    std::vector<double> boundary;
    if (!flux_weights_.empty()) {
        boundary.assign(2 * nt, 0.0);
        const double l = problem_.spec.l;
        std::vector<double> powered(values.size());
        for (std::size_t k = 0; k < values.size(); ++k) {
            powered[k] = positive_power(values[k], l);
        }
        for (std::size_t s = 0; s < 2; ++s) {
            const double* w = flux_weights_.data() + s * nt * nx;
            for (std::size_t j = 0; j < nt; ++j) {
                double acc = 0.0;
                for (std::size_t i = 0; i < nx; ++i) {
                    acc += w[j * nx + i] * powered[j * nx + i];
                }
                boundary[j * 2 + s] = acc;
            }
        }
    }

    std::vector<double> out = evolve(interior, boundary, initial_modes_);
    std::copy(problem_.initial.begin(), problem_.initial.end(), out.begin());
    return Trajectory(grid, std::move(out));
}

std::pair<std::vector<double>, std::vector<double>> IntegralOperator::nu_mu_levels() const {
    const Grid& grid = problem_.grid;
    const std::size_t nx = grid.node_count();
    const std::size_t nt = grid.level_count();
    std::vector<double> nu(nt, 0.0);
    std::vector<double> mu(nt, 0.0);
    auto sup_rows = [&](const std::vector<double>& field, std::vector<double>& out) {
        for (std::size_t j = 1; j < nt; ++j) {
            out[j] = *std::max_element(field.begin() + static_cast<std::ptrdiff_t>(j * nx),
                                       field.begin() + static_cast<std::ptrdiff_t>((j + 1) * nx));
        }
    };
    if (!reaction_.empty()) {
        sup_rows(evolve(reaction_, {}, {}), nu);
    }
    if (!flux_weights_.empty()) {
        std::vector<double> boundary(2 * nt, 0.0);
        for (std::size_t s = 0; s < 2; ++s) {
            for (std::size_t j = 0; j < nt; ++j) {
                double acc = 0.0;
                for (std::size_t i = 0; i < nx; ++i) {
                    acc += flux_weights_[s * nt * nx + j * nx + i];
                }
                boundary[j * 2 + s] = acc;
            }
        }
        sup_rows(evolve({}, boundary, {}), mu);
    }
    return {std::move(nu), std::move(mu)};
}

Trajectory apply_L(const Trajectory& history, const Problem& problem, const GreenKernel& kernel) {
    return IntegralOperator(problem, kernel).apply(history);
}

PicardResult picard_solve(const Problem& problem, const PicardConfig& config, const GreenKernel& kernel) {
    return picard_solve(IntegralOperator(problem, kernel), config);
}

PicardResult picard_solve(const IntegralOperator& op, const PicardConfig& config) {
    require(config.tolerance > 0.0, "picard_solve: tolerance must be positive");
    require(config.max_iterations >= 1, "picard_solve: max_iterations must be at least 1");
    const Problem& problem = op.problem();
    require(problem.epsilon >= 0.0, "picard_solve: epsilon must be nonnegative");
    const double initial_sup = *std::max_element(problem.initial.begin(), problem.initial.end());
    require(!(config.bound <= std::max(problem.epsilon, initial_sup)),
            "picard_solve: the bound M must exceed max(epsilon, sup u0)");

    PicardDiagnostics diag;
    Trajectory u(problem.grid, problem.epsilon);
    int stalled = 0;
    auto failure = [&](const std::string& why) {
        throw ContractionFailure("picard_solve: " + why, diag.sup_diff, diag.ratio);
    };

    for (int n = 1; n <= config.max_iterations; ++n) {
        std::optional<Trajectory> next;
        try {
            next.emplace(op.apply(u));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::numeric_failure) {
                throw;
            }
            failure(std::string("iterate became non-finite (") + e.what() + ")");
        }
        const double d = sup_distance(*next, u);
        const double ratio = diag.sup_diff.empty() || diag.sup_diff.back() == 0.0
                                 ? std::numeric_limits<double>::quiet_NaN()
                                 : d / diag.sup_diff.back();
        diag.sup_diff.push_back(d);
        diag.ratio.push_back(ratio);
        u = std::move(*next);
        diag.iterations = n + 1;
        const double sup = u.sup();
        if (sup > config.bound) {
            diag.within_bound = false;
        }
        if (d <= config.tolerance) {
            diag.converged = true;
            break;
        }
        if (!std::isnan(ratio) && ratio >= config.stall_ratio && sup > config.bound) {
            ++stalled;
        } else {
            stalled = 0;
        }
        if (stalled >= config.stall_window) {
            std::ostringstream msg;
            msg << "contraction lost: ratio " << ratio << " for " << stalled
                << " iterations with sup " << sup << " above the bound " << config.bound;
            failure(msg.str());
        }
    }
    if (!diag.converged) {
        std::ostringstream msg;
        msg << "no convergence in " << config.max_iterations << " iterations (last sup difference "
            << diag.sup_diff.back() << ")";
        failure(msg.str());
    }

    diag.fixed_point_residual = sup_distance(op.apply(u), u);
    diag.times = problem.grid.times();
    std::tie(diag.nu, diag.mu) = op.nu_mu_levels();
    diag.horizon = problem.grid.horizon();
    return {std::move(u), std::move(diag)};
}

std::pair<double, double> estimate_nu_mu(const Problem& problem, const GreenKernel& kernel, double t) {
    const Grid& grid = problem.grid;
    require(t >= 0.0 && t <= grid.horizon() * (1.0 + 1e-12), "estimate_nu_mu: t must lie in [0, horizon]");
    if (t == 0.0) {
        return {0.0, 0.0};
    }
    const int steps = std::max(1, static_cast<int>(std::ceil(t / grid.dt() - 1e-9)));
    const double dt = t / steps;
    const Grid sub(grid.domain(), grid.n_cells(), dt, steps);
    const GreenKernel local = kernel.t_min() <= dt / 2.0 * (1.0 + 1e-12)
                                  ? kernel
                                  : GreenKernel(grid.length(), choose_modes(grid.length(), dt / 2.0, 1e-12), dt / 2.0);
    const IntegralOperator op(problem.on_grid(sub), local);
    const auto [nu, mu] = op.nu_mu_levels();
    return {nu.back(), mu.back()};
}

double find_local_horizon(double bound, double initial_sup, const Problem& problem, const GreenKernel& kernel) {
    require(bound > initial_sup, "find_local_horizon: M must exceed M0");
    const IntegralOperator op(problem, kernel);
    const auto [nu, mu] = op.nu_mu_levels();
    const double p = problem.spec.p;
    const double l = problem.spec.l;
    const double budget = (bound - initial_sup) * (1.0 + 1e-12);

    std::vector<double> running(nu.size());
    double worst = 0.0;
    for (std::size_t j = 0; j < nu.size(); ++j) {
        worst = std::max(worst, std::pow(bound, p) * nu[j] + std::pow(bound, l) * mu[j]);
        running[j] = worst;
    }
    if (running.front() > budget) {
        return 0.0;
    }
    // Largest j with running[j] <= budget; running is nondecreasing.
    std::size_t lo = 0;
    std::size_t hi = running.size();
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (running[mid] <= budget) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return problem.grid.t(lo);
}

std::string diagnostics_csv(const PicardDiagnostics& diag) {
    std::string out = "iter,sup_diff,ratio\n";
    for (std::size_t k = 0; k < diag.sup_diff.size(); ++k) {
        out += std::to_string(k + 1) + "," + format_g17(diag.sup_diff[k]) + "," + format_g17(diag.ratio[k]) + "\n";
    }
    return out;
}

std::string nu_mu_csv(const PicardDiagnostics& diag) {
    std::string out = "t,nu,mu\n";
    for (std::size_t j = 0; j < diag.times.size(); ++j) {
        out += format_g17(diag.times[j]) + "," + format_g17(diag.nu[j]) + "," + format_g17(diag.mu[j]) + "\n";
    }
    return out;
}

}  // namespace nlp

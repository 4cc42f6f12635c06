#include "nlp/mol.hpp"

#include "nlp/error.hpp"
#include "nlp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nlp {

namespace {

double positive_power(double u, double q) {
    if (u <= 0.0) {
        return 0.0;
    }
    return q == 1.0 ? u : std::pow(u, q);
}

/// Discrete Neumann Laplacian with boundary flux g folded into the end rows.
std::vector<double> laplacian(std::span<const double> u, double h, const EndpointPair& g) {
    const std::size_t n = u.size() - 1;
    std::vector<double> out(u.size());
    const double inv = 1.0 / (h * h);
    out[0] = 2.0 * (u[1] - u[0]) * inv + 2.0 * g.left / h;
    for (std::size_t i = 1; i < n; ++i) {
        out[i] = (u[i - 1] - 2.0 * u[i] + u[i + 1]) * inv;
    }
    out[n] = 2.0 * (u[n - 1] - u[n]) * inv + 2.0 * g.right / h;
    return out;
}

/// Solves (I - a D) x = rhs with D the homogeneous Neumann Laplacian (Thomas).
std::vector<double> solve_implicit(std::vector<double> rhs, double a, double h) {
    const std::size_t size = rhs.size();
    const std::size_t n = size - 1;
    const double r = a / (h * h);
    std::vector<double> lower(size, -r);
    std::vector<double> diag(size, 1.0 + 2.0 * r);
    std::vector<double> upper(size, -r);
    upper[0] = -2.0 * r;
    lower[n] = -2.0 * r;

    for (std::size_t i = 1; i < size; ++i) {
        const double pivot = diag[i - 1];
        if (!(std::abs(pivot) > 1e-300)) {
            fail(ErrorKind::numeric_failure, "step_imex: tridiagonal solve broke down");
        }
        const double w = lower[i] / pivot;
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[n] /= diag[n];
    for (std::size_t i = n; i-- > 0;) {
        rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
    }
    return rhs;
}

}  // namespace

std::string_view to_string(MolStatus status) noexcept {
    switch (status) {
        case MolStatus::completed:
            return "completed";
        case MolStatus::blowup:
            return "blowup";
        case MolStatus::stability_failure:
            return "stability-failure";
    }
    return "unknown";
}

std::vector<double> step_imex(std::span<const double> state, std::size_t level, const Problem& problem,
                              const MolConfig& config) {
    const Grid& grid = problem.grid;
    require(state.size() == grid.node_count(), "step_imex: state size mismatch");
    require(level + 1 < grid.level_count(), "step_imex: no level after the requested one");
    const double h = grid.h();
    const double dt = grid.dt();
    const double t = grid.t(level);
    if (config.scheme == MolScheme::explicit_euler) {
        require(dt <= h * h / 2.0 * (1.0 + 1e-12), "step_imex: explicit scheme needs dt <= h^2/2");
    }
    // Undershoot is only meaningful when the datum is nonnegative; pure heat
    // runs may start from sign-changing data.
    const bool guard = *std::min_element(problem.initial.begin(), problem.initial.end()) >= -config.negativity_tol;
    for (double v : state) {
        if (guard && v < -config.negativity_tol) {
            fail(ErrorKind::stability_failure, "step_imex: state is negative before the step");
        }
    }

    const EndpointPair g = nonlocal_flux(state, problem.spec.k, problem.spec.l, t, grid);
    const std::vector<double> lap = laplacian(state, h, g);
    std::vector<double> next(state.size());
    const bool reacting = !problem.spec.c.is_zero();
    auto source = [&](std::size_t i) {
        return reacting ? problem.spec.c(grid.x(i), t) * positive_power(state[i], problem.spec.p) : 0.0;
    };

    if (config.scheme == MolScheme::explicit_euler) {
        for (std::size_t i = 0; i < state.size(); ++i) {
            next[i] = state[i] + dt * (lap[i] + source(i));
        }
    } else {
        // Increment form of (I - dt/2 D) u^{j+1} = u^j + dt/2 D u^j + dt (f + b):
        // (I - dt/2 D)(u^{j+1} - u^j) = dt (D u^j + b + f), where lap already
        // holds D u^j + b. A zero right-hand side then leaves the state bitwise intact.
        std::vector<double> rhs(state.size());
        for (std::size_t i = 0; i < state.size(); ++i) {
            rhs[i] = dt * (lap[i] + source(i));
        }
        const std::vector<double> delta = solve_implicit(std::move(rhs), 0.5 * dt, h);
        for (std::size_t i = 0; i < state.size(); ++i) {
            next[i] = state[i] + delta[i];
        }
    }

    for (std::size_t i = 0; i < next.size(); ++i) {
        if (guard && next[i] < -config.negativity_tol) {
            std::ostringstream msg;
            msg << "step_imex: value " << next[i] << " at x=" << grid.x(i) << ", t=" << grid.t(level + 1)
                << " is below the negativity tolerance";
            fail(ErrorKind::stability_failure, msg.str());
        }
    }
    return next;
}

bool detect_blowup(std::span<const double> state, const MolConfig& config) noexcept {
    for (double v : state) {
        if (!std::isfinite(v) || v > config.blowup_cap) {
            return true;
        }
    }
    return false;
}

MolResult mol_solve(const Problem& problem, const MolConfig& config) {
    const Grid& grid = problem.grid;
    const double initial_sup = *std::max_element(problem.initial.begin(), problem.initial.end());
    require(config.blowup_cap > initial_sup, "mol_solve: blowup cap must exceed sup u0");
    const std::size_t nx = grid.node_count();

    std::vector<double> values;
    values.reserve(nx * grid.level_count());
    values.insert(values.end(), problem.initial.begin(), problem.initial.end());
    std::vector<double> state = problem.initial;

    MolStatus status = MolStatus::completed;
    double stop_time = grid.horizon();
    std::string message;
    for (std::size_t j = 0; j + 1 < grid.level_count(); ++j) {
        std::vector<double> next;
        try {
            next = step_imex(state, j, problem, config);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::stability_failure) {
                throw;
            }
            status = MolStatus::stability_failure;
            stop_time = grid.t(j + 1);
            message = e.what();
            break;
        }
        if (detect_blowup(next, config)) {
            status = MolStatus::blowup;
            stop_time = grid.t(j + 1);
            std::ostringstream msg;
            msg << "sup exceeded " << config.blowup_cap << " at t=" << stop_time;
            message = msg.str();
            break;
        }
        values.insert(values.end(), next.begin(), next.end());
        state = std::move(next);
    }

    const std::size_t levels = values.size() / nx;
    if (levels < 2) {
        // A trajectory needs two levels; keep the datum twice so callers can
        // still read the status and stop time.
        values.insert(values.end(), problem.initial.begin(), problem.initial.end());
    }
    Grid kept = grid.truncated(std::max<std::size_t>(levels, 2));
    return {Trajectory(kept, std::move(values)), status, stop_time, std::move(message)};
}

}  // namespace nlp

#include "nlp/problem.hpp"

#include "nlp/error.hpp"
#include "nlp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nlp {

namespace {

std::string fmt_g(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
}

double bump(double distance, double width) {
    if (distance >= width) {
        return 0.0;
    }
    const double r = width - distance;
    return r * r / (2.0 * width);
}

}  // namespace

Problem Problem::discretize(const ProblemSpec& spec) {
    return discretize(spec, spec.make_grid());
}

Problem Problem::discretize(const ProblemSpec& spec, const Grid& grid) {
    require(grid.domain() == spec.domain, "problem grid does not cover the problem domain");
    return Problem{spec, grid, spec.u0.sample(grid), 0.0};
}

Problem Problem::with_initial(std::vector<double> values, double eps) const {
    require(values.size() == grid.node_count(), "initial field size mismatch");
    Problem out = *this;
    out.initial = std::move(values);
    out.epsilon = eps;
    return out;
}

Problem Problem::on_grid(const Grid& other) const {
    return discretize(spec, other);
}

EndpointPair nonlocal_flux(std::span<const double> u, const FluxKernel& k, double l, double t, const Grid& grid) {
    require(u.size() == grid.node_count(), "nonlocal_flux: size mismatch");
    EndpointPair out;
    if (k.is_zero()) {
        return out;
    }
    std::vector<double> integrand(u.size());
    for (Side side : kSides) {
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double v = u[i] > 0.0 ? std::pow(u[i], l) : 0.0;
            integrand[i] = k(side, grid.x(i), t) * v;
        }
        out[side] = quadrature(integrand, grid);
    }
    return out;
}

EndpointPair compatibility_residual(std::span<const double> u0, const FluxKernel& k, double l, const Grid& grid) {
    const EndpointPair flux = nonlocal_flux(u0, k, l, 0.0, grid);
    EndpointPair out;
    for (Side side : kSides) {
        out[side] = boundary_normal_derivative(u0, grid, side) - flux[side];
    }
    return out;
}

ValidationReport validate_problem(const ProblemSpec& spec, const ValidationTolerances& tol) {
    ValidationReport report;
    auto add = [&](std::string code, std::string message, double x, double t, double value) {
        report.violations.push_back({std::move(code), std::move(message), x, t, value});
    };

    if (!(spec.p > 0.0)) {
        add("p-nonpositive", "p must be positive (got " + fmt_g(spec.p) + ")", 0, 0, spec.p);
    }
    if (!(spec.l > 0.0)) {
        add("l-nonpositive", "l must be positive (got " + fmt_g(spec.l) + ")", 0, 0, spec.l);
    }

    Grid grid = spec.make_grid();
    const Problem problem = Problem::discretize(spec, grid);

    // First offending sample only, per coefficient; enough to locate the problem.
    [&] {
        for (std::size_t j = 0; j < grid.level_count(); ++j) {
            for (std::size_t i = 0; i < grid.node_count(); ++i) {
                const double v = spec.c(grid.x(i), grid.t(j));
                if (v < tol.negativity || !std::isfinite(v)) {
                    add("c-negative",
                        "c negative at (" + fmt_g(grid.x(i)) + "," + fmt_g(grid.t(j)) + ")",
                        grid.x(i), grid.t(j), v);
                    return;
                }
            }
        }
    }();
    [&] {
        for (std::size_t j = 0; j < grid.level_count(); ++j) {
            for (Side side : kSides) {
                for (std::size_t i = 0; i < grid.node_count(); ++i) {
                    const double v = spec.k(side, grid.x(i), grid.t(j));
                    if (v < tol.negativity || !std::isfinite(v)) {
                        add("k-negative",
                            "k negative at (" + std::string(to_string(side)) + "," + fmt_g(grid.x(i)) + "," +
                                fmt_g(grid.t(j)) + ")",
                            grid.x(i), grid.t(j), v);
                        return;
                    }
                }
            }
        }
    }();
    bool u0_ok = true;
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
        const double v = problem.initial[i];
        if (v < tol.negativity || !std::isfinite(v)) {
            add("u0-negative", "u0 negative at x=" + fmt_g(grid.x(i)), grid.x(i), 0.0, v);
            u0_ok = false;
            break;
        }
    }

    if (u0_ok && spec.l > 0.0) {
        const EndpointPair residual = compatibility_residual(problem.initial, spec.k, spec.l, grid);
        for (Side side : kSides) {
            if (std::abs(residual[side]) > tol.compatibility) {
                add("compatibility",
                    "compatibility residual " + fmt_g(std::abs(residual[side])) + " at " +
                        std::string(to_string(side)) + " endpoint",
                    grid.domain().endpoint(side), 0.0, residual[side]);
            }
        }
    }

    if (report.violations.empty()) {
        report.problem = problem;
    }
    return report;
}

double corrector_width(const Grid& grid) {
    return std::min(std::max(4.0 * grid.h(), grid.length() / 10.0), grid.length() / 2.0);
}

RegularizedDatum regularize_initial(const Problem& raw, double epsilon) {
    require(epsilon > 0.0 && epsilon < 1.0, "regularize_initial: epsilon must lie in (0,1)");
    const Grid& grid = raw.grid;
    const std::size_t n = grid.node_count();
    const double width = corrector_width(grid);
    const double length = grid.length();

    std::vector<double> base(n);
    std::vector<double> phi_left(n);
    std::vector<double> phi_right(n);
    for (std::size_t i = 0; i < n; ++i) {
        base[i] = raw.initial[i] + epsilon;
        phi_left[i] = bump(grid.x(i), width);
        phi_right[i] = bump(length - grid.x(i), width);
    }

    RegularizedDatum out;
    out.epsilon = epsilon;
    out.bump_width = width;
    out.values = base;

    if (raw.spec.k.is_zero()) {
        out.residual = compatibility_residual(out.values, raw.spec.k, raw.spec.l, grid);
        return out;
    }

    EndpointPair base_slope;
    for (Side side : kSides) {
        base_slope[side] = boundary_normal_derivative(base, grid, side);
    }

    auto assemble = [&](const EndpointPair& s) {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = base[i] + s.left * phi_left[i] + s.right * phi_right[i];
        }
        return v;
    };

    // Fixed point s = F(s): the bump's discrete outward slope is exactly s, so
    // the compatibility residual of the assembled datum is s - F(s).
    EndpointPair slope;
    double residual = 0.0;
    int iter = 0;
    constexpr int kMaxIterations = 50;
    for (; iter < kMaxIterations; ++iter) {
        const EndpointPair flux = nonlocal_flux(assemble(slope), raw.spec.k, raw.spec.l, 0.0, grid);
        EndpointPair next;
        residual = 0.0;
        for (Side side : kSides) {
            next[side] = flux[side] - base_slope[side];
            residual = std::max(residual, std::abs(next[side] - slope[side]));
        }
        slope = next;
        if (residual <= 1e-15 * std::max(1.0, std::max(std::abs(slope.left), std::abs(slope.right)))) {
            break;
        }
    }

    out.values = assemble(slope);
    out.slope = slope;
    out.iterations = iter + 1;
    out.residual = compatibility_residual(out.values, raw.spec.k, raw.spec.l, grid);
    const double final_residual = std::max(std::abs(out.residual.left), std::abs(out.residual.right));
    if (!(final_residual <= 1e-8)) {
        std::ostringstream msg;
        msg << "regularize_initial: corrector fixed point did not converge in " << kMaxIterations
            << " iterations (residual " << final_residual << ")";
        fail(ErrorKind::regularization_failure, msg.str());
    }
    const double floor = *std::min_element(out.values.begin(), out.values.end());
    if (floor < epsilon * (1.0 - 1e-12)) {
        std::ostringstream msg;
        msg << "regularize_initial: corrector pushes the datum below epsilon (min " << floor
            << "); u0 is not compatible with the flux";
        fail(ErrorKind::regularization_failure, msg.str());
    }
    return out;
}

std::vector<RegularizedDatum> regularize_family(const Problem& raw, std::span<const double> epsilons) {
    std::vector<RegularizedDatum> family;
    family.reserve(epsilons.size());
    for (std::size_t m = 0; m < epsilons.size(); ++m) {
        require(m == 0 || epsilons[m] < epsilons[m - 1], "regularize_family: epsilons must decrease");
        family.push_back(regularize_initial(raw, epsilons[m]));
        if (m > 0) {
            const auto& upper = family[m - 1].values;
            const auto& lower = family[m].values;
            for (std::size_t i = 0; i < upper.size(); ++i) {
                if (lower[i] > upper[i] + 1e-14 * std::max(1.0, upper[i])) {
                    fail(ErrorKind::regularization_failure,
                         "regularized data not monotone in epsilon at node " + std::to_string(i));
                }
            }
        }
    }
    return family;
}

}  // namespace nlp

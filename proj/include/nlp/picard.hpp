#pragma once

#include "nlp/green_kernel.hpp"
#include "nlp/grid.hpp"
#include "nlp/problem.hpp"

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace nlp {

struct PicardConfig {
    double tolerance = 1e-10;
    int max_iterations = 500;
    /// A-priori sup bound M for the iterates; +inf disables the bound checks.
    double bound = std::numeric_limits<double>::infinity();
    /// Stall detection: this many consecutive ratios at or above stall_ratio
    /// while the iterate exceeds the bound is reported as a failure.
    int stall_window = 5;
    double stall_ratio = 1.0 - 1e-3;
};

struct PicardDiagnostics {
    /// d_n = sup |u_{n+1} - u_n|, one entry per application of the operator.
    std::vector<double> sup_diff;
    /// d_n / d_{n-1}; the first entry has no predecessor and is NaN.
    std::vector<double> ratio;
    /// Level times with the sup over x of nu and mu at each.
    std::vector<double> times;
    std::vector<double> nu;
    std::vector<double> mu;
    double horizon = 0.0;
    int iterations = 0;
    bool converged = false;
    bool within_bound = true;
    double fixed_point_residual = 0.0;

    /// Largest ratio over the last `count` iterations (NaN entries skipped).
    double tail_ratio(std::size_t count = 3) const;
};

/// The integral operator
///
///   (Lu)(x,t) = int G(x,y;t) u0(y) dy + int_0^t int G(x,y;t-s) c u^p dy ds
///             + int_0^t sum_xi G(x,xi;t-s) int k(xi,y,s) u^l dy ds
///
/// on a fixed grid. Time integrals are done per cosine mode with sources
/// interpolated linearly between levels and integrated exactly against the
/// exponential; the part of the boundary term beyond the kernel's modes is
/// added in quasi-static closed form.
class IntegralOperator {
public:
    IntegralOperator(const Problem& problem, const GreenKernel& kernel);

    const Problem& problem() const noexcept { return problem_; }
    const Grid& grid() const noexcept { return problem_.grid; }
    const ModalConvolution& convolution() const noexcept { return conv_; }

    Trajectory apply(const Trajectory& history) const;

    /// sup_x of int_0^t int G c dy ds and of int_0^t sum_xi G(x,xi;t-s) int k dy ds
    /// at every level.
    std::pair<std::vector<double>, std::vector<double>> nu_mu_levels() const;

private:
    /// Runs the modal recursion for level-major sources and returns nodal values.
    std::vector<double> evolve(const std::vector<double>& interior, const std::vector<double>& boundary,
                               const std::vector<double>& initial_modes) const;
    /// Modal coefficients of the datum with its endpoint slopes handled exactly.
    std::vector<double> project_datum() const;

    Problem problem_;
    ModalConvolution conv_;
    std::vector<double> reaction_;        // levels x nodes
    std::vector<double> flux_weights_;    // 2 x levels x nodes, k * Simpson weight
    std::vector<double> initial_modes_;
};

/// One application of the operator, with a fresh kernel operator.
Trajectory apply_L(const Trajectory& history, const Problem& problem, const GreenKernel& kernel);

struct PicardResult {
    Trajectory trajectory;
    PicardDiagnostics diagnostics;
};

/// Iterates u_1 = epsilon, u_{n+1} = L u_n until sup |u_{n+1} - u_n| <= tolerance.
PicardResult picard_solve(const Problem& problem, const PicardConfig& config, const GreenKernel& kernel);
PicardResult picard_solve(const IntegralOperator& op, const PicardConfig& config);

/// (nu(t), mu(t)) at an arbitrary t <= horizon, computed on a sub-partition of [0, t].
std::pair<double, double> estimate_nu_mu(const Problem& problem, const GreenKernel& kernel, double t);

/// Largest grid time T1 with sup_{s <= T1} (M^p nu(s) + M^l mu(s)) <= M - M0.
double find_local_horizon(double bound, double initial_sup, const Problem& problem, const GreenKernel& kernel);

/// Diagnostics CSV: iter,sup_diff,ratio.
std::string diagnostics_csv(const PicardDiagnostics& diag);
/// Bounds CSV: t,nu,mu.
std::string nu_mu_csv(const PicardDiagnostics& diag);

}  // namespace nlp

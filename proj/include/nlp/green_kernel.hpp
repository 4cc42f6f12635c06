#pragma once

#include "nlp/grid.hpp"

#include <span>
#include <vector>

namespace nlp {

/// Smallest M with (2/L) sum_{m>M} exp(-(m pi / L)^2 t_min) <= tol.
int choose_modes(double length, double t_min, double tol);

/// Neumann heat kernel of (0, L) as a truncated cosine series
///
///   G(x, y; t) = 1/L + (2/L) sum_{m=1}^{M} cos(m pi x/L) cos(m pi y/L) exp(-(m pi/L)^2 t).
///
/// Evaluations are only certified for gaps t >= t_min, where the truncation
/// error is bounded by the tolerance the mode count was chosen for.
class GreenKernel {
public:
    GreenKernel(double length, int modes, double t_min);

    /// Kernel for a time grid: t_min = dt/2, modes from choose_modes(tol).
    static GreenKernel for_grid(const Grid& grid, double tol = 1e-12);

    double length() const noexcept { return length_; }
    int modes() const noexcept { return modes_; }
    double t_min() const noexcept { return t_min_; }

    /// (m pi / L)^2
    double eigenvalue(int m) const noexcept;
    /// 1/L for m = 0, 2/L otherwise.
    double mode_weight(int m) const noexcept;

    double operator()(double x, double y, double gap) const;

    /// sum_{m > M} weight_m cos(m pi x/L) cos(m pi xi/L) / lambda_m, the part of
    /// the time-integrated kernel the truncated series leaves out. Closed form
    /// via sum cos(m theta)/m^2 = pi^2/6 - pi theta/2 + theta^2/4 on [0, 2 pi].
    double resolvent_tail(double x, double xi) const;

    /// Node-to-node values G(x_i, y_j; gap), row-major.
    std::vector<double> matrix(const Grid& grid, double gap) const;

private:
    double length_;
    int modes_;
    double t_min_;
};

double gn_eval(double x, double y, double gap, const GreenKernel& kernel);

/// int G(x_i, y; gap) f(y) dy at every node, with the trapezoid rule in y.
std::vector<double> heat_propagate(std::span<const double> field, double gap, const GreenKernel& kernel,
                                   const Grid& grid);

/// The kernel expressed on a grid in its cosine eigenbasis, with everything
/// that depends only on the time step precomputed: per-mode one-step decay
/// exp(-lambda dt) and the exact integrals of exp(-lambda (t_{j+1} - tau))
/// against the two linear hat functions of a cell. Volterra convolutions with
/// G then become a first-order recursion per mode.
class ModalConvolution {
public:
    ModalConvolution(const GreenKernel& kernel, const Grid& grid);

    std::size_t mode_count() const noexcept { return mode_count_; }
    std::size_t node_count() const noexcept { return node_count_; }
    const GreenKernel& kernel() const noexcept { return kernel_; }

    /// Row-major (nodes x modes): trapezoid weight * mode weight * cos(m pi y_j / L),
    /// zero for modes above n_cells. The kernel is widened to at least n_cells modes.
    const std::vector<double>& projection() const noexcept { return projection_; }
    /// Row-major (nodes x modes): cos(m pi x_i / L).
    const std::vector<double>& synthesis() const noexcept { return synthesis_; }
    /// mode weight * cos(m pi xi / L) at an endpoint.
    std::span<const double> boundary_coefficients(Side side) const noexcept;
    /// resolvent_tail(x_i, xi) at every node.
    std::span<const double> boundary_tail(Side side) const noexcept;

    std::span<const double> decay() const noexcept { return decay_; }
    /// Weight on the cell's left sample f(t_j).
    std::span<const double> lead_weight() const noexcept { return lead_; }
    /// Weight on the cell's right sample f(t_{j+1}).
    std::span<const double> trail_weight() const noexcept { return trail_; }

    /// Modal coefficients of int G(., y; 0) f(y) dy (the projection of f).
    std::vector<double> project(std::span<const double> field) const;
    /// Nodal values of sum_m coeffs_m cos(m pi x / L).
    std::vector<double> synthesize(std::span<const double> coeffs) const;

private:
    GreenKernel kernel_;
    std::size_t mode_count_;
    std::size_t node_count_;
    std::vector<double> projection_;
    std::vector<double> synthesis_;
    std::vector<double> boundary_coeff_;  // 2 x modes
    std::vector<double> boundary_tail_;   // 2 x nodes
    std::vector<double> decay_;
    std::vector<double> lead_;
    std::vector<double> trail_;
};

}  // namespace nlp

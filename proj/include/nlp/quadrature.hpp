#pragma once

#include "nlp/grid.hpp"

#include <span>
#include <vector>

namespace nlp {

/// Composite Simpson weights on n_cells uniform cells of width h. For an odd
/// cell count the last three cells use the 3/8 rule; a single cell falls back
/// to the trapezoid rule.
std::vector<double> simpson_weights(int n_cells, double h);

/// Composite trapezoid weights. On the even cosine modes cos(m pi x / L) with
/// m < 2 n_cells these are exact, which makes them the right choice for
/// projecting onto the Neumann eigenbasis.
std::vector<double> trapezoid_weights(int n_cells, double h);

/// Integral over (0, L) of nodal values (Simpson).
double quadrature(std::span<const double> values, const Grid& grid);

/// Outward normal derivative at an endpoint from the three-point one-sided
/// stencil: -u_x(0) on the left, +u_x(L) on the right. Exact for quadratics.
double boundary_normal_derivative(std::span<const double> field, double h, Side side);
double boundary_normal_derivative(std::span<const double> field, const Grid& grid, Side side);

}  // namespace nlp

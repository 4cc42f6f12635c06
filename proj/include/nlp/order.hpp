#pragma once

#include "nlp/grid.hpp"
#include "nlp/problem.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace nlp {

enum class Verdict { supersolution, subsolution, solution, neither };

std::string_view to_string(Verdict verdict) noexcept;

/// Signed residuals of a trajectory against the problem.
///   interior: u_t - u_xx - c u^p at interior nodes, levels 1..last
///   boundary: du/dnu - int k u^l dy at both endpoints, levels 1..last
///   initial:  u(., 0) - u0
struct ResidualFields {
    Grid grid;
    /// levels x nodes; level 0 and the two end columns are zero.
    std::vector<double> interior;
    /// levels x 2 (left, right); level 0 is zero.
    std::vector<double> boundary;
    std::vector<double> initial;
};

/// The initial residual is taken against problem.initial, so the datum the
/// problem carries (raw or regularized) is the reference.
ResidualFields solution_residual(const Trajectory& traj, const Problem& problem);

/// 10 (h^2 + dt^{3/2}): the residual band a consistent discrete solution
/// falls into on this grid.
double consistency_tolerance(const Grid& grid);

struct OrderReport {
    Verdict verdict = Verdict::neither;
    double tolerance = 0.0;
    struct InteriorWorst {
        double x = 0.0;
        double t = 0.0;
        double value = 0.0;
    } interior;
    struct BoundaryWorst {
        Side side = Side::left;
        double t = 0.0;
        double value = 0.0;
    } boundary;
    struct InitialWorst {
        double x = 0.0;
        double value = 0.0;
    } initial;
};

/// Supersolution when every residual is >= -tol, subsolution when every
/// residual is <= tol and u >= 0, solution when both. Boundary residuals get
/// twice the tolerance: the one-sided stencil dominates the error there.
/// The worst entries are the residuals of largest magnitude.
OrderReport classify(const Trajectory& traj, const Problem& problem, double tol);

struct OrderingReport {
    bool ordered = true;
    /// max of v - u over the grid (positive means u dips below v).
    double worst = 0.0;
    double x = 0.0;
    double t = 0.0;
};

/// Checks u >= v - tol at every node and level.
OrderingReport compare_traj(const Trajectory& u, const Trajectory& v, double tol);

enum class Region { everywhere, boundary };

struct PositivityReport {
    double min = 0.0;
    double x = 0.0;
    double t = 0.0;
};

/// Minimum of the trajectory over levels with t > from_t.
PositivityReport positivity_check(const Trajectory& traj, double from_t, Region region = Region::everywhere);

/// C (t - t0)^{1/(1-p)} w(x,t) on U = (a, b), zero elsewhere, where
/// w = exp(-(pi/|U|)^2 (t - t0)) sin(pi (x - a)/|U|) solves the Dirichlet heat
/// problem on U from the seed w0 = sin(pi (x - a)/|U|), so M0 = 1.
struct InteriorSubsolution {
    double c0 = 1.0;
    double p = 0.5;
    double t0 = 0.0;
    double a = 0.25;
    double b = 0.75;
    double amplitude = 0.2;

    /// M0^{-1} [c0 (1 - p)]^{1/(1-p)}
    double amplitude_cap() const;
};

Trajectory interior_subsolution(const InteriorSubsolution& spec, const Grid& grid);

/// (t - t0)^alpha (xi0 - s / sqrt(t - t0))_+^3 with s the distance to the
/// nearest endpoint, on the grid truncated at T3.
struct BoundaryLayerSubsolution {
    double alpha = 3.0;
    double xi0 = 1.0;
    double t0 = 0.0;
    double t3 = 0.05;
    /// Halvings of xi0 allowed before giving up.
    int max_halvings = 20;
};

struct BoundaryLayerResult {
    Trajectory trajectory;
    double xi0 = 0.0;
    int halvings = 0;
    OrderReport report;
};

/// Evaluates the profile for a given xi0 on a grid (no admissibility search).
Trajectory boundary_layer_profile(const BoundaryLayerSubsolution& spec, double xi0, const Grid& grid);

/// Shrinks xi0 by halving until the profile classifies as a subsolution of
/// the problem on [0, T3].
BoundaryLayerResult boundary_layer_subsolution(const BoundaryLayerSubsolution& spec, const Problem& problem);

}  // namespace nlp

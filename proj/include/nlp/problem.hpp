#pragma once

#include "nlp/coefficients.hpp"
#include "nlp/grid.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nlp {

struct GridSettings {
    int n_cells = 32;
    double dt = 1e-3;
    bool operator==(const GridSettings&) const = default;
};

/// u_t = u_xx + c(x,t) u^p on (0,L), du/dnu = int k(xi,y,t) u^l dy at xi in {0,L},
/// u(x,0) = u0(x).
struct ProblemSpec {
    IntervalDomain domain{1.0};
    double p = 1.0;
    double l = 1.0;
    Coefficient c;
    FluxKernel k;
    InitialDatum u0;
    double horizon = 1.0;
    GridSettings grid;

    Grid make_grid() const { return Grid::build(domain, grid.n_cells, grid.dt, horizon); }

    bool operator==(const ProblemSpec&) const = default;
};

/// A problem bound to a grid and a concrete nodal initial field. `epsilon` is
/// the regularization level the initial field was built with (0 for raw data);
/// it is also the constant the Picard iteration starts from.
struct Problem {
    ProblemSpec spec;
    Grid grid;
    std::vector<double> initial;
    double epsilon = 0.0;

    static Problem discretize(const ProblemSpec& spec);
    static Problem discretize(const ProblemSpec& spec, const Grid& grid);

    Problem with_initial(std::vector<double> values, double eps) const;
    /// Same data on another grid; the initial field is re-sampled from u0.
    Problem on_grid(const Grid& other) const;
};

struct EndpointPair {
    double left = 0.0;
    double right = 0.0;

    double& operator[](Side side) noexcept { return side == Side::left ? left : right; }
    double operator[](Side side) const noexcept { return side == Side::left ? left : right; }
};

/// du0/dnu - int k(xi, y, 0) u0(y)^l dy at both endpoints.
EndpointPair compatibility_residual(std::span<const double> u0, const FluxKernel& k, double l, const Grid& grid);

/// Nodal values of int k(xi, y, t) u(y)^l dy at both endpoints.
EndpointPair nonlocal_flux(std::span<const double> u, const FluxKernel& k, double l, double t, const Grid& grid);

struct Violation {
    std::string code;
    std::string message;
    double x = 0.0;
    double t = 0.0;
    double value = 0.0;
};

struct ValidationReport {
    std::vector<Violation> violations;
    std::optional<Problem> problem;

    bool ok() const noexcept { return violations.empty(); }
};

struct ValidationTolerances {
    double compatibility = 1e-8;
    double negativity = -1e-12;
};

ValidationReport validate_problem(const ProblemSpec& spec, const ValidationTolerances& tol = {});

struct RegularizedDatum {
    double epsilon = 0.0;
    std::vector<double> values;
    /// Corrector slopes imposed at each endpoint.
    EndpointPair slope;
    double bump_width = 0.0;
    EndpointPair residual;
    int iterations = 0;
};

/// Width of the boundary corrector: max(4h, L/10), capped at L/2.
double corrector_width(const Grid& grid);

/// u0 + eps + s_left phi_left + s_right phi_right, with the slopes solved so
/// the datum is compatible with the nonlocal flux at t = 0.
RegularizedDatum regularize_initial(const Problem& raw, double epsilon);

/// Regularizes for each epsilon (strictly decreasing) and checks the family is
/// nodewise nonincreasing.
std::vector<RegularizedDatum> regularize_family(const Problem& raw, std::span<const double> epsilons);

}  // namespace nlp

#pragma once

#include "nlp/green_kernel.hpp"
#include "nlp/grid.hpp"
#include "nlp/mol.hpp"
#include "nlp/order.hpp"
#include "nlp/picard.hpp"
#include "nlp/problem.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nlp {

struct LadderConfig {
    /// Rung m uses epsilon = 2^-(first_exponent + m).
    int first_exponent = 2;
    int count = 12;
    PicardConfig picard;
    /// Allowed upward step between consecutive rungs before it counts as a
    /// monotonicity violation.
    double monotonicity_tol = 1e-8;
};

struct EpsilonLadder {
    std::vector<double> epsilons;
    std::vector<Trajectory> rungs;
    /// g_m = sup |u_m - u_{m+1}|
    std::vector<double> gaps;
    Trajectory limit;
    /// Share of nodes where the epsilon extrapolation was applied.
    double extrapolated_fraction = 0.0;
    /// Last gap; the limit's error bar where extrapolation was not applied.
    double error_bar = 0.0;
    bool gaps_nonincreasing = true;
};

std::vector<double> ladder_epsilons(const LadderConfig& config);

/// Solves the regularized problem for each rung, checks the rungs decrease,
/// and extrapolates the limit per node from the last three rungs.
EpsilonLadder epsilon_ladder(const Problem& raw, const LadderConfig& config, const GreenKernel& kernel);

/// Hypothesis labels on the wire are fixed condition numbers ("4.1" and so on); the enum
/// names say what each one means.
enum class Condition {
    interior_source,      // "4.1": c(x0,t0) > 0 and 0 < p < 1
    boundary_source,      // "4.2": k(x,y0,t0) > 0 at both endpoints, 0 < l < 1
    source_near_zero,     // "4.3": c not identically 0 on Q_tau for small tau, 0 < p < 1
    flux_near_zero,       // "4.4": k(x,y_k,t_k) > 0 for sampled t_k -> 0, 0 < l < 1
    nondecreasing_in_t,   // "4.7": c and k nondecreasing in t
};

std::string_view condition_label(Condition c) noexcept;

struct Witness {
    Condition condition = Condition::interior_source;
    double x0 = 0.0;
    double t0 = 0.0;
    double value = 0.0;
    bool holds = false;
    /// Sampled points behind the witness when it summarizes a set.
    std::vector<double> samples;
};

enum class CertificateKind { nonuniqueness, uniqueness_probe };
enum class CertificateStatus { certified, inconclusive, partial };

std::string_view to_string(CertificateKind kind) noexcept;
std::string_view to_string(CertificateStatus status) noexcept;

struct Certificate {
    CertificateKind kind = CertificateKind::nonuniqueness;
    CertificateStatus status = CertificateStatus::inconclusive;
    /// Name of the first stage that did not pass; empty when certified.
    std::string failing_stage;
    std::vector<Witness> witnesses;
    std::map<std::string, double> evidence;
    std::vector<std::string> notes;
    /// The maximal-solution estimate (ladder limit) when one was built.
    std::optional<Trajectory> limit;
};

struct CertificateConfig {
    LadderConfig ladder;
    /// Positivity is checked for t > t_star; nonpositive means 4 dt.
    double t_star = 0.0;
    /// Slack for the limit-versus-subsolution and route comparisons.
    double order_tol = 1e-8;
    double cross_solver_tol = 5e-3;
    BoundaryLayerSubsolution boundary_layer;
    /// Perturbations for the data-perturbation route of the uniqueness probe.
    /// From zero data the error scales like sqrt(delta), so they are small.
    double delta_coarse = 0x1p-20;
    double delta_fine = 0x1p-21;
    MolConfig mol;
};

/// Requires u0 = 0. Certified only when the trivial solution checks out, a
/// hypothesis is witnessed, the ladder limit is positive past t_star, and it
/// dominates the matching subsolution.
Certificate nonuniqueness_certificate(const Problem& raw, const CertificateConfig& config,
                                      const GreenKernel& kernel);

/// Solves by up to three routes (Picard on raw data or the ladder limit, MOL,
/// Picard on u0 + delta extrapolated to delta = 0) and reports the largest
/// pairwise divergence. With u0 = 0 it also checks u(x,t) <= u(x,t+tau) on
/// the ladder limit for sampled shifts tau.
Certificate uniqueness_probe(const Problem& raw, const CertificateConfig& config, const GreenKernel& kernel);

/// Spatially uniform solution of u' = c0 u^p, u(0) = u0 (maximal branch).
struct UniformOde {
    double u0 = 1.0;
    double c0 = 1.0;
    double p = 0.5;

    /// +inf when the solution exists for all time.
    double blowup_time() const;
    /// Throws domain-error at or past the blowup time.
    double operator()(double t) const;
};

Trajectory uniform_oracle(const UniformOde& ode, const Grid& grid);

}  // namespace nlp

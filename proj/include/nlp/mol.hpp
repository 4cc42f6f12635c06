#pragma once

#include "nlp/grid.hpp"
#include "nlp/problem.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nlp {

enum class MolScheme {
    /// Crank-Nicolson diffusion, reaction and boundary flux explicit at t_j.
    imex_cn,
    /// Forward Euler for everything; needs dt <= h^2 / 2.
    explicit_euler,
};

struct MolConfig {
    MolScheme scheme = MolScheme::imex_cn;
    double blowup_cap = 1e6;
    double negativity_tol = 1e-12;
};

enum class MolStatus { completed, blowup, stability_failure };

std::string_view to_string(MolStatus status) noexcept;

struct MolResult {
    /// Levels up to the last accepted one; shorter than the grid after a stop.
    Trajectory trajectory;
    MolStatus status = MolStatus::completed;
    /// Time of the level that tripped the stop (blowup or stability).
    double stop_time = 0.0;
    std::string message;
};

/// Advances one step from level j. Ghost nodes u_{-1} = u_1 + 2h g_left and
/// u_{n+1} = u_{n-1} + 2h g_right make the discrete outward derivative equal
/// the flux quadrature g at t_j.
std::vector<double> step_imex(std::span<const double> state, std::size_t level, const Problem& problem,
                              const MolConfig& config);

/// True when any value is non-finite or exceeds the cap.
bool detect_blowup(std::span<const double> state, const MolConfig& config) noexcept;

MolResult mol_solve(const Problem& problem, const MolConfig& config = {});

}  // namespace nlp

#pragma once

#include "nlp/io.hpp"
#include "nlp/problem.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nlp {

enum class Task {
    solve_picard,
    solve_mol,
    ladder,
    nonuniqueness,
    uniqueness_probe,
    kernel_check,
    subsolution_demo,
};

std::string_view to_string(Task task) noexcept;
/// Throws parse-error for names outside the closed set.
Task task_from_string(std::string_view name, const std::string& path = "task");

/// Knobs a scenario may override; anything absent keeps the library default.
struct Overrides {
    std::optional<double> picard_tolerance;
    std::optional<int> max_iterations;
    std::optional<double> bound;
    std::optional<int> ladder_count;
    std::optional<int> first_exponent;
    std::optional<double> t_star;
    std::optional<double> order_tol;
    std::optional<double> cross_solver_tol;
    std::optional<int> kernel_n_cells;
    std::optional<double> kernel_tol;
};

struct Scenario {
    std::string name;
    Task task = Task::solve_picard;
    ProblemSpec problem;
    /// Empty means the caller chooses.
    std::filesystem::path out;
    Overrides overrides;
    /// Snapshot times for profiles.svg; empty means five evenly spaced times.
    std::vector<double> plot_times;
};

/// {"name", "task", "problem": {...}, "out"?, "tolerances"?: {...}, "plot_times"?: [...]}
/// Relative "out" paths resolve against base_dir.
Scenario scenario_from_json(const Json& doc, const std::filesystem::path& base_dir = {});
Json to_json(const Scenario& scenario);

/// Parses the file (JSON syntax errors report their line and column) and runs it.
/// Exit status: 0 success, 2 ran but the certificate or check is not
/// conclusive, 1 error. Errors are also written to <out>/error.json when an
/// output directory is known. `out` overrides the scenario's own directory.
int run_scenario(const std::filesystem::path& path, const std::optional<std::filesystem::path>& out = {});
int run_scenario(const Scenario& scenario, const std::filesystem::path& out);

std::vector<std::string> demo_names();
/// Built-in scenario for a demo name; throws invalid-argument for unknown names.
Scenario demo_scenario(std::string_view name);

/// gap,modes,max_normalization_error,min_value for each gap: the largest
/// |int G(x_i, y; gap) dy - 1| over the nodes of an n_cells grid, and the
/// smallest kernel value over 101 x 101 samples.
std::string kernel_check_csv(double length, int n_cells, const std::vector<double>& gaps, double tol = 1e-12);

/// y followed by one column G(x, y; gap) per x in {0, L/4, L/2, 3L/4, L}.
/// modes <= 0 picks the count from choose_modes(length, gap, 1e-12).
std::string kernel_slice_csv(double length, double gap, int modes, int samples = 101);

}  // namespace nlp

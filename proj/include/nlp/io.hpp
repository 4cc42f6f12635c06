#pragma once

#include "nlp/error.hpp"
#include "nlp/grid.hpp"
#include "nlp/maximal.hpp"
#include "nlp/order.hpp"
#include "nlp/problem.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace nlp {

using Json = nlohmann::json;

/// {"L", "p", "l", "c", "k", "u0", "T", "grid": {"n_cells", "dt"}}
Json to_json(const ProblemSpec& spec);
/// Throws parse-error naming the offending field path.
ProblemSpec problem_from_json(const Json& doc, const std::string& path = "problem");

Json to_json(const OrderReport& report);
Json to_json(const Certificate& cert);
Json to_json(const Error& error);

/// Header t,x0,...,xn (the x values), then one row per level prefixed by t,
/// all at 17 significant digits.
std::string trajectory_csv(const Trajectory& traj);
Trajectory trajectory_from_csv(const std::string& text);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Deterministic 800x600 line plot with nice-number axis ticks.
std::string svg_line_plot(const std::vector<PlotSeries>& series, const std::string& title,
                          const std::string& x_label, const std::string& y_label);

/// Writes profiles.svg (u against x at the requested times) and supnorm.svg
/// (sup_x u against t). Times must lie within the horizon.
void export_plots(const Trajectory& traj, const std::vector<double>& times, const std::filesystem::path& out_dir);

}  // namespace nlp

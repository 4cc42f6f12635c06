#include "nlp/scenario.hpp"

#include "nlp/error.hpp"
#include "nlp/green_kernel.hpp"
#include "nlp/maximal.hpp"
#include "nlp/mol.hpp"
#include "nlp/order.hpp"
#include "nlp/picard.hpp"
#include "nlp/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <numbers>

namespace nlp {

namespace {

constexpr std::array<std::pair<Task, std::string_view>, 7> kTaskNames{{
    {Task::solve_picard, "solve-picard"},
    {Task::solve_mol, "solve-mol"},
    {Task::ladder, "ladder"},
    {Task::nonuniqueness, "nonuniqueness"},
    {Task::uniqueness_probe, "uniqueness-probe"},
    {Task::kernel_check, "kernel-check"},
    {Task::subsolution_demo, "subsolution-demo"},
}};

const std::vector<double> kCheckGaps{1e-3, 1e-2, 1e-1, 1.0};

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInconclusive = 2;

[[noreturn]] void parse_fail(const std::string& path, const std::string& what) {
    fail(ErrorKind::parse_error, path + ": " + what);
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class T>
std::optional<T> optional_field(const Json& obj, const char* key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        return std::nullopt;
    }
    if (!it->is_number()) {
        parse_fail(path + "." + key, "expected a number");
    }
    if constexpr (std::is_same_v<T, int>) {
        const double v = it->get<double>();
        if (v != std::floor(v)) {
            parse_fail(path + "." + key, "expected an integer");
        }
        return static_cast<int>(v);
    } else {
        return it->get<double>();
    }
}

Overrides overrides_from(const Json& doc, const std::string& path) {
    if (!doc.is_object()) {
        parse_fail(path, "expected an object");
    }
    static const std::array<const char*, 10> known{"picard_tolerance", "max_iterations", "bound",
                                                   "ladder_count",     "first_exponent", "t_star",
                                                   "order_tol",        "cross_solver_tol", "kernel_n_cells",
                                                   "kernel_tol"};
    for (const auto& item : doc.items()) {
        if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
            parse_fail(path + "." + item.key(), "unknown tolerance override");
        }
    }
    Overrides o;
    o.picard_tolerance = optional_field<double>(doc, "picard_tolerance", path);
    o.max_iterations = optional_field<int>(doc, "max_iterations", path);
    o.bound = optional_field<double>(doc, "bound", path);
    o.ladder_count = optional_field<int>(doc, "ladder_count", path);
    o.first_exponent = optional_field<int>(doc, "first_exponent", path);
    o.t_star = optional_field<double>(doc, "t_star", path);
    o.order_tol = optional_field<double>(doc, "order_tol", path);
    o.cross_solver_tol = optional_field<double>(doc, "cross_solver_tol", path);
    o.kernel_n_cells = optional_field<int>(doc, "kernel_n_cells", path);
    o.kernel_tol = optional_field<double>(doc, "kernel_tol", path);
    return o;
}

Json overrides_json(const Overrides& o) {
    Json out = Json::object();
    auto put = [&](const char* key, const auto& value) {
        if (value) {
            out[key] = *value;
        }
    };
    put("picard_tolerance", o.picard_tolerance);
    put("max_iterations", o.max_iterations);
    put("bound", o.bound);
    put("ladder_count", o.ladder_count);
    put("first_exponent", o.first_exponent);
    put("t_star", o.t_star);
    put("order_tol", o.order_tol);
    put("cross_solver_tol", o.cross_solver_tol);
    put("kernel_n_cells", o.kernel_n_cells);
    put("kernel_tol", o.kernel_tol);
    return out;
}

PicardConfig picard_config(const Overrides& o) {
    PicardConfig config;
    config.tolerance = o.picard_tolerance.value_or(config.tolerance);
    config.max_iterations = o.max_iterations.value_or(config.max_iterations);
    config.bound = o.bound.value_or(config.bound);
    return config;
}

CertificateConfig certificate_config(const Overrides& o) {
    CertificateConfig config;
    config.ladder.picard = picard_config(o);
    config.ladder.count = o.ladder_count.value_or(config.ladder.count);
    config.ladder.first_exponent = o.first_exponent.value_or(config.ladder.first_exponent);
    config.t_star = o.t_star.value_or(config.t_star);
    config.order_tol = o.order_tol.value_or(config.order_tol);
    config.cross_solver_tol = o.cross_solver_tol.value_or(config.cross_solver_tol);
    return config;
}

std::vector<double> plot_times(const Scenario& scenario, const Grid& grid) {
    if (!scenario.plot_times.empty()) {
        std::vector<double> kept;
        for (double t : scenario.plot_times) {
            if (t <= grid.horizon() * (1.0 + 1e-12)) {
                kept.push_back(t);
            }
        }
        return kept;
    }
    std::vector<double> times;
    for (int k = 0; k <= 4; ++k) {
        times.push_back(grid.horizon() * k / 4.0);
    }
    return times;
}

/// Trajectory CSV plus the two plots.
void write_trajectory(const Scenario& scenario, const Trajectory& traj, const std::filesystem::path& out) {
    write_text(out / "trajectory.csv", trajectory_csv(traj));
    export_plots(traj, plot_times(scenario, traj.grid()), out);
}

Json validation_json(const ProblemSpec& spec) {
    Json list = Json::array();
    for (const Violation& v : validate_problem(spec).violations) {
        list.push_back({{"code", v.code}, {"message", v.message}, {"x", v.x}, {"t", v.t}, {"value", v.value}});
    }
    return list;
}

Json summary_head(const Scenario& scenario) {
    return Json{{"name", scenario.name},
                {"task", std::string(to_string(scenario.task))},
                {"violations", validation_json(scenario.problem)}};
}

void write_json(const std::filesystem::path& path, const Json& doc) {
    write_text(path, doc.dump(2) + "\n");
}

int exit_for(CertificateStatus status) {
    return status == CertificateStatus::certified ? kExitOk : kExitInconclusive;
}

int run_solve_picard(const Scenario& scenario, const std::filesystem::path& out) {
    const Problem problem = Problem::discretize(scenario.problem);
    const GreenKernel kernel = GreenKernel::for_grid(problem.grid);
    const PicardResult result = picard_solve(problem, picard_config(scenario.overrides), kernel);
    write_trajectory(scenario, result.trajectory, out);
    write_text(out / "diagnostics.csv", diagnostics_csv(result.diagnostics));
    write_text(out / "nu_mu.csv", nu_mu_csv(result.diagnostics));
    Json summary = summary_head(scenario);
    summary["iterations"] = result.diagnostics.iterations;
    summary["converged"] = result.diagnostics.converged;
    summary["tail_ratio"] = result.diagnostics.tail_ratio();
    summary["fixed_point_residual"] = result.diagnostics.fixed_point_residual;
    summary["sup"] = result.trajectory.sup();
    write_json(out / "summary.json", summary);
    return kExitOk;
}

int run_solve_mol(const Scenario& scenario, const std::filesystem::path& out) {
    const Problem problem = Problem::discretize(scenario.problem);
    const MolResult result = mol_solve(problem);
    if (result.status == MolStatus::stability_failure) {
        fail(ErrorKind::stability_failure, result.message);
    }
    write_trajectory(scenario, result.trajectory, out);
    Json summary = summary_head(scenario);
    summary["status"] = std::string(to_string(result.status));
    summary["stop_time"] = result.stop_time;
    summary["message"] = result.message;
    summary["sup"] = result.trajectory.sup();
    write_json(out / "summary.json", summary);
    return kExitOk;
}

int run_ladder(const Scenario& scenario, const std::filesystem::path& out) {
    const Problem raw = Problem::discretize(scenario.problem);
    const GreenKernel kernel = GreenKernel::for_grid(raw.grid);
    const CertificateConfig config = certificate_config(scenario.overrides);
    const EpsilonLadder ladder = epsilon_ladder(raw, config.ladder, kernel);

    std::string csv = "rung,epsilon,sup,gap\n";
    std::vector<PlotSeries> finals;
    const Grid& grid = raw.grid;
    for (std::size_t m = 0; m < ladder.rungs.size(); ++m) {
        const double gap = m < ladder.gaps.size() ? ladder.gaps[m] : std::numeric_limits<double>::quiet_NaN();
        csv += std::to_string(m) + "," + g17(ladder.epsilons[m]) + "," + g17(ladder.rungs[m].sup()) + "," +
               (std::isnan(gap) ? std::string("") : g17(gap)) + "\n";
        const auto level = ladder.rungs[m].level(grid.level_count() - 1);
        char label[40];
        std::snprintf(label, sizeof label, "eps=%g", ladder.epsilons[m]);
        finals.push_back({label, grid.nodes(), std::vector<double>(level.begin(), level.end())});
    }
    write_text(out / "ladder.csv", csv);
    write_text(out / "ladder.svg", svg_line_plot(finals, "Ladder rungs at the horizon", "x", "u"));
    write_trajectory(scenario, ladder.limit, out);

    Json summary = summary_head(scenario);
    summary["limit_sup"] = ladder.limit.sup();
    summary["error_bar"] = ladder.error_bar;
    summary["extrapolated_fraction"] = ladder.extrapolated_fraction;
    summary["gaps_nonincreasing"] = ladder.gaps_nonincreasing;
    write_json(out / "summary.json", summary);
    return kExitOk;
}

int run_certificate(const Scenario& scenario, const std::filesystem::path& out) {
    const Problem raw = Problem::discretize(scenario.problem);
    const GreenKernel kernel = GreenKernel::for_grid(raw.grid);
    const CertificateConfig config = certificate_config(scenario.overrides);
    const Certificate cert = scenario.task == Task::nonuniqueness ? nonuniqueness_certificate(raw, config, kernel)
                                                                   : uniqueness_probe(raw, config, kernel);
    Json doc = to_json(cert);
    doc["name"] = scenario.name;
    if (cert.limit) {
        const Trajectory& limit = *cert.limit;
        const auto final_level = limit.level(limit.grid().level_count() - 1);
        doc["limit_at_horizon"] = std::vector<double>(final_level.begin(), final_level.end());
        write_trajectory(scenario, limit, out);
    }
    write_json(out / "certificate.json", doc);
    return exit_for(cert.status);
}

int run_kernel_check(const Scenario& scenario, const std::filesystem::path& out) {
    const int n_cells = scenario.overrides.kernel_n_cells.value_or(400);
    const double tol = scenario.overrides.kernel_tol.value_or(1e-12);
    const std::string csv = kernel_check_csv(scenario.problem.domain.length(), n_cells, kCheckGaps, tol);
    write_text(out / "kernel_check.csv", csv);
    // Re-read the numbers just written so the verdict matches the file.
    bool ok = true;
    std::size_t pos = csv.find('\n') + 1;
    while (pos < csv.size()) {
        const std::size_t end = csv.find('\n', pos);
        const std::string row = csv.substr(pos, end - pos);
        std::array<double, 4> cells{};
        std::size_t start = 0;
        for (double& cell : cells) {
            const std::size_t comma = row.find(',', start);
            cell = std::stod(row.substr(start, comma - start));
            start = comma + 1;
        }
        ok = ok && cells[2] <= 1e-8 && cells[3] >= -1e-10;
        pos = end + 1;
    }
    return ok ? kExitOk : kExitInconclusive;
}

int run_subsolution_demo(const Scenario& scenario, const std::filesystem::path& out) {
    const Problem problem = Problem::discretize(scenario.problem);
    const Grid& grid = problem.grid;
    const ProblemSpec& spec = scenario.problem;
    const double tol = consistency_tolerance(grid);

    Json doc;
    Trajectory lower(grid, 0.0);
    OrderReport report;
    double c_min = std::numeric_limits<double>::infinity();
    InteriorSubsolution interior;
    interior.a *= grid.length();
    interior.b *= grid.length();
    for (std::size_t j = 0; j < grid.level_count(); ++j) {
        for (std::size_t i = 0; i < grid.node_count(); ++i) {
            if (grid.x(i) > interior.a && grid.x(i) < interior.b) {
                c_min = std::min(c_min, spec.c(grid.x(i), grid.t(j)));
            }
        }
    }
    if (spec.p > 0.0 && spec.p < 1.0 && c_min > 0.0) {
        interior.p = spec.p;
        interior.c0 = c_min;
        interior.amplitude = 0.9 * interior.amplitude_cap();
        lower = interior_subsolution(interior, grid);
        report = classify(lower, problem, tol);
        doc = to_json(report);
        doc["subsolution"] = "interior";
        doc["amplitude"] = interior.amplitude;
        doc["support"] = {interior.a, interior.b};
    } else if (spec.l > 0.0 && spec.l < 1.0) {
        BoundaryLayerSubsolution layer;
        layer.t3 = std::min(layer.t3, grid.horizon());
        const BoundaryLayerResult result = boundary_layer_subsolution(layer, problem);
        report = result.report;
        // Extend by zero past T3; the layer stops there.
        std::vector<double> values(grid.node_count() * grid.level_count(), 0.0);
        std::copy(result.trajectory.values().begin(), result.trajectory.values().end(), values.begin());
        lower = Trajectory(grid, std::move(values));
        doc = to_json(report);
        doc["subsolution"] = "boundary-layer";
        doc["xi0"] = result.xi0;
        doc["halvings"] = result.halvings;
        doc["t3"] = layer.t3;
    } else {
        fail(ErrorKind::invalid_argument,
             "subsolution-demo: needs 0 < p < 1 with c > 0 on the middle half, or 0 < l < 1");
    }
    doc["tolerance"] = tol;
    doc["name"] = scenario.name;

    bool ordered = true;
    const bool zero_datum =
        std::all_of(problem.initial.begin(), problem.initial.end(), [](double v) { return v == 0.0; });
    if (zero_datum) {
        doc["comparison"] = {{"skipped", "u0 = 0: the trivial solution lies below every positive subsolution"}};
    } else {
        const MolResult mol = mol_solve(problem);
        if (mol.status != MolStatus::completed) {
            fail(ErrorKind::numeric_failure, "subsolution-demo: mol stopped: " + mol.message);
        }
        const OrderingReport order = compare_traj(mol.trajectory, lower, 1e-8);
        ordered = order.ordered;
        doc["comparison"] = {{"ordered", order.ordered}, {"worst", order.worst}, {"x", order.x}, {"t", order.t}};
        write_text(out / "solution.csv", trajectory_csv(mol.trajectory));
    }
    write_trajectory(scenario, lower, out);
    write_json(out / "order_report.json", doc);
    const bool is_sub = report.verdict == Verdict::subsolution || report.verdict == Verdict::solution;
    return is_sub && ordered ? kExitOk : kExitInconclusive;
}

void report_error(const Json& error, const std::optional<std::filesystem::path>& out) {
    std::cerr << error.dump() << "\n";
    if (!out) {
        return;
    }
    try {
        write_json(*out / "error.json", error);
    } catch (const Error&) {
        // The original error is what matters; it already went to stderr.
    }
}

std::string position_of(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t k = 0; k + 1 < byte && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

ProblemSpec demo_problem(double u0, double c, double p, double k, double l, double horizon, int n_cells,
                         double dt) {
    ProblemSpec spec;
    spec.p = p;
    spec.l = l;
    spec.c = Coefficient::constant(c);
    spec.k = FluxKernel::constant(k);
    spec.u0 = InitialDatum::constant(u0);
    spec.horizon = horizon;
    spec.grid = {n_cells, dt};
    return spec;
}

}  // namespace

std::string_view to_string(Task task) noexcept {
    for (const auto& [t, name] : kTaskNames) {
        if (t == task) {
            return name;
        }
    }
    return "?";
}

Task task_from_string(std::string_view name, const std::string& path) {
    for (const auto& [t, n] : kTaskNames) {
        if (n == name) {
            return t;
        }
    }
    parse_fail(path, "unknown task '" + std::string(name) + "'");
}

Scenario scenario_from_json(const Json& doc, const std::filesystem::path& base_dir) {
    if (!doc.is_object()) {
        parse_fail("scenario", "expected an object");
    }
    Scenario s;
    if (const auto it = doc.find("name"); it != doc.end()) {
        if (!it->is_string()) {
            parse_fail("name", "expected a string");
        }
        s.name = it->get<std::string>();
    }
    const auto task = doc.find("task");
    if (task == doc.end()) {
        parse_fail("task", "missing field");
    }
    if (!task->is_string()) {
        parse_fail("task", "expected a string");
    }
    s.task = task_from_string(task->get<std::string>());
    const auto problem = doc.find("problem");
    if (problem == doc.end()) {
        parse_fail("problem", "missing field");
    }
    s.problem = problem_from_json(*problem, "problem");
    if (const auto it = doc.find("out"); it != doc.end()) {
        if (!it->is_string()) {
            parse_fail("out", "expected a string");
        }
        const std::filesystem::path out = it->get<std::string>();
        s.out = out.is_absolute() || base_dir.empty() ? out : base_dir / out;
    }
    if (const auto it = doc.find("tolerances"); it != doc.end()) {
        s.overrides = overrides_from(*it, "tolerances");
    }
    if (const auto it = doc.find("plot_times"); it != doc.end()) {
        if (!it->is_array()) {
            parse_fail("plot_times", "expected an array of numbers");
        }
        for (std::size_t k = 0; k < it->size(); ++k) {
            if (!(*it)[k].is_number()) {
                parse_fail("plot_times[" + std::to_string(k) + "]", "expected a number");
            }
            s.plot_times.push_back((*it)[k].get<double>());
        }
    }
    for (const auto& item : doc.items()) {
        static const std::array<const char*, 6> known{"name", "task", "problem", "out", "tolerances", "plot_times"};
        if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
            parse_fail(item.key(), "unknown scenario field");
        }
    }
    return s;
}

Json to_json(const Scenario& scenario) {
    Json doc{{"name", scenario.name},
             {"task", std::string(to_string(scenario.task))},
             {"problem", to_json(scenario.problem)}};
    if (!scenario.out.empty()) {
        doc["out"] = scenario.out.string();
    }
    const Json overrides = overrides_json(scenario.overrides);
    if (!overrides.empty()) {
        doc["tolerances"] = overrides;
    }
    if (!scenario.plot_times.empty()) {
        doc["plot_times"] = scenario.plot_times;
    }
    return doc;
}

int run_scenario(const Scenario& scenario, const std::filesystem::path& out) {
    try {
        std::filesystem::create_directories(out);
    } catch (const std::filesystem::filesystem_error& e) {
        report_error(to_json(Error(ErrorKind::io_error, e.what())), std::nullopt);
        return kExitError;
    }
    try {
        write_json(out / "scenario.json", to_json(scenario));
        switch (scenario.task) {
            case Task::solve_picard:
                return run_solve_picard(scenario, out);
            case Task::solve_mol:
                return run_solve_mol(scenario, out);
            case Task::ladder:
                return run_ladder(scenario, out);
            case Task::nonuniqueness:
            case Task::uniqueness_probe:
                return run_certificate(scenario, out);
            case Task::kernel_check:
                return run_kernel_check(scenario, out);
            case Task::subsolution_demo:
                return run_subsolution_demo(scenario, out);
        }
        fail(ErrorKind::internal_error, "unhandled task");
    } catch (const Error& e) {
        report_error(to_json(e), out);
    } catch (const std::exception& e) {
        report_error(to_json(Error(ErrorKind::internal_error, e.what())), out);
    }
    return kExitError;
}

int run_scenario(const std::filesystem::path& path, const std::optional<std::filesystem::path>& out) {
    Scenario scenario;
    try {
        const std::string text = read_text(path);
        Json doc;
        try {
            doc = Json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            fail(ErrorKind::parse_error, path.string() + ": " + position_of(text, e.byte) + ": malformed JSON");
        }
        scenario = scenario_from_json(doc, path.parent_path());
    } catch (const Error& e) {
        report_error(to_json(e), out);
        return kExitError;
    }
    std::filesystem::path dir = out ? *out : scenario.out;
    if (dir.empty()) {
        dir = std::filesystem::path("out") / (scenario.name.empty() ? path.stem().string() : scenario.name);
    }
    return run_scenario(scenario, dir);
}

std::vector<std::string> demo_names() {
    return {"thm2.2", "thm3.1", "thm3.2", "thm4.1", "cor4.3", "thm4.4"};
}

Scenario demo_scenario(std::string_view name) {
    Scenario s;
    s.name = std::string(name);
    if (name == "thm2.2") {
        // Comparison: the MOL solution from positive data stays above an interior subsolution.
        s.task = Task::subsolution_demo;
        s.problem = demo_problem(0.0, 1.0, 0.5, 0.0, 1.0, 0.5, 32, 1e-3);
        s.problem.u0 = InitialDatum(InitialDatum::Cosine{0.5, 0.25, 1});
    } else if (name == "thm3.1") {
        s.task = Task::solve_picard;
        s.problem = demo_problem(1.0, 1.0, 0.5, 0.0, 1.0, 1.0, 16, 1e-3);
    } else if (name == "thm3.2") {
        s.task = Task::ladder;
        s.problem = demo_problem(0.0, 1.0, 0.5, 0.0, 1.0, 1.0, 16, 1e-3);
        s.overrides.ladder_count = 16;
    } else if (name == "thm4.1") {
        s.task = Task::nonuniqueness;
        s.problem = demo_problem(0.0, 1.0, 0.5, 0.0, 1.0, 1.0, 16, 1e-3);
        s.overrides.ladder_count = 24;
        s.overrides.t_star = 0.01;
    } else if (name == "cor4.3") {
        s.task = Task::uniqueness_probe;
        s.problem = demo_problem(0.0, 1.0, 2.0, 1.0, 2.0, 0.05, 32, 1e-3);
    } else if (name == "thm4.4") {
        s.task = Task::uniqueness_probe;
        s.problem = demo_problem(1.0, 1.0, 2.0, 0.5, 2.0, 0.1, 100, 1e-4);
    } else {
        fail(ErrorKind::invalid_argument, "unknown demo '" + std::string(name) + "'");
    }
    return s;
}

std::string kernel_check_csv(double length, int n_cells, const std::vector<double>& gaps, double tol) {
    require(length > 0.0 && n_cells >= 2, "kernel_check_csv: needs L > 0 and at least 2 cells");
    const double h = length / n_cells;
    const std::vector<double> w = trapezoid_weights(n_cells, h);
    std::string csv = "gap,modes,max_normalization_error,min_value\n";
    for (double gap : gaps) {
        require(gap > 0.0, "kernel_check_csv: gaps must be positive");
        const GreenKernel kernel(length, choose_modes(length, gap, tol), gap);
        double worst = 0.0;
        for (int i = 0; i <= n_cells; ++i) {
            const double x = i == n_cells ? length : i * h;
            double integral = 0.0;
            for (int j = 0; j <= n_cells; ++j) {
                integral += w[static_cast<std::size_t>(j)] * kernel(x, j == n_cells ? length : j * h, gap);
            }
            worst = std::max(worst, std::abs(integral - 1.0));
        }
        double lowest = std::numeric_limits<double>::infinity();
        for (int a = 0; a <= 100; ++a) {
            for (int b = 0; b <= 100; ++b) {
                lowest = std::min(lowest, kernel(length * a / 100.0, length * b / 100.0, gap));
            }
        }
        csv += g17(gap) + "," + std::to_string(kernel.modes()) + "," + g17(worst) + "," + g17(lowest) + "\n";
    }
    return csv;
}

std::string kernel_slice_csv(double length, double gap, int modes, int samples) {
    require(length > 0.0 && gap > 0.0 && samples >= 2, "kernel_slice_csv: needs L > 0, gap > 0, 2+ samples");
    const GreenKernel kernel(length, modes > 0 ? modes : choose_modes(length, gap, 1e-12), gap);
    const std::array<double, 5> xs{0.0, 0.25 * length, 0.5 * length, 0.75 * length, length};
    std::string csv = "y";
    for (double x : xs) {
        csv += ",G(x=" + g17(x) + ")";
    }
    csv += "\n";
    for (int s = 0; s < samples; ++s) {
        const double y = length * s / (samples - 1);
        csv += g17(y);
        for (double x : xs) {
            csv += "," + g17(kernel(x, y, gap));
        }
        csv += "\n";
    }
    return csv;
}

}  // namespace nlp

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nlp/io.hpp"
#include "nlp/scenario.hpp"
#include "oracles.hpp"

#include <filesystem>
#include <random>
#include <regex>
#include <set>

using namespace nlp;
namespace fs = std::filesystem;

namespace {

const fs::path kSourceDir = NLP_SOURCE_DIR;

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("nlp_test_io_" + name);
    fs::remove_all(dir);
    return dir;
}

std::vector<double> random_values(std::mt19937& rng, std::size_t count) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> v(count);
    for (double& x : v) {
        x = unit(rng);
    }
    return v;
}

Profile random_profile(std::mt19937& rng) {
    std::uniform_int_distribution<int> pick(0, 2);
    switch (pick(rng)) {
        case 0:
            return Profile::constant(random_values(rng, 1)[0]);
        case 1:
            return Profile(Profile::Polynomial{random_values(rng, 3)});
        default:
            return Profile(Profile::Table{0.0, 1.0, random_values(rng, 5)});
    }
}

ProblemSpec random_spec(std::mt19937& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> pick(0, 2);
    ProblemSpec spec;
    spec.domain = IntervalDomain(0.5 + unit(rng));
    spec.p = 0.1 + 2.0 * unit(rng);
    spec.l = 0.1 + 2.0 * unit(rng);
    switch (pick(rng)) {
        case 0:
            spec.c = Coefficient::constant(unit(rng));
            break;
        case 1:
            spec.c = Coefficient(Coefficient::Separable{random_profile(rng), random_profile(rng)});
            break;
        default:
            spec.c = Coefficient(Coefficient::Table{{0.0, 0.5, 1.0}, {0.0, 1.0}, {random_values(rng, 3), random_values(rng, 3)}});
    }
    switch (pick(rng)) {
        case 0:
            spec.k = FluxKernel::constant(unit(rng));
            break;
        case 1:
            spec.k = FluxKernel(FluxKernel::Separable{unit(rng), unit(rng), random_profile(rng), random_profile(rng)});
            break;
        default:
            spec.k = FluxKernel(FluxKernel::Table{{0.0, 1.0},
                                                  {0.0, 0.5, 1.0},
                                                  {random_values(rng, 2), random_values(rng, 2), random_values(rng, 2)},
                                                  {random_values(rng, 2), random_values(rng, 2), random_values(rng, 2)}});
    }
    switch (pick(rng)) {
        case 0:
            spec.u0 = InitialDatum::constant(unit(rng));
            break;
        case 1:
            spec.u0 = InitialDatum(InitialDatum::Cosine{1.0, unit(rng), 1 + static_cast<int>(4 * unit(rng))});
            break;
        default:
            spec.u0 = InitialDatum(InitialDatum::Table{random_values(rng, 7)});
    }
    spec.horizon = 0.01 + unit(rng);
    spec.grid = {4 + static_cast<int>(100 * unit(rng)), 1e-4 + 1e-2 * unit(rng)};
    return spec;
}

std::string parse_message(const Json& doc) {
    try {
        problem_from_json(doc);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::parse_error);
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("property: problem specs survive a JSON round trip") {
    std::mt19937 rng(43);
    for (int trial = 0; trial < 200; ++trial) {
        const ProblemSpec spec = random_spec(rng);
        const Json doc = to_json(spec);
        CHECK(problem_from_json(Json::parse(doc.dump())) == spec);
    }
}

TEST_CASE("parse errors name the field path") {
    Json doc = to_json(ProblemSpec{});
    doc["c"]["kind"] = "gaussian";
    CHECK(parse_message(doc).find("problem.c.kind") != std::string::npos);

    doc = to_json(ProblemSpec{});
    doc.erase("p");
    CHECK(parse_message(doc).find("problem.p") != std::string::npos);

    doc = to_json(ProblemSpec{});
    doc["grid"]["n_cells"] = "many";
    CHECK(parse_message(doc).find("problem.grid.n_cells") != std::string::npos);

    doc = to_json(ProblemSpec{});
    doc["u0"] = Json{{"kind", "table"}, {"values", "none"}};
    CHECK(parse_message(doc).find("problem.u0") != std::string::npos);
}

TEST_CASE("property: trajectory CSV is lossless") {
    std::mt19937 rng(47);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 4 + trial;
        const Grid g = Grid::build(IntervalDomain(0.3 + (trial % 5)), n, 0.01 * (1 + trial % 3), 0.1);
        std::vector<double> values(g.node_count() * g.level_count());
        for (double& v : values) {
            v = unit(rng) * std::pow(10.0, 6.0 * unit(rng));
        }
        const Trajectory traj(g, values);
        const std::string csv = trajectory_csv(traj);
        const Trajectory back = trajectory_from_csv(csv);
        CHECK(back.grid().node_count() == g.node_count());
        CHECK(back.grid().level_count() == g.level_count());
        CHECK(std::vector<double>(back.values().begin(), back.values().end()) == values);
        CHECK(trajectory_csv(back) == csv);
    }
    CHECK(oracle::error_kind([] { trajectory_from_csv("t,0,0.5,1\n0,1,2\n"); }) == "parse-error");
}

TEST_CASE("property: scenarios survive a JSON round trip") {
    std::mt19937 rng(53);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::vector<Task> tasks{Task::solve_picard, Task::solve_mol,        Task::ladder,
                                  Task::nonuniqueness, Task::uniqueness_probe, Task::kernel_check,
                                  Task::subsolution_demo};
    for (int trial = 0; trial < 50; ++trial) {
        Scenario s;
        s.name = "case-" + std::to_string(trial);
        s.task = tasks[static_cast<std::size_t>(trial) % tasks.size()];
        s.problem = random_spec(rng);
        if (trial % 2 == 0) {
            s.overrides.picard_tolerance = 1e-12 * (1.0 + unit(rng));
            s.overrides.ladder_count = 3 + trial;
            s.overrides.t_star = unit(rng);
        }
        if (trial % 3 == 0) {
            s.plot_times = {0.0, 0.5 * unit(rng)};
        }
        const Scenario back = scenario_from_json(Json::parse(to_json(s).dump()));
        CHECK(back.name == s.name);
        CHECK(back.task == s.task);
        CHECK(back.problem == s.problem);
        CHECK(back.overrides.picard_tolerance == s.overrides.picard_tolerance);
        CHECK(back.overrides.ladder_count == s.overrides.ladder_count);
        CHECK(back.overrides.t_star == s.overrides.t_star);
        CHECK(back.plot_times == s.plot_times);
    }
    CHECK(oracle::error_kind([] { task_from_string("frobnicate"); }) == "parse-error");
    Json doc = to_json(demo_scenario("thm3.1"));
    doc["colour"] = "blue";
    CHECK(oracle::error_kind([&] { scenario_from_json(doc); }) == "parse-error");
}

TEST_CASE("line plot matches the golden file") {
    PlotSeries flat{"u", {0.0, 0.5, 1.0}, {1.0, 1.0, 1.0}};
    PlotSeries rise{"v", {0.0, 0.5, 1.0}, {0.0, 0.4, 1.2}};
    const std::string svg = svg_line_plot({flat, rise}, "golden", "x", "u");
    CHECK(svg == read_text(kSourceDir / "tests" / "golden" / "two_series.svg"));

    // A constant trajectory draws a flat polyline.
    const std::string single = svg_line_plot({flat}, "flat", "x", "u");
    const std::regex points("points=\"([^\"]*)\"");
    std::smatch match;
    REQUIRE(std::regex_search(single, match, points));
    const std::regex pair("([-0-9.]+),([-0-9.]+)");
    std::set<std::string> ys;
    const std::string list = match[1];
    for (auto it = std::sregex_iterator(list.begin(), list.end(), pair); it != std::sregex_iterator(); ++it) {
        ys.insert((*it)[2]);
    }
    CHECK(ys.size() == 1);
}

TEST_CASE("plots are exported for a trajectory") {
    const fs::path dir = scratch_dir("plots");
    const Grid g = Grid::build(IntervalDomain(1.0), 8, 0.01, 0.1);
    export_plots(Trajectory(g, 1.0), {0.0, 0.05, 0.1}, dir);
    CHECK(fs::exists(dir / "profiles.svg"));
    CHECK(fs::exists(dir / "supnorm.svg"));
    CHECK(oracle::error_kind([&] { export_plots(Trajectory(g, 1.0), {0.5}, dir); }) == "invalid-argument");
    fs::remove_all(dir);
}

TEST_CASE("writing under a file fails with an io error") {
    const fs::path dir = scratch_dir("blocked");
    fs::create_directories(dir);
    write_text(dir / "file.txt", "x");
    CHECK(read_text(dir / "file.txt") == "x");
    CHECK(oracle::error_kind([&] { write_text(dir / "file.txt" / "inner.txt", "y"); }) == "io-error");
    CHECK(oracle::error_kind([&] { read_text(dir / "missing.txt"); }) == "io-error");
    fs::remove_all(dir);
}

TEST_CASE("certificate and error JSON") {
    Certificate cert;
    cert.status = CertificateStatus::partial;
    cert.failing_stage = "positivity";
    cert.witnesses.push_back({Condition::boundary_source, 0.0, 0.1, 0.5, true, {}});
    cert.evidence["limit_sup"] = 0.25;
    const Json doc = to_json(cert);
    CHECK(doc["kind"] == "nonuniqueness");
    CHECK(doc["status"] == "partial");
    CHECK(doc["failing_stage"] == "positivity");
    CHECK(doc["witnesses"][0]["condition"] == "4.2");
    CHECK(doc["evidence"]["limit_sup"] == 0.25);

    const Json err = to_json(ContractionFailure("stalled", {1.0, 0.9}, {NAN, 0.9}));
    CHECK(err["error"] == "contraction-failure");
    CHECK(err["sup_diffs"].size() == 2);
}

TEST_CASE("scenario runs report their exit status") {
    const fs::path out = scratch_dir("scenarios");
    CHECK(run_scenario(kSourceDir / "scenarios" / "kernel_check.json", out / "kernel") == 0);
    CHECK(fs::exists(out / "kernel" / "kernel_check.csv"));

    CHECK(run_scenario(kSourceDir / "scenarios" / "frobnicate.json", out / "bad") == 1);
    const Json error = Json::parse(read_text(out / "bad" / "error.json"));
    CHECK(error["error"] == "parse-error");

    CHECK(run_scenario(kSourceDir / "scenarios" / "nonuniqueness.json", out / "nonunique") == 0);
    const Json cert = Json::parse(read_text(out / "nonunique" / "certificate.json"));
    CHECK(cert["status"] == "certified");
    const double mid = cert["limit_at_horizon"][8].get<double>();
    CHECK(std::abs(mid - 0.25) <= 1e-3);

    CHECK(run_scenario(out / "does_not_exist.json", out / "missing") == 1);
    fs::remove_all(out);
}

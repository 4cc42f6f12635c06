#include "nlp/error.hpp"
#include "nlp/io.hpp"
#include "nlp/scenario.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Semilinear heat equation with nonlocal boundary flux: solvers, certificates, demos"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir;
    auto* run = app.add_subcommand("run", "Run a scenario file");
    run->add_option("scenario", scenario_path, "Scenario JSON")->required();
    run->add_option("--out", out_dir, "Output directory (overrides the scenario's)");

    double length = 1.0;
    double t_min = 1e-3;
    int modes = 0;
    int samples = 101;
    std::string kernel_out;
    auto* kernel = app.add_subcommand("kernel-check", "Dump a slice of the Neumann kernel as CSV");
    kernel->add_option("--L", length, "Interval length")->check(CLI::PositiveNumber);
    kernel->add_option("--tmin", t_min, "Time gap of the slice")->check(CLI::PositiveNumber);
    kernel->add_option("--modes", modes, "Mode count; 0 chooses it for a 1e-12 tail");
    kernel->add_option("--samples", samples, "Samples in y")->check(CLI::Range(2, 100000));
    kernel->add_option("--out", kernel_out, "Directory for kernel_slice.csv and kernel_check.csv; stdout if absent");

    std::string demo_name;
    std::string demo_out;
    auto* demo = app.add_subcommand("demo", "Run a built-in demonstration scenario");
    demo->add_option("name", demo_name, "Demo name")->required()->check(CLI::IsMember(nlp::demo_names()));
    demo->add_option("--out", demo_out, "Output directory (default out/<name>)");

    CLI11_PARSE(app, argc, argv);

    if (*run) {
        std::optional<std::filesystem::path> out;
        if (!out_dir.empty()) {
            out = out_dir;
        }
        return nlp::run_scenario(scenario_path, out);
    }
    if (*kernel) {
        try {
            const std::string slice = nlp::kernel_slice_csv(length, t_min, modes, samples);
            if (kernel_out.empty()) {
                std::cout << slice;
                return 0;
            }
            nlp::write_text(std::filesystem::path(kernel_out) / "kernel_slice.csv", slice);
            nlp::write_text(std::filesystem::path(kernel_out) / "kernel_check.csv",
                            nlp::kernel_check_csv(length, 400, {1e-3, 1e-2, 1e-1, 1.0}));
            return 0;
        } catch (const nlp::Error& e) {
            std::cerr << nlp::to_json(e).dump() << "\n";
            return 1;
        }
    }
    const nlp::Scenario scenario = nlp::demo_scenario(demo_name);
    const std::filesystem::path out = demo_out.empty() ? std::filesystem::path("out") / demo_name : std::filesystem::path(demo_out);
    return nlp::run_scenario(scenario, out);
}

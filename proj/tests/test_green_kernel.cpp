#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nlp/green_kernel.hpp"
#include "nlp/quadrature.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace nlp;

namespace {

Grid unit_grid(int n, double length = 1.0) { return Grid::build(IntervalDomain(length), n, 1e-3, 1.0); }

std::vector<double> on_nodes(const Grid& grid, const std::function<double(double)>& f) {
    std::vector<double> v;
    for (double x : grid.nodes()) {
        v.push_back(f(x));
    }
    return v;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a[i] - b[i]));
    }
    return d;
}

}  // namespace

TEST_CASE("long gaps leave only the constant mode") {
    const GreenKernel k(1.0, choose_modes(1.0, 10.0, 1e-12), 10.0);
    for (double x : {0.0, 0.3, 1.0}) {
        CHECK(std::abs(gn_eval(x, 0.7, 10.0, k) - 1.0) < 1e-10);
    }
    const GreenKernel flat(2.0, 0, 0.1);
    CHECK(flat(0.2, 1.9, 0.1) == 0.5);
    CHECK(flat(1.0, 1.0, 5.0) == 0.5);
}

TEST_CASE("series matches the image sum at the corner") {
    const GreenKernel k(1.0, choose_modes(1.0, 0.1, 1e-12), 0.1);
    CHECK(std::abs(k(0.0, 0.0, 0.1) - oracle::image_sum(0.0, 0.0, 0.1, 1.0)) < 1e-8);
}

TEST_CASE("gaps below the window are refused") {
    const GreenKernel k(1.0, 20, 0.01);
    CHECK(oracle::error_kind([&] { gn_eval(0.1, 0.2, 0.005, k); }) == "kernel-window");
    const Grid g = unit_grid(8);
    CHECK(oracle::error_kind([&] { heat_propagate(std::vector<double>(9, 1.0), 0.001, k, g); }) == "kernel-window");
}

TEST_CASE("mode counts match brute-force tail sums") {
    CHECK(choose_modes(1.0, 1.0, 1e-12) <= 3);
    CHECK(choose_modes(1.0, 1.0, 1e-12) == oracle::modes_by_summation(1.0, 1.0, 1e-12));
    const int many = choose_modes(1.0, 1e-4, 1e-10);
    CHECK(many == oracle::modes_by_summation(1.0, 1e-4, 1e-10));
    CHECK(many > 100);
    CHECK(many < 1000);
    CHECK(choose_modes(1.0, 1e3, 1e-12) == 0);
    for (double length : {0.5, 2.0, 3.7}) {
        for (double t : {1e-3, 0.05, 0.4}) {
            CHECK(choose_modes(length, t, 1e-12) == oracle::modes_by_summation(length, t, 1e-12));
        }
    }
}

TEST_CASE("heat propagation keeps constants and damps eigenmodes") {
    const Grid g = unit_grid(64);
    const GreenKernel k = GreenKernel::for_grid(g);
    for (double gap : {1e-3, 0.05, 0.5}) {
        CHECK(max_abs_diff(heat_propagate(std::vector<double>(65, 1.0), gap, k, g), std::vector<double>(65, 1.0)) <
              1e-8);
        for (int m : {1, 2}) {
            const auto mode = on_nodes(g, [m](double x) { return std::cos(m * std::numbers::pi * x); });
            const auto expected = on_nodes(g, [&](double x) { return oracle::heat_mode(x, gap, 1.0, m); });
            CHECK(max_abs_diff(heat_propagate(mode, gap, k, g), expected) < 1e-8);
        }
    }
}

TEST_CASE("property: symmetry, positivity and normalization on random samples") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const double length = 0.5 + 2.0 * unit(rng);
        const double t = std::pow(10.0, -3.0 + 3.0 * unit(rng));
        const GreenKernel k(length, choose_modes(length, t, 1e-12), t);
        for (int s = 0; s < 50; ++s) {
            const double x = length * unit(rng);
            const double y = length * unit(rng);
            CHECK(k(x, y, t) == k(y, x, t));
            CHECK(k(x, y, t) >= -1e-10);
        }
        const Grid g = unit_grid(200, length);
        const auto w = trapezoid_weights(g.n_cells(), g.h());
        for (int s = 0; s < 5; ++s) {
            const double x = length * unit(rng);
            double integral = 0.0;
            for (std::size_t j = 0; j < g.node_count(); ++j) {
                integral += w[j] * k(x, g.x(j), t);
            }
            CHECK(std::abs(integral - 1.0) <= 1e-8);
        }
    }
}

TEST_CASE("property: image-sum agreement for gaps in [1e-3, 1]") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 400; ++trial) {
        const double t = std::pow(10.0, -3.0 + 3.0 * unit(rng));
        const GreenKernel k(1.0, choose_modes(1.0, t, 1e-12), t);
        const double x = unit(rng);
        const double y = unit(rng);
        worst = std::max(worst, std::abs(k(x, y, t) - oracle::image_sum(x, y, t, 1.0)));
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("property: propagating twice by t/2 equals once by t") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Grid g = unit_grid(64);
    const GreenKernel k = GreenKernel::for_grid(g);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> a(5);
        for (double& v : a) {
            v = unit(rng) - 0.5;
        }
        const auto field = on_nodes(g, [&](double x) {
            double s = 1.0;
            for (int m = 0; m < 5; ++m) {
                s += a[m] * std::cos((m + 1) * std::numbers::pi * x);
            }
            return s;
        });
        const double t = 0.002 + 0.2 * unit(rng);
        const auto once = heat_propagate(field, t, k, g);
        const auto twice = heat_propagate(heat_propagate(field, t / 2, k, g), t / 2, k, g);
        CHECK(max_abs_diff(once, twice) < 1e-7);
    }
}

TEST_CASE("modal projection and synthesis invert on resolved cosines") {
    const Grid g = unit_grid(32);
    const ModalConvolution conv(GreenKernel::for_grid(g), g);
    CHECK(conv.mode_count() >= 32);
    const auto field = on_nodes(g, [](double x) { return 2.0 + std::cos(3 * std::numbers::pi * x) - 0.5 * std::cos(31 * std::numbers::pi * x); });
    CHECK(max_abs_diff(conv.synthesize(conv.project(field)), field) < 1e-12);
}

TEST_CASE("resolvent tail matches a long direct sum") {
    const GreenKernel k(1.0, 10, 0.01);
    for (auto [x, xi] : {std::pair{0.3, 0.0}, std::pair{0.7, 1.0}, std::pair{0.0, 0.0}, std::pair{0.5, 1.0}}) {
        double direct = 0.0;
        for (int m = 11; m <= 400000; ++m) {
            const double w = m * std::numbers::pi;
            direct += 2.0 * std::cos(w * x) * std::cos(w * xi) / (w * w);
        }
        CHECK(std::abs(k.resolvent_tail(x, xi) - direct) < 1e-6);
    }
}

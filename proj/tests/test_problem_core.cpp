#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nlp/coefficients.hpp"
#include "nlp/grid.hpp"
#include "nlp/problem.hpp"
#include "nlp/quadrature.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace nlp;

namespace {

std::vector<double> on_nodes(const Grid& grid, double (*f)(double)) {
    std::vector<double> v;
    for (double x : grid.nodes()) {
        v.push_back(f(x));
    }
    return v;
}

ProblemSpec flat_spec(double u0, double c, double p, double k, double l, double horizon = 0.1) {
    ProblemSpec spec;
    spec.p = p;
    spec.l = l;
    spec.c = Coefficient::constant(c);
    spec.k = FluxKernel::constant(k);
    spec.u0 = InitialDatum::constant(u0);
    spec.horizon = horizon;
    spec.grid = {32, 1e-2};
    return spec;
}

}  // namespace

TEST_CASE("grid partitions the interval and the horizon uniformly") {
    const Grid g = Grid::build(IntervalDomain(1.0), 4, 0.25, 1.0);
    CHECK(g.nodes() == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(g.times() == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(Grid::build(IntervalDomain(2.0), 8, 0.1, 1.0).h() == doctest::Approx(0.25));
    const Grid odd = Grid::build(IntervalDomain(1.0), 4, 0.3, 1.0);
    CHECK(odd.horizon() >= 1.0 - 0.15);
}

TEST_CASE("grid rejects degenerate input") {
    CHECK(oracle::error_kind([] { Grid::build(IntervalDomain(1.0), 0, 0.1, 1.0); }) == "invalid-argument");
    CHECK(oracle::error_kind([] { Grid::build(IntervalDomain(1.0), 4, -0.1, 1.0); }) == "invalid-argument");
    CHECK(oracle::error_kind([] { Grid::build(IntervalDomain(1.0), 4, 0.1, 0.0); }) == "invalid-argument");
    CHECK(oracle::error_kind([] { IntervalDomain(0.0); }) == "invalid-argument");
}

TEST_CASE("quadrature integrates polynomials") {
    const Grid g4 = Grid::build(IntervalDomain(1.0), 4, 0.1, 1.0);
    CHECK(quadrature(on_nodes(g4, [](double) { return 1.0; }), g4) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(quadrature(on_nodes(g4, [](double x) { return x; }), g4) - 0.5) < 1e-15);
    const Grid g64 = Grid::build(IntervalDomain(1.0), 64, 0.1, 1.0);
    CHECK(std::abs(quadrature(on_nodes(g64, [](double x) { return x * x * x * x; }), g64) - 0.2) < 1e-8);
    const Grid g5 = Grid::build(IntervalDomain(1.0), 5, 0.1, 1.0);
    CHECK(std::abs(quadrature(on_nodes(g5, [](double x) { return x * x * x; }), g5) - 0.25) < 1e-14);
    CHECK(oracle::error_kind([&] { quadrature(std::vector<double>(3, 1.0), g4); }) == "invalid-argument");
}

TEST_CASE("boundary normal derivative uses the outward sign") {
    const Grid g = Grid::build(IntervalDomain(1.0), 10, 0.1, 1.0);
    const auto lin = on_nodes(g, [](double x) { return x; });
    CHECK(boundary_normal_derivative(lin, g, Side::left) == doctest::Approx(-1.0));
    CHECK(boundary_normal_derivative(lin, g, Side::right) == doctest::Approx(1.0));
    const Grid g100 = Grid::build(IntervalDomain(1.0), 100, 0.1, 1.0);
    const auto sq = on_nodes(g100, [](double x) { return x * x; });
    CHECK(std::abs(boundary_normal_derivative(sq, g100, Side::right) - 2.0) < 1e-10);
    CHECK(oracle::error_kind([] { boundary_normal_derivative(std::vector<double>{1.0, 2.0}, 0.5, Side::left); }) ==
          "invalid-argument");
}

TEST_CASE("quadrature and boundary derivative converge at second order or better") {
    std::vector<double> hs, eq, ed;
    for (int n : {8, 16, 32, 64}) {
        const Grid g = Grid::build(IntervalDomain(1.0), n, 0.1, 1.0);
        const auto f = on_nodes(g, [](double x) { return std::exp(x); });
        hs.push_back(g.h());
        eq.push_back(std::abs(quadrature(f, g) - (std::exp(1.0) - 1.0)));
        ed.push_back(std::abs(boundary_normal_derivative(f, g, Side::right) - std::exp(1.0)));
    }
    CHECK(oracle::loglog_slope(hs, eq) >= 1.9);
    CHECK(oracle::loglog_slope(hs, ed) >= 1.9);
}

TEST_CASE("compatibility residual") {
    const Grid g = Grid::build(IntervalDomain(1.0), 20, 0.1, 1.0);
    const auto flat = compatibility_residual(std::vector<double>(21, 3.0), FluxKernel::constant(0.0), 1.0, g);
    CHECK(flat.left == 0.0);
    CHECK(flat.right == 0.0);
    // u0 = s x^2, k = 1, l = 1: the flux integral is s/3 at both ends.
    const double s = 0.3;
    std::vector<double> u0;
    for (double x : g.nodes()) {
        u0.push_back(s * x * x);
    }
    const auto r = compatibility_residual(u0, FluxKernel::constant(1.0), 1.0, g);
    CHECK(std::abs(r.right - (2.0 * s - s / 3.0)) < 1e-12);
    CHECK(std::abs(r.left - (0.0 - s / 3.0)) < 1e-12);
}

TEST_CASE("validation reports violations with locations") {
    CHECK(validate_problem(flat_spec(1.0, 0.0, 2.0, 0.0, 2.0)).ok());

    ProblemSpec neg = flat_spec(0.0, 0.0, 0.5, 0.0, 1.0);
    neg.grid.n_cells = 4;
    neg.c = Coefficient(
        Coefficient::Separable{Profile(Profile::Table{0.0, 1.0, {0.0, 0.0, -1.0, 0.0, 0.0}}), Profile::constant(1.0)});
    const ValidationReport bad = validate_problem(neg);
    REQUIRE(bad.violations.size() == 1);
    CHECK(bad.violations[0].code == "c-negative");
    CHECK(bad.violations[0].message == "c negative at (0.5,0)");

    const ValidationReport incompatible = validate_problem(flat_spec(1.0, 0.0, 1.0, 1.0, 1.0));
    REQUIRE(incompatible.violations.size() == 2);
    CHECK(incompatible.violations[1].message == "compatibility residual 1 at right endpoint");
    CHECK(std::abs(std::abs(incompatible.violations[1].value) - 1.0) < 1e-12);

    CHECK(validate_problem(flat_spec(1.0, 0.0, -1.0, 0.0, 1.0)).violations[0].code == "p-nonpositive");
}

TEST_CASE("regularized data") {
    const Problem zero = Problem::discretize(flat_spec(0.0, 0.0, 1.0, 0.0, 1.0));
    const RegularizedDatum plain = regularize_initial(zero, 0.1);
    for (double v : plain.values) {
        CHECK(v == doctest::Approx(0.1).epsilon(1e-15));
    }

    const Problem flux = Problem::discretize(flat_spec(0.0, 0.0, 1.0, 1.0, 1.0));
    const RegularizedDatum corrected = regularize_initial(flux, 0.1);
    // The corrector carries a little mass of its own, so the slope is eps L plus a few per mille.
    CHECK(corrected.slope.left == doctest::Approx(0.1).epsilon(1e-2));
    CHECK(corrected.slope.right == doctest::Approx(0.1).epsilon(1e-2));
    CHECK(std::abs(corrected.residual.left) <= 1e-8);
    CHECK(std::abs(corrected.residual.right) <= 1e-8);
    const auto check = compatibility_residual(corrected.values, flux.spec.k, 1.0, flux.grid);
    CHECK(std::abs(check.left) <= 1e-8);
    CHECK(std::abs(check.right) <= 1e-8);

    const RegularizedDatum coarse = regularize_initial(flux, 0.2);
    for (std::size_t i = 0; i < coarse.values.size(); ++i) {
        CHECK(coarse.values[i] >= corrected.values[i]);
    }
    CHECK(oracle::error_kind([&] { regularize_initial(flux, 1.5); }) == "invalid-argument");
}

TEST_CASE("property: regularized families are bounded below by epsilon, monotone, and shrink to u0") {
    std::mt19937 rng(20241016);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        ProblemSpec spec = flat_spec(0.0, 0.0, 1.0, 0.0, 0.3 + 1.5 * unit(rng));
        spec.k = FluxKernel::constant(2.0 * unit(rng));
        spec.u0 = InitialDatum(InitialDatum::Cosine{0.6, 0.5 * unit(rng), 1 + static_cast<int>(3 * unit(rng))});
        spec.grid.n_cells = 16 + 8 * static_cast<int>(4 * unit(rng));
        const Problem raw = Problem::discretize(spec);
        std::vector<double> eps;
        double e = 0.5 * (0.5 + unit(rng));
        for (int m = 0; m < 6; ++m, e *= 0.25 + 0.5 * unit(rng)) {
            eps.push_back(e);
        }
        const auto family = regularize_family(raw, eps);
        double previous_distance = INFINITY;
        for (std::size_t m = 0; m < family.size(); ++m) {
            const auto& d = family[m];
            double distance = 0.0;
            for (std::size_t i = 0; i < d.values.size(); ++i) {
                CHECK(d.values[i] >= eps[m] + raw.initial[i] - 1e-12);
                distance = std::max(distance, std::abs(d.values[i] - raw.initial[i]));
                if (m > 0) {
                    CHECK(family[m - 1].values[i] >= d.values[i]);
                }
            }
            CHECK(distance <= previous_distance);
            previous_distance = distance;
        }
    }
}

TEST_CASE("trajectory accessors") {
    const Grid g = Grid::build(IntervalDomain(1.0), 4, 0.5, 1.0);
    const Trajectory t = oracle::sampled(g, [](double x, double s) { return x + 10 * s; });
    CHECK(t(2, 1) == doctest::Approx(10.25));
    CHECK(t.sup() == doctest::Approx(11.0));
    CHECK(t.min() == doctest::Approx(0.0));
    CHECK(t.leading(2).grid().level_count() == 2);
    CHECK(sup_distance(t, Trajectory(g, 0.0)) == doctest::Approx(11.0));
    CHECK(g.level_at_or_before(0.7) == 1);
}

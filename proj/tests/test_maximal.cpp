#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nlp/maximal.hpp"
#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <random>

using namespace nlp;

namespace {

ProblemSpec flat_spec(double u0, double c, double p, double k, double l, double horizon, int n = 16,
                      double dt = 1e-3) {
    ProblemSpec spec;
    spec.p = p;
    spec.l = l;
    spec.c = Coefficient::constant(c);
    spec.k = FluxKernel::constant(k);
    spec.u0 = InitialDatum::constant(u0);
    spec.horizon = horizon;
    spec.grid = {n, dt};
    return spec;
}

}  // namespace

TEST_CASE("ladder epsilons are dyadic") {
    LadderConfig config;
    config.first_exponent = 2;
    config.count = 4;
    CHECK(ladder_epsilons(config) == std::vector<double>{0.25, 0.125, 0.0625, 0.03125});
}

TEST_CASE("without sources every rung is its epsilon and the limit is zero") {
    const Problem raw = Problem::discretize(flat_spec(0.0, 0.0, 1.0, 0.0, 1.0, 0.1));
    LadderConfig config;
    config.count = 6;
    const EpsilonLadder ladder = epsilon_ladder(raw, config, GreenKernel::for_grid(raw.grid));
    REQUIRE(ladder.rungs.size() == 6);
    for (std::size_t m = 0; m < ladder.rungs.size(); ++m) {
        CHECK(sup_distance(ladder.rungs[m], Trajectory(raw.grid, ladder.epsilons[m])) <= 1e-12);
    }
    CHECK(ladder.limit.sup() <= 1e-9);
    CHECK(ladder.limit.min() >= -1e-9);
}

TEST_CASE("square-root source: limit follows (t/2)^2 and rungs decrease") {
    const Problem raw = Problem::discretize(flat_spec(0.0, 1.0, 0.5, 0.0, 1.0, 0.5));
    LadderConfig config;
    config.count = 16;
    const EpsilonLadder ladder = epsilon_ladder(raw, config, GreenKernel::for_grid(raw.grid));
    const Trajectory expected = oracle::sampled(raw.grid, [](double, double t) { return t * t / 4.0; });
    CHECK(sup_distance(ladder.limit, expected) <= 1e-3);
    for (std::size_t m = 0; m + 1 < ladder.rungs.size(); ++m) {
        CHECK(compare_traj(ladder.rungs[m], ladder.rungs[m + 1], 1e-8).ordered);
    }
    // Rung m is the ODE solution from epsilon_m.
    for (std::size_t m = 0; m < ladder.rungs.size(); m += 5) {
        const double eps = ladder.epsilons[m];
        const Trajectory ode =
            oracle::sampled(raw.grid, [eps](double, double t) { return oracle::power_ode(eps, 1.0, 0.5, t); });
        CHECK(sup_distance(ladder.rungs[m], ode) <= 1e-4);
    }
}

TEST_CASE("nonuniqueness certificate from an interior source") {
    const Problem raw = Problem::discretize(flat_spec(0.0, 1.0, 0.5, 0.0, 1.0, 0.5));
    CertificateConfig config;
    config.ladder.count = 16;
    config.t_star = 0.01;
    const Certificate cert = nonuniqueness_certificate(raw, config, GreenKernel::for_grid(raw.grid));
    CHECK(cert.status == CertificateStatus::certified);
    CHECK(cert.failing_stage.empty());
    REQUIRE(cert.limit.has_value());
    bool witnessed = false;
    for (const Witness& w : cert.witnesses) {
        if (w.condition == Condition::interior_source && w.holds) {
            witnessed = true;
            CHECK(w.value > 0.0);
        }
    }
    CHECK(witnessed);
    CHECK(positivity_check(*cert.limit, 0.01).min > 0.0);

    InteriorSubsolution sub;
    sub.amplitude = sub.amplitude_cap();
    CHECK(compare_traj(*cert.limit, interior_subsolution(sub, raw.grid), 1e-8).ordered);
}

TEST_CASE("no certificate in the Lipschitz regime or from nonzero data") {
    const Problem lipschitz = Problem::discretize(flat_spec(0.0, 1.0, 2.0, 1.0, 2.0, 0.05));
    CertificateConfig config;
    config.ladder.count = 10;
    const Certificate cert = nonuniqueness_certificate(lipschitz, config, GreenKernel::for_grid(lipschitz.grid));
    CHECK(cert.status == CertificateStatus::inconclusive);
    CHECK_FALSE(cert.failing_stage.empty());
    for (const Witness& w : cert.witnesses) {
        CHECK_FALSE(w.holds);
    }

    const Problem positive = Problem::discretize(flat_spec(1.0, 1.0, 0.5, 0.0, 1.0, 0.05));
    CHECK(oracle::error_kind([&] {
              nonuniqueness_certificate(positive, config, GreenKernel::for_grid(positive.grid));
          }) == "invalid-argument");
}

TEST_CASE("uniqueness probe in the Lipschitz regime") {
    const Problem raw = Problem::discretize(flat_spec(0.0, 1.0, 2.0, 1.0, 2.0, 0.05));
    CertificateConfig config;
    config.ladder.count = 12;
    const Certificate cert = uniqueness_probe(raw, config, GreenKernel::for_grid(raw.grid));
    CHECK(cert.kind == CertificateKind::uniqueness_probe);
    CHECK(cert.status == CertificateStatus::certified);
    REQUIRE(cert.limit.has_value());
    CHECK(cert.limit->sup() <= 1e-6);
}

TEST_CASE("uniqueness probe from positive data agrees across routes") {
    const Problem raw = Problem::discretize(flat_spec(1.0, 1.0, 2.0, 0.5, 2.0, 0.05, 32, 1e-4));
    CertificateConfig config;
    const Certificate cert = uniqueness_probe(raw, config, GreenKernel::for_grid(raw.grid));
    CHECK(cert.status == CertificateStatus::certified);
    REQUIRE(cert.evidence.count("divergence") == 1);
    for (const auto& [name, value] : cert.evidence) {
        if (name.find("divergence") != std::string::npos) {
            CHECK(value <= config.cross_solver_tol);
        }
    }
}

TEST_CASE("uniform ODE oracle") {
    const UniformOde root{1.0, 1.0, 0.5};
    CHECK(std::isinf(root.blowup_time()));
    CHECK(root(1.0) == doctest::Approx(2.25));

    const UniformOde linear{2.0, 1.0, 1.0};
    CHECK(linear(0.5) == doctest::Approx(2.0 * std::exp(0.5)));

    const UniformOde square{1.0, 1.0, 2.0};
    CHECK(square.blowup_time() == doctest::Approx(1.0));
    CHECK(square(0.5) == doctest::Approx(2.0));
    CHECK(oracle::error_kind([&] { square(1.0); }) == "domain-error");
    CHECK(oracle::error_kind([&] { square(1.5); }) == "domain-error");

    // From zero data the maximal branch leaves zero at once.
    const UniformOde maximal{0.0, 1.0, 0.5};
    CHECK(maximal(0.5) == doctest::Approx(0.0625));
    CHECK(maximal(0.0) == 0.0);

    const Grid g = Grid::build(IntervalDomain(1.0), 8, 0.01, 0.5);
    const Trajectory u = uniform_oracle(root, g);
    for (std::size_t j = 0; j < g.level_count(); ++j) {
        for (std::size_t i = 0; i < g.node_count(); ++i) {
            CHECK(u(j, i) == doctest::Approx(oracle::power_ode(1.0, 1.0, 0.5, g.t(j))));
        }
    }
}

TEST_CASE("property: the ladder limit dominates other solutions") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 4; ++trial) {
        ProblemSpec spec = flat_spec(0.0, 0.5 + unit(rng), 0.3 + 0.6 * unit(rng), 0.0, 1.0, 0.2, 16, 1.0 / 256);
        spec.u0 = InitialDatum(InitialDatum::Cosine{0.5, 0.3 * unit(rng), 1});
        const Problem raw = Problem::discretize(spec);
        LadderConfig config;
        config.count = 10;
        const EpsilonLadder ladder = epsilon_ladder(raw, config, GreenKernel::for_grid(raw.grid));
        const MolResult mol = mol_solve(raw);
        REQUIRE(mol.status == MolStatus::completed);
        CHECK(compare_traj(ladder.limit, mol.trajectory, 5e-3).ordered);
    }
}

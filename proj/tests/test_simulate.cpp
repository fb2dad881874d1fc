#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "momnoise/amplification.hpp"
#include "momnoise/families.hpp"
#include "momnoise/rng.hpp"
#include "momnoise/simulate.hpp"
#include "oracles.hpp"

using namespace momnoise;

TEST_CASE("counter-based stream is reproducible and well distributed") {
    const std::uint64_t key = rng::stream_key(7, 2, 3);
    CHECK(rng::normal(key, 5) == rng::normal(key, 5));
    CHECK(rng::normal(key, 5) != rng::normal(key, 6));
    CHECK(rng::stream_key(7, 2, 3) != rng::stream_key(7, 3, 2));

    double sum = 0.0, sq = 0.0;
    const int count = 200000;
    for (int i = 0; i < count; ++i) {
        const double z = rng::normal(key, static_cast<std::uint64_t>(i));
        sum += z;
        sq += z * z;
    }
    CHECK(std::fabs(sum / count) <= 0.01);
    CHECK(std::fabs(sq / count - 1.0) <= 0.01);
}

TEST_CASE("noise-free run from the minimizer stays exactly at zero") {
    AlgoParams p = optimal_params(Method::GD, 1.0, 4.0).params;
    p.sigma = 0.0;
    SimConfig cfg;
    cfg.steps = 10000;
    cfg.burn_in = 100;
    const SimResult res = simulate(p, Spectrum::endpoints(1.0, 4.0), cfg);
    CHECK(res.j_estimate == 0.0);
    CHECK(res.per_mode_estimates[0] == 0.0);
}

TEST_CASE("estimates agree with the analytic variance for tuned methods") {
    SimConfig cfg;
    cfg.steps = 1000000;
    cfg.trials = 4;
    cfg.seed = 2024;

    // gradient descent on [1, 4]: J = 25/16
    const AlgoParams gd = optimal_params(Method::GD, 1.0, 4.0).params;
    const SimResult gres = simulate(gd, Spectrum({1.0}), cfg);
    CHECK(std::fabs(gres.j_estimate - 25.0 / 16.0) <= 3.0 * gres.j_standard_error);

    // heavy ball on [1, 4]: J = 405/256
    const AlgoParams hb = optimal_params(Method::HB, 1.0, 4.0).params;
    const SimResult hres = simulate(hb, Spectrum({4.0}), cfg);
    CHECK(std::fabs(hres.j_estimate - 405.0 / 256.0) <= 3.0 * hres.j_standard_error);
}

TEST_CASE("identical configuration reproduces bit-identical results") {
    const AlgoParams hb = optimal_params(Method::HB, 1.0, 4.0).params;
    SimConfig cfg;
    cfg.steps = 20000;
    cfg.trials = 3;
    cfg.seed = 99;
    const SimResult a = simulate(hb, Spectrum::endpoints(1.0, 4.0), cfg);
    const SimResult b = simulate(hb, Spectrum::endpoints(1.0, 4.0), cfg);
    CHECK(a.j_estimate == b.j_estimate);
    CHECK(a.j_standard_error == b.j_standard_error);
    CHECK(a.per_mode_estimates == b.per_mode_estimates);
}

TEST_CASE("modes can be simulated jointly or separately") {
    const AlgoParams hb = optimal_params(Method::HB, 1.0, 4.0).params;
    SimConfig cfg;
    cfg.steps = 50000;
    cfg.trials = 2;
    cfg.seed = 7;

    const SimResult joint = simulate(hb, Spectrum({1.0, 4.0}), cfg);
    SimConfig lo = cfg;
    const SimResult first = simulate(hb, Spectrum({1.0}), lo);
    SimConfig hi = cfg;
    hi.mode_index_offset = 1;
    const SimResult second = simulate(hb, Spectrum({4.0}), hi);

    CHECK(joint.per_mode_estimates[0] == first.per_mode_estimates[0]);
    CHECK(joint.per_mode_estimates[1] == second.per_mode_estimates[0]);
    CHECK(testor::rel_err(joint.j_estimate, first.j_estimate + second.j_estimate) <= 1e-14);
}

TEST_CASE("statistical agreement across random stable configurations") {
    testor::Rng rng(61);
    int ok = 0;
    const int configs = 8;
    for (int i = 0; i < configs; ++i) {
        const double kappa = rng.uniform(2.0, 30.0);
        const double ts = (std::sqrt(kappa) + 1.0) / 2.0 * rng.uniform(1.05, 2.0);
        const auto pt = hb_like(SettlingTime{std::min(ts, 10.0)}, 1.0, kappa,
                                i % 2 ? NoiseModel::Gradient : NoiseModel::Iterate,
                                rng.uniform(0.5, 1.5));
        const Spectrum spec = testor::random_spectrum(rng, 1.0, kappa, rng.uniform_int(1, 3));
        const double want = total_amplification(pt.params, spec).total;

        SimConfig cfg;
        cfg.steps = 100000;
        cfg.trials = 6;
        cfg.seed = 1000 + static_cast<std::uint64_t>(i);
        const SimResult res = simulate(pt.params, spec, cfg);
        if (std::fabs(res.j_estimate - want) <= 3.0 * res.j_standard_error) ++ok;
    }
    CHECK(ok >= configs - 1);
}

TEST_CASE("unstable parameters are rejected up front") {
    SimConfig cfg;
    cfg.steps = 1000;
    cfg.burn_in = 10;
    CHECK_THROWS_AS(simulate({2.0, 0.0, 0.0}, Spectrum::endpoints(1.0, 4.0), cfg), UnstableError);
}

TEST_CASE("deterministic runs expose the decay rate") {
    AlgoParams p = optimal_params(Method::GD, 1.0, 4.0).params;
    p.sigma = 0.0;
    SimConfig cfg;
    cfg.steps = 2000;
    cfg.burn_in = 0;
    cfg.initial_state = {1.0, 1.0, 1.0, 1.0};
    const SimResult res = simulate(p, Spectrum::endpoints(1.0, 4.0), cfg);
    REQUIRE(res.empirical_rate.has_value());
    CHECK(*res.empirical_rate == doctest::Approx(0.6).epsilon(1e-3));
}

TEST_CASE("empirical settling thresholds") {
    SimConfig cfg;
    cfg.steps = 200000;

    AlgoParams gd = optimal_params(Method::GD, 1.0, 4.0).params;
    gd.sigma = 0.0;
    const Spectrum spec = Spectrum::endpoints(1.0, 4.0);
    CHECK(empirical_settling(gd, spec, 1.0, cfg) == 0);

    // Ts ln(1/eps) ~ 34.5 for the tuned gradient method at kappa = 4
    const long gd_t = empirical_settling(gd, spec, 1e-6, cfg);
    CHECK(gd_t >= 17);
    CHECK(gd_t <= 70);

    AlgoParams hb = optimal_params(Method::HB, 1.0, 4.0).params;
    hb.sigma = 0.0;
    CHECK(empirical_settling(hb, spec, 1e-6, cfg) < gd_t);

    // squaring the accuracy target roughly doubles the iteration count
    auto slow = hb_like(SettlingTime{50.0}, 1.0, 4.0).params;
    slow.sigma = 0.0;
    const long t1 = empirical_settling(slow, spec, 1e-3, cfg);
    const long t2 = empirical_settling(slow, spec, 1e-6, cfg);
    const double ratio = static_cast<double>(t2) / static_cast<double>(t1);
    CHECK(ratio >= 1.6);
    CHECK(ratio <= 2.5);

    AlgoParams noisy = gd;
    noisy.sigma = 1.0;
    CHECK_THROWS_AS(empirical_settling(noisy, spec, 1e-3, cfg), std::invalid_argument);
}

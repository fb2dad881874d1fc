#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "momnoise/amplification.hpp"
#include "momnoise/families.hpp"
#include "oracles.hpp"

using namespace momnoise;

TEST_CASE("modal variance at reference points") {
    CHECK(modal_amplification(ModalPoint{0.0, 0.0}, 1.0) == 1.0);

    // right triangle vertex at rho = 1/3: (1 + rho^2) / ((1-rho)^3 (1+rho)^3)
    const double rho = 1.0 / 3.0;
    const double want = (1.0 + rho * rho) / (std::pow(1.0 - rho, 3) * std::pow(1.0 + rho, 3));
    CHECK(want == doctest::Approx(405.0 / 256.0).epsilon(1e-14));  // = 1.58203125
    CHECK(modal_amplification(vertex_y(rho), 1.0) == doctest::Approx(want).epsilon(1e-13));

    CHECK_THROWS_AS(modal_amplification(ModalPoint{2.5, 0.0}, 1.0), UnstableError);
}

TEST_CASE("first-order recursion variance matches the scalar fixed point") {
    // a = 0 reduces the mode to x^{t+1} = -b x^t + sigma_w w^t with
    // steady-state variance sigma_w^2 / (1 - b^2)
    for (double al : {0.1, 0.5, 0.9, 1.3, 1.9}) {
        const AlgoParams p{al, 0.0, 0.0};
        const double b = al - 1.0;
        const double want = 1.0 / (1.0 - b * b);
        CHECK(modal_amplification(ModalPoint{b, 0.0}, 1.0) ==
              doctest::Approx(want).epsilon(1e-13));
        CHECK(modal_amplification_at(p, 1.0) == doctest::Approx(want).epsilon(1e-13));
    }
}

TEST_CASE("total amplification for rate-optimal tunings on [1, 4]") {
    // gradient descent: both endpoints sit at (+-3/5, 0), each an AR(1)
    // with variance 1/(1 - (3/5)^2) = 25/16
    const AlgoParams gd{2.0 / 5.0, 0.0, 0.0};
    const auto rep1 = total_amplification(gd, Spectrum({1.0}));
    CHECK(rep1.total == doctest::Approx(25.0 / 16.0).epsilon(1e-13));

    const auto rep2 = total_amplification(gd, Spectrum::endpoints(1.0, 4.0));
    CHECK(rep2.per_mode[0].second == doctest::Approx(25.0 / 16.0).epsilon(1e-13));
    CHECK(rep2.per_mode[1].second == doctest::Approx(25.0 / 16.0).epsilon(1e-13));
    CHECK(rep2.jhat_min_argument == doctest::Approx(2.5).epsilon(1e-12));

    // heavy ball: endpoints at the triangle vertices, equal contributions
    const AlgoParams hb{4.0 / 9.0, 1.0 / 9.0, 0.0};
    const auto hrep = total_amplification(hb, Spectrum::endpoints(1.0, 4.0));
    CHECK(hrep.per_mode[0].second == doctest::Approx(405.0 / 256.0).epsilon(1e-13));
    CHECK(hrep.per_mode[1].second == doctest::Approx(405.0 / 256.0).epsilon(1e-13));
    CHECK(hrep.jhat_max == doctest::Approx(405.0 / 256.0).epsilon(1e-13));

    AlgoParams quiet = gd;
    quiet.sigma = 0.0;
    CHECK(total_amplification(quiet, Spectrum::endpoints(1.0, 4.0)).total == 0.0);

    CHECK_THROWS_AS(total_amplification({2.0, 0.0, 0.0}, Spectrum::endpoints(1.0, 4.0)),
                    UnstableError);
}

TEST_CASE("per-mode Lyapunov solve at reference points") {
    // scalar mode: alpha m = 1 - rho puts the left endpoint at (-rho, 0)
    const double rho = 0.7;
    const AlgoParams p{1.0 - rho, 0.0, 0.0};
    CHECK(lyapunov_oracle(p, Spectrum({1.0})) ==
          doctest::Approx(1.0 / (1.0 - rho * rho)).epsilon(1e-12));

    const AlgoParams hb{4.0 / 9.0, 1.0 / 9.0, 0.0};
    CHECK(lyapunov_oracle(hb, Spectrum({4.0})) ==
          doctest::Approx(405.0 / 256.0).epsilon(1e-12));

    // block diagonality: contributions add across modes
    const double joint = lyapunov_oracle(hb, Spectrum({1.0, 4.0}));
    const double split = lyapunov_oracle(hb, Spectrum({1.0})) + lyapunov_oracle(hb, Spectrum({4.0}));
    CHECK(joint == doctest::Approx(split).epsilon(1e-14));

    CHECK_THROWS_AS(lyapunov_oracle({2.0, 0.0, 0.0}, Spectrum({1.0})), UnstableError);
}

TEST_CASE("closed form, per-mode solve, and full-system solve agree") {
    testor::Rng rng(31);
    for (int i = 0; i < 300; ++i) {
        const double m = rng.uniform(0.2, 1.5);
        const double L = m * rng.uniform(1.0, 60.0);
        const AlgoParams p = testor::random_stable_params(rng, m, L);
        const Spectrum spec = testor::random_spectrum(rng, m, L, rng.uniform_int(1, 8));

        const double closed = total_amplification(p, spec).total;
        const double modal = lyapunov_oracle(p, spec);
        CHECK(testor::rel_err(closed, modal) <= 1e-10);
        if (i < 60) {
            const double full = testor::full_system_variance(p, spec);
            CHECK(testor::rel_err(closed, full) <= 1e-9);
        }
    }
}

TEST_CASE("modal variance is convex with its minimum at the origin") {
    testor::Rng rng(32);
    int hits = 0;
    while (hits < 3000) {
        const ModalPoint p1{rng.uniform(-2.0, 2.0), rng.uniform(-1.0, 1.0)};
        const ModalPoint p2{rng.uniform(-2.0, 2.0), rng.uniform(-1.0, 1.0)};
        const ModalPoint mid{0.5 * (p1.b + p2.b), 0.5 * (p1.a + p2.a)};
        if (!in_delta(p1) || !in_delta(p2)) continue;
        ++hits;
        const double j1 = modal_amplification(p1, 1.0);
        const double j2 = modal_amplification(p2, 1.0);
        CHECK(modal_amplification(mid, 1.0) <= 0.5 * (j1 + j2) + 1e-9 * (j1 + j2));
        CHECK(j1 >= 1.0);  // sigma_w^2 at the origin is the global minimum
    }
}

TEST_CASE("contraction-triangle maximum sits at the upper vertices") {
    testor::Rng rng(33);
    for (double rho : {0.3, 0.6, 0.9}) {
        const double peak = modal_amplification(vertex_x(rho), 1.0);
        CHECK(peak == doctest::Approx(modal_amplification(vertex_y(rho), 1.0)).epsilon(1e-13));
        for (int i = 0; i < 10000; ++i) {
            const ModalPoint p{rng.uniform(-2.0 * rho, 2.0 * rho),
                               rng.uniform(-rho * rho, rho * rho)};
            if (!in_delta_rho(p, rho)) continue;
            CHECK(modal_amplification(p, 1.0) <= peak * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("every spectrum lands inside the class extremes") {
    testor::Rng rng(34);
    for (int i = 0; i < 200; ++i) {
        const double m = rng.uniform(0.2, 1.5);
        const double L = m * rng.uniform(1.2, 40.0);
        const int n = rng.uniform_int(2, 9);
        const AlgoParams p = testor::random_stable_params(rng, m, L);
        const auto ref = total_amplification(p, Spectrum::endpoints(m, L));
        const double cmax = ref.per_mode[0].second + ref.per_mode[1].second +
                            (n - 2) * ref.jhat_max;
        const double cmin = ref.per_mode[0].second + ref.per_mode[1].second +
                            (n - 2) * ref.jhat_min;
        const double j = total_amplification(p, testor::random_spectrum(rng, m, L, n)).total;
        CHECK(j <= cmax * (1.0 + 1e-11));
        CHECK(j >= cmin * (1.0 - 1e-11));
    }
}

TEST_CASE("interior minimum search matches a dense scan") {
    testor::Rng rng(35);
    for (int i = 0; i < 60; ++i) {
        const double m = rng.uniform(0.2, 1.5);
        const double L = m * rng.uniform(1.5, 40.0);
        const AlgoParams p = testor::random_stable_params(rng, m, L);
        const auto rep = total_amplification(p, Spectrum::endpoints(m, L));
        double scan = rep.jhat_max;
        for (int g = 0; g <= 4000; ++g) {
            const double lambda = m + (L - m) * g / 4000.0;
            scan = std::min(scan, modal_amplification_at(p, lambda));
        }
        CHECK(rep.jhat_min <= scan * (1.0 + 1e-8));
        CHECK(rep.jhat_min >= scan * (1.0 - 1e-4));  // scan grid slightly overshoots
    }
}

TEST_CASE("bound catalogue on tuned methods") {
    // heavy ball: the n Ts^3 envelope is met with equality
    for (double kappa : {4.0, 100.0}) {
        const auto hb = optimal_params(Method::HB, 1.0, kappa);
        const auto checks = verify_bounds(hb.params, 1.0, kappa, 5);
        bool found = false;
        for (const auto& c : checks) {
            CHECK(c.satisfied);
            if (c.bound_id == "j-cubic-ub") {
                found = true;
                CHECK(c.slack / c.rhs <= 1e-9);
            }
        }
        CHECK(found);
    }

    // gradient descent at kappa = 100: the same envelope is loose by ~kappa^2
    const double kappa = 100.0;
    const auto gd = optimal_params(Method::GD, 1.0, kappa);
    for (const auto& c : verify_bounds(gd.params, 1.0, kappa, 10)) {
        CHECK(c.satisfied);
        if (c.bound_id == "j-cubic-ub") {
            const double factor = c.rhs / c.lhs;
            CHECK(factor >= kappa * kappa / 10.0);
            CHECK(factor <= 10.0 * kappa * kappa);
        }
    }
}

TEST_CASE("stepsize never exceeds the contraction ceiling") {
    const auto hb = optimal_params(Method::HB, 1.0, 4.0);
    const auto eq = stepsize_rate_bound(hb.params, 4.0, hb.certificate.rho);
    CHECK(eq.satisfied);
    CHECK(eq.lhs == doctest::Approx(16.0 / 9.0).epsilon(1e-13));
    CHECK(eq.slack <= 1e-12 * eq.rhs);

    const auto gd = optimal_params(Method::GD, 1.0, 4.0);
    const auto loose = stepsize_rate_bound(gd.params, 4.0, gd.certificate.rho);
    CHECK(loose.satisfied);
    CHECK(loose.lhs == doctest::Approx(8.0 / 5.0).epsilon(1e-13));

    testor::Rng rng(36);
    for (int i = 0; i < 10000; ++i) {
        const double kk = rng.uniform(1.5, 50.0);
        const AlgoParams p = testor::random_stable_params(rng, 1.0, kk, 0.999999);
        const auto cert = certificate_or_throw(convergence_rate(p, Spectrum::endpoints(1.0, kk)));
        CHECK(stepsize_rate_bound(p, kk, cert.rho).satisfied);
    }
}

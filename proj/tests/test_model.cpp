#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>

#include "momnoise/model.hpp"
#include "momnoise/state_space.hpp"
#include "oracles.hpp"

using namespace momnoise;

TEST_CASE("spectrum sorts, validates, and keeps duplicates") {
    const Spectrum s({4.0, 1.0, 2.5, 2.5});
    CHECK(s.m() == 1.0);
    CHECK(s.L() == 4.0);
    CHECK(s.n() == 4);
    CHECK(s.kappa() == 4.0);
    CHECK(s.eigenvalues()[1] == 2.5);
    CHECK(s.eigenvalues()[2] == 2.5);

    CHECK_THROWS_AS(Spectrum({}), std::invalid_argument);
    CHECK_THROWS_AS(Spectrum({1.0, -2.0}), std::invalid_argument);
    CHECK_THROWS_AS(Spectrum({0.0}), std::invalid_argument);

    const Spectrum lin = Spectrum::linear(1.0, 4.0, 4);
    CHECK(lin.eigenvalues()[1] == doctest::Approx(2.0));
    CHECK(lin.eigenvalues()[2] == doctest::Approx(3.0));
    const Spectrum low = Spectrum::clustered_low(1.0, 4.0, 3);
    CHECK(low.eigenvalues() == std::vector<double>({1.0, 1.0, 4.0}));
}

TEST_CASE("modal coefficients at reference points") {
    // gradient descent with alpha * lambda = 1 maps to the origin
    const ModalPoint origin = modal_coefficients({1.0, 0.0, 0.0}, 1.0);
    CHECK(origin.b == 0.0);
    CHECK(origin.a == 0.0);

    // rate-optimal heavy ball on [1, 4]: endpoints are the triangle
    // vertices (+-2 rho, rho^2) with rho = 1/3
    const AlgoParams hb{4.0 / 9.0, 1.0 / 9.0, 0.0};
    const ModalPoint right = modal_coefficients(hb, 4.0);
    CHECK(right.b == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(right.a == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
    const ModalPoint left = modal_coefficients(hb, 1.0);
    CHECK(left.b == doctest::Approx(-2.0 / 3.0).epsilon(1e-14));
    CHECK(left.a == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
    CHECK((1.0 + hb.gamma) * left.a + hb.gamma * left.b ==
          doctest::Approx(hb.beta - hb.gamma).epsilon(1e-14));

    CHECK_THROWS_AS(modal_coefficients(hb, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(modal_coefficients(hb, -1.0), std::invalid_argument);
}

TEST_CASE("effective noise magnitude per model") {
    CHECK(effective_noise_magnitude({0.1, 0.0, 0.0, NoiseModel::Iterate, 1.0}) == 1.0);
    CHECK(effective_noise_magnitude({0.1, 0.0, 0.0, NoiseModel::Gradient, 1.0}) ==
          doctest::Approx(0.1).epsilon(1e-15));
    CHECK(effective_noise_magnitude({0.7, 0.0, 0.0, NoiseModel::Gradient, 0.0}) == 0.0);
}

TEST_CASE("affine identity and segment affinity of the modal map") {
    testor::Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
        AlgoParams p{rng.uniform(0.01, 3.0), rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
        const double l1 = rng.uniform(0.01, 10.0);
        const double l2 = rng.uniform(0.01, 10.0);
        const ModalPoint a = modal_coefficients(p, l1);
        const ModalPoint b = modal_coefficients(p, l2);
        const ModalPoint mid = modal_coefficients(p, 0.5 * (l1 + l2));

        const double affine = (1.0 + p.gamma) * a.a + p.gamma * a.b - (p.beta - p.gamma);
        CHECK(std::fabs(affine) <= 1e-12 * (1.0 + std::fabs(p.beta) + std::fabs(p.gamma)));
        CHECK(mid.b == doctest::Approx(0.5 * (a.b + b.b)).epsilon(1e-12));
        CHECK(mid.a == doctest::Approx(0.5 * (a.a + b.a)).epsilon(1e-12));
    }
}

TEST_CASE("state-space blocks for gradient descent and heavy ball") {
    const QuadraticProblem trivial{Spectrum({1.0})};
    const auto gd = build_system_matrices({1.0, 0.0, 0.0}, trivial);
    CHECK(gd.A(0, 0) == 0.0);
    CHECK(gd.A(0, 1) == 1.0);
    CHECK(gd.A(1, 0) == 0.0);
    CHECK(gd.A(1, 1) == 0.0);
    CHECK(gd.B(1, 0) == 1.0);
    CHECK(gd.C(0, 0) == 1.0);

    // lower blocks -beta + gamma a q and (1+beta) - (1+gamma) a q
    const auto hb = build_system_matrices({4.0 / 9.0, 1.0 / 9.0, 0.0}, {Spectrum({4.0})});
    CHECK(hb.A(1, 0) == doctest::Approx(-1.0 / 9.0).epsilon(1e-14));
    CHECK(hb.A(1, 1) == doctest::Approx(-2.0 / 3.0).epsilon(1e-14));
    const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(hb.A).eigenvalues();
    double radius = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) radius = std::max(radius, std::abs(ev[i]));
    CHECK(radius == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("full matrix spectrum equals the union of modal block spectra") {
    testor::Rng rng(12);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = rng.uniform_int(1, 5);
        std::vector<double> eigs;
        for (int i = 0; i < n; ++i) eigs.push_back(rng.uniform(0.5, 8.0));
        const Spectrum spec(eigs);
        AlgoParams p{rng.uniform(0.05, 0.4), rng.uniform(-0.8, 0.8), rng.uniform(-0.5, 0.9)};

        const auto ss = build_system_matrices(p, {spec});
        Eigen::VectorXcd full = Eigen::EigenSolver<Eigen::MatrixXd>(ss.A).eigenvalues();

        std::vector<std::complex<double>> modal;
        for (double lambda : spec.eigenvalues()) {
            const ModalPoint mp = modal_coefficients(p, lambda);
            const std::complex<double> disc(mp.b * mp.b - 4.0 * mp.a, 0.0);
            modal.push_back((-mp.b + std::sqrt(disc)) / 2.0);
            modal.push_back((-mp.b - std::sqrt(disc)) / 2.0);
        }
        // greedy multiset match
        std::vector<bool> used(modal.size(), false);
        for (Eigen::Index i = 0; i < full.size(); ++i) {
            double best = 1e9;
            size_t best_j = 0;
            for (size_t j = 0; j < modal.size(); ++j) {
                if (used[j]) continue;
                const double dist = std::abs(full[i] - modal[j]);
                if (dist < best) {
                    best = dist;
                    best_j = j;
                }
            }
            used[best_j] = true;
            CHECK(best <= 1e-10);
        }
    }
}

TEST_CASE("algo params validation") {
    CHECK_THROWS_AS((AlgoParams{-0.1, 0.0, 0.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((AlgoParams{0.1, 0.0, 0.0, NoiseModel::Iterate, -1.0}).validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS((QuadraticProblem{Spectrum({1.0, 2.0}), {{1.0}}}).validate(),
                    std::invalid_argument);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rds/benchmark.hpp"
#include "rds/identify.hpp"
#include "rds/plant.hpp"
#include "rds/random.hpp"

using namespace rds;

TEST_CASE("mls generates maximal length sequences") {
    SUBCASE("order 3 has period 7 and two-valued autocorrelation") {
        const auto seq = mls(3, {3, 2}, 14, 1.0);
        for (double s : seq) CHECK(std::abs(s) == 1.0);
        for (int k = 0; k < 7; ++k) CHECK(seq[static_cast<size_t>(k)] ==
                                          seq[static_cast<size_t>(k + 7)]);
        // Over one period, autocorrelation at every nonzero lag is -1/7.
        for (int lag = 1; lag < 7; ++lag) {
            double acc = 0.0;
            for (int k = 0; k < 7; ++k)
                acc += seq[static_cast<size_t>(k)] * seq[static_cast<size_t>((k + lag) % 7)];
            CHECK(acc / 7.0 == doctest::Approx(-1.0 / 7.0));
        }
    }
    SUBCASE("zero amplitude gives all zeros") {
        for (double s : mls(5, 31, 0.0)) CHECK(s == 0.0);
    }
    SUBCASE("period equals 2^order - 1 for default taps") {
        for (int order : {3, 4, 5, 6, 7, 10}) {
            const long period = (1L << order) - 1;
            const auto seq = mls(order, 2 * period, 1.0);
            for (long k = 0; k < period; ++k)
                CHECK(seq[static_cast<size_t>(k)] == seq[static_cast<size_t>(k + period)]);
            // No shorter period divides it: check proper divisors of the period.
            for (long cand = 1; cand < period; ++cand) {
                if (period % cand != 0) continue;
                bool repeats = true;
                for (long k = 0; k + cand < period && repeats; ++k)
                    repeats = seq[static_cast<size_t>(k)] == seq[static_cast<size_t>(k + cand)];
                CHECK_FALSE(repeats);
            }
        }
    }
    SUBCASE("balance: one more positive sample per period") {
        for (int order : {3, 5, 8, 10}) {
            const long period = (1L << order) - 1;
            const auto seq = mls(order, period, 2.5);
            long pos = 0, neg = 0;
            for (double s : seq) (s > 0 ? pos : neg) += 1;
            CHECK(pos == neg + 1);
        }
    }
    SUBCASE("unsupported order without explicit taps") {
        CHECK_THROWS_AS(mls(17, 5, 1.0), std::invalid_argument);
        CHECK_NOTHROW(mls(17, {17, 14}, 5, 1.0));
    }
}

TEST_CASE("networked plant") {
    SUBCASE("reset returns to the all-ones state and identical seeds repeat") {
        auto plant = make_networked_plant(4);
        CHECK((plant->true_state() - Vector::Ones(6)).norm() == 0.0);
        std::vector<Vector> first;
        for (int k = 0; k < 10; ++k) first.push_back(plant->step(Vector::Constant(1, 0.5)));
        plant->reset(4);
        for (int k = 0; k < 10; ++k)
            CHECK((plant->step(Vector::Constant(1, 0.5)) - first[static_cast<size_t>(k)]).norm() ==
                  0.0);
        plant->reset(5);
        double diff = 0.0;
        for (int k = 0; k < 10; ++k)
            diff += (plant->step(Vector::Constant(1, 0.5)) - first[static_cast<size_t>(k)]).norm();
        CHECK(diff > 0.0);
    }
    SUBCASE("output reads states 2, 4, 6 before the update") {
        auto plant = make_networked_plant(7);
        const Vector q0 = plant->true_state();
        const Vector y = plant->step(Vector::Zero(1));
        CHECK(y[0] == q0[1]);
        CHECK(y[1] == q0[3]);
        CHECK(y[2] == q0[5]);
    }
    SUBCASE("frozen parameters reproduce the hand-evaluated product") {
        auto plant = make_networked_plant(1, 0.0, 0.0);  // s1 = 0.8, s2 = 0.2 exactly
        const double u = 0.7;
        plant->step(Vector::Constant(1, u));
        Matrix A(6, 6);
        A << 0,   -0.4, 0, 0,    0, 0,
             1,    1.3, 0, 0,    0, 0.4,
             0,    0,   0, -0.6, 0, 0,
             0,    0.4, 1, 0.56, 0, 0,
             0,    0,   0, 0,    0, -0.8,
             0,    0,   0, 0.2,  1, 0.2;
        Vector B = Vector::Zero(6);
        B[1] = 0.4;
        const Vector expect = A * Vector::Ones(6) + B * u;
        CHECK((plant->true_state() - expect).norm() < 1e-12);
    }
    SUBCASE("noise-free plant matches a dense simulation over many steps") {
        auto plant = make_networked_plant(2, 0.0, 0.0);
        const auto sys = benchmark::system_model();
        // Frozen parameters correspond to xi = (0.7*0.8, 0.2, 0.6).
        const Vector xi = (Vector(3) << 0.56, 0.2, 0.6).finished();
        Vector q = Vector::Ones(6);
        NormalStream inputs(3);
        for (int k = 0; k < 40; ++k) {
            const Vector u = inputs.take(1);
            const Vector y = plant->step(u);
            CHECK((y - output(sys, q, u, xi)).norm() < 1e-12);
            q = step(sys, q, u, xi);
            CHECK((plant->true_state() - q).norm() < 1e-12);
        }
    }
}

TEST_CASE("model plant") {
    AffineCoefficients c = AffineCoefficients::zero(2, 1, 2, 1);
    c.A0 = (Matrix(2, 2) << 0.4, 0.1, -0.2, 0.5).finished();
    c.A[0](0, 0) = 0.3;
    c.B0(1, 0) = 1.0;
    c.C0 = Matrix::Identity(2, 2);
    RandomLinearSystem sys{c, "model"};

    SUBCASE("zero covariance behaves as the frozen deterministic system") {
        const auto model =
            DistributionModel::from_moments(Vector::Constant(1, 0.2), Matrix::Zero(1, 1));
        auto plant = make_model_plant(sys, model, Vector::Ones(2), 3);
        Vector x = Vector::Ones(2);
        const Vector xi = Vector::Constant(1, 0.2);
        for (int k = 0; k < 25; ++k) {
            const Vector u = Vector::Constant(1, std::sin(0.3 * k));
            const Vector y = plant->step(u);
            CHECK((y - output(sys, x, u, xi)).norm() < 1e-13);
            x = step(sys, x, u, xi);
        }
    }
    SUBCASE("trajectories are reproducible per seed") {
        const auto model = DistributionModel::from_moments(Vector::Constant(1, 0.2),
                                                           Matrix::Constant(1, 1, 0.09));
        auto a = make_model_plant(sys, model, Vector::Zero(2), 11);
        auto b = make_model_plant(sys, model, Vector::Zero(2), 11);
        for (int k = 0; k < 20; ++k) {
            const Vector u = Vector::Constant(1, 1.0);
            CHECK((a->step(u) - b->step(u)).norm() == 0.0);
        }
    }
    SUBCASE("one-step second moment matches the closed-form Gram") {
        const auto model = DistributionModel::from_moments(Vector::Constant(1, 0.2),
                                                           Matrix::Constant(1, 1, 0.09));
        const GramMatrix cf = gram_closed_form(c, model);
        // E[|r(xi)|^2] = trace of the Gram; estimate it by stepping the plant
        // from unit-coordinate states and inputs.
        auto plant = make_model_plant(sys, model, Vector::Zero(2), 5);
        const long N = 100000;
        double acc = 0.0;
        for (long s = 0; s < N; ++s) {
            plant->reset(static_cast<std::uint64_t>(s));
            // r rows: state maps from e1, e2 and the input map from e3.
            // One xi draw per step, so rebuild the row from three plants
            // sharing the seed.
            auto p1 = make_model_plant(sys, model, (Vector(2) << 1, 0).finished(),
                                       static_cast<std::uint64_t>(s));
            auto p2 = make_model_plant(sys, model, (Vector(2) << 0, 1).finished(),
                                       static_cast<std::uint64_t>(s));
            auto p3 = make_model_plant(sys, model, Vector::Zero(2),
                                       static_cast<std::uint64_t>(s));
            p1->step(Vector::Zero(1));
            p2->step(Vector::Zero(1));
            p3->step(Vector::Ones(1));
            acc += p1->true_state().squaredNorm() + p2->true_state().squaredNorm() +
                   p3->true_state().squaredNorm();
        }
        acc /= static_cast<double>(N);
        CHECK(std::abs(acc - cf.G.trace()) / cf.G.trace() < 0.02);
    }
}

TEST_CASE("identify recovers a constant parameter on an exact model plant") {
    AffineCoefficients c = AffineCoefficients::zero(2, 1, 2, 1);
    c.A0 = (Matrix(2, 2) << 0.5, 0.2, -0.1, 0.4).finished();
    c.A[0](1, 1) = 1.0;
    c.B0(0, 0) = 1.0;
    c.C0 = Matrix::Identity(2, 2);
    RandomLinearSystem sys{c, ""};
    const double true_xi = 0.3;
    const auto truth =
        DistributionModel::from_moments(Vector::Constant(1, true_xi), Matrix::Zero(1, 1));
    auto plant = make_model_plant(sys, truth, Vector::Zero(2), 17);

    IdentificationConfig cfg;
    cfg.k0 = 30;
    cfg.k1 = 60;
    cfg.mls_order = 6;
    cfg.input_amplitude = 1.0;
    cfg.enkf.members = 200;
    cfg.enkf.seed = 5;
    cfg.Q = Matrix::Identity(3, 3) * 0.01;
    cfg.R = Matrix::Identity(2, 2) * 0.01;
    const IdentificationResult res = identify(*plant, sys, cfg);
    CHECK(std::abs(res.mean[0] - true_xi) < 0.05);
    CHECK_FALSE(res.degenerate_window);
}

TEST_CASE("identify window statistics re-aggregate from the trace") {
    const auto sys = benchmark::system_model();
    IdentificationConfig cfg = benchmark::identification_config(3);
    cfg.k1 = 30;  // shorter run for the unit test
    auto plant = make_networked_plant(31);
    const IdentificationResult res = identify(*plant, sys, cfg);

    std::vector<Vector> window;
    for (const auto& row : res.trace)
        if (row.k >= cfg.k0) window.push_back(row.xi_filt);
    REQUIRE(static_cast<long>(window.size()) == cfg.k1 + 1);
    Vector mean = Vector::Zero(3);
    for (const auto& xi : window) mean += xi;
    mean /= static_cast<double>(window.size());
    Matrix cov = Matrix::Zero(3, 3);
    for (const auto& xi : window) cov += (xi - mean) * (xi - mean).transpose();
    cov /= static_cast<double>(window.size() - 1);
    CHECK((mean - res.mean).norm() < 1e-12);
    CHECK((cov - res.covariance).norm() < 1e-12);
    const GramMatrix gram = gram_empirical(sys.coeffs, window);
    CHECK((gram.G - res.empirical_gram.G).norm() < 1e-12 * std::max(1.0, gram.G.norm()));
}

TEST_CASE("identify with a single-sample window reports a degenerate covariance") {
    const auto sys = benchmark::system_model();
    IdentificationConfig cfg = benchmark::identification_config(9);
    cfg.k0 = 10;
    cfg.k1 = 0;
    auto plant = make_networked_plant(9);
    const IdentificationResult res = identify(*plant, sys, cfg);
    CHECK(res.degenerate_window);
    CHECK(res.covariance.norm() == 0.0);
}

TEST_CASE("identify flags divergence with the step index") {
    // An explosive plant with no usable measurements blows up the predictions.
    AffineCoefficients c = AffineCoefficients::zero(1, 1, 1, 1);
    c.A0(0, 0) = 3.0;
    c.B0(0, 0) = 1.0;
    c.C0(0, 0) = 1.0;
    RandomLinearSystem sys{c, ""};
    const auto truth =
        DistributionModel::from_moments(Vector::Constant(1, 0.0), Matrix::Zero(1, 1));
    auto plant = make_model_plant(sys, truth, Vector::Constant(1, 1.0), 2);
    IdentificationConfig cfg;
    cfg.k0 = 5;
    cfg.k1 = 60;
    cfg.mls_order = 5;
    cfg.enkf.members = 20;
    cfg.enkf.seed = 1;
    cfg.Q = Matrix::Identity(2, 2) * 1e-8;
    cfg.R = Matrix::Identity(1, 1) * 1e6;  // measurements carry no information
    cfg.divergence_threshold = 1e4;
    CHECK_THROWS_AS(identify(*plant, sys, cfg), DivergenceError);
}

TEST_CASE("benchmark identification lands in the expected band") {
    const auto sys = benchmark::system_model();
    const Vector expected = benchmark::true_parameter_mean();
    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        auto plant = make_networked_plant(subkey(seed, 0x70));
        const IdentificationResult res =
            identify(*plant, sys, benchmark::identification_config(seed));
        const bool mean_ok = (res.mean - expected).cwiseAbs().maxCoeff() <= 0.2;
        const bool var_ok = res.covariance(1, 1) >= 0.03 && res.covariance(1, 1) <= 0.15;
        hits += mean_ok && var_ok;
    }
    CHECK(hits >= 2);
}

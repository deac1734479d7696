#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rds/benchmark.hpp"
#include "rds/linalg.hpp"
#include "rds/random.hpp"
#include "rds/system.hpp"

using namespace rds;

namespace {

// Random affine instance with a valid Gaussian parameter model.
struct RandomInstance {
    AffineCoefficients coeffs;
    DistributionModel model;
};

RandomInstance random_instance(std::uint64_t seed, Index n, Index m, Index Z) {
    NormalStream stream(subkey(seed, 0xabc));
    auto randm = [&](Index r, Index c) {
        Matrix M(r, c);
        for (Index i = 0; i < r; ++i)
            for (Index j = 0; j < c; ++j) M(i, j) = stream.next();
        return M;
    };
    RandomInstance inst;
    inst.coeffs = AffineCoefficients::zero(n, m, (n > 1 ? n - 1 : 1), Z);
    const Index p = inst.coeffs.p;
    inst.coeffs.A0 = 0.5 * randm(n, n);
    inst.coeffs.B0 = randm(n, m);
    inst.coeffs.C0 = randm(p, n);
    inst.coeffs.D0 = randm(p, m);
    for (Index j = 0; j < Z; ++j) {
        inst.coeffs.A[j] = 0.3 * randm(n, n);
        inst.coeffs.B[j] = 0.3 * randm(n, m);
        inst.coeffs.C[j] = 0.3 * randm(p, n);
        inst.coeffs.D[j] = 0.3 * randm(p, m);
    }
    const Matrix H = randm(Z, Z);
    inst.model = DistributionModel::from_moments(
        randm(Z, 1).col(0), Matrix(0.2 * H * H.transpose()));
    return inst;
}

}  // namespace

TEST_CASE("eval_coeff at the origin returns the constant blocks") {
    const auto inst = random_instance(1, 3, 2, 2);
    const CoefficientValue v = eval_coeff(inst.coeffs, Vector::Zero(2));
    CHECK((v.A - inst.coeffs.A0).norm() == 0.0);
    CHECK((v.B - inst.coeffs.B0).norm() == 0.0);
    CHECK((v.C - inst.coeffs.C0).norm() == 0.0);
    CHECK((v.D - inst.coeffs.D0).norm() == 0.0);
}

TEST_CASE("eval_coeff at a basis vector adds one term") {
    const auto inst = random_instance(2, 3, 1, 3);
    Vector e = Vector::Zero(3);
    e[1] = 1.0;
    const CoefficientValue v = eval_coeff(inst.coeffs, e);
    CHECK((v.A - (inst.coeffs.A0 + inst.coeffs.A[1])).norm() < 1e-15);
    CHECK((v.B - (inst.coeffs.B0 + inst.coeffs.B[1])).norm() < 1e-15);
}

TEST_CASE("benchmark coefficients at the reported mean hit the known entries") {
    const auto sys = benchmark::system_model();
    const CoefficientValue v = eval_coeff(sys.coeffs, benchmark::reported_mean());
    CHECK(v.A(3, 3) == doctest::Approx(0.4403).epsilon(1e-12));
    CHECK(v.A(5, 3) == doctest::Approx(0.1739).epsilon(1e-12));
    CHECK(v.A(2, 3) == doctest::Approx(-0.5003).epsilon(1e-12));
    CHECK(v.D.norm() == 0.0);
}

TEST_CASE("eval_coeff is exactly affine in xi") {
    const auto inst = random_instance(3, 2, 2, 3);
    NormalStream stream(99);
    for (int rep = 0; rep < 20; ++rep) {
        const Vector x1 = stream.take(3), x2 = stream.take(3);
        const double alpha = stream.next();
        const CoefficientValue va = eval_coeff(inst.coeffs, alpha * x1 + (1 - alpha) * x2);
        const CoefficientValue v1 = eval_coeff(inst.coeffs, x1);
        const CoefficientValue v2 = eval_coeff(inst.coeffs, x2);
        CHECK((va.A - (alpha * v1.A + (1 - alpha) * v2.A)).norm() < 1e-12);
        CHECK((va.D - (alpha * v1.D + (1 - alpha) * v2.D)).norm() < 1e-12);
    }
}

TEST_CASE("step and output match the two-call composition") {
    const auto inst = random_instance(4, 3, 2, 2);
    RandomLinearSystem sys{inst.coeffs, "test"};
    NormalStream stream(17);
    SUBCASE("zero state and input map to zero") {
        CHECK(step(sys, Vector::Zero(3), Vector::Zero(2), stream.take(2)).norm() == 0.0);
        CHECK(output(sys, Vector::Zero(3), Vector::Zero(2), stream.take(2)).norm() == 0.0);
    }
    SUBCASE("random instances agree with eval_coeff") {
        for (int rep = 0; rep < 20; ++rep) {
            const Vector x = stream.take(3), u = stream.take(2), xi = stream.take(2);
            const CoefficientValue v = eval_coeff(inst.coeffs, xi);
            CHECK((step(sys, x, u, xi) - (v.A * x + v.B * u)).norm() < 1e-13);
            CHECK((output(sys, x, u, xi) - (v.C * x + v.D * u)).norm() < 1e-13);
        }
    }
}

TEST_CASE("scalar step example") {
    AffineCoefficients c = AffineCoefficients::zero(1, 1, 1, 1);
    c.A[0](0, 0) = 1.0;  // A(xi) = xi
    c.B0(0, 0) = 1.0;
    RandomLinearSystem sys{c, ""};
    const Vector next = step(sys, Vector::Constant(1, 2.0), Vector::Constant(1, 1.0),
                             Vector::Constant(1, 0.5));
    CHECK(next[0] == doctest::Approx(2.0));
}

TEST_CASE("benchmark output selects states 2, 4, 6") {
    const auto sys = benchmark::system_model();
    NormalStream stream(3);
    const Vector x = stream.take(6), xi = stream.take(3);
    const Vector y = output(sys, x, Vector::Zero(1), xi);
    CHECK(y[0] == x[1]);
    CHECK(y[1] == x[3]);
    CHECK(y[2] == x[5]);
}

TEST_CASE("row_vector layout and round trip") {
    SUBCASE("2x2 identity with a 2x1 B") {
        Matrix A = Matrix::Identity(2, 2);
        Matrix B(2, 1);
        B << 1, 2;
        const Vector r = row_vector(A, B);
        Vector expect(6);
        expect << 1, 0, 0, 1, 1, 2;
        CHECK((r - expect).norm() == 0.0);
    }
    SUBCASE("scalar case") {
        const Vector r = row_vector(Matrix::Constant(1, 1, 3.0), Matrix::Constant(1, 1, 4.0));
        CHECK(r[0] == 3.0);
        CHECK(r[1] == 4.0);
    }
    SUBCASE("round trip is exact on random matrices") {
        NormalStream stream(5);
        for (int rep = 0; rep < 10; ++rep) {
            const Index n = 1 + rep % 4, m = 1 + (rep / 2) % 3;
            Matrix A(n, n), B(n, m);
            for (Index i = 0; i < n; ++i)
                for (Index j = 0; j < n; ++j) A(i, j) = stream.next();
            for (Index i = 0; i < n; ++i)
                for (Index j = 0; j < m; ++j) B(i, j) = stream.next();
            Matrix A2, B2;
            unrow_vector(row_vector(A, B), n, m, A2, B2);
            CHECK((A - A2).norm() == 0.0);
            CHECK((B - B2).norm() == 0.0);
        }
    }
}

TEST_CASE("gram_closed_form scalar hand value") {
    AffineCoefficients c = AffineCoefficients::zero(1, 1, 1, 1);
    c.A[0](0, 0) = 1.0;
    c.B0(0, 0) = 1.0;
    const auto model = DistributionModel::from_moments(Vector::Constant(1, 0.5),
                                                       Matrix::Constant(1, 1, 0.25));
    const GramMatrix g = gram_closed_form(c, model);
    Matrix expect(2, 2);
    expect << 0.5, 0.5, 0.5, 1.0;
    CHECK((g.G - expect).norm() < 1e-14);
}

TEST_CASE("gram_closed_form with zero covariance is rank one") {
    const auto inst = random_instance(11, 3, 1, 2);
    const auto frozen = DistributionModel::from_moments(inst.model.mean, Matrix::Zero(2, 2));
    const GramMatrix g = gram_closed_form(inst.coeffs, frozen);
    const CoefficientValue v = eval_coeff(inst.coeffs, inst.model.mean);
    const Vector r = row_vector(v.A, v.B);
    CHECK((g.G - r * r.transpose()).norm() < 1e-12 * std::max(1.0, g.G.norm()));
    const EigSym es = eig_sym(g.G);
    int positive = 0;
    for (Index i = 0; i < es.values.size(); ++i)
        positive += es.values[i] > 1e-9 * es.values.maxCoeff();
    CHECK(positive == 1);
}

TEST_CASE("gram_closed_form output is symmetric PSD") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto inst = random_instance(seed + 100, 2 + seed % 3, 1 + seed % 2, 1 + seed % 3);
        const GramMatrix g = gram_closed_form(inst.coeffs, inst.model);
        CHECK(asymmetry(g.G) == 0.0);
        const EigSym es = eig_sym(g.G);
        CHECK(es.values.minCoeff() >= -1e-8 * std::max(1.0, es.values.maxCoeff()));
    }
}

TEST_CASE("gram_empirical basics") {
    const auto inst = random_instance(21, 2, 2, 2);
    NormalStream stream(8);
    const Vector xi = stream.take(2);
    SUBCASE("single sample is the outer product") {
        const GramMatrix g = gram_empirical(inst.coeffs, {xi});
        const CoefficientValue v = eval_coeff(inst.coeffs, xi);
        const Vector r = row_vector(v.A, v.B);
        CHECK((g.G - r * r.transpose()).norm() < 1e-13);
    }
    SUBCASE("duplicating the sample list changes nothing") {
        const Vector xi2 = stream.take(2);
        const GramMatrix g1 = gram_empirical(inst.coeffs, {xi, xi2});
        const GramMatrix g2 = gram_empirical(inst.coeffs, {xi, xi2, xi, xi2});
        CHECK((g1.G - g2.G).norm() < 1e-12 * std::max(1.0, g1.G.norm()));
    }
    SUBCASE("empty list is an error") {
        CHECK_THROWS_AS(gram_empirical(inst.coeffs, {}), std::invalid_argument);
    }
}

TEST_CASE("gram_monte_carlo determinism and degenerate case") {
    const auto inst = random_instance(31, 2, 1, 2);
    SUBCASE("same seed gives identical output") {
        const GramMatrix a = gram_monte_carlo(inst.coeffs, inst.model, 2000, 9);
        const GramMatrix b = gram_monte_carlo(inst.coeffs, inst.model, 2000, 9);
        CHECK((a.G - b.G).norm() == 0.0);
        const GramMatrix c = gram_monte_carlo(inst.coeffs, inst.model, 2000, 10);
        CHECK((a.G - c.G).norm() > 0.0);
    }
    SUBCASE("zero covariance reproduces the frozen outer product exactly") {
        const auto frozen = DistributionModel::from_moments(inst.model.mean, Matrix::Zero(2, 2));
        const GramMatrix g = gram_monte_carlo(inst.coeffs, frozen, 17, 4);
        const CoefficientValue v = eval_coeff(inst.coeffs, inst.model.mean);
        const Vector r = row_vector(v.A, v.B);
        CHECK((g.G - r * r.transpose()).norm() < 1e-12 * std::max(1.0, g.G.norm()));
    }
}

TEST_CASE("scalar Monte Carlo matches the analytic moments") {
    AffineCoefficients c = AffineCoefficients::zero(1, 1, 1, 1);
    c.A[0](0, 0) = 1.0;
    c.B0(0, 0) = 1.0;
    const auto model = DistributionModel::from_moments(Vector::Constant(1, 0.5),
                                                       Matrix::Constant(1, 1, 0.25));
    const GramMatrix g = gram_monte_carlo(c, model, 1000000, 1);
    Matrix expect(2, 2);
    expect << 0.5, 0.5, 0.5, 1.0;
    CHECK((g.G - expect).norm() / expect.norm() < 1e-2);
}

TEST_CASE("empirical Gram converges to the closed form") {
    const auto inst = random_instance(41, 2, 1, 2);
    const Matrix L = psd_factor(inst.model.covariance);
    NormalStream stream(77);
    std::vector<Vector> samples;
    const int n_samples = 200000;
    samples.reserve(n_samples);
    for (int s = 0; s < n_samples; ++s) samples.push_back(inst.model.mean + L * stream.take(2));
    const GramMatrix emp = gram_empirical(inst.coeffs, samples);
    const GramMatrix cf = gram_closed_form(inst.coeffs, inst.model);
    CHECK((emp.G - cf.G).norm() / cf.G.norm() < 2e-2);
}

TEST_CASE("distribution model validation") {
    SUBCASE("asymmetric covariance rejected") {
        Matrix bad(2, 2);
        bad << 1, 0.5, -0.5, 1;
        CHECK_THROWS_AS(DistributionModel::from_moments(Vector::Zero(2), bad),
                        std::invalid_argument);
    }
    SUBCASE("negative covariance rejected") {
        Matrix bad(1, 1);
        bad << -0.5;
        CHECK_THROWS_AS(DistributionModel::from_moments(Vector::Zero(1), bad),
                        std::invalid_argument);
    }
    SUBCASE("samples must match stored moments") {
        NormalStream stream(6);
        std::vector<Vector> samples;
        for (int i = 0; i < 50; ++i) samples.push_back(stream.take(2));
        DistributionModel model = DistributionModel::from_samples(samples);
        CHECK_NOTHROW(model.validate());
        model.mean[0] += 1.0;
        CHECK_THROWS_AS(model.validate(), std::invalid_argument);
    }
}

TEST_CASE("dimension mismatches are input errors") {
    const auto inst = random_instance(51, 2, 1, 2);
    RandomLinearSystem sys{inst.coeffs, ""};
    CHECK_THROWS_AS(eval_coeff(inst.coeffs, Vector::Zero(3)), std::invalid_argument);
    CHECK_THROWS_AS(step(sys, Vector::Zero(3), Vector::Zero(1), Vector::Zero(2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(output(sys, Vector::Zero(2), Vector::Zero(2), Vector::Zero(2)),
                    std::invalid_argument);
}

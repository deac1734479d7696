#include "rds/plant.hpp"

#include "rds/linalg.hpp"
#include "rds/random.hpp"

namespace rds {

std::vector<int> default_mls_taps(int order) {
    switch (order) {
        case 3: return {3, 2};
        case 4: return {4, 3};
        case 5: return {5, 3};
        case 6: return {6, 5};
        case 7: return {7, 6};
        case 8: return {8, 6, 5, 4};
        case 9: return {9, 5};
        case 10: return {10, 7};
        case 11: return {11, 9};
        case 12: return {12, 6, 4, 1};
        case 13: return {13, 4, 3, 1};
        case 14: return {14, 5, 3, 1};
        case 15: return {15, 14};
        case 16: return {16, 15, 13, 4};
        default:
            throw std::invalid_argument("default_mls_taps: no default taps for order " +
                                        std::to_string(order) + " (supported 3..16)");
    }
}

std::vector<double> mls(int order, const std::vector<int>& taps, long length, double amplitude) {
    require(order >= 2, "mls: order must be at least 2");
    require(length >= 1, "mls: length must be positive");
    require(!taps.empty(), "mls: need at least one tap");
    for (int t : taps)
        require(t >= 1 && t <= order, "mls: tap positions must lie in 1..order");

    std::vector<int> reg(static_cast<size_t>(order), 1);  // all-ones seed
    std::vector<double> seq(static_cast<size_t>(length));
    for (long k = 0; k < length; ++k) {
        seq[static_cast<size_t>(k)] = reg.back() ? amplitude : -amplitude;
        int feedback = 0;
        for (int t : taps) feedback ^= reg[static_cast<size_t>(t - 1)];
        for (size_t i = reg.size() - 1; i > 0; --i) reg[i] = reg[i - 1];
        reg[0] = feedback;
    }
    return seq;
}

std::vector<double> mls(int order, long length, double amplitude) {
    return mls(order, default_mls_taps(order), length, amplitude);
}

namespace {

class NetworkedPlant final : public Plant {
  public:
    NetworkedPlant(std::uint64_t seed, double s1_std, double s2_std)
        : s1_std_(s1_std), s2_std_(s2_std) {
        reset(seed);
    }

    void reset(std::uint64_t seed) override {
        seed_ = seed;
        k_ = 0;
        q_ = Vector::Ones(6);
    }

    Vector step(const Vector& u) override {
        require(u.size() == 1, "NetworkedPlant: input must be scalar");
        NormalStream noise(subkey(seed_, static_cast<std::uint64_t>(k_)));
        const double s1 = 0.8 + s1_std_ * noise.next();
        const double s2 = 0.2 + s2_std_ * noise.next();

        Matrix A = Matrix::Zero(6, 6);
        // subsystem blocks
        A(0, 1) = -0.4; A(1, 0) = 1.0; A(1, 1) = 1.3;
        A(2, 3) = -0.6; A(3, 2) = 1.0; A(3, 3) = 0.7 * s1;
        A(4, 5) = -0.8; A(5, 4) = 1.0; A(5, 5) = s2;
        // ring couplings: B1*C3, B2*C1, B3*C2
        A(1, 5) = 0.4;
        A(3, 1) = 0.4;
        A(5, 3) = s2;
        Vector B = Vector::Zero(6);
        B[1] = 0.4;

        const Vector y = (Vector(3) << q_[1], q_[3], q_[5]).finished();
        q_ = A * q_ + B * u[0];
        ++k_;
        return y;
    }

    Vector true_state() const override { return q_; }
    Index input_dim() const override { return 1; }
    Index output_dim() const override { return 3; }

  private:
    double s1_std_, s2_std_;
    std::uint64_t seed_ = 0;
    long k_ = 0;
    Vector q_;
};

class ModelPlant final : public Plant {
  public:
    ModelPlant(RandomLinearSystem sys, DistributionModel model, Vector x0, std::uint64_t seed)
        : sys_(std::move(sys)), model_(std::move(model)), x0_(std::move(x0)) {
        sys_.coeffs.validate();
        model_.validate();
        require(model_.dim == sys_.coeffs.Z, "ModelPlant: model dimension mismatch");
        require(x0_.size() == sys_.coeffs.n, "ModelPlant: x0 dimension mismatch");
        noise_factor_ = psd_factor(model_.covariance);
        reset(seed);
    }

    void reset(std::uint64_t seed) override {
        seed_ = seed;
        k_ = 0;
        x_ = x0_;
    }

    Vector step(const Vector& u) override {
        NormalStream noise(subkey(seed_, static_cast<std::uint64_t>(k_)));
        const Vector xi = model_.mean + noise_factor_ * noise.take(model_.dim);
        const Vector y = output(sys_, x_, u, xi);
        x_ = rds::step(sys_, x_, u, xi);
        ++k_;
        return y;
    }

    Vector true_state() const override { return x_; }
    Index input_dim() const override { return sys_.coeffs.m; }
    Index output_dim() const override { return sys_.coeffs.p; }

  private:
    RandomLinearSystem sys_;
    DistributionModel model_;
    Vector x0_;
    Matrix noise_factor_;
    std::uint64_t seed_ = 0;
    long k_ = 0;
    Vector x_;
};

}  // namespace

std::unique_ptr<Plant> make_networked_plant(std::uint64_t seed, double s1_std, double s2_std) {
    return std::make_unique<NetworkedPlant>(seed, s1_std, s2_std);
}

std::unique_ptr<Plant> make_model_plant(RandomLinearSystem sys, DistributionModel model, Vector x0,
                                        std::uint64_t seed) {
    return std::make_unique<ModelPlant>(std::move(sys), std::move(model), std::move(x0), seed);
}

}  // namespace rds

#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace fastflow {

/// Deterministic random source. All draws go through explicit transforms of
/// the mt19937_64 output stream; std::*_distribution is implementation-defined
/// and would break fixture reproducibility across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n), n > 0.
    int uniform_int(int n);

    /// Standard normal deviate (Box-Muller, second deviate cached).
    double normal();

    Eigen::VectorXd normal_vector(int dim);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace fastflow

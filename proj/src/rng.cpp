#include "fastflow/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fastflow {

int Rng::uniform_int(int n) {
    if (n <= 0) {
        throw std::invalid_argument("Rng::uniform_int: n must be positive");
    }
    return static_cast<int>(engine_() % static_cast<std::uint64_t>(n));
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // u1 in (0, 1] so the log is finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

Eigen::VectorXd Rng::normal_vector(int dim) {
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) {
        v[i] = normal();
    }
    return v;
}

}  // namespace fastflow

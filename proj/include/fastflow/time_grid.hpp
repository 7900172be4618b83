#pragma once

#include <vector>

namespace fastflow {

/// Discretization t_0 < t_1 < ... < t_T of [0, 1] with t_0 = 0 and t_T = 1.
class TimeGrid {
public:
    /// t_k = k / T, exact at both endpoints.
    static TimeGrid uniform(int steps);

    /// Warped grid t'_k = s * t_k / (1 + (s - 1) * t_k) applied to the uniform
    /// grid; s = 1 reproduces the uniform grid. Endpoints are pinned exactly.
    static TimeGrid shifted(int steps, double shift);

    /// Custom grid; validates monotonicity and exact endpoints.
    explicit TimeGrid(std::vector<double> times, double shift = 1.0);

    int steps() const { return static_cast<int>(times_.size()) - 1; }
    double time(int k) const { return times_[static_cast<std::size_t>(k)]; }
    double dt(int k) const { return times_[static_cast<std::size_t>(k) + 1] - times_[static_cast<std::size_t>(k)]; }
    bool uniform_spacing() const { return uniform_; }
    double shift() const { return shift_; }
    const std::vector<double>& times() const { return times_; }

    bool operator==(const TimeGrid& other) const { return times_ == other.times_; }

private:
    std::vector<double> times_;
    bool uniform_ = true;
    double shift_ = 1.0;
};

}  // namespace fastflow

#include "fastflow/time_grid.hpp"

#include <stdexcept>
#include <string>

namespace fastflow {

namespace {

void validate_times(const std::vector<double>& times) {
    if (times.size() < 2) {
        throw std::invalid_argument("TimeGrid: need at least two grid points");
    }
    if (times.front() != 0.0 || times.back() != 1.0) {
        throw std::invalid_argument("TimeGrid: endpoints must be exactly 0 and 1");
    }
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (!(times[k] > times[k - 1])) {
            throw std::invalid_argument("TimeGrid: times must be strictly increasing at index " +
                                        std::to_string(k));
        }
    }
}

}  // namespace

TimeGrid TimeGrid::uniform(int steps) {
    if (steps < 1) {
        throw std::invalid_argument("TimeGrid::uniform: steps must be >= 1");
    }
    std::vector<double> times(static_cast<std::size_t>(steps) + 1);
    for (int k = 0; k <= steps; ++k) {
        times[static_cast<std::size_t>(k)] = static_cast<double>(k) / static_cast<double>(steps);
    }
    TimeGrid grid(std::move(times));
    grid.uniform_ = true;
    grid.shift_ = 1.0;
    return grid;
}

TimeGrid TimeGrid::shifted(int steps, double shift) {
    if (shift <= 0.0) {
        throw std::invalid_argument("TimeGrid::shifted: shift must be positive");
    }
    if (shift == 1.0) {
        return uniform(steps);
    }
    TimeGrid base = uniform(steps);
    std::vector<double> times(base.times_);
    for (auto& t : times) {
        t = shift * t / (1.0 + (shift - 1.0) * t);
    }
    times.front() = 0.0;
    times.back() = 1.0;  // warp(1) can be off by one ulp
    TimeGrid grid(std::move(times));
    grid.uniform_ = false;
    grid.shift_ = shift;
    return grid;
}

TimeGrid::TimeGrid(std::vector<double> times, double shift) : times_(std::move(times)), shift_(shift) {
    validate_times(times_);
    uniform_ = true;
    for (int k = 0; k <= steps(); ++k) {
        if (times_[static_cast<std::size_t>(k)] !=
            static_cast<double>(k) / static_cast<double>(steps())) {
            uniform_ = false;
            break;
        }
    }
}

}  // namespace fastflow

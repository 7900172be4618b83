#include <doctest.h>

#include <stdexcept>

#include "fastflow/time_grid.hpp"

using namespace fastflow;

TEST_CASE("uniform grid hits k/T exactly") {
    const TimeGrid grid = TimeGrid::uniform(50);
    CHECK(grid.steps() == 50);
    CHECK(grid.time(0) == 0.0);
    CHECK(grid.time(50) == 1.0);
    for (int k = 0; k <= 50; ++k) {
        CHECK(grid.time(k) == static_cast<double>(k) / 50.0);
    }
    CHECK(grid.uniform_spacing());
}

TEST_CASE("shifted grid warps toward t=1 and keeps exact endpoints") {
    const TimeGrid grid = TimeGrid::shifted(50, 3.0);
    CHECK(grid.time(0) == 0.0);
    CHECK(grid.time(50) == 1.0);
    CHECK_FALSE(grid.uniform_spacing());
    for (int k = 0; k < 50; ++k) {
        CHECK(grid.time(k + 1) > grid.time(k));
    }
    // s > 1 pushes interior points up: s*t/(1+(s-1)t) > t on (0,1)
    for (int k = 1; k < 50; ++k) {
        CHECK(grid.time(k) > static_cast<double>(k) / 50.0);
    }
    CHECK(TimeGrid::shifted(50, 1.0).uniform_spacing());
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(TimeGrid::uniform(0), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid::shifted(10, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid({0.0, 0.5, 0.5, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid({0.1, 0.5, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid({0.0, 0.5}), std::invalid_argument);
    CHECK_NOTHROW(TimeGrid({0.0, 0.25, 1.0}));
}

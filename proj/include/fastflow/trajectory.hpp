#pragma once

#include <vector>

#include <Eigen/Core>
#include <json.hpp>

namespace fastflow {

/// One bandit round: the decision index, the chosen skip length, and the
/// reward/loss fed back after the next model evaluation.
struct SkipDecision {
    int step = 0;
    int arm = 0;
    double reward = 0.0;
    double loss = 0.0;
};

/// One use of the finite-difference velocity estimate. `index` is the
/// trajectory index the estimate was applied at, `target_time` the time the
/// estimate extrapolates to (anchor time + dt argument).
struct ExtrapolationUse {
    int index = 0;
    int anchor_k = 0;
    int anchor_p = 0;
    double target_time = 0.0;
    Eigen::VectorXd v_hat;
};

/// Full per-run trace of a trajectory engine. `states` has T+1 entries;
/// `evaluated[k]` is true when the model was called at index k (index T can
/// be true for engines that evaluate the terminal state for reward feedback).
struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
    std::vector<bool> evaluated;
    std::vector<SkipDecision> decisions;
    std::vector<ExtrapolationUse> extrapolations;
    long eval_count = 0;

    int steps() const { return static_cast<int>(states.size()) - 1; }
    const Eigen::VectorXd& final_state() const { return states.back(); }

    /// |S|: indices in 0..T-1 where the model was not called.
    int skipped_count() const;

    /// Mean chosen skip length over the recorded decisions (0 when none).
    double mean_skip() const;

    nlohmann::json to_json() const;
    static TrajectoryRecord from_json(const nlohmann::json& j);
};

}  // namespace fastflow

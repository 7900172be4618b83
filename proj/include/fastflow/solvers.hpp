#pragma once

#include <vector>

#include <Eigen/Core>

#include "fastflow/trajectory.hpp"

namespace fastflow {

class VelocityField;
class TimeGrid;
class BanditRegistry;

/// Forward Euler update x + dt * v. Throws on non-finite inputs or dt <= 0.
Eigen::VectorXd euler_step(const Eigen::VectorXd& x, const Eigen::VectorXd& v, double dt);

/// First-order velocity extrapolation from the two most recent evaluations:
/// v_hat = v_k + dt * (v_k - v_p) / (t_k - t_p). dt is measured from the
/// anchor time t_k; dt = 0 returns v_k bitwise.
Eigen::VectorXd extrapolate_velocity(const Eigen::VectorXd& v_k, const Eigen::VectorXd& v_p,
                                     double t_k, double t_p, double dt);

/// Plain Euler integration with a model call at every step; eval_count = T.
TrajectoryRecord full_trajectory(const VelocityField& field, const TimeGrid& grid,
                                 const Eigen::VectorXd& x0);

/// dt argument handed to the velocity estimate of the Euler step that lands
/// at index k+m+1 after a skip of m:
///   kAnchorOffset -- dt = t_{k+m} - t_k, the offset of the step's left
///                    endpoint from the anchor; the mathematically consistent
///                    first-order extrapolation (default).
///   kLiteral      -- dt = t_{k+m+1} - t_{k+m}, the local interval exactly as
///                    the pseudo-code passes it; kept for fidelity.
enum class DeltaTSemantics { kAnchorOffset, kLiteral };

/// How the skipped indices are advanced:
///   kExtrapolated -- sub-steps each skipped index with the extrapolated
///                    velocity at the sub-step's left endpoint, keeping the
///                    injected error at curvature order like the final-state
///                    bound's per-step regime (default).
///   kPlainEuler   -- one stride per index reusing the anchor velocity v_k;
///                    this is the simplification whose landing state has the
///                    closed multistep form (see lms_jump).
enum class JumpMode { kExtrapolated, kPlainEuler };

struct FastFlowConfig {
    double mu = 0.001;
    double gamma = 2.0;
    std::vector<int> arms = {0, 2, 4, 6};  // base arm set; clipped near the horizon
    DeltaTSemantics delta_t = DeltaTSemantics::kAnchorOffset;
    JumpMode jump = JumpMode::kExtrapolated;

    void validate() const;

    /// Arms available at decision index k: {a in arms : k + a + 1 <= steps}.
    /// Always contains 0, so full evaluation stays available.
    std::vector<int> arm_set_for_step(int k, int steps) const;
};

/// Bandit-driven generation. Indices 0 and 1 are always evaluated; at each
/// decision index k (the newest evaluated index) the per-step bandit picks a
/// skip length m, indices k+1..k+m are extrapolated, the state at k+m+1 is
/// advanced and then evaluated, and the reward mu*m - MSE(v_hat, v) is pushed
/// to the bandit at k, where v_hat is the extrapolated velocity at the
/// evaluated index (in literal mode: the step's estimate verbatim). The next
/// decision happens at k+m+1 with anchors (k+m+1, k). Agents with unplayed
/// arms play them round-robin (forced) before UCB takes over.
TrajectoryRecord fastflow_generate(const VelocityField& field, const TimeGrid& grid,
                                   const Eigen::VectorXd& x0, const FastFlowConfig& config,
                                   BanditRegistry& registry);

/// Warm-up on a single start state (the "first prompt"): repeats generations
/// until every agent created so far has all arms played at least once.
/// Agents at indices never visited stay lazy; they initialize through forced
/// plays on their first visit. Returns the number of generations used.
long initialize_registry(BanditRegistry& registry, const VelocityField& field,
                         const TimeGrid& grid, const Eigen::VectorXd& x0,
                         const FastFlowConfig& config);

/// Static truncation baseline: evaluates at indices 0, 1 and every k with
/// k % skip_every == 0; all other velocities are extrapolated from the last
/// two evaluations. skip_every = 1 reproduces full_trajectory.
TrajectoryRecord fixed_skip_generate(const VelocityField& field, const TimeGrid& grid,
                                     const Eigen::VectorXd& x0, int skip_every);

/// Cache-reuse baseline: keeps re-using the last evaluated velocity while the
/// accumulated rel-L1 distance between the last two evaluated velocities
/// stays below the threshold; re-evaluates (and resets the accumulator)
/// otherwise. threshold = 0 evaluates everywhere.
TrajectoryRecord reuse_velocity_generate(const VelocityField& field, const TimeGrid& grid,
                                         const Eigen::VectorXd& x0, double rel_l1_threshold);

/// Closed-form landing state of an m-step skip on a uniform grid with
/// adjacent anchors: x_{k+m+1} = x_k + h * ((2m+1) v_k - m v_{k-1}).
Eigen::VectorXd lms_jump(const Eigen::VectorXd& x_k, const Eigen::VectorXd& v_k,
                         const Eigen::VectorXd& v_km1, double h, int m);

/// Multiplier of x''(t_k) in the local truncation error of lms_jump:
/// (m^2 + 1) / (2 (m + 1)) * h^2, which is <= (m/2) h^2 for m >= 1.
double local_truncation_error_coeff(int m, double h);

/// Fixed-skip generation through the multistep jump: plain strides over the
/// skipped indices, consistent extrapolation for the landing step. With
/// adjacent anchors the landing state equals lms_jump exactly. Uniform grids
/// only.
TrajectoryRecord lms_generate(const VelocityField& field, const TimeGrid& grid,
                              const Eigen::VectorXd& x0, int skip_length);

}  // namespace fastflow

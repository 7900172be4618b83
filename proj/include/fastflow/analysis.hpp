#pragma once

#include <vector>

#include <Eigen/Core>

#include "fastflow/trajectory.hpp"

namespace fastflow {

class AnalyticField;
class VelocityField;
class TimeGrid;

/// Closed-form final-state error bound for a trajectory with |S| Taylor-
/// approximated steps on a uniform grid: (|S| * M * e^{L_x} / 2) * T^-3.
double final_state_bound(int skipped, double curvature_m, double lipschitz_x, int steps);

/// Labeled conservative variant for multi-step skips: the per-skip interval
/// 1/T is replaced by (m_max + 1)/T. Reported alongside, never asserted.
double conservative_bound(int skipped, double curvature_m, double lipschitz_x, int steps,
                          int max_skip);

/// ||final(a) - final(b)||_2; the two records must share grid and start state.
double final_state_error(const TrajectoryRecord& a, const TrajectoryRecord& b);

struct BoundReport {
    int skipped_count = 0;
    double curvature_m = 0.0;
    double lipschitz_x = 0.0;
    int steps = 0;
    double bound = 0.0;
    double empirical_error = 0.0;
    bool satisfied = false;
};

/// Strict verification in the bound's literal regime: uniform grid, known
/// smoothness constants, isolated single-step skips with both neighbors
/// evaluated. At a skipped index k the velocity is the first-order Taylor
/// estimate in time anchored one step back, v(x_k, t_{k-1}) + dt *
/// dv/dt(x_k, t_{k-1}), everything else is exact Euler. Rejects multi-step
/// runs of skips.
BoundReport verify_bound(const AnalyticField& field, const TimeGrid& grid,
                         const Eigen::VectorXd& x0, const std::vector<int>& skip_indices);

/// Deterministic isolated-skip layout used by the verification harness:
/// s indices spread over (0, 1), spacing >= 2.
std::vector<int> spread_skip_indices(int steps, int count);

struct RelL1Series {
    std::vector<double> values;  // length T-1
    bool has_zero_denominator = false;  // flagged entries carry +inf
};

/// ||v_k - v_{k+1}||_1 / ||v_{k+1}||_1 along a fully evaluated trajectory.
RelL1Series rel_l1_series(const TrajectoryRecord& traj, const VelocityField& field);

struct RegionSkipStats {
    double t_lo = 0.0;
    double t_hi = 0.0;
    double mean_skip = 0.0;
    long decision_count = 0;
};

/// Mean chosen skip length per time region, over all decisions in the given
/// records. `region_edges` partitions [0, 1], e.g. {0, 0.2, 0.8, 1}.
std::vector<RegionSkipStats> adaptivity_report(const std::vector<TrajectoryRecord>& records,
                                               const std::vector<double>& region_edges);

/// Per-generation model-call counts (adaptivity across prompts).
std::vector<long> eval_count_series(const std::vector<TrajectoryRecord>& records);

struct RunMetrics {
    long eval_count = 0;
    double speedup = 0.0;          // T / eval_count
    double final_deviation = 0.0;  // vs. the reference trajectory
    double mean_skip = 0.0;
    int skipped_count = 0;
};

RunMetrics compute_run_metrics(const TrajectoryRecord& run, const TrajectoryRecord& reference);

}  // namespace fastflow

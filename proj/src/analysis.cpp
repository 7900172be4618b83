#include "fastflow/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fastflow/errors.hpp"
#include "fastflow/fields.hpp"
#include "fastflow/solvers.hpp"
#include "fastflow/time_grid.hpp"

namespace fastflow {

double final_state_bound(int skipped, double curvature_m, double lipschitz_x, int steps) {
    if (steps < 1 || skipped < 0 || skipped > steps || curvature_m < 0.0 || lipschitz_x < 0.0) {
        throw std::invalid_argument("final_state_bound: invalid arguments");
    }
    const double t = static_cast<double>(steps);
    return static_cast<double>(skipped) * curvature_m * std::exp(lipschitz_x) / 2.0 / (t * t * t);
}

double conservative_bound(int skipped, double curvature_m, double lipschitz_x, int steps,
                          int max_skip) {
    if (max_skip < 0) {
        throw std::invalid_argument("conservative_bound: max_skip must be >= 0");
    }
    const double stretch = static_cast<double>(max_skip) + 1.0;
    return final_state_bound(skipped, curvature_m, lipschitz_x, steps) * stretch * stretch * stretch;
}

double final_state_error(const TrajectoryRecord& a, const TrajectoryRecord& b) {
    if (a.times != b.times) {
        throw std::invalid_argument("final_state_error: grids differ");
    }
    if (a.states.front() != b.states.front()) {
        throw std::invalid_argument("final_state_error: start states differ");
    }
    return (a.final_state() - b.final_state()).norm();
}

std::vector<int> spread_skip_indices(int steps, int count) {
    if (count < 0 || count > (steps - 1) / 2) {
        throw std::invalid_argument("spread_skip_indices: cannot isolate " + std::to_string(count) +
                                    " skips in " + std::to_string(steps) + " steps");
    }
    std::vector<int> indices;
    indices.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double fraction = static_cast<double>(i + 1) / static_cast<double>(count + 1);
        int k = static_cast<int>(std::lround(fraction * steps));
        k = std::clamp(k, 1, steps - 1);
        if (!indices.empty() && k <= indices.back() + 1) {
            k = indices.back() + 2;  // keep skips isolated
        }
        if (k > steps - 1) {
            throw std::invalid_argument("spread_skip_indices: layout overflows the horizon");
        }
        indices.push_back(k);
    }
    return indices;
}

BoundReport verify_bound(const AnalyticField& field, const TimeGrid& grid,
                         const Eigen::VectorXd& x0, const std::vector<int>& skip_indices) {
    if (!grid.uniform_spacing()) {
        throw std::invalid_argument("verify_bound: the bound assumes a uniform grid");
    }
    const SmoothnessBounds bounds = field.bounds();
    if (!bounds.known) {
        throw std::invalid_argument("verify_bound: field smoothness constants must be known");
    }
    const int T = grid.steps();
    std::vector<int> skips = skip_indices;
    std::sort(skips.begin(), skips.end());
    for (std::size_t i = 0; i < skips.size(); ++i) {
        if (skips[i] < 1 || skips[i] > T - 1) {
            throw std::invalid_argument("verify_bound: skip index " + std::to_string(skips[i]) +
                                        " outside [1, T-1]");
        }
        if (i > 0 && skips[i] <= skips[i - 1] + 1) {
            throw std::invalid_argument(
                "verify_bound: strict mode requires isolated single-step skips");
        }
    }

    const TrajectoryRecord truth = full_trajectory(field, grid, x0);

    // Approximate trajectory exactly as in the bound's setting: at a skipped
    // index the velocity is the first-order Taylor estimate in time anchored
    // one step back (exact time derivative, same spatial point).
    Eigen::VectorXd x = x0;
    std::size_t next_skip = 0;
    for (int k = 0; k < T; ++k) {
        Eigen::VectorXd v;
        if (next_skip < skips.size() && skips[next_skip] == k) {
            const double t_prev = grid.time(k - 1);
            const double dt = grid.time(k) - t_prev;
            v = field.evaluate(x, t_prev) + dt * field.time_derivative(x, t_prev);
            ++next_skip;
        } else {
            v = field.evaluate(x, grid.time(k));
        }
        x = euler_step(x, v, grid.dt(k));
        if (!x.allFinite()) {
            throw NumericalError("non-finite state at step index " + std::to_string(k + 1));
        }
    }

    BoundReport report;
    report.skipped_count = static_cast<int>(skips.size());
    report.curvature_m = bounds.curvature_m;
    report.lipschitz_x = bounds.lipschitz_x;
    report.steps = T;
    report.bound =
        final_state_bound(report.skipped_count, bounds.curvature_m, bounds.lipschitz_x, T);
    report.empirical_error = (x - truth.final_state()).norm();
    report.satisfied = report.empirical_error <= report.bound * (1.0 + 1e-9);
    return report;
}

RelL1Series rel_l1_series(const TrajectoryRecord& traj, const VelocityField& field) {
    const int T = traj.steps();
    for (int k = 0; k < T; ++k) {
        if (!traj.evaluated[static_cast<std::size_t>(k)]) {
            throw std::invalid_argument("rel_l1_series: trajectory must be fully evaluated");
        }
    }
    std::vector<Eigen::VectorXd> v(static_cast<std::size_t>(T));
    for (int k = 0; k < T; ++k) {
        v[static_cast<std::size_t>(k)] =
            field.evaluate(traj.states[static_cast<std::size_t>(k)], traj.times[static_cast<std::size_t>(k)]);
    }
    RelL1Series series;
    series.values.reserve(static_cast<std::size_t>(T) - 1);
    for (int k = 0; k + 1 < T; ++k) {
        const double denom = v[static_cast<std::size_t>(k) + 1].lpNorm<1>();
        if (denom == 0.0) {
            series.values.push_back(std::numeric_limits<double>::infinity());
            series.has_zero_denominator = true;
        } else {
            series.values.push_back(
                (v[static_cast<std::size_t>(k)] - v[static_cast<std::size_t>(k) + 1]).lpNorm<1>() / denom);
        }
    }
    return series;
}

std::vector<RegionSkipStats> adaptivity_report(const std::vector<TrajectoryRecord>& records,
                                               const std::vector<double>& region_edges) {
    if (region_edges.size() < 2) {
        throw std::invalid_argument("adaptivity_report: need at least one region");
    }
    for (std::size_t i = 1; i < region_edges.size(); ++i) {
        if (!(region_edges[i] > region_edges[i - 1])) {
            throw std::invalid_argument("adaptivity_report: empty region in the partition");
        }
    }
    std::vector<RegionSkipStats> stats(region_edges.size() - 1);
    for (std::size_t r = 0; r + 1 < region_edges.size(); ++r) {
        stats[r].t_lo = region_edges[r];
        stats[r].t_hi = region_edges[r + 1];
    }
    std::vector<double> sums(stats.size(), 0.0);
    for (const auto& rec : records) {
        for (const auto& d : rec.decisions) {
            const double t = rec.times[static_cast<std::size_t>(d.step)];
            for (std::size_t r = 0; r < stats.size(); ++r) {
                const bool last = r + 1 == stats.size();
                if (t >= stats[r].t_lo && (t < stats[r].t_hi || (last && t <= stats[r].t_hi))) {
                    sums[r] += d.arm;
                    ++stats[r].decision_count;
                    break;
                }
            }
        }
    }
    for (std::size_t r = 0; r < stats.size(); ++r) {
        stats[r].mean_skip =
            stats[r].decision_count > 0 ? sums[r] / static_cast<double>(stats[r].decision_count) : 0.0;
    }
    return stats;
}

std::vector<long> eval_count_series(const std::vector<TrajectoryRecord>& records) {
    std::vector<long> series;
    series.reserve(records.size());
    for (const auto& rec : records) {
        series.push_back(rec.eval_count);
    }
    return series;
}

RunMetrics compute_run_metrics(const TrajectoryRecord& run, const TrajectoryRecord& reference) {
    RunMetrics metrics;
    metrics.eval_count = run.eval_count;
    metrics.speedup = static_cast<double>(run.steps()) / static_cast<double>(run.eval_count);
    metrics.final_deviation = (run.final_state() - reference.final_state()).norm();
    metrics.mean_skip = run.mean_skip();
    metrics.skipped_count = run.skipped_count();
    return metrics;
}

}  // namespace fastflow

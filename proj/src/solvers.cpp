#include "fastflow/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fastflow/bandit.hpp"
#include "fastflow/errors.hpp"
#include "fastflow/fields.hpp"
#include "fastflow/time_grid.hpp"

namespace fastflow {

namespace {

void ensure_finite(const Eigen::VectorXd& x, int index) {
    if (!x.allFinite()) {
        throw NumericalError("non-finite state at step index " + std::to_string(index));
    }
}

void ensure_finite_velocity(const Eigen::VectorXd& v, int index) {
    if (!v.allFinite()) {
        throw NumericalError("non-finite velocity at step index " + std::to_string(index));
    }
}

void check_start(const VelocityField& field, const Eigen::VectorXd& x0) {
    if (x0.size() != field.dimension()) {
        throw std::invalid_argument("initial state dimension does not match the field");
    }
    ensure_finite(x0, 0);
}

}  // namespace

Eigen::VectorXd euler_step(const Eigen::VectorXd& x, const Eigen::VectorXd& v, double dt) {
    if (x.size() != v.size()) {
        throw std::invalid_argument("euler_step: dimension mismatch");
    }
    if (!(dt > 0.0)) {
        throw std::invalid_argument("euler_step: dt must be positive");
    }
    if (!x.allFinite() || !v.allFinite()) {
        throw NumericalError("euler_step: non-finite input");
    }
    return x + dt * v;
}

Eigen::VectorXd extrapolate_velocity(const Eigen::VectorXd& v_k, const Eigen::VectorXd& v_p,
                                     double t_k, double t_p, double dt) {
    if (v_k.size() != v_p.size()) {
        throw std::invalid_argument("extrapolate_velocity: dimension mismatch");
    }
    if (t_k == t_p) {
        throw std::invalid_argument("extrapolate_velocity: anchor times coincide");
    }
    if (dt == 0.0) {
        return v_k;
    }
    return v_k + (dt / (t_k - t_p)) * (v_k - v_p);
}

TrajectoryRecord full_trajectory(const VelocityField& field, const TimeGrid& grid,
                                 const Eigen::VectorXd& x0) {
    check_start(field, x0);
    const int T = grid.steps();
    TrajectoryRecord rec;
    rec.times = grid.times();
    rec.states.resize(static_cast<std::size_t>(T) + 1);
    rec.evaluated.assign(static_cast<std::size_t>(T) + 1, false);
    rec.states[0] = x0;
    for (int k = 0; k < T; ++k) {
        const Eigen::VectorXd v = field.evaluate(rec.states[static_cast<std::size_t>(k)], grid.time(k));
        ensure_finite_velocity(v, k);
        rec.evaluated[static_cast<std::size_t>(k)] = true;
        ++rec.eval_count;
        rec.states[static_cast<std::size_t>(k) + 1] =
            euler_step(rec.states[static_cast<std::size_t>(k)], v, grid.dt(k));
        ensure_finite(rec.states[static_cast<std::size_t>(k) + 1], k + 1);
    }
    return rec;
}

// --- FastFlow ------------------------------------------------------------------

void FastFlowConfig::validate() const {
    if (!(mu > 0.0)) {
        throw std::invalid_argument("FastFlowConfig: mu must be positive");
    }
    if (!(gamma > 0.0)) {
        throw std::invalid_argument("FastFlowConfig: gamma must be positive");
    }
    if (arms.empty() || arms.front() != 0) {
        throw std::invalid_argument("FastFlowConfig: arm set must contain 0");
    }
    for (std::size_t i = 1; i < arms.size(); ++i) {
        if (arms[i] <= arms[i - 1]) {
            throw std::invalid_argument("FastFlowConfig: arms must be strictly increasing");
        }
    }
}

std::vector<int> FastFlowConfig::arm_set_for_step(int k, int steps) const {
    std::vector<int> clipped;
    for (const int a : arms) {
        if (k + a + 1 <= steps) {
            clipped.push_back(a);
        }
    }
    return clipped;
}

TrajectoryRecord fastflow_generate(const VelocityField& field, const TimeGrid& grid,
                                   const Eigen::VectorXd& x0, const FastFlowConfig& config,
                                   BanditRegistry& registry) {
    config.validate();
    if (registry.gamma() != config.gamma) {
        throw std::invalid_argument("fastflow_generate: registry gamma differs from config gamma");
    }
    check_start(field, x0);
    const int T = grid.steps();
    const long generation = registry.begin_generation();

    TrajectoryRecord rec;
    rec.times = grid.times();
    rec.states.resize(static_cast<std::size_t>(T) + 1);
    rec.evaluated.assign(static_cast<std::size_t>(T) + 1, false);
    rec.states[0] = x0;

    auto eval_at = [&](int index) {
        Eigen::VectorXd v =
            field.evaluate(rec.states[static_cast<std::size_t>(index)], grid.time(index));
        ensure_finite_velocity(v, index);
        rec.evaluated[static_cast<std::size_t>(index)] = true;
        ++rec.eval_count;
        return v;
    };

    Eigen::VectorXd v_k = eval_at(0);
    rec.states[1] = euler_step(rec.states[0], v_k, grid.dt(0));
    ensure_finite(rec.states[1], 1);
    if (T == 1) {
        return rec;
    }
    Eigen::VectorXd v_p = std::move(v_k);
    v_k = eval_at(1);
    int k = 1;
    int p = 0;

    while (k <= T - 1) {
        const int m = registry.choose(k, config.arm_set_for_step(k, T));
        const double t_k = grid.time(k);
        const double t_p = grid.time(p);

        // Advance through the skipped indices. Extrapolated mode sub-steps
        // with the left-endpoint velocity estimate, the regime the final-state
        // bound analyzes; plain mode reuses the anchor velocity in one stride
        // per index, which is the form with the closed multistep landing.
        for (int j = 1; j <= m; ++j) {
            Eigen::VectorXd v_stride;
            double target = 0.0;
            if (config.jump == JumpMode::kExtrapolated) {
                target = grid.time(k + j - 1);
                v_stride = extrapolate_velocity(v_k, v_p, t_k, t_p, target - t_k);
                ensure_finite_velocity(v_stride, k + j - 1);
                rec.states[static_cast<std::size_t>(k + j)] = euler_step(
                    rec.states[static_cast<std::size_t>(k + j - 1)], v_stride, grid.dt(k + j - 1));
            } else {
                target = t_k;
                v_stride = v_k;
                rec.states[static_cast<std::size_t>(k + j)] = euler_step(
                    rec.states[static_cast<std::size_t>(k)], v_stride, grid.time(k + j) - t_k);
            }
            ensure_finite(rec.states[static_cast<std::size_t>(k + j)], k + j);
            rec.extrapolations.push_back({k + j, k, p, target, std::move(v_stride)});
        }

        // Euler step landing at k+m+1; dt semantics decide the estimate.
        const double dt_step = config.delta_t == DeltaTSemantics::kAnchorOffset
                                   ? grid.time(k + m) - t_k
                                   : grid.time(k + m + 1) - grid.time(k + m);
        Eigen::VectorXd v_hat = extrapolate_velocity(v_k, v_p, t_k, t_p, dt_step);
        rec.states[static_cast<std::size_t>(k + m + 1)] =
            euler_step(rec.states[static_cast<std::size_t>(k + m)], v_hat, grid.dt(k + m));
        ensure_finite(rec.states[static_cast<std::size_t>(k + m + 1)], k + m + 1);
        rec.extrapolations.push_back({k + m, k, p, t_k + dt_step, v_hat});

        // Model call at the landing index; index T is evaluated purely for
        // the reward feedback and is counted like any other call.
        Eigen::VectorXd v_new = eval_at(k + m + 1);

        // The penalty contrasts the velocity estimate actually used for the
        // landing Euler step with the fresh model velocity there, so it
        // measures the drift the approximation injected into the trajectory.
        const auto [reward, loss] = compute_reward({config.mu}, m, v_hat, v_new);
        registry.update(generation, k, m, reward, loss);
        rec.decisions.push_back({k, m, reward, loss});

        p = k;
        k = k + m + 1;
        v_p = std::move(v_k);
        v_k = std::move(v_new);
    }
    return rec;
}

long initialize_registry(BanditRegistry& registry, const VelocityField& field,
                         const TimeGrid& grid, const Eigen::VectorXd& x0,
                         const FastFlowConfig& config) {
    config.validate();
    // Each generation plays one arm per visited agent, so the visited set
    // completes within |arms| * T generations; the cap guards a logic bug.
    const long cap = static_cast<long>(config.arms.size()) * grid.steps() + 8;
    long generations = 0;
    do {
        fastflow_generate(field, grid, x0, config, registry);
        ++generations;
    } while (!registry.fully_initialized() && generations < cap);
    if (!registry.fully_initialized()) {
        throw std::logic_error("initialize_registry: warm-up did not complete");
    }
    return generations;
}

// --- static baselines ------------------------------------------------------------

TrajectoryRecord fixed_skip_generate(const VelocityField& field, const TimeGrid& grid,
                                     const Eigen::VectorXd& x0, int skip_every) {
    if (skip_every < 1) {
        throw std::invalid_argument("fixed_skip_generate: skip_every must be >= 1");
    }
    check_start(field, x0);
    const int T = grid.steps();
    TrajectoryRecord rec;
    rec.times = grid.times();
    rec.states.resize(static_cast<std::size_t>(T) + 1);
    rec.evaluated.assign(static_cast<std::size_t>(T) + 1, false);
    rec.states[0] = x0;

    Eigen::VectorXd v_last;
    Eigen::VectorXd v_prev;
    int last = -1;
    int prev = -1;
    for (int i = 0; i < T; ++i) {
        Eigen::VectorXd v_used;
        if (i <= 1 || i % skip_every == 0) {
            v_used = field.evaluate(rec.states[static_cast<std::size_t>(i)], grid.time(i));
            rec.evaluated[static_cast<std::size_t>(i)] = true;
            ++rec.eval_count;
            prev = last;
            v_prev = std::move(v_last);
            last = i;
            v_last = v_used;
        } else {
            v_used = extrapolate_velocity(v_last, v_prev, grid.time(last), grid.time(prev),
                                          grid.time(i) - grid.time(last));
            rec.extrapolations.push_back({i, last, prev, grid.time(i), v_used});
        }
        ensure_finite_velocity(v_used, i);
        rec.states[static_cast<std::size_t>(i) + 1] =
            euler_step(rec.states[static_cast<std::size_t>(i)], v_used, grid.dt(i));
        ensure_finite(rec.states[static_cast<std::size_t>(i) + 1], i + 1);
    }
    return rec;
}

TrajectoryRecord reuse_velocity_generate(const VelocityField& field, const TimeGrid& grid,
                                         const Eigen::VectorXd& x0, double rel_l1_threshold) {
    if (rel_l1_threshold < 0.0) {
        throw std::invalid_argument("reuse_velocity_generate: threshold must be nonnegative");
    }
    check_start(field, x0);
    const int T = grid.steps();
    TrajectoryRecord rec;
    rec.times = grid.times();
    rec.states.resize(static_cast<std::size_t>(T) + 1);
    rec.evaluated.assign(static_cast<std::size_t>(T) + 1, false);
    rec.states[0] = x0;

    Eigen::VectorXd v_last;
    Eigen::VectorXd v_prev;
    int last = -1;
    int prev = -1;
    double accumulated = 0.0;
    for (int i = 0; i < T; ++i) {
        bool reuse = false;
        if (i >= 2) {
            const double denom = v_last.lpNorm<1>();
            const double change = (v_last - v_prev).lpNorm<1>();
            const double estimate =
                denom > 0.0 ? change / denom
                            : (change == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
            accumulated += estimate;
            reuse = accumulated < rel_l1_threshold;
        }
        Eigen::VectorXd v_used;
        if (reuse) {
            v_used = v_last;
            rec.extrapolations.push_back({i, last, prev, grid.time(last), v_used});
        } else {
            v_used = field.evaluate(rec.states[static_cast<std::size_t>(i)], grid.time(i));
            rec.evaluated[static_cast<std::size_t>(i)] = true;
            ++rec.eval_count;
            prev = last;
            v_prev = std::move(v_last);
            last = i;
            v_last = v_used;
            accumulated = 0.0;
        }
        ensure_finite_velocity(v_used, i);
        rec.states[static_cast<std::size_t>(i) + 1] =
            euler_step(rec.states[static_cast<std::size_t>(i)], v_used, grid.dt(i));
        ensure_finite(rec.states[static_cast<std::size_t>(i) + 1], i + 1);
    }
    return rec;
}

// --- linear multistep form ---------------------------------------------------

Eigen::VectorXd lms_jump(const Eigen::VectorXd& x_k, const Eigen::VectorXd& v_k,
                         const Eigen::VectorXd& v_km1, double h, int m) {
    if (x_k.size() != v_k.size() || v_k.size() != v_km1.size()) {
        throw std::invalid_argument("lms_jump: dimension mismatch");
    }
    if (!(h > 0.0) || m < 0) {
        throw std::invalid_argument("lms_jump: need h > 0 and m >= 0");
    }
    const double md = static_cast<double>(m);
    return x_k + h * ((2.0 * md + 1.0) * v_k - md * v_km1);
}

double local_truncation_error_coeff(int m, double h) {
    if (m < 0 || !(h > 0.0)) {
        throw std::invalid_argument("local_truncation_error_coeff: need m >= 0 and h > 0");
    }
    const double md = static_cast<double>(m);
    return (md * md + 1.0) / (2.0 * (md + 1.0)) * h * h;
}

TrajectoryRecord lms_generate(const VelocityField& field, const TimeGrid& grid,
                              const Eigen::VectorXd& x0, int skip_length) {
    if (skip_length < 0) {
        throw std::invalid_argument("lms_generate: skip length must be >= 0");
    }
    if (!grid.uniform_spacing()) {
        throw std::invalid_argument("lms_generate: uniform grids only");
    }
    check_start(field, x0);
    const int T = grid.steps();
    TrajectoryRecord rec;
    rec.times = grid.times();
    rec.states.resize(static_cast<std::size_t>(T) + 1);
    rec.evaluated.assign(static_cast<std::size_t>(T) + 1, false);
    rec.states[0] = x0;

    auto eval_at = [&](int index) {
        Eigen::VectorXd v =
            field.evaluate(rec.states[static_cast<std::size_t>(index)], grid.time(index));
        ensure_finite_velocity(v, index);
        rec.evaluated[static_cast<std::size_t>(index)] = true;
        ++rec.eval_count;
        return v;
    };

    Eigen::VectorXd v_k = eval_at(0);
    rec.states[1] = euler_step(rec.states[0], v_k, grid.dt(0));
    ensure_finite(rec.states[1], 1);
    if (T == 1) {
        return rec;
    }
    Eigen::VectorXd v_p = std::move(v_k);
    v_k = eval_at(1);
    int k = 1;
    int p = 0;

    while (k <= T - 1) {
        const int m = std::min(skip_length, T - 1 - k);
        const double t_k = grid.time(k);
        for (int j = 1; j <= m; ++j) {
            rec.states[static_cast<std::size_t>(k + j)] =
                euler_step(rec.states[static_cast<std::size_t>(k)], v_k, grid.time(k + j) - t_k);
            ensure_finite(rec.states[static_cast<std::size_t>(k + j)], k + j);
            rec.extrapolations.push_back({k + j, k, p, t_k, v_k});
        }
        Eigen::VectorXd v_hat =
            extrapolate_velocity(v_k, v_p, t_k, grid.time(p), grid.time(k + m) - t_k);
        rec.states[static_cast<std::size_t>(k + m + 1)] =
            euler_step(rec.states[static_cast<std::size_t>(k + m)], v_hat, grid.dt(k + m));
        ensure_finite(rec.states[static_cast<std::size_t>(k + m + 1)], k + m + 1);
        rec.extrapolations.push_back({k + m, k, p, grid.time(k + m), std::move(v_hat)});

        const int next = k + m + 1;
        if (next > T - 1) {
            break;  // terminal state reached; no anchor needed at t = 1
        }
        Eigen::VectorXd v_new = eval_at(next);
        p = k;
        k = next;
        v_p = std::move(v_k);
        v_k = std::move(v_new);
    }
    return rec;
}

}  // namespace fastflow

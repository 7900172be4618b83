#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

namespace fastflow {

class VelocityField;
class TimeGrid;

/// Mean squared error over coordinates; the discrepancy measure used in
/// rewards and mu calibration.
double mse(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Reward trade-off defaults when calibration is disabled: generation-like
/// runs use 0.001, editing-like runs 0.005.
inline constexpr double kDefaultMuGeneration = 0.001;
inline constexpr double kDefaultMuEditing = 0.005;

struct RewardParams {
    double mu = kDefaultMuGeneration;
};

/// r = mu * alpha - l(v_hat, v_true) with l = MSE. Returns (reward, loss).
std::pair<double, double> compute_reward(const RewardParams& params, int alpha,
                                         const Eigen::VectorXd& v_hat,
                                         const Eigen::VectorXd& v_true);

/// Arm maximizing the true mean reward mu * alpha - loss[alpha]; ties go to
/// the smaller skip length. Input arms must be sorted ascending.
int best_arm_for_mu(const std::vector<int>& arms, const std::vector<double>& losses, double mu);

/// One UCB agent: arm values are skip lengths, Q the running mean reward per
/// arm, N the pull counts, n the total pulls. Selection requires every arm
/// pulled at least once; forced round-robin plays cover initialization.
class UcbAgent {
public:
    UcbAgent(std::vector<int> arms, double gamma);

    bool initialized() const;
    /// First arm (ascending order) that has never been pulled.
    int next_forced_arm() const;
    /// argmax Q(a) + gamma * sqrt(ln n / N(a)); ties break to the smaller
    /// skip length. Throws std::logic_error before initialization completes.
    int select_arm() const;
    void update(int arm, double reward);

    const std::vector<int>& arms() const { return arms_; }
    const std::vector<double>& mean_rewards() const { return q_; }
    const std::vector<long>& pull_counts() const { return n_; }
    long total_pulls() const { return total_; }
    double gamma() const { return gamma_; }

    nlohmann::json to_json() const;
    static UcbAgent from_json(const nlohmann::json& j);

private:
    int arm_index(int arm) const;

    std::vector<int> arms_;
    std::vector<double> q_;
    std::vector<long> n_;
    long total_ = 0;
    double gamma_ = 2.0;
};

/// One agent per timestep index, created lazily and persisting across
/// generations. Single-writer: concurrent generations must clone or
/// serialize. Serializes as "banditreg-v1" plus a JSON-lines reward log.
class BanditRegistry {
public:
    struct LogEntry {
        long generation = 0;
        int step = 0;
        int arm = 0;
        double reward = 0.0;
        double loss = 0.0;
    };

    explicit BanditRegistry(double gamma = 2.0) : gamma_(gamma) {}

    /// Agent at a timestep index; created with `arms_if_new` on first visit.
    /// An existing agent's arm set is immutable; a conflicting arm set throws.
    UcbAgent& agent(int step, const std::vector<int>& arms_if_new);
    const UcbAgent* find(int step) const;
    const std::map<int, UcbAgent>& agents() const { return agents_; }

    /// True when every existing agent has all arms pulled at least once.
    bool fully_initialized() const;

    long begin_generation() { return generations_++; }
    long generations() const { return generations_; }
    double gamma() const { return gamma_; }

    /// Chooses an arm: forced round-robin while the agent has unplayed arms,
    /// UCB afterwards.
    int choose(int step, const std::vector<int>& arms_if_new);

    /// Pushes the reward into the agent and appends to the reward log.
    void update(long generation, int step, int arm, double reward, double loss);

    const std::vector<LogEntry>& log() const { return log_; }

    nlohmann::json to_json() const;
    static BanditRegistry from_json(const nlohmann::json& j);

    /// Writes registry state and appends this session's log entries.
    void save(const std::string& json_path, const std::string& log_path) const;
    static BanditRegistry load(const std::string& json_path);

    /// Rebuilds agent statistics from a reward log alone; (Q, N, n) is a pure
    /// function of the log.
    static BanditRegistry replay(double gamma, const std::map<int, std::vector<int>>& arm_sets,
                                 const std::vector<LogEntry>& log);

private:
    double gamma_ = 2.0;
    long generations_ = 0;
    std::map<int, UcbAgent> agents_;
    std::vector<LogEntry> log_;
};

// ---------------------------------------------------------------------------
// Calibration and analytics
// ---------------------------------------------------------------------------

struct MuCalibration {
    double mu = 0.0;
    double max_mse = 0.0;
    bool clamped = false;  // affine-in-time fields extrapolate exactly; mu is floored
    long eval_count = 0;   // model calls spent on the calibration pass
};

/// mu = max_t MSE(v_hat_t, v_t) / T, where v_hat_t is the one-step
/// extrapolation from the two preceding velocities of one full pass.
/// Floored at 1e-9 when the raw maximum vanishes.
MuCalibration calibrate_mu(const VelocityField& field, const TimeGrid& grid,
                           const Eigen::VectorXd& x0);

/// Cumulative pseudo-regret sum_j (mu* - mu_{a_j}) given true per-arm means.
std::vector<double> cumulative_regret(const std::vector<int>& chosen,
                                      const std::vector<double>& true_means);

/// Closed-form expected total skipping steps under UCB after n rounds:
/// E_s = n * i_star + sum_{i != i_star} (4 ln n / gap_i^2) (i - i_star).
/// Arm i contributes i skips; gap_i must be 0 at i_star and positive elsewhere.
double expected_skips(const std::vector<double>& gaps, int optimal_index, double n);

/// Stationary synthetic instance with Bernoulli(mean) rewards per arm; arm i
/// stands for skip length i.
struct SyntheticBandit {
    std::vector<double> means;
};

struct UcbRunResult {
    std::vector<int> chosen;
    std::vector<double> regret;  // cumulative, one entry per round
    std::vector<long> pulls;
    double total_skips = 0.0;  // sum of chosen arm indices
};

UcbRunResult run_ucb_on_synthetic(const SyntheticBandit& instance, long rounds, double gamma,
                                  std::uint64_t seed);

}  // namespace fastflow

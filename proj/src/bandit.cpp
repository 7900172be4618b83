#include "fastflow/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "fastflow/errors.hpp"
#include "fastflow/fields.hpp"
#include "fastflow/rng.hpp"
#include "fastflow/solvers.hpp"
#include "fastflow/time_grid.hpp"

namespace fastflow {

double mse(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("mse: dimension mismatch");
    }
    return (a - b).squaredNorm() / static_cast<double>(a.size());
}

std::pair<double, double> compute_reward(const RewardParams& params, int alpha,
                                         const Eigen::VectorXd& v_hat,
                                         const Eigen::VectorXd& v_true) {
    const double loss = mse(v_hat, v_true);
    return {params.mu * static_cast<double>(alpha) - loss, loss};
}

int best_arm_for_mu(const std::vector<int>& arms, const std::vector<double>& losses, double mu) {
    if (arms.empty() || arms.size() != losses.size()) {
        throw std::invalid_argument("best_arm_for_mu: arms and losses must match and be nonempty");
    }
    int best = arms[0];
    double best_value = mu * arms[0] - losses[0];
    for (std::size_t i = 1; i < arms.size(); ++i) {
        const double value = mu * arms[i] - losses[i];
        if (value > best_value) {  // ties keep the earlier (smaller) arm
            best_value = value;
            best = arms[i];
        }
    }
    return best;
}

// --- UcbAgent ----------------------------------------------------------------

UcbAgent::UcbAgent(std::vector<int> arms, double gamma) : arms_(std::move(arms)), gamma_(gamma) {
    if (arms_.empty()) {
        throw std::invalid_argument("UcbAgent: empty arm set");
    }
    for (std::size_t i = 0; i < arms_.size(); ++i) {
        if (arms_[i] < 0) {
            throw std::invalid_argument("UcbAgent: arms must be nonnegative");
        }
        if (i > 0 && arms_[i] <= arms_[i - 1]) {
            throw std::invalid_argument("UcbAgent: arms must be strictly increasing");
        }
    }
    q_.assign(arms_.size(), 0.0);
    n_.assign(arms_.size(), 0);
}

bool UcbAgent::initialized() const {
    return std::all_of(n_.begin(), n_.end(), [](long c) { return c >= 1; });
}

int UcbAgent::next_forced_arm() const {
    for (std::size_t i = 0; i < arms_.size(); ++i) {
        if (n_[i] == 0) {
            return arms_[i];
        }
    }
    throw std::logic_error("UcbAgent: no unplayed arm left");
}

int UcbAgent::select_arm() const {
    if (!initialized()) {
        throw std::logic_error("UcbAgent: select_arm before every arm was played");
    }
    const double log_n = std::log(static_cast<double>(total_));
    int best = arms_[0];
    double best_score = q_[0] + gamma_ * std::sqrt(log_n / static_cast<double>(n_[0]));
    for (std::size_t i = 1; i < arms_.size(); ++i) {
        const double score = q_[i] + gamma_ * std::sqrt(log_n / static_cast<double>(n_[i]));
        if (score > best_score) {  // ties keep the smaller skip length
            best_score = score;
            best = arms_[i];
        }
    }
    return best;
}

void UcbAgent::update(int arm, double reward) {
    const int i = arm_index(arm);
    q_[static_cast<std::size_t>(i)] +=
        (reward - q_[static_cast<std::size_t>(i)]) / static_cast<double>(n_[static_cast<std::size_t>(i)] + 1);
    ++n_[static_cast<std::size_t>(i)];
    ++total_;
}

int UcbAgent::arm_index(int arm) const {
    const auto it = std::lower_bound(arms_.begin(), arms_.end(), arm);
    if (it == arms_.end() || *it != arm) {
        throw std::invalid_argument("UcbAgent: unknown arm " + std::to_string(arm));
    }
    return static_cast<int>(it - arms_.begin());
}

nlohmann::json UcbAgent::to_json() const {
    return {{"arms", arms_}, {"q", q_}, {"n", n_}, {"total", total_}, {"gamma", gamma_}};
}

UcbAgent UcbAgent::from_json(const nlohmann::json& j) {
    UcbAgent agent(j.at("arms").get<std::vector<int>>(), j.at("gamma").get<double>());
    agent.q_ = j.at("q").get<std::vector<double>>();
    agent.n_ = j.at("n").get<std::vector<long>>();
    agent.total_ = j.at("total").get<long>();
    if (agent.q_.size() != agent.arms_.size() || agent.n_.size() != agent.arms_.size()) {
        throw ConfigError("UcbAgent: inconsistent serialized state");
    }
    return agent;
}

// --- BanditRegistry ----------------------------------------------------------

UcbAgent& BanditRegistry::agent(int step, const std::vector<int>& arms_if_new) {
    auto it = agents_.find(step);
    if (it == agents_.end()) {
        it = agents_.emplace(step, UcbAgent(arms_if_new, gamma_)).first;
    } else if (it->second.arms() != arms_if_new) {
        throw std::invalid_argument("BanditRegistry: arm set mismatch for step " +
                                    std::to_string(step));
    }
    return it->second;
}

const UcbAgent* BanditRegistry::find(int step) const {
    const auto it = agents_.find(step);
    return it == agents_.end() ? nullptr : &it->second;
}

bool BanditRegistry::fully_initialized() const {
    return std::all_of(agents_.begin(), agents_.end(),
                       [](const auto& kv) { return kv.second.initialized(); });
}

int BanditRegistry::choose(int step, const std::vector<int>& arms_if_new) {
    UcbAgent& a = agent(step, arms_if_new);
    return a.initialized() ? a.select_arm() : a.next_forced_arm();
}

void BanditRegistry::update(long generation, int step, int arm, double reward, double loss) {
    auto it = agents_.find(step);
    if (it == agents_.end()) {
        throw std::logic_error("BanditRegistry: update for unknown step " + std::to_string(step));
    }
    it->second.update(arm, reward);
    log_.push_back({generation, step, arm, reward, loss});
}

nlohmann::json BanditRegistry::to_json() const {
    nlohmann::json agents_json = nlohmann::json::object();
    for (const auto& [step, agent] : agents_) {
        agents_json[std::to_string(step)] = agent.to_json();
    }
    return {{"format", "banditreg-v1"},
            {"gamma", gamma_},
            {"generations", generations_},
            {"agents", std::move(agents_json)}};
}

BanditRegistry BanditRegistry::from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "banditreg-v1") {
        throw ConfigError("bandit registry: expected format banditreg-v1");
    }
    BanditRegistry reg(j.at("gamma").get<double>());
    reg.generations_ = j.at("generations").get<long>();
    for (const auto& [key, value] : j.at("agents").items()) {
        reg.agents_.emplace(std::stoi(key), UcbAgent::from_json(value));
    }
    return reg;
}

void BanditRegistry::save(const std::string& json_path, const std::string& log_path) const {
    {
        std::ofstream out(json_path);
        if (!out) {
            throw ConfigError("cannot write bandit registry to " + json_path);
        }
        out << to_json().dump(2) << "\n";
    }
    std::ofstream log_out(log_path, std::ios::app);  // append-only contract
    if (!log_out) {
        throw ConfigError("cannot write bandit reward log to " + log_path);
    }
    for (const auto& e : log_) {
        nlohmann::json line = {{"generation", e.generation},
                               {"step", e.step},
                               {"arm", e.arm},
                               {"reward", e.reward},
                               {"loss", e.loss}};
        log_out << line.dump() << "\n";
    }
}

BanditRegistry BanditRegistry::load(const std::string& json_path) {
    std::ifstream in(json_path);
    if (!in) {
        throw ConfigError("cannot read bandit registry from " + json_path);
    }
    nlohmann::json j;
    in >> j;
    return from_json(j);
}

BanditRegistry BanditRegistry::replay(double gamma, const std::map<int, std::vector<int>>& arm_sets,
                                      const std::vector<LogEntry>& log) {
    BanditRegistry reg(gamma);
    for (const auto& [step, arms] : arm_sets) {
        reg.agent(step, arms);
    }
    long max_generation = -1;
    for (const auto& e : log) {
        auto it = reg.agents_.find(e.step);
        if (it == reg.agents_.end()) {
            throw std::invalid_argument("replay: log entry for unknown step " +
                                        std::to_string(e.step));
        }
        it->second.update(e.arm, e.reward);
        reg.log_.push_back(e);
        max_generation = std::max(max_generation, e.generation);
    }
    reg.generations_ = max_generation + 1;
    return reg;
}

// --- calibration and analytics ------------------------------------------------

MuCalibration calibrate_mu(const VelocityField& field, const TimeGrid& grid,
                           const Eigen::VectorXd& x0) {
    const TrajectoryRecord full = full_trajectory(field, grid, x0);
    const int T = grid.steps();
    std::vector<Eigen::VectorXd> v(static_cast<std::size_t>(T));
    for (int k = 0; k < T; ++k) {
        v[static_cast<std::size_t>(k)] = field.evaluate(full.states[static_cast<std::size_t>(k)], grid.time(k));
    }
    MuCalibration cal;
    cal.eval_count = full.eval_count;  // states come from the pass, velocities are recomputed
    for (int k = 2; k < T; ++k) {
        const Eigen::VectorXd v_hat =
            extrapolate_velocity(v[static_cast<std::size_t>(k) - 1], v[static_cast<std::size_t>(k) - 2],
                                 grid.time(k - 1), grid.time(k - 2), grid.time(k) - grid.time(k - 1));
        cal.max_mse = std::max(cal.max_mse, mse(v_hat, v[static_cast<std::size_t>(k)]));
    }
    cal.mu = cal.max_mse / static_cast<double>(T);
    if (cal.mu < 1e-9) {
        cal.mu = 1e-9;
        cal.clamped = true;
    }
    return cal;
}

std::vector<double> cumulative_regret(const std::vector<int>& chosen,
                                      const std::vector<double>& true_means) {
    if (true_means.empty()) {
        throw std::invalid_argument("cumulative_regret: no arm means");
    }
    const double best = *std::max_element(true_means.begin(), true_means.end());
    std::vector<double> regret;
    regret.reserve(chosen.size());
    double total = 0.0;
    for (const int arm : chosen) {
        if (arm < 0 || arm >= static_cast<int>(true_means.size())) {
            throw std::invalid_argument("cumulative_regret: arm out of range");
        }
        total += best - true_means[static_cast<std::size_t>(arm)];
        regret.push_back(total);
    }
    return regret;
}

double expected_skips(const std::vector<double>& gaps, int optimal_index, double n) {
    if (optimal_index < 0 || optimal_index >= static_cast<int>(gaps.size())) {
        throw std::invalid_argument("expected_skips: optimal index out of range");
    }
    if (gaps[static_cast<std::size_t>(optimal_index)] != 0.0) {
        throw std::invalid_argument("expected_skips: optimal arm must have zero gap");
    }
    double total = n * static_cast<double>(optimal_index);
    for (int i = 0; i < static_cast<int>(gaps.size()); ++i) {
        if (i == optimal_index) {
            continue;
        }
        const double gap = gaps[static_cast<std::size_t>(i)];
        if (gap <= 0.0) {
            throw std::invalid_argument("expected_skips: suboptimal arm with zero gap");
        }
        total += (4.0 * std::log(n) / (gap * gap)) * static_cast<double>(i - optimal_index);
    }
    return total;
}

UcbRunResult run_ucb_on_synthetic(const SyntheticBandit& instance, long rounds, double gamma,
                                  std::uint64_t seed) {
    const int k = static_cast<int>(instance.means.size());
    if (k < 1 || rounds < 1) {
        throw std::invalid_argument("run_ucb_on_synthetic: need >= 1 arm and >= 1 round");
    }
    std::vector<int> arms(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        arms[static_cast<std::size_t>(i)] = i;
    }
    UcbAgent agent(arms, gamma);
    Rng rng(seed);
    const double best = *std::max_element(instance.means.begin(), instance.means.end());

    UcbRunResult result;
    result.chosen.reserve(static_cast<std::size_t>(rounds));
    result.regret.reserve(static_cast<std::size_t>(rounds));
    double total_regret = 0.0;
    for (long round = 0; round < rounds; ++round) {
        const int arm = agent.initialized() ? agent.select_arm() : agent.next_forced_arm();
        const double p = instance.means[static_cast<std::size_t>(arm)];
        const double reward = rng.uniform() < p ? 1.0 : 0.0;
        agent.update(arm, reward);
        result.chosen.push_back(arm);
        result.total_skips += static_cast<double>(arm);
        total_regret += best - p;
        result.regret.push_back(total_regret);
    }
    result.pulls = agent.pull_counts();
    return result;
}

}  // namespace fastflow

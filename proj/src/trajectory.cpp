#include "fastflow/trajectory.hpp"

namespace fastflow {

namespace {

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        arr.push_back(v[i]);
    }
    return arr;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& arr) {
    Eigen::VectorXd v(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
    }
    return v;
}

}  // namespace

int TrajectoryRecord::skipped_count() const {
    int skipped = 0;
    for (int k = 0; k < steps(); ++k) {
        if (!evaluated[static_cast<std::size_t>(k)]) {
            ++skipped;
        }
    }
    return skipped;
}

double TrajectoryRecord::mean_skip() const {
    if (decisions.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (const auto& d : decisions) {
        sum += d.arm;
    }
    return sum / static_cast<double>(decisions.size());
}

nlohmann::json TrajectoryRecord::to_json() const {
    nlohmann::json j;
    j["times"] = times;
    nlohmann::json states_json = nlohmann::json::array();
    for (const auto& x : states) {
        states_json.push_back(vector_to_json(x));
    }
    j["states"] = std::move(states_json);
    j["evaluated"] = evaluated;
    nlohmann::json decisions_json = nlohmann::json::array();
    for (const auto& d : decisions) {
        decisions_json.push_back({{"step", d.step}, {"arm", d.arm}, {"reward", d.reward}, {"loss", d.loss}});
    }
    j["decisions"] = std::move(decisions_json);
    nlohmann::json extrap_json = nlohmann::json::array();
    for (const auto& e : extrapolations) {
        extrap_json.push_back({{"index", e.index},
                               {"anchor_k", e.anchor_k},
                               {"anchor_p", e.anchor_p},
                               {"target_time", e.target_time},
                               {"v_hat", vector_to_json(e.v_hat)}});
    }
    j["extrapolations"] = std::move(extrap_json);
    j["eval_count"] = eval_count;
    j["skipped"] = skipped_count();
    return j;
}

TrajectoryRecord TrajectoryRecord::from_json(const nlohmann::json& j) {
    TrajectoryRecord rec;
    rec.times = j.at("times").get<std::vector<double>>();
    for (const auto& row : j.at("states")) {
        rec.states.push_back(vector_from_json(row));
    }
    rec.evaluated = j.at("evaluated").get<std::vector<bool>>();
    for (const auto& d : j.at("decisions")) {
        rec.decisions.push_back({d.at("step").get<int>(), d.at("arm").get<int>(),
                                 d.at("reward").get<double>(), d.at("loss").get<double>()});
    }
    for (const auto& e : j.at("extrapolations")) {
        rec.extrapolations.push_back({e.at("index").get<int>(), e.at("anchor_k").get<int>(),
                                      e.at("anchor_p").get<int>(), e.at("target_time").get<double>(),
                                      vector_from_json(e.at("v_hat"))});
    }
    rec.eval_count = j.at("eval_count").get<long>();
    return rec;
}

}  // namespace fastflow

#include "fastflow/mlp_field.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "fastflow/errors.hpp"
#include "fastflow/rng.hpp"
#include "fastflow/solvers.hpp"
#include "fastflow/time_grid.hpp"

namespace fastflow {

namespace {

void fill_uniform(Eigen::MatrixXd& w, Rng& rng) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(w.cols()));
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
        for (Eigen::Index c = 0; c < w.cols(); ++c) {
            w(r, c) = rng.uniform(-scale, scale);
        }
    }
}

nlohmann::json layer_to_json(const Eigen::MatrixXd& w, const Eigen::VectorXd& b) {
    std::vector<double> weights;
    weights.reserve(static_cast<std::size_t>(w.size()));
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
        for (Eigen::Index c = 0; c < w.cols(); ++c) {
            weights.push_back(w(r, c));
        }
    }
    return {{"rows", w.rows()},
            {"cols", w.cols()},
            {"weights", std::move(weights)},
            {"bias", std::vector<double>(b.data(), b.data() + b.size())}};
}

void layer_from_json(const nlohmann::json& j, Eigen::MatrixXd& w, Eigen::VectorXd& b) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto weights = j.at("weights").get<std::vector<double>>();
    const auto bias = j.at("bias").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(weights.size()) != rows * cols ||
        static_cast<Eigen::Index>(bias.size()) != rows) {
        throw ConfigError("mlpfield-v1: layer shape does not match its weight arrays");
    }
    w.resize(rows, cols);
    std::size_t i = 0;
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            w(r, c) = weights[i++];
        }
    }
    b = Eigen::Map<const Eigen::VectorXd>(bias.data(), rows);
}

}  // namespace

MlpField::MlpField(int dim, int hidden, std::uint64_t seed) : dim_(dim), hidden_(hidden) {
    if (dim < 1 || hidden < 1) {
        throw std::invalid_argument("MlpField: dim and hidden must be positive");
    }
    Rng rng(seed);
    w1_.resize(hidden, dim + 1);
    w2_.resize(hidden, hidden);
    w3_.resize(dim, hidden);
    fill_uniform(w1_, rng);
    fill_uniform(w2_, rng);
    fill_uniform(w3_, rng);
    b1_ = Eigen::VectorXd::Zero(hidden);
    b2_ = Eigen::VectorXd::Zero(hidden);
    b3_ = Eigen::VectorXd::Zero(dim);
}

Eigen::VectorXd MlpField::evaluate(const Eigen::VectorXd& x, double t) const {
    if (x.size() != dim_) {
        throw std::invalid_argument("MlpField::evaluate: dimension mismatch");
    }
    Eigen::VectorXd z(dim_ + 1);
    z.head(dim_) = x;
    z[dim_] = t;
    const Eigen::VectorXd a1 = (w1_ * z + b1_).array().tanh();
    const Eigen::VectorXd a2 = (w2_ * a1 + b2_).array().tanh();
    return w3_ * a2 + b3_;
}

Eigen::MatrixXd MlpField::forward(const Eigen::MatrixXd& x, const Eigen::VectorXd& t) const {
    if (x.cols() != dim_ || x.rows() != t.size()) {
        throw std::invalid_argument("MlpField::forward: batch shape mismatch");
    }
    Eigen::MatrixXd xa(x.rows(), dim_ + 1);
    xa.leftCols(dim_) = x;
    xa.col(dim_) = t;
    const Eigen::MatrixXd a1 = ((xa * w1_.transpose()).rowwise() + b1_.transpose()).array().tanh();
    const Eigen::MatrixXd a2 = ((a1 * w2_.transpose()).rowwise() + b2_.transpose()).array().tanh();
    return (a2 * w3_.transpose()).rowwise() + b3_.transpose();
}

double MlpField::cfm_loss(const Eigen::MatrixXd& x0, const Eigen::MatrixXd& x1,
                          const Eigen::VectorXd& t) const {
    if (x0.rows() != x1.rows() || x0.cols() != x1.cols() || x0.rows() != t.size()) {
        throw std::invalid_argument("cfm_loss: batch shape mismatch");
    }
    const Eigen::MatrixXd x_t =
        x0.array().colwise() * (1.0 - t.array()) + x1.array().colwise() * t.array();
    const Eigen::MatrixXd u = x1 - x0;
    return (forward(x_t, t) - u).squaredNorm() / static_cast<double>(x0.rows());
}

double MlpField::cfm_loss_and_grad(const Eigen::MatrixXd& x0, const Eigen::MatrixXd& x1,
                                   const Eigen::VectorXd& t, MlpGradients& grad) const {
    if (x0.rows() != x1.rows() || x0.cols() != x1.cols() || x0.rows() != t.size()) {
        throw std::invalid_argument("cfm_loss_and_grad: batch shape mismatch");
    }
    const Eigen::Index n = x0.rows();
    const Eigen::MatrixXd x_t =
        x0.array().colwise() * (1.0 - t.array()) + x1.array().colwise() * t.array();
    const Eigen::MatrixXd u = x1 - x0;

    Eigen::MatrixXd xa(n, dim_ + 1);
    xa.leftCols(dim_) = x_t;
    xa.col(dim_) = t;
    const Eigen::MatrixXd a1 = ((xa * w1_.transpose()).rowwise() + b1_.transpose()).array().tanh();
    const Eigen::MatrixXd a2 = ((a1 * w2_.transpose()).rowwise() + b2_.transpose()).array().tanh();
    const Eigen::MatrixXd out = (a2 * w3_.transpose()).rowwise() + b3_.transpose();

    const Eigen::MatrixXd diff = out - u;
    const double loss = diff.squaredNorm() / static_cast<double>(n);

    const Eigen::MatrixXd g3 = (2.0 / static_cast<double>(n)) * diff;
    grad.w3 = g3.transpose() * a2;
    grad.b3 = g3.colwise().sum().transpose();
    const Eigen::MatrixXd g2 = (g3 * w3_).array() * (1.0 - a2.array().square());
    grad.w2 = g2.transpose() * a1;
    grad.b2 = g2.colwise().sum().transpose();
    const Eigen::MatrixXd g1 = (g2 * w2_).array() * (1.0 - a1.array().square());
    grad.w1 = g1.transpose() * xa;
    grad.b1 = g1.colwise().sum().transpose();
    return loss;
}

void MlpField::apply_sgd(const MlpGradients& grad, double learning_rate) {
    w1_ -= learning_rate * grad.w1;
    b1_ -= learning_rate * grad.b1;
    w2_ -= learning_rate * grad.w2;
    b2_ -= learning_rate * grad.b2;
    w3_ -= learning_rate * grad.w3;
    b3_ -= learning_rate * grad.b3;
}

Eigen::VectorXd MlpField::parameters() const {
    Eigen::VectorXd theta(w1_.size() + b1_.size() + w2_.size() + b2_.size() + w3_.size() +
                          b3_.size());
    Eigen::Index at = 0;
    auto push_matrix = [&](const Eigen::MatrixXd& w) {
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                theta[at++] = w(r, c);
            }
        }
    };
    auto push_vector = [&](const Eigen::VectorXd& b) {
        theta.segment(at, b.size()) = b;
        at += b.size();
    };
    push_matrix(w1_);
    push_vector(b1_);
    push_matrix(w2_);
    push_vector(b2_);
    push_matrix(w3_);
    push_vector(b3_);
    return theta;
}

void MlpField::set_parameters(const Eigen::VectorXd& theta) {
    Eigen::Index at = 0;
    auto pull_matrix = [&](Eigen::MatrixXd& w) {
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                w(r, c) = theta[at++];
            }
        }
    };
    auto pull_vector = [&](Eigen::VectorXd& b) {
        b = theta.segment(at, b.size());
        at += b.size();
    };
    pull_matrix(w1_);
    pull_vector(b1_);
    pull_matrix(w2_);
    pull_vector(b2_);
    pull_matrix(w3_);
    pull_vector(b3_);
    if (at != theta.size()) {
        throw std::invalid_argument("MlpField::set_parameters: wrong parameter count");
    }
}

nlohmann::json MlpField::to_json() const {
    return {{"format", "mlpfield-v1"},
            {"dimension", dim_},
            {"hidden", hidden_},
            {"activation", "tanh"},
            {"layers",
             nlohmann::json::array(
                 {layer_to_json(w1_, b1_), layer_to_json(w2_, b2_), layer_to_json(w3_, b3_)})}};
}

MlpField MlpField::from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "mlpfield-v1") {
        throw ConfigError("model checkpoint: expected format mlpfield-v1");
    }
    MlpField field;
    field.dim_ = j.at("dimension").get<int>();
    field.hidden_ = j.at("hidden").get<int>();
    const auto& layers = j.at("layers");
    if (layers.size() != 3) {
        throw ConfigError("mlpfield-v1: expected exactly three layers");
    }
    layer_from_json(layers[0], field.w1_, field.b1_);
    layer_from_json(layers[1], field.w2_, field.b2_);
    layer_from_json(layers[2], field.w3_, field.b3_);
    if (field.w1_.rows() != field.hidden_ || field.w1_.cols() != field.dim_ + 1 ||
        field.w2_.rows() != field.hidden_ || field.w2_.cols() != field.hidden_ ||
        field.w3_.rows() != field.dim_ || field.w3_.cols() != field.hidden_) {
        throw ConfigError("mlpfield-v1: layer shapes do not match dimension/hidden");
    }
    return field;
}

double cfm_loss(const MlpField& field, const Eigen::MatrixXd& x0, const Eigen::MatrixXd& x1,
                const Eigen::VectorXd& t) {
    return field.cfm_loss(x0, x1, t);
}

void TrainConfig::validate() const {
    if (steps < 0 || batch < 1 || !(learning_rate > 0.0) || hidden < 1) {
        throw std::invalid_argument("TrainConfig: steps >= 0, batch >= 1, lr > 0, hidden >= 1");
    }
}

TrainResult train(const TrainConfig& config, int dim, const BatchSampler& source,
                  const BatchSampler& target) {
    config.validate();
    TrainResult result{MlpField(dim, config.hidden, config.seed), 0.0, 0.0};
    Rng rng(config.seed + 0x9e3779b97f4a7c15ULL);  // batch stream distinct from init stream
    MlpGradients grad;
    for (long step = 0; step < config.steps; ++step) {
        const Eigen::MatrixXd x0 = source(rng, config.batch);
        const Eigen::MatrixXd x1 = target(rng, config.batch);
        if (x0.cols() != dim || x1.cols() != dim) {
            throw std::invalid_argument("train: sampler dimension mismatch");
        }
        Eigen::VectorXd t(config.batch);
        for (int i = 0; i < config.batch; ++i) {
            t[i] = rng.uniform();
        }
        const double loss = result.field.cfm_loss_and_grad(x0, x1, t, grad);
        if (!std::isfinite(loss)) {
            throw NumericalError("training diverged at step " + std::to_string(step) +
                                 ": non-finite loss");
        }
        result.field.apply_sgd(grad, config.learning_rate);
        if (!result.field.parameters().allFinite()) {
            throw NumericalError("training diverged at step " + std::to_string(step) +
                                 ": non-finite parameters");
        }
        if (step == 0) {
            result.initial_loss = loss;
        }
        result.final_loss = loss;
    }
    return result;
}

void save_checkpoint(const MlpField& field, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write checkpoint to " + path);
    }
    out << field.to_json().dump(2) << "\n";
}

MlpField load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read checkpoint from " + path);
    }
    nlohmann::json j;
    in >> j;
    return MlpField::from_json(j);
}

Eigen::MatrixXd generate_samples(const VelocityField& field, const TimeGrid& grid,
                                 std::uint64_t seed, int count) {
    const Eigen::MatrixXd x0 = sample_source(seed, count, field.dimension());
    Eigen::MatrixXd finals(count, field.dimension());
    for (int i = 0; i < count; ++i) {
        const TrajectoryRecord rec = full_trajectory(field, grid, x0.row(i).transpose());
        finals.row(i) = rec.final_state().transpose();
    }
    return finals;
}

}  // namespace fastflow

#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include <Eigen/Core>
#include <json.hpp>

#include "fastflow/fields.hpp"

namespace fastflow {

class Rng;
class TimeGrid;

struct MlpGradients {
    Eigen::MatrixXd w1, w2, w3;
    Eigen::VectorXd b1, b2, b3;
};

/// Two-hidden-layer tanh MLP velocity field. Input is x with the raw time
/// scalar appended; output has the state dimension. Training uses hand-derived
/// gradients and plain SGD; a trained field is immutable and freely shareable.
class MlpField final : public VelocityField {
public:
    /// Weights ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)), biases zero.
    MlpField(int dim, int hidden, std::uint64_t seed);

    int dimension() const override { return dim_; }
    int hidden() const { return hidden_; }

    Eigen::VectorXd evaluate(const Eigen::VectorXd& x, double t) const override;

    /// Batched forward pass; rows are samples.
    Eigen::MatrixXd forward(const Eigen::MatrixXd& x, const Eigen::VectorXd& t) const;

    /// Conditional flow-matching loss on a batch: x_t = (1-t) x0 + t x1,
    /// regression target u = x1 - x0, loss = mean_i ||f(x_t_i, t_i) - u_i||^2.
    double cfm_loss(const Eigen::MatrixXd& x0, const Eigen::MatrixXd& x1,
                    const Eigen::VectorXd& t) const;

    /// Same loss plus parameter gradients (backprop).
    double cfm_loss_and_grad(const Eigen::MatrixXd& x0, const Eigen::MatrixXd& x1,
                             const Eigen::VectorXd& t, MlpGradients& grad) const;

    void apply_sgd(const MlpGradients& grad, double learning_rate);

    /// Flat parameter vector (order: w1, b1, w2, b2, w3, b3, row-major) for
    /// finite-difference gradient checks.
    Eigen::VectorXd parameters() const;
    void set_parameters(const Eigen::VectorXd& theta);

    nlohmann::json to_json() const;  // "mlpfield-v1"
    static MlpField from_json(const nlohmann::json& j);

private:
    MlpField() = default;

    int dim_ = 0;
    int hidden_ = 0;
    Eigen::MatrixXd w1_, w2_, w3_;  // (h x d+1), (h x h), (d x h)
    Eigen::VectorXd b1_, b2_, b3_;
};

double cfm_loss(const MlpField& field, const Eigen::MatrixXd& x0, const Eigen::MatrixXd& x1,
                const Eigen::VectorXd& t);

struct TrainConfig {
    long steps = 2000;
    int batch = 128;
    double learning_rate = 0.05;
    std::uint64_t seed = 1;
    int hidden = 64;

    void validate() const;
};

/// Draws a batch of rows given the run's random stream.
using BatchSampler = std::function<Eigen::MatrixXd(Rng&, int)>;

struct TrainResult {
    MlpField field;
    double initial_loss = 0.0;
    double final_loss = 0.0;
};

/// SGD training loop, bit-reproducible given (config, samplers) on a fixed
/// platform. Throws NumericalError when the loss goes non-finite.
TrainResult train(const TrainConfig& config, int dim, const BatchSampler& source,
                  const BatchSampler& target);

void save_checkpoint(const MlpField& field, const std::string& path);
MlpField load_checkpoint(const std::string& path);

/// Euler-samples `count` source points through the field on the given grid
/// and returns the final states as rows.
Eigen::MatrixXd generate_samples(const VelocityField& field, const TimeGrid& grid,
                                 std::uint64_t seed, int count);

}  // namespace fastflow

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace fastflow {

/// Smoothness constants of a velocity field: spatial Lipschitz constant L_x
/// and a bound M on the norm of the second time-derivative. `known` marks
/// analytic fields where both constants are exact upper bounds.
struct SmoothnessBounds {
    double lipschitz_x = 0.0;
    double curvature_m = 0.0;
    bool known = false;
};

/// Evaluable velocity field v(x, t), x in R^d, t in [0, 1]. Evaluation is
/// deterministic and read-only; instances are safe to share across threads.
class VelocityField {
public:
    virtual ~VelocityField() = default;
    virtual int dimension() const = 0;
    virtual Eigen::VectorXd evaluate(const Eigen::VectorXd& x, double t) const = 0;
};

/// Field with a closed-form time derivative and exact smoothness constants.
class AnalyticField : public VelocityField {
public:
    virtual Eigen::VectorXd time_derivative(const Eigen::VectorXd& x, double t) const = 0;
    virtual SmoothnessBounds bounds() const = 0;
};

/// Ad-hoc field backed by a callable; used for fixtures and tests.
class FunctionField final : public VelocityField {
public:
    using Fn = std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)>;

    FunctionField(int dim, Fn fn) : dim_(dim), fn_(std::move(fn)) {}

    int dimension() const override { return dim_; }
    Eigen::VectorXd evaluate(const Eigen::VectorXd& x, double t) const override { return fn_(x, t); }

private:
    int dim_;
    Fn fn_;
};

/// Wrapper that counts evaluate() calls; the cost proxy for model forward
/// passes. One CountingField per run, single writer: the counter is plain.
class CountingField final : public VelocityField {
public:
    explicit CountingField(std::shared_ptr<const VelocityField> inner,
                           double simulated_latency_per_eval = 0.0)
        : inner_(std::move(inner)), latency_(simulated_latency_per_eval) {}

    int dimension() const override { return inner_->dimension(); }

    Eigen::VectorXd evaluate(const Eigen::VectorXd& x, double t) const override {
        ++eval_count_;
        return inner_->evaluate(x, t);
    }

    long eval_count() const { return eval_count_; }
    double simulated_seconds() const { return latency_ * static_cast<double>(eval_count_); }

private:
    std::shared_ptr<const VelocityField> inner_;
    mutable long eval_count_ = 0;
    double latency_ = 0.0;
};

enum class FieldKind {
    kConstant,          // v(x,t) = c
    kLinearTime,        // v(x,t) = a + b*t
    kSinusoidalTime,    // v(x,t) = A*sin(omega*t) + B
    kThreePhase,        // v(x,t) = sin(8*pi*t) * w(t), w high near t=0 and t=1
    kContractingAffine  // v(x,t) = -lambda*x + A*sin(omega*t)
};

/// Named parameters for an analytic field; scalar values broadcast across
/// the field dimension, vector values must have length d.
using FieldParams = std::map<std::string, std::vector<double>>;

/// Builds one of the analytic fixtures together with its exact smoothness
/// constants. Throws ConfigError for unknown kinds or malformed params.
std::shared_ptr<AnalyticField> make_analytic_field(FieldKind kind, const FieldParams& params,
                                                   int dimension);

FieldKind field_kind_from_string(const std::string& name);
std::string to_string(FieldKind kind);

/// Parses a field id of the form "kind:name=value,name=v1|v2,..." as used in
/// config files, e.g. "sinusoidal_time:A=1,omega=3.14159".
std::shared_ptr<AnalyticField> make_field_from_id(const std::string& id, int dimension);

// ---------------------------------------------------------------------------
// Source / target sampling for toy flow matching
// ---------------------------------------------------------------------------

class Rng;

/// n i.i.d. standard-normal rows; deterministic given seed.
Eigen::MatrixXd sample_source(std::uint64_t seed, int count, int dim);
Eigen::MatrixXd sample_source_rows(Rng& rng, int count, int dim);

enum class TargetDataset { kGaussianMixture, kTwoRings };

TargetDataset target_dataset_from_string(const std::string& name);

/// Uniform choice among the mixture components (rows of `means`), then an
/// isotropic Gaussian perturbation with the given stddev.
Eigen::MatrixXd sample_gaussian_mixture(std::uint64_t seed, int count, const Eigen::MatrixXd& means,
                                        double stddev);
Eigen::MatrixXd sample_gaussian_mixture_rows(Rng& rng, int count, const Eigen::MatrixXd& means,
                                             double stddev);

/// Two circles of the given radius centered at (-1.5r, 0) and (+1.5r, 0),
/// with radial Gaussian noise. 2-D only.
Eigen::MatrixXd sample_two_rings(std::uint64_t seed, int count, double radius, double stddev);
Eigen::MatrixXd sample_two_rings_rows(Rng& rng, int count, double radius, double stddev);

}  // namespace fastflow

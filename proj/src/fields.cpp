#include "fastflow/fields.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "fastflow/errors.hpp"
#include "fastflow/rng.hpp"

namespace fastflow {

namespace {

constexpr double kPi = std::numbers::pi;

// --- parameter plumbing -----------------------------------------------------

void check_param_names(const FieldParams& params, const std::set<std::string>& allowed,
                       const std::string& kind) {
    for (const auto& [name, value] : params) {
        if (!allowed.count(name)) {
            throw ConfigError("field " + kind + ": unknown parameter '" + name + "'");
        }
        if (value.empty()) {
            throw ConfigError("field " + kind + ": parameter '" + name + "' has no value");
        }
    }
}

double scalar_param(const FieldParams& params, const std::string& name, const std::string& kind) {
    auto it = params.find(name);
    if (it == params.end()) {
        throw ConfigError("field " + kind + ": missing parameter '" + name + "'");
    }
    if (it->second.size() != 1) {
        throw ConfigError("field " + kind + ": parameter '" + name + "' must be a scalar");
    }
    return it->second.front();
}

double scalar_param_or(const FieldParams& params, const std::string& name, double fallback) {
    auto it = params.find(name);
    if (it == params.end()) {
        return fallback;
    }
    if (it->second.size() != 1) {
        throw ConfigError("field parameter '" + name + "' must be a scalar");
    }
    return it->second.front();
}

// Scalar values broadcast to all coordinates; otherwise length must equal d.
Eigen::VectorXd vector_param(const FieldParams& params, const std::string& name,
                             const std::string& kind, int dim,
                             const double* fallback = nullptr) {
    auto it = params.find(name);
    if (it == params.end()) {
        if (fallback) {
            return Eigen::VectorXd::Constant(dim, *fallback);
        }
        throw ConfigError("field " + kind + ": missing parameter '" + name + "'");
    }
    const auto& raw = it->second;
    if (raw.size() == 1) {
        return Eigen::VectorXd::Constant(dim, raw.front());
    }
    if (static_cast<int>(raw.size()) != dim) {
        throw ConfigError("field " + kind + ": parameter '" + name + "' has arity " +
                          std::to_string(raw.size()) + ", expected 1 or " + std::to_string(dim));
    }
    return Eigen::Map<const Eigen::VectorXd>(raw.data(), dim);
}

// --- analytic fixtures -------------------------------------------------------

class ConstantField final : public AnalyticField {
public:
    explicit ConstantField(Eigen::VectorXd c) : c_(std::move(c)) {}

    int dimension() const override { return static_cast<int>(c_.size()); }
    Eigen::VectorXd evaluate(const Eigen::VectorXd&, double) const override { return c_; }
    Eigen::VectorXd time_derivative(const Eigen::VectorXd&, double) const override {
        return Eigen::VectorXd::Zero(c_.size());
    }
    SmoothnessBounds bounds() const override { return {0.0, 0.0, true}; }

private:
    Eigen::VectorXd c_;
};

class LinearTimeField final : public AnalyticField {
public:
    LinearTimeField(Eigen::VectorXd a, Eigen::VectorXd b) : a_(std::move(a)), b_(std::move(b)) {}

    int dimension() const override { return static_cast<int>(a_.size()); }
    Eigen::VectorXd evaluate(const Eigen::VectorXd&, double t) const override { return a_ + t * b_; }
    Eigen::VectorXd time_derivative(const Eigen::VectorXd&, double) const override { return b_; }
    SmoothnessBounds bounds() const override { return {0.0, 0.0, true}; }

private:
    Eigen::VectorXd a_;
    Eigen::VectorXd b_;
};

class SinusoidalTimeField final : public AnalyticField {
public:
    SinusoidalTimeField(int dim, double amplitude, double omega, Eigen::VectorXd offset)
        : dim_(dim), amplitude_(amplitude), omega_(omega), offset_(std::move(offset)) {}

    int dimension() const override { return dim_; }

    Eigen::VectorXd evaluate(const Eigen::VectorXd&, double t) const override {
        return Eigen::VectorXd::Constant(dim_, amplitude_ * std::sin(omega_ * t)) + offset_;
    }

    Eigen::VectorXd time_derivative(const Eigen::VectorXd&, double t) const override {
        return Eigen::VectorXd::Constant(dim_, amplitude_ * omega_ * std::cos(omega_ * t));
    }

    // ||d2v/dt2|| = |A| w^2 |sin(w t)| sqrt(d) <= |A| w^2 sqrt(d)
    SmoothnessBounds bounds() const override {
        return {0.0, std::abs(amplitude_) * omega_ * omega_ * std::sqrt(static_cast<double>(dim_)),
                true};
    }

private:
    int dim_;
    double amplitude_;
    double omega_;
    Eigen::VectorXd offset_;
};

// Time profile g(t) = offset + sin(8*pi*t) * w(t) with w(t) = w_lo +
// w_hi*cos^8(pi*t): curvature is high near t = 0 and t = 1 and low in the
// middle, giving regions with provably different local M for adaptivity
// experiments. The offset keeps the velocity norm away from zero so relative
// distances track the absolute variation.
class ThreePhaseField final : public AnalyticField {
public:
    ThreePhaseField(int dim, double w_lo, double w_hi, double offset)
        : dim_(dim), w_lo_(w_lo), w_hi_(w_hi), offset_(offset) {}

    int dimension() const override { return dim_; }

    Eigen::VectorXd evaluate(const Eigen::VectorXd&, double t) const override {
        return Eigen::VectorXd::Constant(dim_, offset_ + profile(t));
    }

    Eigen::VectorXd time_derivative(const Eigen::VectorXd&, double t) const override {
        const double s = std::sin(8.0 * kPi * t);
        const double sp = 8.0 * kPi * std::cos(8.0 * kPi * t);
        const double c = std::cos(kPi * t);
        const double u = weight(t);
        const double up = -8.0 * kPi * w_hi_ * std::pow(c, 7) * std::sin(kPi * t);
        return Eigen::VectorXd::Constant(dim_, sp * u + s * up);
    }

    // Triangle-inequality bound on g'' = s''u + 2 s'u' + s u'' with
    //   |s''| <= 64 pi^2, |s'| <= 8 pi, |u| <= w_lo + w_hi,
    //   |u'| <= 8 pi w_hi, |u''| = 8 pi^2 w_hi |c^8 - 7 c^6 sin^2| <= 12 pi^2 w_hi.
    SmoothnessBounds bounds() const override {
        const double per_coord = kPi * kPi * (64.0 * w_lo_ + 204.0 * w_hi_);
        return {0.0, per_coord * std::sqrt(static_cast<double>(dim_)), true};
    }

    double low_weight() const { return w_lo_; }
    double high_weight() const { return w_hi_; }

private:
    double weight(double t) const {
        const double c = std::cos(kPi * t);
        return w_lo_ + w_hi_ * std::pow(c, 8);
    }
    double profile(double t) const { return std::sin(8.0 * kPi * t) * weight(t); }

    int dim_;
    double w_lo_;
    double w_hi_;
    double offset_;
};

class ContractingAffineField final : public AnalyticField {
public:
    ContractingAffineField(int dim, double lambda, double amplitude, double omega)
        : dim_(dim), lambda_(lambda), amplitude_(amplitude), omega_(omega) {}

    int dimension() const override { return dim_; }

    Eigen::VectorXd evaluate(const Eigen::VectorXd& x, double t) const override {
        return -lambda_ * x + Eigen::VectorXd::Constant(dim_, amplitude_ * std::sin(omega_ * t));
    }

    Eigen::VectorXd time_derivative(const Eigen::VectorXd&, double t) const override {
        return Eigen::VectorXd::Constant(dim_, amplitude_ * omega_ * std::cos(omega_ * t));
    }

    SmoothnessBounds bounds() const override {
        return {lambda_,
                std::abs(amplitude_) * omega_ * omega_ * std::sqrt(static_cast<double>(dim_)), true};
    }

private:
    int dim_;
    double lambda_;
    double amplitude_;
    double omega_;
};

}  // namespace

FieldKind field_kind_from_string(const std::string& name) {
    if (name == "constant") return FieldKind::kConstant;
    if (name == "linear_time") return FieldKind::kLinearTime;
    if (name == "sinusoidal_time") return FieldKind::kSinusoidalTime;
    if (name == "three_phase") return FieldKind::kThreePhase;
    if (name == "contracting_affine") return FieldKind::kContractingAffine;
    throw ConfigError("unknown field kind '" + name + "'");
}

std::string to_string(FieldKind kind) {
    switch (kind) {
        case FieldKind::kConstant: return "constant";
        case FieldKind::kLinearTime: return "linear_time";
        case FieldKind::kSinusoidalTime: return "sinusoidal_time";
        case FieldKind::kThreePhase: return "three_phase";
        case FieldKind::kContractingAffine: return "contracting_affine";
    }
    return "?";
}

std::shared_ptr<AnalyticField> make_analytic_field(FieldKind kind, const FieldParams& params,
                                                   int dimension) {
    if (dimension < 1) {
        throw ConfigError("field dimension must be >= 1");
    }
    switch (kind) {
        case FieldKind::kConstant: {
            check_param_names(params, {"c"}, "constant");
            return std::make_shared<ConstantField>(vector_param(params, "c", "constant", dimension));
        }
        case FieldKind::kLinearTime: {
            check_param_names(params, {"a", "b"}, "linear_time");
            return std::make_shared<LinearTimeField>(vector_param(params, "a", "linear_time", dimension),
                                                     vector_param(params, "b", "linear_time", dimension));
        }
        case FieldKind::kSinusoidalTime: {
            check_param_names(params, {"A", "omega", "B"}, "sinusoidal_time");
            const double zero = 0.0;
            return std::make_shared<SinusoidalTimeField>(
                dimension, scalar_param(params, "A", "sinusoidal_time"),
                scalar_param(params, "omega", "sinusoidal_time"),
                vector_param(params, "B", "sinusoidal_time", dimension, &zero));
        }
        case FieldKind::kThreePhase: {
            check_param_names(params, {"w_lo", "w_hi", "offset"}, "three_phase");
            const double w_lo = scalar_param_or(params, "w_lo", 0.02);
            const double w_hi = scalar_param_or(params, "w_hi", 2.0);
            if (w_lo < 0.0 || w_hi < 0.0) {
                throw ConfigError("three_phase: weights must be nonnegative");
            }
            return std::make_shared<ThreePhaseField>(dimension, w_lo, w_hi,
                                                     scalar_param_or(params, "offset", 1.5));
        }
        case FieldKind::kContractingAffine: {
            check_param_names(params, {"lambda", "A", "omega"}, "contracting_affine");
            const double lambda = scalar_param(params, "lambda", "contracting_affine");
            if (lambda < 0.0) {
                throw ConfigError("contracting_affine: lambda must be nonnegative");
            }
            return std::make_shared<ContractingAffineField>(
                dimension, lambda, scalar_param_or(params, "A", 1.0),
                scalar_param_or(params, "omega", kPi));
        }
    }
    throw ConfigError("unknown field kind");
}

std::shared_ptr<AnalyticField> make_field_from_id(const std::string& id, int dimension) {
    const auto colon = id.find(':');
    const std::string kind_name = id.substr(0, colon);
    FieldParams params;
    if (colon != std::string::npos && colon + 1 < id.size()) {
        const std::string rest = id.substr(colon + 1);
        std::size_t pos = 0;
        while (pos < rest.size()) {
            auto comma = rest.find(',', pos);
            if (comma == std::string::npos) comma = rest.size();
            const std::string item = rest.substr(pos, comma - pos);
            const auto eq = item.find('=');
            if (eq == std::string::npos || eq == 0) {
                throw ConfigError("field id '" + id + "': expected name=value, got '" + item + "'");
            }
            const std::string name = item.substr(0, eq);
            std::vector<double> values;
            std::size_t vpos = eq + 1;
            while (vpos <= item.size()) {
                auto bar = item.find('|', vpos);
                if (bar == std::string::npos) bar = item.size();
                const std::string token = item.substr(vpos, bar - vpos);
                try {
                    std::size_t used = 0;
                    values.push_back(std::stod(token, &used));
                    if (used != token.size()) {
                        throw std::invalid_argument(token);
                    }
                } catch (const std::exception&) {
                    throw ConfigError("field id '" + id + "': bad numeric value '" + token + "'");
                }
                vpos = bar + 1;
            }
            params[name] = std::move(values);
            pos = comma + 1;
        }
    }
    return make_analytic_field(field_kind_from_string(kind_name), params, dimension);
}

// --- sampling ----------------------------------------------------------------

Eigen::MatrixXd sample_source(std::uint64_t seed, int count, int dim) {
    Rng rng(seed);
    return sample_source_rows(rng, count, dim);
}

Eigen::MatrixXd sample_source_rows(Rng& rng, int count, int dim) {
    if (count < 1 || dim < 1) {
        throw std::invalid_argument("sample_source: count and dim must be positive");
    }
    Eigen::MatrixXd out(count, dim);
    for (int i = 0; i < count; ++i) {
        for (int j = 0; j < dim; ++j) {
            out(i, j) = rng.normal();
        }
    }
    return out;
}

TargetDataset target_dataset_from_string(const std::string& name) {
    if (name == "gaussian_mixture") return TargetDataset::kGaussianMixture;
    if (name == "two_rings") return TargetDataset::kTwoRings;
    throw ConfigError("unknown target dataset '" + name + "'");
}

Eigen::MatrixXd sample_gaussian_mixture(std::uint64_t seed, int count, const Eigen::MatrixXd& means,
                                        double stddev) {
    Rng rng(seed);
    return sample_gaussian_mixture_rows(rng, count, means, stddev);
}

Eigen::MatrixXd sample_gaussian_mixture_rows(Rng& rng, int count, const Eigen::MatrixXd& means,
                                             double stddev) {
    if (count < 1 || means.rows() < 1) {
        throw std::invalid_argument("sample_gaussian_mixture: need count >= 1 and >= 1 component");
    }
    if (stddev < 0.0) {
        throw std::invalid_argument("sample_gaussian_mixture: stddev must be nonnegative");
    }
    const int dim = static_cast<int>(means.cols());
    Eigen::MatrixXd out(count, dim);
    for (int i = 0; i < count; ++i) {
        const int component = rng.uniform_int(static_cast<int>(means.rows()));
        out.row(i) = means.row(component) + stddev * rng.normal_vector(dim).transpose();
    }
    return out;
}

Eigen::MatrixXd sample_two_rings(std::uint64_t seed, int count, double radius, double stddev) {
    Rng rng(seed);
    return sample_two_rings_rows(rng, count, radius, stddev);
}

Eigen::MatrixXd sample_two_rings_rows(Rng& rng, int count, double radius, double stddev) {
    if (count < 1 || radius <= 0.0 || stddev < 0.0) {
        throw std::invalid_argument("sample_two_rings: invalid parameters");
    }
    Eigen::MatrixXd out(count, 2);
    for (int i = 0; i < count; ++i) {
        const double center_x = (rng.uniform_int(2) == 0 ? -1.5 : 1.5) * radius;
        const double theta = rng.uniform(0.0, 2.0 * kPi);
        const double r = radius + stddev * rng.normal();
        out(i, 0) = center_x + r * std::cos(theta);
        out(i, 1) = r * std::sin(theta);
    }
    return out;
}

}  // namespace fastflow

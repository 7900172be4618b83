#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fastflow/errors.hpp"
#include "fastflow/fields.hpp"
#include "fastflow/rng.hpp"

using namespace fastflow;

namespace {

constexpr double kPi = std::numbers::pi;

FieldParams params(std::initializer_list<std::pair<const std::string, std::vector<double>>> init) {
    return FieldParams(init);
}

// Central second difference of t -> v(x, t), the independent curvature probe.
double second_diff_norm(const VelocityField& field, const Eigen::VectorXd& x, double t, double h) {
    const Eigen::VectorXd lo = field.evaluate(x, t - h);
    const Eigen::VectorXd mid = field.evaluate(x, t);
    const Eigen::VectorXd hi = field.evaluate(x, t + h);
    return ((hi - 2.0 * mid + lo) / (h * h)).norm();
}

}  // namespace

TEST_CASE("constant field evaluates to c") {
    auto field = make_analytic_field(FieldKind::kConstant, params({{"c", {1.0, 1.0}}}), 2);
    const Eigen::VectorXd v = field->evaluate(Eigen::Vector2d(0.0, 0.0), 0.5);
    CHECK(v[0] == 1.0);
    CHECK(v[1] == 1.0);
    CHECK(field->bounds().lipschitz_x == 0.0);
    CHECK(field->bounds().curvature_m == 0.0);
    CHECK(field->bounds().known);
}

TEST_CASE("linear_time field is a + b*t for any x") {
    auto field =
        make_analytic_field(FieldKind::kLinearTime, params({{"a", {0.0}}, {"b", {2.0}}}), 1);
    Rng rng(3);
    for (int i = 0; i < 10; ++i) {
        const Eigen::VectorXd x = rng.normal_vector(1);
        CHECK(field->evaluate(x, 0.25)[0] == doctest::Approx(0.5).epsilon(1e-15));
    }
}

TEST_CASE("sinusoidal bounds: A=1, omega=pi gives M = pi^2 in 1-D") {
    auto field = make_analytic_field(FieldKind::kSinusoidalTime,
                                     params({{"A", {1.0}}, {"omega", {kPi}}}), 1);
    CHECK(field->bounds().lipschitz_x == 0.0);
    CHECK(field->bounds().curvature_m == doctest::Approx(kPi * kPi).epsilon(1e-12));
}

TEST_CASE("field factory rejects unknown kinds and malformed params") {
    CHECK_THROWS_AS(field_kind_from_string("spiral"), ConfigError);
    CHECK_THROWS_AS(make_analytic_field(FieldKind::kConstant, params({{"c", {1.0, 2.0, 3.0}}}), 2),
                    ConfigError);
    CHECK_THROWS_AS(make_analytic_field(FieldKind::kSinusoidalTime, params({{"A", {1.0}}}), 1),
                    ConfigError);
    CHECK_THROWS_AS(
        make_analytic_field(FieldKind::kSinusoidalTime,
                            params({{"A", {1.0}}, {"omega", {1.0}}, {"phase", {0.0}}}), 1),
        ConfigError);
    CHECK_THROWS_AS(make_field_from_id("sinusoidal_time:A=x", 1), ConfigError);
}

TEST_CASE("field id round-trips through the string form") {
    auto field = make_field_from_id("sinusoidal_time:A=1,omega=3.14159", 2);
    const Eigen::VectorXd v = field->evaluate(Eigen::Vector2d::Zero(), 0.5);
    CHECK(v[0] == doctest::Approx(std::sin(3.14159 * 0.5)));
    auto vec_field = make_field_from_id("constant:c=1|2", 2);
    CHECK(vec_field->evaluate(Eigen::Vector2d::Zero(), 0.0)[1] == 2.0);
}

TEST_CASE("analytic fields satisfy their Lipschitz constant on random triples") {
    const std::vector<std::shared_ptr<AnalyticField>> fields = {
        make_analytic_field(FieldKind::kConstant, params({{"c", {0.7, -0.3}}}), 2),
        make_analytic_field(FieldKind::kLinearTime, params({{"a", {0.1}}, {"b", {-2.0}}}), 1),
        make_analytic_field(FieldKind::kSinusoidalTime, params({{"A", {1.5}}, {"omega", {5.0}}}), 3),
        make_analytic_field(FieldKind::kThreePhase, {}, 2),
        make_analytic_field(FieldKind::kContractingAffine,
                            params({{"lambda", {0.8}}, {"A", {1.0}}, {"omega", {kPi}}}), 2),
    };
    Rng rng(11);
    for (const auto& field : fields) {
        const double lipschitz = field->bounds().lipschitz_x;
        for (int i = 0; i < 10'000; ++i) {
            const Eigen::VectorXd x = 3.0 * rng.normal_vector(field->dimension());
            const Eigen::VectorXd y = 3.0 * rng.normal_vector(field->dimension());
            const double t = rng.uniform();
            const double lhs = (field->evaluate(x, t) - field->evaluate(y, t)).norm();
            CHECK(lhs <= lipschitz * (x - y).norm() * (1.0 + 1e-9) + 1e-12);
        }
    }
}

TEST_CASE("central-difference curvature estimates stay within M") {
    const std::vector<std::shared_ptr<AnalyticField>> fields = {
        make_analytic_field(FieldKind::kSinusoidalTime, params({{"A", {1.0}}, {"omega", {kPi}}}), 1),
        make_analytic_field(FieldKind::kSinusoidalTime, params({{"A", {2.0}}, {"omega", {7.0}}}), 2),
        make_analytic_field(FieldKind::kThreePhase, {}, 1),
        make_analytic_field(FieldKind::kContractingAffine,
                            params({{"lambda", {0.5}}, {"A", {1.0}}, {"omega", {2.0 * kPi}}}), 2),
        make_analytic_field(FieldKind::kLinearTime, params({{"a", {1.0}}, {"b", {3.0}}}), 1),
    };
    const double h = 1e-3;
    Rng rng(23);
    for (const auto& field : fields) {
        const double m = field->bounds().curvature_m;
        for (int i = 0; i < 1'000; ++i) {
            const Eigen::VectorXd x = rng.normal_vector(field->dimension());
            const double t = rng.uniform(h, 1.0 - h);
            const double estimate = second_diff_norm(*field, x, t, h);
            CHECK(estimate <= m + 1e-2 * m + 1e-6);
        }
    }
}

TEST_CASE("time_derivative matches a central first difference") {
    const std::vector<std::shared_ptr<AnalyticField>> fields = {
        make_analytic_field(FieldKind::kSinusoidalTime, params({{"A", {1.3}}, {"omega", {4.0}}}), 2),
        make_analytic_field(FieldKind::kThreePhase, {}, 1),
        make_analytic_field(FieldKind::kContractingAffine,
                            params({{"lambda", {0.4}}, {"A", {0.9}}, {"omega", {3.0}}}), 2),
    };
    const double h = 1e-6;
    Rng rng(31);
    for (const auto& field : fields) {
        for (int i = 0; i < 50; ++i) {
            const Eigen::VectorXd x = rng.normal_vector(field->dimension());
            const double t = rng.uniform(0.01, 0.99);
            const Eigen::VectorXd numeric =
                (field->evaluate(x, t + h) - field->evaluate(x, t - h)) / (2.0 * h);
            CHECK((numeric - field->time_derivative(x, t)).norm() < 1e-5);
        }
    }
}

TEST_CASE("three_phase curvature is much larger near the ends than in the middle") {
    auto field = make_analytic_field(FieldKind::kThreePhase, {}, 1);
    const Eigen::VectorXd x = Eigen::VectorXd::Zero(1);
    double end_max = 0.0;
    double mid_max = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double t = 0.002 + 0.996 * i / 400.0;
        const double curvature = second_diff_norm(*field, x, t, 1e-4);
        if (t <= 0.2 || t >= 0.8) {
            end_max = std::max(end_max, curvature);
        } else if (t > 0.3 && t < 0.7) {
            mid_max = std::max(mid_max, curvature);
        }
    }
    CHECK(end_max > 5.0 * mid_max);
}

TEST_CASE("counting field increments once per evaluate call") {
    auto inner = make_analytic_field(FieldKind::kConstant, params({{"c", {1.0}}}), 1);
    CountingField counting(inner, 0.5);
    CHECK(counting.eval_count() == 0);
    const Eigen::VectorXd x = Eigen::VectorXd::Zero(1);
    for (int i = 1; i <= 7; ++i) {
        counting.evaluate(x, 0.1 * i);
        CHECK(counting.eval_count() == i);
    }
    CHECK(counting.simulated_seconds() == doctest::Approx(3.5));
}

TEST_CASE("sample_source is deterministic and standard normal") {
    const Eigen::MatrixXd a = sample_source(7, 2, 2);
    const Eigen::MatrixXd b = sample_source(7, 2, 2);
    CHECK(a == b);
    CHECK(sample_source(8, 2, 2) != a);

    const Eigen::MatrixXd big = sample_source(123, 100'000, 2);
    const Eigen::VectorXd mean = big.colwise().mean();
    CHECK(std::abs(mean[0]) < 0.02);
    CHECK(std::abs(mean[1]) < 0.02);
    const Eigen::MatrixXd centered = big.rowwise() - mean.transpose();
    const Eigen::MatrixXd cov = centered.transpose() * centered / (big.rows() - 1.0);
    CHECK(std::abs(cov(0, 0) - 1.0) < 0.05);
    CHECK(std::abs(cov(1, 1) - 1.0) < 0.05);
    CHECK(std::abs(cov(0, 1)) < 0.05);
}

TEST_CASE("gaussian mixture sampling") {
    Eigen::MatrixXd single(1, 2);
    single << 3.0, 3.0;
    const Eigen::MatrixXd degenerate = sample_gaussian_mixture(5, 50, single, 0.0);
    for (int i = 0; i < degenerate.rows(); ++i) {
        CHECK(degenerate(i, 0) == 3.0);
        CHECK(degenerate(i, 1) == 3.0);
    }

    Eigen::MatrixXd corners(4, 2);
    corners << 3, 3, -3, 3, 3, -3, -3, -3;
    const Eigen::MatrixXd symmetric = sample_gaussian_mixture(17, 10'000, corners, 0.3);
    const Eigen::VectorXd mean = symmetric.colwise().mean();
    CHECK(std::abs(mean[0]) < 0.1);
    CHECK(std::abs(mean[1]) < 0.1);
}

TEST_CASE("two rings sampling keeps the ring radius") {
    const double radius = 2.0;
    const Eigen::MatrixXd points = sample_two_rings(29, 10'000, radius, 0.05);
    double mean_radius = 0.0;
    for (int i = 0; i < points.rows(); ++i) {
        const double cx = points(i, 0) < 0.0 ? -1.5 * radius : 1.5 * radius;
        mean_radius += std::hypot(points(i, 0) - cx, points(i, 1));
    }
    mean_radius /= static_cast<double>(points.rows());
    CHECK(std::abs(mean_radius - radius) < 0.05);
    CHECK_THROWS_AS(target_dataset_from_string("spirals"), ConfigError);
}

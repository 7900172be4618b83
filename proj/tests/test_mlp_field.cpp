#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "fastflow/analysis.hpp"
#include "fastflow/errors.hpp"
#include "fastflow/fields.hpp"
#include "fastflow/mlp_field.hpp"
#include "fastflow/rng.hpp"
#include "fastflow/solvers.hpp"
#include "fastflow/time_grid.hpp"

using namespace fastflow;

namespace {

Eigen::MatrixXd corner_means() {
    Eigen::MatrixXd means(4, 2);
    means << 3, 3, -3, 3, 3, -3, -3, -3;
    return means;
}

BatchSampler gaussian_source(int dim) {
    return [dim](Rng& rng, int count) { return sample_source_rows(rng, count, dim); };
}

// Canonical toy recipe shared across tests; trained once.
const MlpField& trained_toy_field() {
    static const TrainResult result = [] {
        TrainConfig config;
        config.steps = 6000;
        config.batch = 128;
        config.learning_rate = 0.03;
        config.seed = 1;
        config.hidden = 64;
        const Eigen::MatrixXd means = corner_means();
        return train(config, 2, gaussian_source(2), [means](Rng& rng, int count) {
            return sample_gaussian_mixture_rows(rng, count, means, 0.3);
        });
    }();
    return result.field;
}

MlpField zero_field_with_output(const Eigen::VectorXd& c, int hidden = 4) {
    MlpField field(static_cast<int>(c.size()), hidden, 0);
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(field.parameters().size());
    theta.tail(c.size()) = c;  // parameter layout ends with the output bias
    field.set_parameters(theta);
    return field;
}

}  // namespace

TEST_CASE("cfm loss is zero for a perfect regressor and one for a unit miss") {
    // single pair: a zero network with output bias x1 - x0 regresses exactly
    const Eigen::MatrixXd x0 = Eigen::RowVector2d(0.5, -1.0);
    const Eigen::MatrixXd x1 = Eigen::RowVector2d(2.5, 1.0);
    const MlpField perfect = zero_field_with_output(Eigen::Vector2d(2.0, 2.0));
    CHECK(cfm_loss(perfect, x0, x1, Eigen::VectorXd::Constant(1, 0.3)) ==
          doctest::Approx(0.0).epsilon(1e-15));

    // zero output against u = (1, 0) on every row: mean squared norm 1
    const MlpField zero = zero_field_with_output(Eigen::Vector2d(0.0, 0.0));
    Eigen::MatrixXd a0(3, 2), a1(3, 2);
    a0 << 0, 0, 1, 1, -1, 2;
    a1 = a0;
    a1.col(0).array() += 1.0;
    CHECK(cfm_loss(zero, a0, a1, Eigen::Vector3d(0.1, 0.5, 0.9)) ==
          doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(cfm_loss(zero, a0, a1.topRows(2), Eigen::Vector3d(0.1, 0.5, 0.9)),
                    std::invalid_argument);
}

TEST_CASE("cfm loss matches an independent scalar re-computation") {
    const int dim = 2;
    const int hidden = 3;
    MlpField field(dim, hidden, 5);
    Rng rng(31);
    const int n = 4;
    const Eigen::MatrixXd x0 = sample_source_rows(rng, n, dim);
    const Eigen::MatrixXd x1 = sample_source_rows(rng, n, dim);
    Eigen::VectorXd t(n);
    for (int i = 0; i < n; ++i) {
        t[i] = rng.uniform();
    }

    // scalar oracle over the flat parameter vector, no Eigen products
    const Eigen::VectorXd theta = field.parameters();
    const auto w1 = [&](int r, int c) { return theta[r * (dim + 1) + c]; };
    const int b1_at = hidden * (dim + 1);
    const int w2_at = b1_at + hidden;
    const auto w2 = [&](int r, int c) { return theta[w2_at + r * hidden + c]; };
    const int b2_at = w2_at + hidden * hidden;
    const int w3_at = b2_at + hidden;
    const auto w3 = [&](int r, int c) { return theta[w3_at + r * hidden + c]; };
    const int b3_at = w3_at + dim * hidden;

    double loss = 0.0;
    for (int i = 0; i < n; ++i) {
        double z[3];  // input: x_t, t
        z[0] = (1.0 - t[i]) * x0(i, 0) + t[i] * x1(i, 0);
        z[1] = (1.0 - t[i]) * x0(i, 1) + t[i] * x1(i, 1);
        z[2] = t[i];
        double h1[3];
        for (int r = 0; r < hidden; ++r) {
            double acc = theta[b1_at + r];
            for (int c = 0; c < dim + 1; ++c) {
                acc += w1(r, c) * z[c];
            }
            h1[r] = std::tanh(acc);
        }
        double h2[3];
        for (int r = 0; r < hidden; ++r) {
            double acc = theta[b2_at + r];
            for (int c = 0; c < hidden; ++c) {
                acc += w2(r, c) * h1[c];
            }
            h2[r] = std::tanh(acc);
        }
        for (int r = 0; r < dim; ++r) {
            double acc = theta[b3_at + r];
            for (int c = 0; c < hidden; ++c) {
                acc += w3(r, c) * h2[c];
            }
            const double u = x1(i, r) - x0(i, r);
            loss += (acc - u) * (acc - u);
        }
    }
    loss /= static_cast<double>(n);

    CHECK(field.cfm_loss(x0, x1, t) == doctest::Approx(loss).epsilon(1e-10));
}

TEST_CASE("analytic gradients agree with central finite differences") {
    MlpField field(1, 1, 9);  // micro-net
    Rng rng(41);
    const Eigen::MatrixXd x0 = sample_source_rows(rng, 5, 1);
    const Eigen::MatrixXd x1 = sample_source_rows(rng, 5, 1);
    Eigen::VectorXd t(5);
    for (int i = 0; i < 5; ++i) {
        t[i] = rng.uniform();
    }

    MlpGradients grad;
    field.cfm_loss_and_grad(x0, x1, t, grad);
    // flat order: w1, b1, w2, b2, w3, b3, matching parameters()
    Eigen::VectorXd analytic(field.parameters().size());
    analytic << grad.w1(0, 0), grad.w1(0, 1), grad.b1(0), grad.w2(0, 0), grad.b2(0), grad.w3(0, 0),
        grad.b3(0);

    const Eigen::VectorXd theta = field.parameters();
    const double step = 1e-5;
    for (int p = 0; p < theta.size(); ++p) {
        Eigen::VectorXd theta_hi = theta;
        Eigen::VectorXd theta_lo = theta;
        theta_hi[p] += step;
        theta_lo[p] -= step;
        MlpField probe = field;
        probe.set_parameters(theta_hi);
        const double hi = probe.cfm_loss(x0, x1, t);
        probe.set_parameters(theta_lo);
        const double lo = probe.cfm_loss(x0, x1, t);
        const double numeric = (hi - lo) / (2.0 * step);
        CHECK(std::abs(numeric - analytic[p]) <= 1e-4 * (std::abs(analytic[p]) + 1e-6));
    }
}

TEST_CASE("training with zero steps returns the initialization unchanged") {
    TrainConfig config;
    config.steps = 0;
    config.seed = 123;
    config.hidden = 8;
    const TrainResult result = train(config, 2, gaussian_source(2), gaussian_source(2));
    const MlpField fresh(2, 8, 123);
    CHECK(result.field.to_json() == fresh.to_json());
}

TEST_CASE("training on a degenerate target collapses the loss") {
    Eigen::MatrixXd point(1, 2);
    point << 2.0, 1.0;
    TrainConfig config;
    config.steps = 2000;
    config.batch = 64;
    config.learning_rate = 0.03;
    config.seed = 3;
    config.hidden = 32;
    const TrainResult result =
        train(config, 2, gaussian_source(2), [point](Rng& rng, int count) {
            return sample_gaussian_mixture_rows(rng, count, point, 0.0);
        });
    CHECK(result.final_loss < 0.1 * result.initial_loss);
}

TEST_CASE("training is bit-reproducible given the seed") {
    TrainConfig config;
    config.steps = 300;
    config.batch = 32;
    config.learning_rate = 0.05;
    config.seed = 77;
    config.hidden = 16;
    const TrainResult a = train(config, 2, gaussian_source(2), gaussian_source(2));
    const TrainResult b = train(config, 2, gaussian_source(2), gaussian_source(2));
    CHECK(a.field.parameters() == b.field.parameters());
    CHECK(a.final_loss == b.final_loss);
}

TEST_CASE("unstable learning rates abort with a diagnostic") {
    TrainConfig config;
    config.steps = 2000;
    config.batch = 128;
    config.learning_rate = 0.1;  // diverges on the corner-mixture objective
    config.seed = 1;
    config.hidden = 64;
    const Eigen::MatrixXd means = corner_means();
    CHECK_THROWS_WITH_AS(train(config, 2, gaussian_source(2),
                               [means](Rng& rng, int count) {
                                   return sample_gaussian_mixture_rows(rng, count, means, 0.3);
                               }),
                         doctest::Contains("diverged"), NumericalError);
}

TEST_CASE("a constant perfect field transports x0 to x0 + c exactly") {
    const Eigen::Vector2d c(1.5, -0.5);
    const MlpField field = zero_field_with_output(c);
    for (const int steps : {1, 10, 50}) {
        const Eigen::MatrixXd finals = generate_samples(field, TimeGrid::uniform(steps), 21, 32);
        const Eigen::MatrixXd x0 = sample_source(21, 32, 2);
        for (int i = 0; i < finals.rows(); ++i) {
            CHECK((finals.row(i) - (x0.row(i) + c.transpose())).norm() < 1e-12);
        }
    }
}

TEST_CASE("the trained toy field lands samples on the mixture modes") {
    const Eigen::MatrixXd means = corner_means();
    const Eigen::MatrixXd finals =
        generate_samples(trained_toy_field(), TimeGrid::uniform(50), 9, 2000);
    int close = 0;
    for (int i = 0; i < finals.rows(); ++i) {
        double best = std::numeric_limits<double>::max();
        for (int m = 0; m < means.rows(); ++m) {
            best = std::min(best, (finals.row(i) - means.row(m)).norm());
        }
        if (best < 1.0) {
            ++close;
        }
    }
    CHECK(close >= 1900);  // >= 95% of 2000
}

TEST_CASE("finer grids converge: T=50 is closer to T=100 than T=10 is") {
    const MlpField& field = trained_toy_field();
    const int n = 200;
    const Eigen::MatrixXd x0 = sample_source(33, n, 2);
    auto finals_for = [&](int steps) {
        Eigen::MatrixXd out(n, 2);
        for (int i = 0; i < n; ++i) {
            out.row(i) =
                full_trajectory(field, TimeGrid::uniform(steps), x0.row(i).transpose())
                    .final_state()
                    .transpose();
        }
        return out;
    };
    const Eigen::MatrixXd f10 = finals_for(10);
    const Eigen::MatrixXd f50 = finals_for(50);
    const Eigen::MatrixXd f100 = finals_for(100);
    const double d50 = (f50 - f100).rowwise().norm().mean();
    const double d10 = (f10 - f100).rowwise().norm().mean();
    CHECK(d50 < d10);
}

TEST_CASE("the learned field is relatively stable in the trajectory interior") {
    const MlpField& field = trained_toy_field();
    const TimeGrid grid = TimeGrid::uniform(50);
    Rng rng(57);
    double interior = 0.0;
    double boundary = 0.0;
    long interior_count = 0;
    long boundary_count = 0;
    for (int run = 0; run < 10; ++run) {
        const TrajectoryRecord rec = full_trajectory(field, grid, rng.normal_vector(2));
        const RelL1Series series = rel_l1_series(rec, field);
        const int n = static_cast<int>(series.values.size());
        const int edge = n / 5;
        for (int i = 0; i < n; ++i) {
            if (i < edge || i >= n - edge) {
                boundary += series.values[static_cast<std::size_t>(i)];
                ++boundary_count;
            } else {
                interior += series.values[static_cast<std::size_t>(i)];
                ++interior_count;
            }
        }
    }
    CHECK(interior / static_cast<double>(interior_count) <
          boundary / static_cast<double>(boundary_count));
}

TEST_CASE("checkpoints round-trip through mlpfield-v1") {
    const MlpField& field = trained_toy_field();
    const auto path =
        (std::filesystem::temp_directory_path() / "fastflow_test_checkpoint.json").string();
    save_checkpoint(field, path);
    const MlpField loaded = load_checkpoint(path);
    CHECK(loaded.parameters() == field.parameters());
    CHECK(loaded.to_json() == field.to_json());
    CHECK(field.to_json().at("format") == "mlpfield-v1");

    // a field evaluated after reload reproduces the original outputs
    Rng rng(71);
    for (int i = 0; i < 20; ++i) {
        const Eigen::VectorXd x = rng.normal_vector(2);
        const double t = rng.uniform();
        CHECK(loaded.evaluate(x, t) == field.evaluate(x, t));
    }
    std::filesystem::remove(path);
}

TEST_CASE("malformed checkpoints are rejected") {
    CHECK_THROWS_AS(MlpField::from_json({{"format", "other"}}), ConfigError);
    nlohmann::json bad = MlpField(2, 4, 1).to_json();
    bad["layers"][0]["weights"] = std::vector<double>{1.0, 2.0};
    CHECK_THROWS_AS(MlpField::from_json(bad), ConfigError);
}

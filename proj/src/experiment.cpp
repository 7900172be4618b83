#include "fastflow/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "fastflow/analysis.hpp"
#include "fastflow/bandit.hpp"
#include "fastflow/csv.hpp"
#include "fastflow/errors.hpp"
#include "fastflow/fields.hpp"
#include "fastflow/mlp_field.hpp"
#include "fastflow/rng.hpp"
#include "fastflow/solvers.hpp"
#include "fastflow/time_grid.hpp"

namespace fastflow {

namespace fs = std::filesystem;

namespace {

std::uint64_t resolve_seed(const Config& config, const CliOptions& options) {
    return options.seed ? *options.seed : config.get_seed_or("run.seed", 0);
}

fs::path resolve_out_dir(const Config& config, const CliOptions& options, const char* key) {
    const std::string dir = options.out ? *options.out : config.get_string_or(key, "out");
    fs::create_directories(dir);
    return {dir};
}

struct FieldHandle {
    std::shared_ptr<const VelocityField> field;
    std::shared_ptr<const AnalyticField> analytic;  // null for checkpoint fields
    std::string description;
};

FieldHandle build_field(const Config& config) {
    if (config.has("field.checkpoint")) {
        const std::string path = config.get_string("field.checkpoint");
        auto mlp = std::make_shared<MlpField>(load_checkpoint(path));
        return {mlp, nullptr, "checkpoint:" + path};
    }
    if (config.has("field.id")) {
        const int dim = static_cast<int>(config.get_long_or("field.dimension", 1));
        auto analytic = make_field_from_id(config.get_string("field.id"), dim);
        return {analytic, analytic, config.get_string("field.id")};
    }
    throw ConfigError("missing config key 'field.id' or 'field.checkpoint'");
}

TimeGrid build_grid(const Config& config) {
    const int steps = static_cast<int>(config.get_long("grid.T"));
    const double shift = config.get_double_or("grid.shift", 1.0);
    try {
        return shift == 1.0 ? TimeGrid::uniform(steps) : TimeGrid::shifted(steps, shift);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config key 'grid.T'/'grid.shift': ") + e.what());
    }
}

// Comma-separated list of '|'-separated coordinate vectors, e.g.
// "3|3,-3|3,3|-3,-3|-3".
Eigen::MatrixXd parse_vector_list(const Config& config, const std::string& key) {
    const std::string text = config.get_string(key);
    std::vector<std::vector<double>> rows;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string item = text.substr(pos, comma - pos);
        std::vector<double> row;
        std::size_t vpos = 0;
        while (vpos <= item.size()) {
            auto bar = item.find('|', vpos);
            if (bar == std::string::npos) bar = item.size();
            const std::string token = item.substr(vpos, bar - vpos);
            try {
                std::size_t used = 0;
                row.push_back(std::stod(token, &used));
                if (used != token.size()) throw std::invalid_argument(token);
            } catch (const std::exception&) {
                throw ConfigError("config key '" + key + "': bad numeric value '" + token + "'");
            }
            vpos = bar + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ConfigError("config key '" + key + "': inconsistent vector lengths");
        }
        rows.push_back(std::move(row));
        pos = comma + 1;
    }
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    return out;
}

std::vector<int> int_list_or(const Config& config, const std::string& key,
                             std::vector<int> fallback) {
    return config.has(key) ? config.get_int_list(key) : std::move(fallback);
}

void regenerate_summary(const fs::path& out_dir) {
    std::ifstream in(out_dir / "results.jsonl");
    CsvWriter csv((out_dir / "summary.csv").string(),
                  {"generation", "method", "eval_count", "speedup", "final_deviation", "mean_skip"});
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const nlohmann::json rec = nlohmann::json::parse(line);
        csv.write_row({std::to_string(rec.at("generation").get<long>()),
                       rec.at("method").get<std::string>(),
                       std::to_string(rec.at("eval_count").get<long>()),
                       csv_number(rec.at("speedup").get<double>()),
                       csv_number(rec.at("final_deviation").get<double>()),
                       csv_number(rec.at("mean_skip").get<double>())});
    }
}

}  // namespace

// --- train-toy -------------------------------------------------------------------

void cmd_train_toy(const Config& config, const CliOptions& options, std::ostream& log) {
    TrainConfig train_config;
    train_config.steps = config.get_long_or("train.steps", 2000);
    train_config.batch = static_cast<int>(config.get_long_or("train.batch", 128));
    train_config.learning_rate = config.get_double_or("train.lr", 0.05);
    train_config.hidden = static_cast<int>(config.get_long_or("train.hidden", 64));
    train_config.seed = resolve_seed(config, options);
    try {
        train_config.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("train.*: ") + e.what());
    }

    const std::string dataset_name = config.get_string_or("target.dataset", "gaussian_mixture");
    const TargetDataset dataset = target_dataset_from_string(dataset_name);
    int dim = 2;
    BatchSampler target;
    if (dataset == TargetDataset::kGaussianMixture) {
        const Eigen::MatrixXd means = parse_vector_list(config, "target.means");
        const double stddev = config.get_double_or("target.std", 0.3);
        dim = static_cast<int>(means.cols());
        target = [means, stddev](Rng& rng, int count) {
            return sample_gaussian_mixture_rows(rng, count, means, stddev);
        };
    } else {
        const double radius = config.get_double_or("target.radius", 2.0);
        const double stddev = config.get_double_or("target.std", 0.05);
        target = [radius, stddev](Rng& rng, int count) {
            return sample_two_rings_rows(rng, count, radius, stddev);
        };
    }
    const BatchSampler source = [dim](Rng& rng, int count) {
        return sample_source_rows(rng, count, dim);
    };

    fs::path checkpoint;
    if (config.has("train.checkpoint")) {
        checkpoint = config.get_string("train.checkpoint");
        if (checkpoint.has_parent_path()) {
            fs::create_directories(checkpoint.parent_path());
        }
    } else {
        checkpoint = resolve_out_dir(config, options, "run.out") / "model.json";
    }

    const TrainResult result = train(train_config, dim, source, target);
    save_checkpoint(result.field, checkpoint.string());
    log << "trained " << dim << "-d field on " << dataset_name << " for " << train_config.steps
        << " steps (loss " << result.initial_loss << " -> " << result.final_loss << ")\n";
    log << "checkpoint: " << checkpoint.string() << "\n";
}

// --- run -------------------------------------------------------------------------

void cmd_run(const Config& config, const CliOptions& options, std::ostream& log) {
    const std::uint64_t seed = resolve_seed(config, options);
    const FieldHandle handle = build_field(config);
    const TimeGrid grid = build_grid(config);
    const int dim = handle.field->dimension();
    const std::string method = config.get_string("method.name");
    static const std::set<std::string> kMethods = {"full", "fastflow", "fixed_skip",
                                                   "reuse_velocity", "lms"};
    if (!kMethods.count(method)) {
        throw ConfigError("config key 'method.name': unknown method '" + method + "'");
    }
    const long generations = config.get_long_or("run.generations", 1);
    if (generations < 1) {
        throw ConfigError("config key 'run.generations' must be >= 1");
    }
    const fs::path out_dir = resolve_out_dir(config, options, "run.out");

    Rng start_rng(seed);
    std::vector<Eigen::VectorXd> starts;
    starts.reserve(static_cast<std::size_t>(generations));
    for (long g = 0; g < generations; ++g) {
        starts.push_back(start_rng.normal_vector(dim));
    }

    nlohmann::json meta;
    meta["seed"] = seed;
    meta["method"] = method;
    meta["field"] = handle.description;
    meta["T"] = grid.steps();
    meta["generations"] = generations;
    meta["config"] = config.values();

    FastFlowConfig ff;
    std::optional<BanditRegistry> registry;
    long fixed_j = 0;
    double reuse_delta = 0.0;
    long lms_skip = 0;
    if (method == "fastflow") {
        ff.gamma = config.get_double_or("method.gamma", 2.0);
        ff.arms = int_list_or(config, "method.arms", {0, 2, 4, 6});
        const std::string semantics = config.get_string_or("method.delta_t", "anchor_offset");
        if (semantics == "anchor_offset") {
            ff.delta_t = DeltaTSemantics::kAnchorOffset;
        } else if (semantics == "literal") {
            ff.delta_t = DeltaTSemantics::kLiteral;
        } else {
            throw ConfigError("config key 'method.delta_t': expected anchor_offset or literal");
        }
        const std::string jump = config.get_string_or("method.jump", "extrapolated");
        if (jump == "extrapolated") {
            ff.jump = JumpMode::kExtrapolated;
        } else if (jump == "plain_euler") {
            ff.jump = JumpMode::kPlainEuler;
        } else {
            throw ConfigError("config key 'method.jump': expected extrapolated or plain_euler");
        }
        const std::string mu_text = config.get_string_or("method.mu", "calibrate");
        if (mu_text == "calibrate") {
            const MuCalibration cal = calibrate_mu(*handle.field, grid, starts.front());
            ff.mu = cal.mu;
            meta["mu_calibrated"] = true;
            meta["calibration_max_mse"] = cal.max_mse;
            log << "calibrated mu = " << cal.mu << " (max one-step MSE " << cal.max_mse << ")\n";
            if (cal.clamped) {
                log << "warning: extrapolation is exact on this field; mu clamped to 1e-9\n";
            }
        } else {
            try {
                ff.mu = std::stod(mu_text);
            } catch (const std::exception&) {
                throw ConfigError("config key 'method.mu': expected a number or 'calibrate'");
            }
            meta["mu_calibrated"] = false;
        }
        meta["mu"] = ff.mu;
        try {
            ff.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("method.*: ") + e.what());
        }
        const std::string resume = options.resume_registry
                                       ? *options.resume_registry
                                       : config.get_string_or("method.resume_registry", "");
        if (!resume.empty()) {
            registry = BanditRegistry::load(resume);
            if (registry->gamma() != ff.gamma) {
                throw ConfigError("resumed registry gamma does not match method.gamma");
            }
        } else {
            registry.emplace(ff.gamma);
        }
    } else if (method == "fixed_skip") {
        fixed_j = config.get_long("method.j");
    } else if (method == "reuse_velocity") {
        reuse_delta = config.get_double("method.delta");
    } else if (method == "lms") {
        lms_skip = config.get_long("method.m");
    }

    std::ofstream results(out_dir / "results.jsonl", std::ios::app);
    if (!results) {
        throw ConfigError("cannot write " + (out_dir / "results.jsonl").string());
    }
    for (long g = 0; g < generations; ++g) {
        const Eigen::VectorXd& x0 = starts[static_cast<std::size_t>(g)];
        const TrajectoryRecord reference = full_trajectory(*handle.field, grid, x0);
        auto counting = std::make_shared<CountingField>(handle.field);
        TrajectoryRecord rec;
        if (method == "full") {
            rec = full_trajectory(*counting, grid, x0);
        } else if (method == "fastflow") {
            rec = fastflow_generate(*counting, grid, x0, ff, *registry);
        } else if (method == "fixed_skip") {
            rec = fixed_skip_generate(*counting, grid, x0, static_cast<int>(fixed_j));
        } else if (method == "reuse_velocity") {
            rec = reuse_velocity_generate(*counting, grid, x0, reuse_delta);
        } else {
            rec = lms_generate(*counting, grid, x0, static_cast<int>(lms_skip));
        }
        if (counting->eval_count() != rec.eval_count) {
            throw std::logic_error("eval accounting mismatch between field counter and record");
        }
        const RunMetrics metrics = compute_run_metrics(rec, reference);

        nlohmann::json record;
        record["generation"] = g;
        record["method"] = method;
        record["T"] = grid.steps();
        record["eval_count"] = metrics.eval_count;
        record["speedup"] = metrics.speedup;
        record["final_deviation"] = metrics.final_deviation;
        record["skipped"] = metrics.skipped_count;
        record["mean_skip"] = metrics.mean_skip;
        nlohmann::json decisions = nlohmann::json::array();
        for (const auto& d : rec.decisions) {
            decisions.push_back({{"step", d.step},
                                 {"t", rec.times[static_cast<std::size_t>(d.step)]},
                                 {"arm", d.arm},
                                 {"reward", d.reward},
                                 {"loss", d.loss}});
        }
        record["decisions"] = std::move(decisions);
        if (method == "full") {
            record["rel_l1"] = rel_l1_series(rec, *handle.field).values;
        }
        // For analytic fields on uniform grids, report the single-step-regime
        // bound next to a conservative multi-step variant (interval stretched
        // by the largest chosen skip + 1). The conservative number is a
        // labeled reference point, not an asserted guarantee.
        if (handle.analytic && grid.uniform_spacing() && method != "full") {
            const SmoothnessBounds bounds = handle.analytic->bounds();
            if (bounds.known) {
                int max_skip = 0;
                for (const auto& d : rec.decisions) {
                    max_skip = std::max(max_skip, d.arm);
                }
                record["bound_single_step"] = final_state_bound(
                    metrics.skipped_count, bounds.curvature_m, bounds.lipschitz_x, grid.steps());
                record["bound_conservative"] =
                    conservative_bound(metrics.skipped_count, bounds.curvature_m,
                                       bounds.lipschitz_x, grid.steps(), max_skip);
            }
        }
        results << record.dump() << "\n";
    }
    results.close();

    if (registry) {
        registry->save((out_dir / "registry.json").string(),
                       (out_dir / "registry.log.jsonl").string());
        meta["registry"] = (out_dir / "registry.json").string();
    }
    {
        std::ofstream meta_out(out_dir / "run_meta.json");
        meta_out << meta.dump(2) << "\n";
    }
    regenerate_summary(out_dir);
    log << "wrote " << generations << " generation record(s) to "
        << (out_dir / "results.jsonl").string() << "\n";
}

// --- verify-bound ------------------------------------------------------------------

void cmd_verify_bound(const Config& config, const CliOptions& options, std::ostream& log) {
    const FieldHandle handle = build_field(config);
    if (!handle.analytic) {
        throw ConfigError("verify-bound requires an analytic field (field.id), not a checkpoint");
    }
    const std::uint64_t seed = resolve_seed(config, options);
    const std::vector<int> t_list = int_list_or(config, "verify.T", {50, 100, 200});
    const std::vector<int> s_list = int_list_or(config, "verify.S", {1, 5, 10});
    const fs::path out_dir = resolve_out_dir(config, options, "run.out");

    Rng rng(seed);
    const Eigen::VectorXd x0 = rng.normal_vector(handle.analytic->dimension());

    CsvWriter csv((out_dir / "bound.csv").string(),
                  {"T", "skipped", "empirical_error", "bound", "satisfied"});
    bool all_satisfied = true;
    for (const int steps : t_list) {
        for (const int skips : s_list) {
            const BoundReport report = verify_bound(*handle.analytic, TimeGrid::uniform(steps), x0,
                                                    spread_skip_indices(steps, skips));
            csv.write_row({std::to_string(report.steps), std::to_string(report.skipped_count),
                           csv_number(report.empirical_error), csv_number(report.bound),
                           report.satisfied ? "true" : "false"});
            log << "T=" << report.steps << " |S|=" << report.skipped_count
                << " e_T=" << report.empirical_error << " bound=" << report.bound
                << (report.satisfied ? " ok" : " VIOLATED") << "\n";
            all_satisfied = all_satisfied && report.satisfied;
        }
    }
    log << (all_satisfied ? "all cells satisfied\n" : "bound violations present\n");
    log << "wrote " << (out_dir / "bound.csv").string() << "\n";
}

// --- regret ------------------------------------------------------------------------

void cmd_regret(const Config& config, const CliOptions& options, std::ostream& log) {
    const std::vector<double> means = config.get_double_list("regret.means");
    const long horizon = config.get_long_or("regret.horizon", 1000);
    const double gamma = config.get_double_or("regret.gamma", 2.0);
    const long seeds = config.get_long_or("regret.seeds", 5);
    if (horizon < 1 || seeds < 1) {
        throw ConfigError("regret.horizon and regret.seeds must be >= 1");
    }
    const std::uint64_t base_seed = resolve_seed(config, options);
    const fs::path out_dir = resolve_out_dir(config, options, "run.out");

    const SyntheticBandit instance{means};
    std::vector<double> mean_regret(static_cast<std::size_t>(horizon), 0.0);
    double mean_skip_rate = 0.0;
    for (long s = 0; s < seeds; ++s) {
        const UcbRunResult run =
            run_ucb_on_synthetic(instance, horizon, gamma, base_seed + static_cast<std::uint64_t>(s));
        for (long n = 0; n < horizon; ++n) {
            mean_regret[static_cast<std::size_t>(n)] += run.regret[static_cast<std::size_t>(n)];
        }
        mean_skip_rate += run.total_skips / static_cast<double>(horizon);
    }
    for (auto& r : mean_regret) {
        r /= static_cast<double>(seeds);
    }
    mean_skip_rate /= static_cast<double>(seeds);

    CsvWriter csv((out_dir / "regret.csv").string(), {"n", "mean_regret"});
    for (long n = 0; n < horizon; ++n) {
        csv.write_row({std::to_string(n + 1), csv_number(mean_regret[static_cast<std::size_t>(n)])});
    }
    log << "mean regret after " << horizon << " rounds: " << mean_regret.back() << " ("
        << seeds << " seeds)\n";
    log << "mean skips per round E_s/n: " << mean_skip_rate << "\n";
    log << "wrote " << (out_dir / "regret.csv").string() << "\n";
}

// --- report ------------------------------------------------------------------------

namespace {

struct RunData {
    std::string name;
    std::vector<nlohmann::json> records;
};

std::vector<nlohmann::json> read_records(const fs::path& file) {
    std::ifstream in(file);
    std::vector<nlohmann::json> records;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) {
            records.push_back(nlohmann::json::parse(line));
        }
    }
    return records;
}

std::vector<RunData> collect_runs(const fs::path& root) {
    std::vector<RunData> runs;
    if (fs::exists(root / "results.jsonl")) {
        runs.push_back({root.filename().string(), read_records(root / "results.jsonl")});
    } else if (fs::is_directory(root)) {
        std::vector<fs::path> subdirs;
        for (const auto& entry : fs::directory_iterator(root)) {
            if (entry.is_directory() && fs::exists(entry.path() / "results.jsonl")) {
                subdirs.push_back(entry.path());
            }
        }
        std::sort(subdirs.begin(), subdirs.end());
        for (const auto& dir : subdirs) {
            runs.push_back({dir.filename().string(), read_records(dir / "results.jsonl")});
        }
    }
    bool any_records = false;
    for (const auto& run : runs) {
        any_records = any_records || !run.records.empty();
    }
    if (!any_records) {
        throw ConfigError("no results found under " + root.string());
    }
    return runs;
}

}  // namespace

void cmd_report(const Config& config, const CliOptions& options, std::ostream& log) {
    const fs::path results_dir = config.get_string("report.results");
    if (!fs::exists(results_dir)) {
        throw ConfigError("results directory does not exist: " + results_dir.string());
    }
    const std::string out_name = options.out ? *options.out
                                             : config.get_string_or("report.out",
                                                                    (results_dir / "report").string());
    fs::create_directories(out_name);
    const fs::path out_dir(out_name);
    const std::vector<double> region_edges =
        config.has("report.regions") ? config.get_double_list("report.regions")
                                     : std::vector<double>{0.0, 0.2, 0.8, 1.0};

    const std::vector<RunData> runs = collect_runs(results_dir);

    CsvWriter speed_csv((out_dir / "speedup_vs_deviation.csv").string(),
                        {"run", "method", "records", "mean_eval_count", "mean_speedup",
                         "mean_final_deviation"});
    CsvWriter hist_csv((out_dir / "skip_histogram.csv").string(),
                       {"run", "region_lo", "region_hi", "arm", "count"});
    CsvWriter rel_csv((out_dir / "rel_l1.csv").string(), {"run", "index", "mean_rel_l1"});
    CsvWriter series_csv((out_dir / "eval_series.csv").string(),
                         {"run", "generation", "eval_count"});
    std::ofstream report_txt(out_dir / "report.txt");

    for (const auto& run : runs) {
        if (run.records.empty()) {
            continue;
        }
        double sum_eval = 0.0;
        double sum_speedup = 0.0;
        double sum_dev = 0.0;
        std::map<std::pair<std::size_t, int>, long> histogram;  // (region, arm) -> count
        std::vector<double> rel_sum;
        long rel_count = 0;
        for (const auto& rec : run.records) {
            sum_eval += rec.at("eval_count").get<double>();
            sum_speedup += rec.at("speedup").get<double>();
            sum_dev += rec.at("final_deviation").get<double>();
            series_csv.write_row({run.name, std::to_string(rec.at("generation").get<long>()),
                                  std::to_string(rec.at("eval_count").get<long>())});
            for (const auto& d : rec.at("decisions")) {
                const double t = d.at("t").get<double>();
                for (std::size_t r = 0; r + 1 < region_edges.size(); ++r) {
                    const bool last = r + 2 == region_edges.size();
                    if (t >= region_edges[r] &&
                        (t < region_edges[r + 1] || (last && t <= region_edges[r + 1]))) {
                        ++histogram[{r, d.at("arm").get<int>()}];
                        break;
                    }
                }
            }
            if (rec.contains("rel_l1")) {
                const auto series = rec.at("rel_l1").get<std::vector<double>>();
                rel_sum.resize(std::max(rel_sum.size(), series.size()), 0.0);
                for (std::size_t i = 0; i < series.size(); ++i) {
                    rel_sum[i] += series[i];
                }
                ++rel_count;
            }
        }
        const double n = static_cast<double>(run.records.size());
        speed_csv.write_row({run.name, run.records.front().at("method").get<std::string>(),
                             std::to_string(run.records.size()), csv_number(sum_eval / n),
                             csv_number(sum_speedup / n), csv_number(sum_dev / n)});
        for (const auto& [key, count] : histogram) {
            hist_csv.write_row({run.name, csv_number(region_edges[key.first]),
                                csv_number(region_edges[key.first + 1]), std::to_string(key.second),
                                std::to_string(count)});
        }
        for (std::size_t i = 0; i < rel_sum.size(); ++i) {
            rel_csv.write_row({run.name, std::to_string(i),
                               csv_number(rel_sum[i] / static_cast<double>(rel_count))});
        }
        report_txt << "run " << run.name << ": " << run.records.size() << " generation(s), method "
                   << run.records.front().at("method").get<std::string>() << "\n"
                   << "  mean eval count     " << csv_number(sum_eval / n) << "\n"
                   << "  mean speedup        " << csv_number(sum_speedup / n) << "\n"
                   << "  mean final deviation " << csv_number(sum_dev / n) << "\n";
    }
    log << "report written to " << out_dir.string() << "\n";
}

// --- dispatch ------------------------------------------------------------------------

int dispatch(const std::string& command, const Config& config, const CliOptions& options,
             std::ostream& log, std::ostream& err) {
    try {
        if (command == "train-toy") {
            cmd_train_toy(config, options, log);
        } else if (command == "run") {
            cmd_run(config, options, log);
        } else if (command == "verify-bound") {
            cmd_verify_bound(config, options, log);
        } else if (command == "regret") {
            cmd_regret(config, options, log);
        } else if (command == "report") {
            cmd_report(config, options, log);
        } else {
            throw ConfigError("unknown command '" + command + "'");
        }
        return 0;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int dispatch_config_file(const std::string& command, const std::string& config_path,
                         const CliOptions& options, std::ostream& log, std::ostream& err) {
    Config config;
    try {
        config = Config::parse_file(config_path);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 1;
    }
    return dispatch(command, config, options, log, err);
}

}  // namespace fastflow

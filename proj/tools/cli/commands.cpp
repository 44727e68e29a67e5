#include "commands.hpp"

#include "solarcast/dataio.hpp"
#include "solarcast/error.hpp"
#include "solarcast/evaluate/ablation.hpp"
#include "solarcast/evaluate/cv.hpp"
#include "solarcast/evaluate/pipeline.hpp"
#include "solarcast/evaluate/report.hpp"
#include "solarcast/evaluate/search.hpp"
#include "solarcast/features.hpp"
#include "solarcast/parallel.hpp"
#include "solarcast/preprocess.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>

namespace solarcast::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using dataio::TimeFrame;

namespace {

struct CommandError {
  int exit_code;
  std::string message;
};

template <typename F>
auto data_step(const std::string& context, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw CommandError{kExitUsage, context + ": " + e.what()};
  } catch (const json::exception& e) {
    throw CommandError{kExitUsage, context + ": " + e.what()};
  }
}

template <typename F>
auto training_step(const std::string& context, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw CommandError{kExitTraining, context + ": " + e.what()};
  }
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SOLARCAST_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      // Fall through to the built-in default.
    }
  }
  return 42;
}

struct Options {
  std::string pv;
  std::string weather;
  std::string frame;
  std::string in_dir;
  std::string out_dir = ".";
  std::string model_file;
  std::optional<std::string> horizon;
  std::string model = "rf";
  std::optional<std::string> features;
  std::optional<std::size_t> n_priors;
  std::optional<std::string> split;
  std::optional<double> test_fraction;
  std::uint64_t seed = 42;
  std::size_t threads = 0;
  std::size_t max_priors = features::kMaxPriors;
  std::size_t folds = 10;
  std::size_t repeats = 5;
  std::size_t search = 0;
  bool all_rows = false;
  std::vector<std::string> overrides;  // key=value on the model config
};

class Context {
 public:
  Context(const Options& opts, std::ostream& out, std::ostream& err) : opts_(opts), out_(out), err_(err) {}

  const Options& opts() const { return opts_; }
  std::ostream& out() { return out_; }
  std::ostream& err() { return err_; }

  fs::path out_path(const std::string& name) const { return fs::path(opts_.out_dir) / name; }

  void ensure_out_dir() const {
    std::error_code ec;
    fs::create_directories(opts_.out_dir, ec);
    if (ec) throw CommandError{kExitUsage, "cannot create output directory " + opts_.out_dir + ": " + ec.message()};
  }

  std::ofstream open(const std::string& name) const {
    const auto path = out_path(name);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw CommandError{kExitUsage, "cannot write " + path.string()};
    return f;
  }

  void write_json(const std::string& name, const json& j) const {
    auto f = open(name);
    f << j.dump(2) << '\n';
  }

  bool has_sources() const { return !opts_.pv.empty() && !opts_.weather.empty(); }

  const dataio::ParsedSources& sources() {
    if (!sources_) {
      if (!has_sources()) throw CommandError{kExitUsage, "--pv and --weather are both required"};
      auto pv = data_step(opts_.pv, [&] { return dataio::parse_pv(opts_.pv); });
      auto weather = data_step(opts_.weather, [&] { return dataio::parse_weather(opts_.weather); });
      sources_ = dataio::ParsedSources{std::move(pv), std::move(weather)};
    }
    return *sources_;
  }

  std::optional<TimeFrame> requested_horizon() const {
    if (!opts_.horizon) return std::nullopt;
    return dataio::parse_time_frame(*opts_.horizon);
  }

  std::vector<TimeFrame> horizons() const {
    if (auto h = requested_horizon()) return {*h};
    return {dataio::kAllTimeFrames.begin(), dataio::kAllTimeFrames.end()};
  }

  /// --frame, else --pv/--weather, else <in>/frame_<h>.csv.
  dataio::AlignedFrame load_frame(std::optional<TimeFrame> horizon, dataio::IngestLog* log = nullptr) {
    if (!opts_.frame.empty()) {
      auto frame = data_step(opts_.frame, [&] { return dataio::read_frame_csv(opts_.frame); });
      if (horizon && frame.frame != *horizon) {
        throw CommandError{kExitUsage, opts_.frame + ": frame spacing is " + std::string(dataio::to_string(frame.frame)) +
                                           ", requested " + std::string(dataio::to_string(*horizon))};
      }
      return frame;
    }
    const auto h = horizon.value_or(TimeFrame::OneHour);
    if (has_sources()) {
      const auto& src = sources();
      return data_step("building the " + std::string(dataio::to_string(h)) + " frame",
                       [&] { return dataio::build_frame(src, h, log); });
    }
    const auto dir = opts_.in_dir.empty() ? fs::path(opts_.out_dir) : fs::path(opts_.in_dir);
    const auto path = dir / ("frame_" + std::string(dataio::to_string(h)) + ".csv");
    return data_step(path.string(), [&] { return dataio::read_frame_csv(path); });
  }

  features::Preset preset(features::Preset fallback = features::Preset::Full) const {
    return opts_.features ? *features::parse_preset(*opts_.features) : fallback;
  }

  evaluate::SplitSpec split_spec() const {
    evaluate::SplitSpec s;
    if (opts_.split) s.mode = *evaluate::parse_split_mode(*opts_.split);
    if (opts_.test_fraction) s.test_fraction = *opts_.test_fraction;
    s.seed = opts_.seed;
    return s;
  }

  models::ModelConfig apply_overrides(const models::ModelConfig& base) const {
    if (opts_.overrides.empty()) return base;
    json j;
    models::to_json(j, base);
    for (const auto& kv : opts_.overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw CommandError{kExitUsage, "--set expects key=value, got '" + kv + "'"};
      const auto key = kv.substr(0, eq);
      const auto text = kv.substr(eq + 1);
      if (!j.contains(key)) throw CommandError{kExitUsage, "unknown hyperparameter '" + key + "'"};
      j[key] = json::accept(text) ? json::parse(text) : json(text);
    }
    return data_step("--set", [&] {
      auto c = models::config_from_json(j);
      models::validate(c);
      return c;
    });
  }

  evaluate::PipelineConfig pipeline(models::ModelKind kind, TimeFrame h, features::Preset preset,
                                    std::size_t n_priors) const {
    auto config = evaluate::default_pipeline(kind, h, preset, n_priors);
    config.model = apply_overrides(config.model);
    return config;
  }

  void warn(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) err_ << "solarcast: warning: " << w << '\n';
  }

 private:
  const Options& opts_;
  std::ostream& out_;
  std::ostream& err_;
  std::optional<dataio::ParsedSources> sources_;
};

json split_json(const evaluate::SplitSpec& s) {
  return {{"mode", evaluate::to_string(s.mode)}, {"test_fraction", s.test_fraction}, {"seed", s.seed}};
}

models::ModelKind model_kind(const std::string& name) {
  const auto kind = models::parse_model_kind(name);
  if (!kind) throw CommandError{kExitUsage, "unknown model '" + name + "'"};
  return *kind;
}

json metrics_json(const evaluate::MetricsReport& m) {
  json j;
  evaluate::to_json(j, m);
  return j;
}

// ---------------------------------------------------------------------------

void cmd_ingest(Context& ctx) {
  if (!ctx.has_sources()) throw CommandError{kExitUsage, "ingest needs --pv and --weather"};
  ctx.ensure_out_dir();
  const auto& src = ctx.sources();
  json log = {{"pv",
               {{"path", ctx.opts().pv},
                {"records", src.pv.records.size()},
                {"rejects", src.pv.rejects.size()},
                {"out_of_range", src.pv.out_of_range.size()}}},
              {"weather",
               {{"path", ctx.opts().weather},
                {"records", src.weather.records.size()},
                {"rejects", src.weather.rejects.size()},
                {"out_of_range", src.weather.out_of_range.size()},
                {"cadence_violations", src.weather.cadence_violations}}},
              {"frames", json::object()}};
  auto reject_rows = [](const auto& rejects) {
    json rows = json::array();
    for (std::size_t i = 0; i < rejects.size() && i < 20; ++i) {
      rows.push_back({{"row", rejects[i].row}, {"reason", rejects[i].reason}});
    }
    return rows;
  };
  log["pv"]["first_rejects"] = reject_rows(src.pv.rejects);
  log["weather"]["first_rejects"] = reject_rows(src.weather.rejects);
  ctx.out() << "pv: " << src.pv.records.size() << " records, " << src.pv.rejects.size() << " rejected\n";
  ctx.out() << "weather: " << src.weather.records.size() << " records, " << src.weather.rejects.size() << " rejected\n";

  for (auto h : ctx.horizons()) {
    dataio::IngestLog info;
    const auto frame = ctx.load_frame(h, &info);
    const auto name = "frame_" + std::string(dataio::to_string(h)) + ".csv";
    {
      auto f = ctx.open(name);
      dataio::write_frame_csv(frame, f);
    }
    log["frames"][std::string(dataio::to_string(h))] = {{"file", name},
                                                        {"rows", info.rows},
                                                        {"meter_resets", info.meter_resets},
                                                        {"empty_windows", info.empty_windows},
                                                        {"filled_values", info.filled_values}};
    ctx.out() << name << ": " << info.rows << " rows, " << info.filled_values << " values filled, "
              << info.meter_resets << " meter resets\n";
  }
  ctx.write_json("ingest_log.json", log);
}

void cmd_analyze(Context& ctx) {
  const auto frame = ctx.load_frame(ctx.requested_horizon());
  ctx.ensure_out_dir();
  const auto& opts = ctx.opts();

  const std::span<const double> target(frame.target.data(), static_cast<std::size_t>(frame.target.size()));
  const auto nonzero = preprocess::exclude_zeros(target);
  auto skew = [&](std::span<const double> v, const char* label) -> json {
    try {
      return preprocess::skewness(v).skewness;
    } catch (const Error& e) {
      ctx.err() << "solarcast: warning: " << label << " skewness undefined: " << e.what() << '\n';
      return nullptr;
    }
  };
  std::vector<double> rooted(nonzero.size());
  for (std::size_t i = 0; i < nonzero.size(); ++i) rooted[i] = std::sqrt(std::max(nonzero[i], 0.0));
  ctx.write_json("skewness.json", {{"horizon", dataio::to_string(frame.frame)},
                                   {"raw", skew(target, "raw")},
                                   {"zero_excluded", skew(nonzero, "zero-excluded")},
                                   {"transformed", skew(rooted, "transformed")},
                                   {"n", target.size()},
                                   {"n_nonzero", nonzero.size()}});

  json outliers = {{"horizon", dataio::to_string(frame.frame)}, {"n_nonzero", nonzero.size()}};
  if (nonzero.size() >= 2) {
    const auto q = preprocess::quartiles(nonzero);
    const auto bounds = preprocess::OutlierBounds::from(q);
    const auto mask = preprocess::detect_outliers(nonzero, bounds);
    outliers.update({{"q1", q.q1},
                     {"q3", q.q3},
                     {"iqr", q.iqr},
                     {"lower", bounds.lower},
                     {"upper", bounds.upper},
                     {"flagged", std::count(mask.begin(), mask.end(), true)}});
  } else {
    outliers.update({{"q1", nullptr}, {"q3", nullptr}, {"iqr", nullptr}, {"lower", nullptr}, {"upper", nullptr}, {"flagged", 0}});
  }
  ctx.write_json("outliers.json", outliers);

  const auto data = data_step("features", [&] {
    return features::build_features(frame, ctx.preset(), opts.n_priors.value_or(1));
  });
  const auto corr = data_step("correlation", [&] { return features::pearson(data); });
  for (const auto& name : corr.excluded) {
    ctx.err() << "solarcast: warning: constant column '" << name << "' left out of the correlation matrix\n";
  }
  {
    auto f = ctx.open("correlation.csv");
    features::write_correlation_csv(corr, f);
  }

  const auto split = data_step("split", [&] { return evaluate::split(data.rows(), ctx.split_spec()); });
  const auto train = data.take(split.train);
  const auto test = data.take(split.test);
  const auto config = ctx.pipeline(models::ModelKind::RandomForest, data.frame, ctx.preset(), opts.n_priors.value_or(1));
  const auto report = training_step("importance", [&] {
    const auto pipeline = evaluate::FittedPipeline::fit(config, train, opts.seed);
    return features::permutation_importance([&](const Matrix& x) { return pipeline.predict_kwh(x); }, test.features,
                                            test.target, test.column_names, opts.repeats, opts.seed);
  });
  {
    auto f = ctx.open("importance.csv");
    features::write_importance_csv(report, f);
  }
  ctx.out() << "analyzed " << frame.rows() << " rows at " << dataio::to_string(frame.frame) << "\n";
}

void cmd_train(Context& ctx) {
  const auto& opts = ctx.opts();
  const auto kind = model_kind(opts.model);
  const auto frame = ctx.load_frame(ctx.requested_horizon());
  ctx.ensure_out_dir();
  const auto preset = ctx.preset();
  const auto n_priors = opts.n_priors.value_or(1);
  const auto data = data_step("features", [&] { return features::build_features(frame, preset, n_priors); });
  auto config = ctx.pipeline(kind, frame.frame, preset, n_priors);
  const auto split = ctx.split_spec();

  json search_json;
  if (opts.search > 0) {
    auto space = evaluate::default_search_space(kind, frame.frame);
    space.base = config.model;
    space.n_iterations = opts.search;
    space.seed = opts.seed;
    const auto idx = data_step("split", [&] { return evaluate::split(data.rows(), split); });
    const auto result = training_step("search", [&] { return evaluate::random_search(space, data.take(idx.train), config); });
    config.model = result.best;
    evaluate::to_json(search_json, result);
    ctx.write_json("search.json", search_json);
  }

  const auto result = training_step("training", [&] { return evaluate::run_holdout(config, data, split, opts.seed); });
  ctx.warn(result.pipeline.model().diagnostics().warnings);

  json model;
  result.pipeline.to_json(model);
  model["run"] = {{"split", split_json(split)}, {"seed", opts.seed}};
  ctx.write_json("model.json", model);

  json mj;
  models::to_json(mj, config.model);
  ctx.write_json("metrics.json", {{"model", models::to_string(kind)},
                                  {"horizon", dataio::to_string(frame.frame)},
                                  {"features", features::to_string(preset)},
                                  {"n_priors", n_priors},
                                  {"columns", result.pipeline.columns()},
                                  {"config", mj},
                                  {"split", split_json(split)},
                                  {"seed", opts.seed},
                                  {"n_train", result.split.train.size()},
                                  {"n_train_kept", result.pipeline.training_rows()},
                                  {"outliers_dropped", result.pipeline.transform().outliers_dropped},
                                  {"metrics", metrics_json(result.metrics)},
                                  {"warnings", result.pipeline.model().diagnostics().warnings}});
  {
    auto f = ctx.open("metrics_table.csv");
    evaluate::write_metrics_table_csv({{kind, frame.frame, result.metrics}}, f);
  }
  {
    auto f = ctx.open("scatter.csv");
    evaluate::write_scatter_csv(frame.frame, result.actual_kwh, result.predicted_kwh, f);
  }
  ctx.out() << models::to_string(kind) << ' ' << dataio::to_string(frame.frame) << ": r2="
            << (result.metrics.r2 ? std::to_string(*result.metrics.r2) : "n/a") << " mae=" << result.metrics.mae
            << " rmse=" << result.metrics.rmse << " (n_test=" << result.metrics.n_test << ")\n";
}

void cmd_evaluate(Context& ctx) {
  const auto& opts = ctx.opts();
  const auto path = !opts.model_file.empty()
                        ? fs::path(opts.model_file)
                        : (opts.in_dir.empty() ? fs::path(opts.out_dir) : fs::path(opts.in_dir)) / "model.json";
  const json doc = data_step(path.string(), [&] {
    std::ifstream f(path);
    if (!f) throw Error(Errc::FileNotFound, "no such model file");
    return json::parse(f);
  });
  const auto pipeline = data_step(path.string(), [&] { return evaluate::FittedPipeline::from_json(doc); });
  const auto h = pipeline.config().horizon;
  if (auto requested = ctx.requested_horizon(); requested && *requested != h) {
    throw CommandError{kExitUsage, "model was trained for " + std::string(dataio::to_string(h))};
  }
  const auto frame = ctx.load_frame(h);
  ctx.ensure_out_dir();
  const auto preset = ctx.preset(pipeline.config().preset);
  const auto n_priors = opts.n_priors.value_or(pipeline.config().n_priors);
  const auto data = training_step("features", [&] { return features::build_features(frame, preset, n_priors); });

  evaluate::SplitSpec split;
  if (doc.contains("run")) {
    const auto& s = doc.at("run").at("split");
    split.mode = evaluate::parse_split_mode(s.at("mode").get<std::string>()).value_or(evaluate::SplitMode::Shuffled);
    split.test_fraction = s.at("test_fraction").get<double>();
    split.seed = s.at("seed").get<std::uint64_t>();
  }
  if (opts.split) split.mode = *evaluate::parse_split_mode(*opts.split);
  if (opts.test_fraction) split.test_fraction = *opts.test_fraction;

  features::FeatureMatrix rows = data;
  if (!opts.all_rows) rows = data.take(data_step("split", [&] { return evaluate::split(data.rows(), split); }).test);
  const Vector predicted = training_step("prediction", [&] { return pipeline.predict_kwh(rows); });
  const auto report = data_step("metrics", [&] { return evaluate::metrics(rows.target, predicted); });

  const auto kind = pipeline.model().kind();
  ctx.write_json("metrics.json", {{"model", models::to_string(kind)},
                                  {"horizon", dataio::to_string(h)},
                                  {"features", features::to_string(preset)},
                                  {"n_priors", n_priors},
                                  {"model_file", path.string()},
                                  {"rows", opts.all_rows ? "all" : "test"},
                                  {"split", split_json(split)},
                                  {"metrics", metrics_json(report)}});
  {
    auto f = ctx.open("metrics_table.csv");
    evaluate::write_metrics_table_csv({{kind, h, report}}, f);
  }
  {
    auto f = ctx.open("scatter.csv");
    evaluate::write_scatter_csv(h, rows.target, predicted, f);
  }
  ctx.out() << "evaluated " << rows.rows() << " rows: mae=" << report.mae << " rmse=" << report.rmse << '\n';
}

void cmd_cv(Context& ctx) {
  const auto& opts = ctx.opts();
  const auto kind = model_kind(opts.model);
  const auto frame = ctx.load_frame(ctx.requested_horizon());
  ctx.ensure_out_dir();
  const auto preset = ctx.preset();
  const auto n_priors = opts.n_priors.value_or(1);
  const auto data = data_step("features", [&] { return features::build_features(frame, preset, n_priors); });
  const auto config = ctx.pipeline(kind, frame.frame, preset, n_priors);
  const auto result = training_step("cross-validation", [&] { return evaluate::kfold_cv(config, data, opts.folds, opts.seed); });
  json cv;
  evaluate::to_json(cv, result);
  ctx.write_json("cv.json", {{"model", models::to_string(kind)},
                             {"horizon", dataio::to_string(frame.frame)},
                             {"features", features::to_string(preset)},
                             {"n_priors", n_priors},
                             {"seed", opts.seed},
                             {"cv", cv}});
  ctx.out() << models::to_string(kind) << ' ' << dataio::to_string(frame.frame) << ": mean r2 over " << result.k
            << " folds = " << result.mean << '\n';
}

void cmd_ablate(Context& ctx) {
  const auto& opts = ctx.opts();
  std::vector<models::ModelKind> kinds;
  if (opts.model == "all") {
    kinds.assign(models::kAllModelKinds.begin(), models::kAllModelKinds.end());
  } else {
    kinds.push_back(model_kind(opts.model));
  }
  std::vector<dataio::AlignedFrame> frames;
  for (auto h : ctx.horizons()) frames.push_back(ctx.load_frame(h));
  ctx.ensure_out_dir();

  evaluate::AblationOptions options;
  options.max_priors = opts.max_priors;
  options.preset = ctx.preset();
  options.split = ctx.split_spec();
  options.seed = opts.seed;
  options.config = [&](models::ModelKind kind, TimeFrame h) { return ctx.apply_overrides(models::default_config(kind, h)); };
  const auto result = training_step("ablation", [&] { return evaluate::ablate_priors(kinds, frames, options); });
  {
    auto f = ctx.open("ablation.csv");
    evaluate::write_ablation_csv(result, f);
  }
  json cells = json::array();
  for (const auto& c : result.cells) {
    cells.push_back({{"model", models::to_string(c.model)},
                     {"horizon", dataio::to_string(c.horizon)},
                     {"n_priors", c.n_priors},
                     {"metrics", metrics_json(c.metrics)}});
  }
  ctx.write_json("ablation.json", {{"features", features::to_string(options.preset)},
                                   {"split", split_json(options.split)},
                                   {"seed", opts.seed},
                                   {"cells", cells}});
  ctx.out() << "ablation: " << result.cells.size() << " cells\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opts;
  opts.seed = default_seed();

  CLI::App app{"Solar PV output forecasting from weather data", "solarcast"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every command");

  const std::vector<std::string> horizons{"30min", "1h", "4h"};
  const std::vector<std::string> model_names{"knn", "rf", "gbt", "mlp", "svr"};

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", opts.seed, "Random seed (default: $SOLARCAST_SEED or 42)");
    cmd->add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--threads", opts.threads, "Worker threads (0: $SOLARCAST_THREADS or all cores)");
  };
  auto add_sources = [&](CLI::App* cmd) {
    cmd->add_option("--pv", opts.pv, "PV cumulative output CSV");
    cmd->add_option("--weather", opts.weather, "Hourly weather CSV");
  };
  auto add_frame = [&](CLI::App* cmd) {
    add_sources(cmd);
    cmd->add_option("--frame", opts.frame, "Aligned frame CSV written by ingest");
    cmd->add_option("--in", opts.in_dir, "Directory holding frame_<horizon>.csv (default: --out)");
    cmd->add_option("--horizon", opts.horizon, "30min, 1h or 4h")->check(CLI::IsMember(horizons));
  };
  auto add_features = [&](CLI::App* cmd) {
    cmd->add_option("--features", opts.features, "Feature preset: full or reduced")
        ->check(CLI::IsMember({"full", "reduced"}));
    cmd->add_option("--n-priors", opts.n_priors, "Prior output power lags (0-6)")->check(CLI::Range(0, 6));
  };
  auto add_split = [&](CLI::App* cmd) {
    cmd->add_option("--split", opts.split, "shuffled or chronological")->check(CLI::IsMember({"shuffled", "chronological"}));
    cmd->add_option("--test-fraction", opts.test_fraction, "Held-out fraction")->check(CLI::Range(0.0, 1.0));
  };
  auto add_model = [&](CLI::App* cmd, bool allow_all) {
    auto names = model_names;
    names.emplace_back("xgboost");
    if (allow_all) names.emplace_back("all");
    cmd->add_option("--model", opts.model, "Model kind")->check(CLI::IsMember(names))->capture_default_str();
    cmd->add_option("--set", opts.overrides, "Override a model hyperparameter, key=value (repeatable)");
  };

  auto* ingest = app.add_subcommand("ingest", "Parse the raw CSVs and write aligned frames");
  add_sources(ingest);
  ingest->add_option("--horizon", opts.horizon, "Only this horizon")->check(CLI::IsMember(horizons));
  add_common(ingest);

  auto* analyze = app.add_subcommand("analyze", "Correlation, importance, skewness and outlier reports");
  add_frame(analyze);
  add_features(analyze);
  add_split(analyze);
  analyze->add_option("--repeats", opts.repeats, "Permutations per feature")->check(CLI::PositiveNumber);
  analyze->add_option("--set", opts.overrides, "Override a random forest hyperparameter, key=value");
  add_common(analyze);

  auto* train = app.add_subcommand("train", "Fit a model on a holdout split and report test metrics");
  add_frame(train);
  add_model(train, false);
  add_features(train);
  add_split(train);
  train->add_option("--search", opts.search, "Random-search iterations before the final fit (0: tuned defaults)");
  add_common(train);

  auto* eval = app.add_subcommand("evaluate", "Score a saved model on a frame");
  add_frame(eval);
  eval->add_option("--model-file", opts.model_file, "model.json (default: <in>/model.json)");
  add_features(eval);
  add_split(eval);
  eval->add_flag("--all-rows", opts.all_rows, "Score every row instead of the held-out split");
  add_common(eval);

  auto* cv = app.add_subcommand("cv", "k-fold cross-validation");
  add_frame(cv);
  add_model(cv, false);
  add_features(cv);
  cv->add_option("--folds", opts.folds, "Number of folds")->check(CLI::Range(2, 1000));
  add_common(cv);

  auto* ablate = app.add_subcommand("ablate", "Prior output power ablation over horizons");
  add_frame(ablate);
  add_model(ablate, true);
  add_features(ablate);
  add_split(ablate);
  ablate->add_option("--max-priors", opts.max_priors, "Largest number of priors")->check(CLI::Range(0, 6));
  add_common(ablate);

  std::vector<std::string> rest(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(std::move(rest));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  // Restore the process-wide worker count when this invocation returns.
  struct ThreadScope {
    std::size_t saved = default_threads();
    ~ThreadScope() { set_default_threads(saved); }
  } thread_scope;
  if (opts.threads > 0) set_default_threads(opts.threads);
  Context ctx(opts, out, err);
  try {
    if (*ingest) cmd_ingest(ctx);
    else if (*analyze) cmd_analyze(ctx);
    else if (*train) cmd_train(ctx);
    else if (*eval) cmd_evaluate(ctx);
    else if (*cv) cmd_cv(ctx);
    else if (*ablate) cmd_ablate(ctx);
  } catch (const CommandError& e) {
    err << "solarcast: error: " << e.message << '\n';
    return e.exit_code;
  } catch (const Error& e) {
    err << "solarcast: error: " << e.what() << '\n';
    return kExitTraining;
  } catch (const std::exception& e) {
    err << "solarcast: error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace solarcast::cli

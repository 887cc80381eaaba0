#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "oud/data.hpp"
#include "oud/forward.hpp"
#include "oud/io.hpp"
#include "oud/model.hpp"
#include "oud/parallel.hpp"
#include "oud/sampler.hpp"
#include "oud/stats.hpp"
#include "oud/svg.hpp"
#include "oud/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace oud;

namespace {

struct CommonOpts {
  std::uint64_t seed = 1;
  std::string output_dir = ".";
  bool quiet = false;
};

void add_common(CLI::App* sub, CommonOpts& c) {
  sub->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
  sub->add_option("--output-dir", c.output_dir, "Directory for output files")
      ->capture_default_str();
  sub->add_flag("--quiet", c.quiet, "Suppress progress output");
}

struct ScheduleOpts {
  int steps = kDefaultSteps;
  double beta_min = kDefaultBetaMin;
  double beta_max = kDefaultBetaMax;
};

void add_schedule(CLI::App* sub, ScheduleOpts& s) {
  sub->add_option("--steps", s.steps, "Number of noising steps")->capture_default_str();
  sub->add_option("--beta-min", s.beta_min, "Smallest per-step noise variance")
      ->capture_default_str();
  sub->add_option("--beta-max", s.beta_max, "Largest per-step noise variance")
      ->capture_default_str();
}

std::string out_path(const CommonOpts& c, const std::string& name) {
  const fs::path p(name);
  if (p.is_absolute()) return name;
  return (fs::path(c.output_dir) / p).string();
}

void warn_terminal(const NoiseSchedule& s) {
  if (!s.terminal_close()) {
    std::fprintf(stderr,
                 "warning: terminal marginal is far from standard normal "
                 "(cumulative noise scale %.6f < 0.999); raise --steps or --beta-max\n",
                 s.cum_beta(s.n_steps()));
  }
}

std::vector<double> parse_double_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t pos = std::min(s.find(',', start), s.size());
    out.push_back(parse_double(s.substr(start, pos - start), what));
    start = pos + 1;
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& s, const std::string& what) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t pos = std::min(s.find(',', start), s.size());
    out.push_back(static_cast<int>(parse_int(s.substr(start, pos - start), what)));
    start = pos + 1;
  }
  return out;
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) s += ',';
    s += format_double(v[i]);
  }
  return s;
}

// Resolved-argument manifest: rerunning `ou-diffuse <args>... --output-dir D`
// reproduces every listed output byte for byte.
void write_manifest(const CommonOpts& c, const std::string& subcommand,
                    const std::vector<std::string>& args,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs, double wall_seconds) {
  json j;
  j["tool"] = "ou-diffuse";
  j["subcommand"] = subcommand;
  j["args"] = args;
  j["inputs"] = inputs;
  j["outputs"] = outputs;
  j["seed"] = c.seed;
  j["threads"] = thread_count();
  j["wall_seconds"] = wall_seconds;
  atomic_write_text(out_path(c, subcommand + "_manifest.json"), j.dump(2) + "\n");
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

// ---- simulate ----------------------------------------------------------

struct SimulateOpts {
  CommonOpts common;
  ScheduleOpts schedule;
  std::string x0_str;
  int trajectories = 10;
  bool svg = false;
  std::string kde_steps;  // schedule indices, comma separated; empty = terminal
};

int run_simulate(const SimulateOpts& o) {
  Timer timer;
  const Vec x0 = parse_double_list(o.x0_str, "--x0");
  if (o.trajectories < 1) throw std::runtime_error("--trajectories must be >= 1");
  const NoiseSchedule sched = build_schedule(o.schedule.steps, o.schedule.beta_min,
                                             o.schedule.beta_max);
  warn_terminal(sched);
  if (o.svg && x0.size() != 1) {
    throw std::runtime_error("--svg figure is only drawn for 1-dimensional --x0");
  }
  if (o.svg && o.trajectories < 2) {
    throw std::runtime_error("--svg needs --trajectories >= 2 for density panels");
  }

  const std::vector<Vec> starts(static_cast<std::size_t>(o.trajectories), x0);
  const std::vector<Trajectory> trajs = simulate_batch(starts, sched, o.common.seed);

  // trajectory_id,n,t,x_1..x_d with one row per (trajectory, index)
  std::string csv = "trajectory_id,n,t";
  for (std::size_t c = 0; c < x0.size(); ++c) csv += ",x_" + std::to_string(c + 1);
  csv += '\n';
  for (std::size_t m = 0; m < trajs.size(); ++m) {
    for (int n = 0; n <= sched.n_steps(); ++n) {
      csv += std::to_string(m);
      csv += ',';
      csv += std::to_string(n);
      csv += ',';
      csv += format_double(sched.time(n));
      for (double xi : trajs[m].points[static_cast<std::size_t>(n)]) {
        csv += ',';
        csv += format_double(xi);
      }
      csv += '\n';
    }
  }
  atomic_write_text(out_path(o.common, "trajectories.csv"), csv);
  std::vector<std::string> outputs = {"trajectories.csv"};

  std::vector<int> kde_at;
  if (o.svg) {
    kde_at = o.kde_steps.empty() ? std::vector<int>{sched.n_steps()}
                                 : parse_int_list(o.kde_steps, "--kde-steps");
    for (int n : kde_at) {
      if (n < 1 || n > sched.n_steps()) {
        throw std::runtime_error("--kde-steps entries must lie in [1, N]");
      }
    }

    SvgPanel paths;
    paths.title = "forward noising paths";
    paths.x_label = "t";
    paths.y_label = "x";
    for (std::size_t m = 0; m < trajs.size(); ++m) {
      SvgSeries s;
      s.color = series_color(m);
      s.width = 1.0;
      for (int n = 0; n <= sched.n_steps(); ++n) {
        s.x.push_back(sched.time(n));
        s.y.push_back(trajs[m].points[static_cast<std::size_t>(n)][0]);
      }
      paths.series.push_back(std::move(s));
    }

    SvgPanel dens;
    dens.title = "marginal density by step";
    dens.x_label = "x";
    dens.y_label = "density";
    const std::vector<double> grid = make_grid(-4.0, 4.0, 161);
    for (std::size_t k = 0; k < kde_at.size(); ++k) {
      std::vector<double> vals;
      vals.reserve(trajs.size());
      for (const auto& tr : trajs) {
        vals.push_back(tr.points[static_cast<std::size_t>(kde_at[k])][0]);
      }
      const KdeCurve kde = kde_1d(vals, grid);
      SvgSeries s;
      s.x = kde.grid;
      s.y = kde.density;
      s.color = series_color(k);
      s.width = 1.5;
      s.label = "n=" + std::to_string(kde_at[k]);
      dens.series.push_back(std::move(s));
    }
    SvgSeries ref;
    ref.x = grid;
    for (double x : grid) {
      ref.y.push_back(std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi));
    }
    ref.color = "#333333";
    ref.dashed = true;
    ref.label = "N(0,1)";
    dens.series.push_back(std::move(ref));

    atomic_write_text(out_path(o.common, "forward.svg"),
                      svg_panel_grid({{paths, dens}}, 420, 320));
    outputs.push_back("forward.svg");
  }

  std::vector<std::string> args = {"simulate",
                                   "--x0", join_doubles(x0),
                                   "--trajectories", std::to_string(o.trajectories),
                                   "--steps", std::to_string(o.schedule.steps),
                                   "--beta-min", format_double(o.schedule.beta_min),
                                   "--beta-max", format_double(o.schedule.beta_max),
                                   "--seed", std::to_string(o.common.seed)};
  if (o.svg) {
    args.push_back("--svg");
    args.push_back("--kde-steps");
    args.push_back(join_ints(kde_at));
  }
  if (o.common.quiet) args.push_back("--quiet");
  write_manifest(o.common, "simulate", args, {}, outputs, timer.seconds());

  if (!o.common.quiet) {
    std::printf("simulated %d trajectories of %d steps (dim %zu) -> %s\n",
                o.trajectories, sched.n_steps(), x0.size(),
                out_path(o.common, "trajectories.csv").c_str());
  }
  return 0;
}

// ---- train -------------------------------------------------------------

struct TrainOpts {
  CommonOpts common;
  ScheduleOpts schedule;
  std::string input;
  std::string label_column;
  std::optional<int> class_filter;
  std::string target = "epsilon";
  std::string hidden = "128,128,128";
  std::string activation = "tanh";
  std::string optimizer = "adam";
  std::string timestep_sampling = "random";
  bool literal_trajectories = false;
  double lr = 1e-3;
  int epochs = 200;
  int batch = 128;
  int plateau_patience = 0;
  double plateau_tol = 1e-3;
  std::string model_out = "model.json";
};

int run_train(const TrainOpts& o) {
  Timer timer;
  SampleMatrix data = load_csv(o.input, o.label_column);
  if (o.class_filter.has_value()) {
    if (o.label_column.empty()) {
      throw std::runtime_error("--class requires --label-column");
    }
    data = data.select_label(*o.class_filter);
    if (data.rows == 0) {
      throw std::runtime_error("no rows with label " + std::to_string(*o.class_filter));
    }
  }

  const NoiseSchedule sched = build_schedule(o.schedule.steps, o.schedule.beta_min,
                                             o.schedule.beta_max);
  warn_terminal(sched);

  TrainConfig cfg;
  cfg.target = target_from_name(o.target);
  cfg.hidden_dims = parse_int_list(o.hidden, "--hidden");
  cfg.activation = activation_from_name(o.activation);
  cfg.optimizer = optimizer_from_name(o.optimizer);
  cfg.learning_rate = o.lr;
  cfg.epochs = o.epochs;
  cfg.batch_size = o.batch;
  cfg.seed = o.common.seed;
  cfg.timestep_sampling = timestep_sampling_from_name(o.timestep_sampling);
  cfg.literal_trajectories = o.literal_trajectories;
  cfg.plateau_patience = o.plateau_patience;
  cfg.plateau_tol = o.plateau_tol;

  const Scaler scaler = fit_scaler(data);
  const SampleMatrix scaled = apply_scaler(data, scaler);
  auto [model, report] = train_model(scaled, sched, cfg, scaler);

  save_model(model, out_path(o.common, o.model_out));
  std::string loss_csv = "epoch,loss\n";
  for (std::size_t e = 0; e < report.epoch_loss.size(); ++e) {
    loss_csv += std::to_string(e + 1) + "," + format_double(report.epoch_loss[e]) + "\n";
  }
  atomic_write_text(out_path(o.common, "loss.csv"), loss_csv);

  std::vector<std::string> args = {"train", "--input", o.input};
  if (!o.label_column.empty()) {
    args.push_back("--label-column");
    args.push_back(o.label_column);
  }
  if (o.class_filter.has_value()) {
    args.push_back("--class");
    args.push_back(std::to_string(*o.class_filter));
  }
  const std::vector<std::string> rest = {
      "--steps", std::to_string(o.schedule.steps),
      "--beta-min", format_double(o.schedule.beta_min),
      "--beta-max", format_double(o.schedule.beta_max),
      "--target", target_name(cfg.target),
      "--hidden", join_ints(cfg.hidden_dims),
      "--activation", activation_name(cfg.activation),
      "--optimizer", optimizer_name(cfg.optimizer),
      "--timestep-sampling", timestep_sampling_name(cfg.timestep_sampling),
      "--lr", format_double(cfg.learning_rate),
      "--epochs", std::to_string(cfg.epochs),
      "--batch", std::to_string(cfg.batch_size),
      "--plateau-patience", std::to_string(cfg.plateau_patience),
      "--plateau-tol", format_double(cfg.plateau_tol),
      "--model-out", o.model_out,
      "--seed", std::to_string(o.common.seed)};
  args.insert(args.end(), rest.begin(), rest.end());
  if (o.literal_trajectories) args.push_back("--literal-trajectories");
  if (o.common.quiet) args.push_back("--quiet");
  write_manifest(o.common, "train", args, {o.input}, {o.model_out, "loss.csv"},
                 timer.seconds());

  if (!o.common.quiet) {
    std::printf("trained on %zu rows (dim %zu): %d epochs, final loss %.6f%s -> %s\n",
                data.rows, data.cols, report.epochs_run, report.final_loss,
                report.plateau_stop ? " (plateau stop)" : "",
                out_path(o.common, o.model_out).c_str());
  }
  return 0;
}

// ---- generate ----------------------------------------------------------

struct GenerateOpts {
  CommonOpts common;
  std::string model_path;
  std::int64_t count = 1000;
  std::string method;  // empty = model default
  std::string out = "generated.csv";
};

int run_generate(const GenerateOpts& o) {
  Timer timer;
  const NoiseModel model = load_model(o.model_path);
  GenerationConfig cfg;
  cfg.count = o.count;
  cfg.seed = o.common.seed;
  cfg.method = o.method.empty() ? default_method(model.config.target)
                                : method_from_name(o.method);
  const SampleMatrix samples = generate_batch(model, cfg);
  save_csv(samples, out_path(o.common, o.out));

  const std::vector<std::string> args = {
      "generate", "--model", o.model_path, "--count", std::to_string(o.count),
      "--method", method_name(cfg.method), "--out", o.out,
      "--seed", std::to_string(o.common.seed)};
  write_manifest(o.common, "generate", args, {o.model_path}, {o.out}, timer.seconds());

  if (!o.common.quiet) {
    std::printf("generated %lld samples (dim %zu, method %s) -> %s\n",
                static_cast<long long>(o.count), samples.cols,
                method_name(cfg.method).c_str(), out_path(o.common, o.out).c_str());
  }
  return 0;
}

// ---- timeline ----------------------------------------------------------

struct TimelineOpts {
  CommonOpts common;
  std::string model_path;
  std::string data_path;
  std::int64_t count = 200;
  std::string snapshots;  // empty = 0, N/3, 2N/3, N
};

int run_timeline(const TimelineOpts& o) {
  Timer timer;
  const NoiseModel model = load_model(o.model_path);
  const int N = model.schedule.n_steps();
  std::vector<int> snap = o.snapshots.empty()
                              ? std::vector<int>{0, N / 3, 2 * N / 3, N}
                              : parse_int_list(o.snapshots, "--snapshots");
  std::sort(snap.begin(), snap.end());
  snap.erase(std::unique(snap.begin(), snap.end()), snap.end());
  for (int n : snap) {
    if (n < 0 || n > N) throw std::runtime_error("--snapshots entries must lie in [0, N]");
  }
  if (o.count < 1) throw std::runtime_error("--count must be >= 1");

  SampleMatrix data = load_csv(o.data_path);
  if (data.cols != model.feature_names.size()) {
    throw std::runtime_error("data dimension does not match the model");
  }
  const SampleMatrix scaled = apply_scaler(data, model.scaler);

  // Top row: reverse-chain states. Bottom row: data noised forward to the
  // same indices. Both in standardized space on shared axes.
  const auto reverse = generate_snapshots(model, o.count, o.common.seed, snap);

  auto scatter_of = [&](const SampleMatrix& m, const std::string& color) {
    SvgPoints pts;
    pts.color = color;
    pts.radius = 1.5;
    for (std::size_t r = 0; r < m.rows; ++r) {
      pts.x.push_back(m.at(r, 0));
      // 1-D data gets a deterministic vertical spread so density is visible
      pts.y.push_back(m.cols > 1
                          ? m.at(r, 1)
                          : static_cast<double>(r) / static_cast<double>(m.rows));
    }
    return pts;
  };

  std::vector<SvgPanel> top, bottom;
  for (std::size_t k = 0; k < snap.size(); ++k) {
    const int n = snap[k];
    SvgPanel pr;
    pr.title = "reverse chain, n=" + std::to_string(n);
    pr.x_label = model.feature_names[0];
    pr.y_label = scaled.cols > 1 ? model.feature_names[1] : "";
    pr.x_min = -3.5;
    pr.x_max = 3.5;
    if (scaled.cols > 1) {
      pr.y_min = -3.5;
      pr.y_max = 3.5;
    }
    pr.points.push_back(scatter_of(reverse[k].second, "#1f77b4"));
    top.push_back(std::move(pr));

    SampleMatrix noised = make_matrix(scaled.col_names);
    for (std::size_t r = 0; r < scaled.rows; ++r) {
      RngStream rng(o.common.seed, streams::trajectory(r));
      Vec z(scaled.cols);
      for (double& zi : z) zi = rng.next_normal();
      const Vec x0 = scaled.row_vec(r);
      Vec x(x0.size());
      const double g = model.schedule.cum_gamma(n);
      const double b = model.schedule.cum_beta(n);
      for (std::size_t c = 0; c < x.size(); ++c) x[c] = g * x0[c] + b * z[c];
      noised.add_row(x);
    }
    SvgPanel pf;
    pf.title = "forward noising, n=" + std::to_string(n);
    pf.x_label = model.feature_names[0];
    pf.y_label = scaled.cols > 1 ? model.feature_names[1] : "";
    pf.x_min = -3.5;
    pf.x_max = 3.5;
    if (scaled.cols > 1) {
      pf.y_min = -3.5;
      pf.y_max = 3.5;
    }
    pf.points.push_back(scatter_of(noised, "#d62728"));
    bottom.push_back(std::move(pf));
  }

  atomic_write_text(out_path(o.common, "timeline.svg"),
                    svg_panel_grid({top, bottom}, 300, 280));

  const std::vector<std::string> args = {
      "timeline", "--model", o.model_path, "--data", o.data_path,
      "--count", std::to_string(o.count), "--snapshots", join_ints(snap),
      "--seed", std::to_string(o.common.seed)};
  write_manifest(o.common, "timeline", args, {o.model_path, o.data_path},
                 {"timeline.svg"}, timer.seconds());

  if (!o.common.quiet) {
    std::printf("timeline with %zu snapshot indices -> %s\n", snap.size(),
                out_path(o.common, "timeline.svg").c_str());
  }
  return 0;
}

// ---- augment -----------------------------------------------------------

struct AugmentOpts {
  CommonOpts common;
  std::string train_path;
  std::string synthetic_path;
  std::string label_column;
  int label = 1;
  std::string out = "augmented.csv";
};

int run_augment(const AugmentOpts& o) {
  Timer timer;
  const SampleMatrix train = load_csv(o.train_path, o.label_column);
  const SampleMatrix synthetic = load_csv(o.synthetic_path);
  const SampleMatrix augmented = augment(train, synthetic, o.label);
  save_csv(augmented, out_path(o.common, o.out));

  const std::vector<std::string> args = {
      "augment", "--train", o.train_path, "--synthetic", o.synthetic_path,
      "--label-column", o.label_column, "--label", std::to_string(o.label),
      "--out", o.out, "--seed", std::to_string(o.common.seed)};
  write_manifest(o.common, "augment", args, {o.train_path, o.synthetic_path}, {o.out},
                 timer.seconds());

  if (!o.common.quiet) {
    std::printf("augmented %zu original + %zu synthetic rows -> %s\n", train.rows,
                synthetic.rows, out_path(o.common, o.out).c_str());
  }
  return 0;
}

// ---- evaluate ----------------------------------------------------------

struct EvaluateOpts {
  CommonOpts common;
  std::string predictions_path;
  std::string actual_path;
  std::string pred_column;
  std::string actual_column;
  int positive = 1;
  std::string out = "eval.csv";
};

std::vector<int> int_column(const std::string& path, const std::string& column) {
  SampleMatrix m = load_csv(path);
  std::size_t c = m.cols - 1;  // default: last column
  if (!column.empty()) {
    const auto it = std::find(m.col_names.begin(), m.col_names.end(), column);
    if (it == m.col_names.end()) {
      throw std::runtime_error("column '" + column + "' not found in " + path);
    }
    c = static_cast<std::size_t>(it - m.col_names.begin());
  }
  std::vector<int> out(m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) {
    const double v = m.at(r, c);
    if (std::floor(v) != v || std::abs(v) > 2147483647.0) {
      throw std::runtime_error(path + ": column '" + m.col_names[c] +
                               "' row " + std::to_string(r + 1) + " is not an integer label");
    }
    out[r] = static_cast<int>(v);
  }
  return out;
}

int run_evaluate(const EvaluateOpts& o) {
  Timer timer;
  const std::vector<int> pred = int_column(o.predictions_path, o.pred_column);
  const std::vector<int> actual = int_column(o.actual_path, o.actual_column);
  const EvalReport r = classification_metrics(pred, actual, o.positive);

  std::string csv = "tp,fp,fn,tn,precision,recall,f1\n";
  csv += std::to_string(r.tp) + "," + std::to_string(r.fp) + "," + std::to_string(r.fn) +
         "," + std::to_string(r.tn);
  for (const auto& v : {r.precision, r.recall, r.f1}) {
    csv += ",";
    csv += v.has_value() ? format_double(*v) : "nan";
  }
  csv += "\n";
  atomic_write_text(out_path(o.common, o.out), csv);

  const std::vector<std::string> args = {
      "evaluate", "--predictions", o.predictions_path, "--actual", o.actual_path,
      "--pred-column", o.pred_column, "--actual-column", o.actual_column,
      "--positive", std::to_string(o.positive), "--out", o.out,
      "--seed", std::to_string(o.common.seed)};
  write_manifest(o.common, "evaluate", args, {o.predictions_path, o.actual_path},
                 {o.out}, timer.seconds());

  auto fmt = [](const std::optional<double>& v) {
    char buf[32];
    if (!v.has_value()) return std::string("undefined");
    std::snprintf(buf, sizeof(buf), "%.4f", *v);
    return std::string(buf);
  };
  if (!o.common.quiet) {
    std::printf("tp=%lld fp=%lld fn=%lld tn=%lld precision=%s recall=%s f1=%s\n",
                static_cast<long long>(r.tp), static_cast<long long>(r.fp),
                static_cast<long long>(r.fn), static_cast<long long>(r.tn),
                fmt(r.precision).c_str(), fmt(r.recall).c_str(), fmt(r.f1).c_str());
  }
  return 0;
}

// ---- distance ----------------------------------------------------------

struct DistanceOpts {
  CommonOpts common;
  std::string a_path;
  std::string b_path;
  int calibrate = 0;
  double pct = 95.0;
};

int run_distance(const DistanceOpts& o) {
  Timer timer;
  const SampleMatrix a = load_csv(o.a_path);
  const SampleMatrix b = load_csv(o.b_path);
  const double ed = energy_distance(a, b);

  json j;
  j["energy_distance"] = ed;
  if (o.calibrate > 0) {
    SampleMatrix pooled = a;
    for (std::size_t r = 0; r < b.rows; ++r) pooled.add_row(b.row(r));
    const std::vector<double> null_stats =
        energy_null(pooled, a.rows, b.rows, o.calibrate, o.common.seed);
    const double threshold = percentile(null_stats, o.pct);
    j["null_splits"] = o.calibrate;
    j["null_percentile"] = o.pct;
    j["null_threshold"] = threshold;
    j["exceeds_null"] = ed > threshold;
  }
  atomic_write_text(out_path(o.common, "distance.json"), j.dump(2) + "\n");

  const std::vector<std::string> args = {
      "distance", o.a_path, o.b_path, "--calibrate", std::to_string(o.calibrate),
      "--percentile", format_double(o.pct), "--seed", std::to_string(o.common.seed)};
  write_manifest(o.common, "distance", args, {o.a_path, o.b_path}, {"distance.json"},
                 timer.seconds());

  if (!o.common.quiet) {
    std::printf("energy_distance %s\n", format_double(ed).c_str());
    if (o.calibrate > 0) {
      std::printf("null_threshold %s (p%g over %d splits), exceeds=%s\n",
                  format_double(j["null_threshold"].get<double>()).c_str(), o.pct,
                  o.calibrate, j["exceeds_null"].get<bool>() ? "true" : "false");
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diffusion engine for tabular data: forward noising, noise-predictor "
               "training, and reverse-chain sampling"};
  app.require_subcommand(1);

  SimulateOpts sim;
  CLI::App* c_sim = app.add_subcommand("simulate", "Noise a start point forward, write trajectories");
  add_common(c_sim, sim.common);
  add_schedule(c_sim, sim.schedule);
  c_sim->add_option("--x0", sim.x0_str, "Start point, comma-separated coordinates")->required();
  c_sim->add_option("--trajectories", sim.trajectories, "Number of paths")->capture_default_str();
  c_sim->add_flag("--svg", sim.svg, "Also draw paths and step densities (1-D only)");
  c_sim->add_option("--kde-steps", sim.kde_steps, "Indices for density curves (default: N)");

  TrainOpts tr;
  CLI::App* c_tr = app.add_subcommand("train", "Fit a noise predictor to CSV data");
  add_common(c_tr, tr.common);
  add_schedule(c_tr, tr.schedule);
  c_tr->add_option("--input", tr.input, "Training CSV")->required();
  c_tr->add_option("--label-column", tr.label_column, "Integer label column name");
  c_tr->add_option("--class", tr.class_filter, "Train only on rows with this label");
  c_tr->add_option("--target", tr.target, "Prediction target: epsilon, x0, mu")->capture_default_str();
  c_tr->add_option("--hidden", tr.hidden, "Hidden layer widths")->capture_default_str();
  c_tr->add_option("--activation", tr.activation, "tanh or silu")->capture_default_str();
  c_tr->add_option("--optimizer", tr.optimizer, "adam or sgd")->capture_default_str();
  c_tr->add_option("--timestep-sampling", tr.timestep_sampling,
                   "random (one step per point per epoch) or all")->capture_default_str();
  c_tr->add_flag("--literal-trajectories", tr.literal_trajectories,
                 "Noise training inputs by walking the discrete path");
  c_tr->add_option("--lr", tr.lr, "Learning rate")->capture_default_str();
  c_tr->add_option("--epochs", tr.epochs, "Training epochs")->capture_default_str();
  c_tr->add_option("--batch", tr.batch, "Batch size")->capture_default_str();
  c_tr->add_option("--plateau-patience", tr.plateau_patience,
                   "Stop after this many epochs without improvement (0 = off)")->capture_default_str();
  c_tr->add_option("--plateau-tol", tr.plateau_tol, "Relative improvement threshold")->capture_default_str();
  c_tr->add_option("--model-out", tr.model_out, "Model file name")->capture_default_str();

  GenerateOpts gen;
  CLI::App* c_gen = app.add_subcommand("generate", "Sample new points from a trained model");
  add_common(c_gen, gen.common);
  c_gen->add_option("--model", gen.model_path, "Model file")->required();
  c_gen->add_option("--count", gen.count, "Number of samples")->capture_default_str();
  c_gen->add_option("--method", gen.method,
                    "Reverse-step form: epsilon, x0-hat, mu-direct (default: model's)");
  c_gen->add_option("--out", gen.out, "Output CSV name")->capture_default_str();

  TimelineOpts tl;
  CLI::App* c_tl = app.add_subcommand("timeline", "Draw reverse-chain and forward-noising snapshots");
  add_common(c_tl, tl.common);
  c_tl->add_option("--model", tl.model_path, "Model file")->required();
  c_tl->add_option("--data", tl.data_path, "Reference data CSV")->required();
  c_tl->add_option("--count", tl.count, "Reverse walks to draw")->capture_default_str();
  c_tl->add_option("--snapshots", tl.snapshots, "Schedule indices (default: 0,N/3,2N/3,N)");

  AugmentOpts aug;
  CLI::App* c_aug = app.add_subcommand("augment", "Merge synthetic rows into labeled training data");
  add_common(c_aug, aug.common);
  c_aug->add_option("--train", aug.train_path, "Labeled training CSV")->required();
  c_aug->add_option("--synthetic", aug.synthetic_path, "Synthetic rows CSV")->required();
  c_aug->add_option("--label-column", aug.label_column, "Label column in the training CSV")->required();
  c_aug->add_option("--label", aug.label, "Label for synthetic rows")->capture_default_str();
  c_aug->add_option("--out", aug.out, "Output CSV name")->capture_default_str();

  EvaluateOpts ev;
  CLI::App* c_ev = app.add_subcommand("evaluate", "Score predicted labels against actual labels");
  add_common(c_ev, ev.common);
  c_ev->add_option("--predictions", ev.predictions_path, "CSV with predicted labels")->required();
  c_ev->add_option("--actual", ev.actual_path, "CSV with actual labels")->required();
  c_ev->add_option("--pred-column", ev.pred_column, "Column in predictions (default: last)");
  c_ev->add_option("--actual-column", ev.actual_column, "Column in actual (default: last)");
  c_ev->add_option("--positive", ev.positive, "Positive label value")->capture_default_str();
  c_ev->add_option("--out", ev.out, "Output CSV name")->capture_default_str();

  DistanceOpts di;
  CLI::App* c_di = app.add_subcommand("distance", "Energy distance between two CSV samples");
  add_common(c_di, di.common);
  c_di->add_option("a", di.a_path, "First sample CSV")->required();
  c_di->add_option("b", di.b_path, "Second sample CSV")->required();
  c_di->add_option("--calibrate", di.calibrate,
                   "Calibrate a same-source null from this many resampled splits")->capture_default_str();
  c_di->add_option("--percentile", di.pct, "Null percentile to report")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (c_sim->parsed()) return run_simulate(sim);
    if (c_tr->parsed()) return run_train(tr);
    if (c_gen->parsed()) return run_generate(gen);
    if (c_tl->parsed()) return run_timeline(tl);
    if (c_aug->parsed()) return run_augment(aug);
    if (c_ev->parsed()) return run_evaluate(ev);
    if (c_di->parsed()) return run_distance(di);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

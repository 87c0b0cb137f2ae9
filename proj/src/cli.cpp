#include "ecmlfd/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "ecmlfd/config.hpp"
#include "ecmlfd/dataset.hpp"
#include "ecmlfd/errors.hpp"
#include "ecmlfd/model_io.hpp"
#include "ecmlfd/pipeline.hpp"
#include "ecmlfd/synthetic.hpp"

namespace ecmlfd {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename Stats>
json stats_json(const Stats& s, const char* unit) {
  const std::string u = std::string("_") + unit;
  return {{"n", s.n},
          {"mean" + u, s.mean},
          {"std" + u, s.std},
          {"sample_std" + u, s.sample_std},
          {"rmse" + u, s.rmse},
          {"errors" + u, s.errors}};
}

json report_json(const ErrorReport& r) {
  json j = {{"n", r.n}};
  if (r.position) j["position"] = stats_json(*r.position, "mm");
  if (r.orientation) j["orientation"] = stats_json(*r.orientation, "deg");
  return j;
}

// One-line human summary of a report.
std::string report_line(const ErrorReport& r) {
  std::ostringstream s;
  s << "n=" << r.n;
  if (r.position) {
    s << " position mean=" << r.position->mean << " mm std=" << r.position->std
      << " mm rmse=" << r.position->rmse << " mm";
  }
  if (r.orientation) s << " orientation mean=" << r.orientation->mean << " deg std=" << r.orientation->std << " deg";
  return s.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw DataError("failed writing " + path);
}

void emit_json(const json& j, const std::string& path, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty()) {
    out << text;
  } else {
    write_text(path, text);
  }
}

std::string bic_table_csv(const std::vector<SweepEntry>& table) {
  std::string s = "k,log_likelihood,bic,iterations,error\n";
  for (const SweepEntry& e : table) {
    s += std::to_string(e.k) + ",";
    s += (e.log_likelihood ? fmt(*e.log_likelihood) : "") + ",";
    s += (e.bic ? fmt(*e.bic) : "") + ",";
    s += std::to_string(e.iterations) + ",";
    std::string msg = e.error;
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    s += msg + "\n";
  }
  return s;
}

// Replay predictions file: one row per step, poses in the RCM frame.
const char* kReplayHeader =
    "timestamp,status,pred_x,pred_y,pred_z,emit_x,emit_y,emit_z,"
    "emit_r11,emit_r12,emit_r13,emit_r21,emit_r22,emit_r23,emit_r31,emit_r32,emit_r33,"
    "min_signed_distance\n";

std::string replay_csv(const ReplayResult& r) {
  std::string s = kReplayHeader;
  for (const ReplayStep& st : r.steps) {
    s += fmt(st.timestamp) + "," + std::string(step_status_name(st.status));
    for (int i = 0; i < 3; ++i) s += "," + fmt(st.predicted.translation()(i));
    if (st.emitted) {
      for (int i = 0; i < 3; ++i) s += "," + fmt(st.emitted->translation()(i));
      for (double v : st.emitted->rotation().row_major()) s += "," + fmt(v);
    } else {
      s += std::string(12, ',');
    }
    s += "," + fmt(st.verdict.min_signed_distance) + "\n";
  }
  return s;
}

// Re-reads a written predictions file and checks every emitted pose.
std::size_t verify_replay_file(const std::string& path, const PipelineConfig& cfg, const Buffer& buffer) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot reopen " + path);
  const WorkspaceBounds bounds = bounds_from_limits(cfg.limits, cfg.dh);
  std::string line;
  std::getline(in, line);
  std::size_t checked = 0;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() >= 2 && cells[1] != "skipped") {
      if (cells.size() < 17) throw NumericalError("replay check: short row " + std::to_string(row));
      std::array<double, 9> rot{};
      for (int i = 0; i < 9; ++i) rot[i] = std::stod(cells[8 + i]);
      const Vec3 p(std::stod(cells[5]), std::stod(cells[6]), std::stod(cells[7]));
      const Transform pose(Rotation3::from_row_major(rot), p);
      if (!validate_pose(pose, bounds, buffer, cfg.limits).valid) {
        throw NumericalError("replay check: emitted pose at row " + std::to_string(row) +
                             " fails validation");
      }
      ++checked;
    }
    ++row;
  }
  return checked;
}

int axis_from_name(const std::string& s) {
  if (s == "x" || s == "0") return 0;
  if (s == "y" || s == "1") return 1;
  if (s == "z" || s == "2") return 2;
  throw ConfigError("axis must be x, y or z");
}

struct GenArgs {
  std::string traj = "line";
  std::size_t n = 1000;
  double rate = 100.0;
  double amplitude = 0.02;
  double frequency = 0.2;
  std::string axis = "x";
  double noise = 0.0;
  double gaze_wander = 0.0;
  double gaze_gain = 0.0;
  std::uint64_t seed = 0;
  std::string out;
};

struct TrainArgs {
  std::string pool;
  std::string preset = "positions";
  int k_min = 1;
  int k_max = 10;
  double split = 0.8;
  std::uint64_t seed = 0;
  double tol = EmOptions{}.tol;
  int max_iter = EmOptions{}.max_iter;
  std::string out_model;
  std::string out_bic;
};

struct EvalArgs {
  std::string model;
  std::string pool;
  std::string preset;
  std::string subset = "all";
  double split = 0.8;
  std::optional<std::uint64_t> seed;
  std::string out;
};

struct ReplayArgs {
  std::string model;
  std::string pool;
  std::string config;
  double linear_buffer = kDefaultLinearBuffer;
  double angular_buffer_deg = 2.0;
  std::string out;
  std::string summary;
};

struct SmoothArgs {
  std::string pool;
  std::string series = "ecm";
  std::string out;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  TrajectorySpec spec;
  spec.kind = parse_trajectory(a.traj);
  if (a.n < 1) throw ConfigError("--n must be >= 1");
  if (!(a.rate > 0.0)) throw ConfigError("--rate must be > 0");
  spec.rate = a.rate;
  spec.duration = static_cast<double>(a.n) / a.rate;
  spec.amplitude = a.amplitude;
  spec.frequency = a.frequency;
  spec.axis = axis_from_name(a.axis);
  spec.noise_sigma = a.noise;
  spec.gaze_wander = a.gaze_wander;
  spec.law.gaze_gain = a.gaze_gain;
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const DataPool pool = generate_synthetic(spec, a.seed);
  write_pool(pool, std::filesystem::path(a.out));
  out << "wrote " << pool.size() << " records to " << a.out << "\n";
  return kExitOk;
}

int cmd_train(const TrainArgs& a, std::ostream& out) {
  TrainOptions opt;
  opt.preset = parse_preset(a.preset);
  opt.k_min = a.k_min;
  opt.k_max = a.k_max;
  opt.train_fraction = a.split;
  opt.seed = a.seed;
  opt.em.tol = a.tol;
  opt.em.max_iter = a.max_iter;
  if (!(a.tol > 0.0)) throw ConfigError("--tol must be > 0");
  if (a.max_iter < 1) throw ConfigError("--max-iter must be >= 1");
  const DataPool pool = read_pool(std::filesystem::path(a.pool));
  const TrainResult r = train_model(pool, opt);
  write_model(r.model, a.out_model);
  if (!a.out_bic.empty()) write_text(a.out_bic, bic_table_csv(r.table));
  out << "selected K=" << r.best_k << " (n_train=" << r.n_train << ", n_validation=" << r.n_validation << ")\n";
  if (r.validation) out << "validation " << report_line(*r.validation) << "\n";
  return kExitOk;
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const GaussianMixture model = read_model(a.model);
  std::optional<Preset> preset;
  if (!a.preset.empty()) preset = parse_preset(a.preset);
  const DataPool pool = read_pool(std::filesystem::path(a.pool));
  DataPool subset;
  if (a.subset == "all") {
    subset = pool;
  } else {
    const std::uint64_t seed = a.seed.value_or(model.metadata.seed);
    if (!(a.split > 0.0 && a.split < 1.0)) throw ConfigError("--split must lie in (0, 1)");
    auto parts = training_split(pool, a.split, seed);
    subset = a.subset == "train" ? std::move(parts.first) : std::move(parts.second);
  }
  const ErrorReport report = evaluate_model(model, subset, preset);
  json j = report_json(report);
  j["subset"] = a.subset;
  emit_json(j, a.out, out);
  if (!a.out.empty()) out << report_line(report) << "\n";
  return kExitOk;
}

int cmd_replay(const ReplayArgs& a, std::ostream& out) {
  if (!(a.linear_buffer >= 0.0) || !(a.angular_buffer_deg >= 0.0)) throw ConfigError("buffers must be >= 0");
  ReplayOptions opt;
  opt.config = read_config(a.config);
  opt.buffer = {a.linear_buffer, deg_to_rad(a.angular_buffer_deg)};
  const GaussianMixture model = read_model(a.model);
  const DataPool pool = read_pool(std::filesystem::path(a.pool));
  const ReplayResult r = replay(model, pool, opt);
  write_text(a.out, replay_csv(r));
  const std::size_t checked = verify_replay_file(a.out, opt.config, opt.buffer);
  const json summary = {{"steps", r.steps.size()},
                        {"valid", r.valid},
                        {"rejected", r.rejected},
                        {"held", r.held},
                        {"skipped", r.skipped},
                        {"emitted", checked},
                        {"linear_buffer_m", opt.buffer.linear},
                        {"angular_buffer_deg", a.angular_buffer_deg}};
  emit_json(summary, a.summary, out);
  return kExitOk;
}

int cmd_smoothness(const SmoothArgs& a, std::ostream& out) {
  const Series series = parse_series(a.series);
  const DataPool pool = read_pool(std::filesystem::path(a.pool));
  const SmoothnessReport r = pool_smoothness(pool, series);
  const json j = {{"series", a.series}, {"n", r.n}, {"dt", r.dt}, {"dlj", r.dlj}, {"ldlj", r.ldlj}};
  emit_json(j, a.out, out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Camera-motion learning from demonstration: data generation, training, evaluation, replay"};
  app.name("ecmlfd");
  app.require_subcommand(1, 1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a synthetic demonstration pool");
  g->add_option("--traj", gen.traj, "Trajectory kind: line, sin, mixed")->capture_default_str();
  g->add_option("--n", gen.n, "Number of records")->capture_default_str();
  g->add_option("--rate", gen.rate, "Sample rate (Hz)")->capture_default_str();
  g->add_option("--amplitude", gen.amplitude, "Tool trajectory amplitude (m)")->capture_default_str();
  g->add_option("--frequency", gen.frequency, "Trajectory frequency (Hz)")->capture_default_str();
  g->add_option("--axis", gen.axis, "Motion axis: x, y, z")->capture_default_str();
  g->add_option("--noise", gen.noise, "Camera position noise sigma (m)")->capture_default_str();
  g->add_option("--gaze-wander", gen.gaze_wander, "Gaze wander std (screen units)")->capture_default_str();
  g->add_option("--gaze-gain", gen.gaze_gain, "Camera target shift per unit gaze wander (m)")
      ->capture_default_str();
  g->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  g->add_option("--out", gen.out, "Output pool CSV")->required();

  TrainArgs train;
  auto* t = app.add_subcommand("train", "Fit a mixture model with a BIC sweep over K");
  t->add_option("--pool", train.pool, "Input pool CSV")->required();
  t->add_option("--preset", train.preset, "Input dims: positions, orientations, gaze")->capture_default_str();
  t->add_option("--k-min", train.k_min, "Smallest K")->capture_default_str();
  t->add_option("--k-max", train.k_max, "Largest K")->capture_default_str();
  t->add_option("--split", train.split, "Training fraction")->capture_default_str();
  t->add_option("--seed", train.seed, "Random seed (split and initialization)")->capture_default_str();
  t->add_option("--tol", train.tol, "Relative log-likelihood tolerance")->capture_default_str();
  t->add_option("--max-iter", train.max_iter, "EM iteration cap")->capture_default_str();
  t->add_option("--out-model", train.out_model, "Output model JSON")->required();
  t->add_option("--out-bic", train.out_bic, "Output BIC table CSV");

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "Report prediction error of a model on a pool");
  e->add_option("--model", ev.model, "Model JSON")->required();
  e->add_option("--pool", ev.pool, "Pool CSV")->required();
  e->add_option("--preset", ev.preset, "Require the model to match this preset");
  e->add_option("--subset", ev.subset, "all, train or validation")
      ->check(CLI::IsMember({"all", "train", "validation"}))
      ->capture_default_str();
  e->add_option("--split", ev.split, "Training fraction used for --subset")->capture_default_str();
  e->add_option("--seed", ev.seed, "Split seed for --subset (default: the model's training seed)");
  e->add_option("--out", ev.out, "Report JSON (default: stdout)");

  ReplayArgs rp;
  auto* r = app.add_subcommand("replay", "Replay a pool through the model with workspace validation");
  r->add_option("--model", rp.model, "Model JSON")->required();
  r->add_option("--pool", rp.pool, "Pool CSV")->required();
  r->add_option("--config", rp.config, "Arm configuration JSON")->required();
  r->add_option("--linear-buffer", rp.linear_buffer, "Workspace buffer (m)")->capture_default_str();
  r->add_option("--angular-buffer-deg", rp.angular_buffer_deg, "Angular buffer (deg)")->capture_default_str();
  r->add_option("--out", rp.out, "Predictions CSV")->required();
  r->add_option("--summary", rp.summary, "Summary JSON (default: stdout)");

  SmoothArgs sm;
  auto* s = app.add_subcommand("smoothness", "Log dimensionless jerk of a position series");
  s->add_option("--pool", sm.pool, "Pool CSV")->required();
  s->add_option("--series", sm.series, "ecm, psm1 or psm3")->capture_default_str();
  s->add_option("--out", sm.out, "Report JSON (default: stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (g->parsed()) return cmd_gen(gen, out);
    if (t->parsed()) return cmd_train(train, out);
    if (e->parsed()) return cmd_eval(ev, out);
    if (r->parsed()) return cmd_replay(rp, out);
    if (s->parsed()) return cmd_smoothness(sm, out);
  } catch (const ConfigError& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const DataError& ex) {
    err << "data error: " << ex.what() << "\n";
    return kExitData;
  } catch (const NumericalError& ex) {
    err << "numerical error: " << ex.what() << "\n";
    return kExitNumerical;
  } catch (const UnreachableError& ex) {
    err << "numerical error: " << ex.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace ecmlfd

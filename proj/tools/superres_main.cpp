// superres: two-point super-resolution bounds, witnesses, detectors,
// estimators and Monte Carlo phase-transition sweeps.
//
// Exit codes: 0 success, 1 internal error, 2 usage error, 3 domain verdict
// (one-source detection, estimator failure).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "superres/bounds.hpp"
#include "superres/detect.hpp"
#include "superres/experiment.hpp"
#include "superres/locate.hpp"
#include "superres/model.hpp"
#include "superres/witness.hpp"

namespace {

using namespace superres;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitVerdict = 3;

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open input file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write file: " + path.string());
  f << text;
}

Task task_from_string(const std::string& s) {
  if (s == "detection") return Task::Detection;
  if (s == "localization") return Task::Localization;
  throw CLI::ValidationError("--task", "must be 'detection' or 'localization'");
}

// Flat-JSON config file, expanded into flags that are injected right after
// the subcommand token. Explicit command-line flags come later and win via
// the take-last policy; unknown keys surface as ordinary parse errors.
std::vector<std::string> expand_config(const std::vector<std::string>& raw) {
  std::string path;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == "--config" && i + 1 < raw.size()) path = raw[i + 1];
    else if (raw[i].rfind("--config=", 0) == 0) path = raw[i].substr(9);
  }
  if (path.empty() || raw.empty() || raw[0].empty() || raw[0][0] == '-') return raw;

  std::ifstream f(path);
  if (!f) throw CLI::ValidationError("--config", "cannot open " + path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw CLI::ValidationError("--config", e.what());
  }
  if (!j.is_object())
    throw CLI::ValidationError("--config", "must be a flat JSON object");

  std::vector<std::string> args;
  args.push_back(raw[0]);  // subcommand
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string flag = "--" + it.key();
    if (it.value().is_boolean()) {
      if (it.value().get<bool>()) args.push_back(flag);
    } else {
      args.push_back(flag);
      args.push_back(it.value().is_string() ? it.value().get<std::string>()
                                            : it.value().dump());
    }
  }
  args.insert(args.end(), raw.begin() + 1, raw.end());
  return args;
}

struct CommonOpts {
  double beta = 1.0;
  double theta = 0.0;
  double omega = 1.0;
  double m = 1.0;
};

void add_source_opts(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--beta", o.beta, "amplitude ratio beta >= 1")
      ->check(CLI::Range(1.0, 1e12))
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd->add_option("--theta", o.theta, "relative phase in (-pi, pi]")
      ->check(CLI::Range(-kPi, kPi))
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd->add_option("--omega", o.omega, "cutoff frequency")
      ->check(CLI::PositiveNumber)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd->add_option("--m", o.m, "amplitude scale")
      ->check(CLI::PositiveNumber)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

void print_bound_row(std::ostream& os, const BoundQuery& q, const BoundResult& r) {
  os << to_string(q.task) << ',' << to_string(q.kind) << ',' << to_string(r.regime)
     << ',';
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", r.value);
  os << buf << ',' << (r.valid ? "valid" : "invalid") << ',' << r.note << '\n';
}

int run_bounds(const CommonOpts& src, const std::string& task, const std::string& kind,
               double sigma_ratio, bool curve, double sigma_lo, double sigma_hi,
               int points) {
  BoundQuery q;
  q.beta = src.beta;
  q.theta = src.theta;
  q.omega = src.omega;
  q.noise_ratio = sigma_ratio;

  if (curve) {
    if (task.empty() || kind.empty())
      throw CLI::ValidationError("--curve", "requires --task and --kind");
    q.task = task_from_string(task);
    q.kind = kind == "sru" ? BoundKind::SRU : BoundKind::SRL;
    std::cout << "sigma_ratio,value\n";
    std::cout.precision(17);
    for (double r : log_spaced(sigma_lo, sigma_hi, points)) {
      q.noise_ratio = r;
      const BoundResult b = evaluate_bound(q);
      std::cout << r << ',';
      if (b.valid) std::cout << b.value;
      else std::cout << "nan";
      std::cout << '\n';
    }
    return kExitOk;
  }

  if (!task.empty() && !kind.empty()) {
    q.task = task_from_string(task);
    q.kind = kind == "sru" ? BoundKind::SRU : BoundKind::SRL;
    const BoundResult r = evaluate_bound(q);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", r.value);
    std::cout << buf << '\n';
    if (!r.valid) {
      std::cout << "invalid: " << r.note << '\n';
      return kExitVerdict;
    }
    return kExitOk;
  }

  std::cout << "task,kind,regime,value,valid,note\n";
  for (Task t : {Task::Detection, Task::Localization})
    for (BoundKind k : {BoundKind::SRU, BoundKind::SRL}) {
      q.task = t;
      q.kind = k;
      print_bound_row(std::cout, q, evaluate_bound(q));
    }
  return kExitOk;
}

int run_witness(const CommonOpts& src, const std::string& task, double sigma_ratio,
                double d_opt) {
  const Task t = task_from_string(task);
  const PhaseClassification cls = classify_regime(src.beta, sigma_ratio, src.theta);
  const Regime regime =
      t == Task::Detection ? cls.regime_detection : cls.regime_localization;

  BoundQuery q;
  q.beta = src.beta;
  q.theta = src.theta;
  q.omega = src.omega;
  q.noise_ratio = sigma_ratio;
  q.task = t;
  q.kind = BoundKind::SRL;
  const BoundResult srl = evaluate_bound(q);
  double d = d_opt;
  if (d <= 0.0) {
    if (!srl.valid || srl.value <= 0.0) {
      std::cout << "srl is " << (srl.valid ? "zero" : "invalid")
                << " here; pass --d explicitly\n";
      return kExitVerdict;
    }
    d = 0.95 * srl.value;
  }

  const WitnessCase wc =
      t == Task::Detection
          ? detection_witness_case(src.m, src.beta, src.theta, d, src.omega, regime)
          : localization_witness_case(src.m, src.beta, src.theta, d, src.omega, regime);
  const double dev = witness_deviation(wc.source, wc.witness);
  const double sigma = sigma_ratio * src.m;

  std::cout.precision(10);
  std::cout << "task " << to_string(t) << "  regime " << to_string(regime) << "  d " << d
            << '\n';
  std::cout << "canonical source: " << src.m << "*exp(i*" << wc.source.theta1 << ") at "
            << wc.source.y1 << ", " << src.beta * src.m << "*exp(i*" << wc.source.theta2
            << ") at " << wc.source.y2 << '\n';
  for (const Spike& s : wc.witness.spikes)
    std::cout << "witness spike: (" << s.amplitude.real() << ", " << s.amplitude.imag()
              << "i) at " << s.location << '\n';
  std::cout << "deviation " << dev << " vs 2*sigma " << 2.0 * sigma << " : "
            << (dev < 2.0 * sigma ? "admissible (certified)" : "NOT admissible") << '\n';
  return kExitOk;
}

int run_detect(const std::string& method, const std::string& input, double sigma) {
  const Measurement y = measurement_from_json(read_input(input));
  DetectionVerdict v;
  if (method == "l0")
    v = l0_detect(y, sigma, default_l0_grid(y.spec.omega));
  else
    v = svt_detect(y, sigma);
  std::cout.precision(10);
  std::cout << (v.declared_two ? "two-sources" : "one-source") << " method=" << method
            << " detail=" << v.detail << '\n';
  return v.declared_two ? kExitOk : kExitVerdict;
}

int run_locate(const std::string& method, const std::string& input, double sigma) {
  const Measurement y = measurement_from_json(read_input(input));
  LocationEstimate est;
  try {
    if (method == "music") est = music_estimate(y);
    else if (method == "esprit") est = esprit_estimate(y);
    else if (method == "ml") est = ml_estimate(y);
    else est = cvx_estimate(y, {}, sigma);
  } catch (const EstimationFailure& e) {
    std::cout << "{\"error\":\"" << e.what() << "\"}\n";
    return kExitVerdict;
  }
  json out;
  out["y_hat"] = {est.y_hat[0], est.y_hat[1]};
  out["amp_re"] = {est.amplitudes[0].real(), est.amplitudes[1].real()};
  out["amp_im"] = {est.amplitudes[0].imag(), est.amplitudes[1].imag()};
  out["residual"] = est.residual;
  out["method"] = method;
  std::cout << out.dump() << '\n';
  return kExitOk;
}

struct SweepCli {
  CommonOpts src;
  std::string task = "detection";
  std::string method = "l0";
  int trials = 200;
  std::uint64_t seed = 0;
  double sigma_min = 1e-4, sigma_max = 1e-1;
  int sigma_count = 12;
  double d_min = 0.0, d_max = 0.0;
  int d_count = 24;
  std::string axis = "srf";
  std::string out_dir = ".";
  int threads = 0;
};

// Default separation window: bracket the theory curve over the σ range so the
// transition falls inside the grid.
void default_separation_window(SweepConfig& cfg, double& d_min, double& d_max) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double sigma : {cfg.sigma_grid.front(), cfg.sigma_grid.back()}) {
    BoundQuery q;
    q.beta = cfg.beta;
    q.theta = cfg.theta;
    q.omega = cfg.omega;
    q.noise_ratio = sigma / cfg.m;
    q.task = cfg.task;
    q.kind = BoundKind::SRL;
    const BoundResult srl = evaluate_bound(q);
    q.kind = BoundKind::SRU;
    const BoundResult sru = evaluate_bound(q);
    if (srl.valid && srl.value > 0.0) lo = std::min(lo, 0.5 * srl.value);
    if (sru.valid && sru.value > 0.0) hi = std::max(hi, 2.0 * sru.value);
    if (srl.valid && srl.value > 0.0) hi = std::max(hi, 4.0 * srl.value);
  }
  if (!std::isfinite(lo) || hi <= 0.0)
    throw CLI::ValidationError("--d-min/--d-max",
                               "theory bounds give no usable window; pass them explicitly");
  d_min = lo;
  d_max = std::min(hi, 0.98 * kPi / cfg.omega);
}

int run_sweep(const SweepCli& s) {
  SweepConfig cfg;
  cfg.task = task_from_string(s.task);
  cfg.method = sweep_method_from_string(s.method);
  cfg.beta = s.src.beta;
  cfg.theta = s.src.theta;
  cfg.omega = s.src.omega;
  cfg.m = s.src.m;
  cfg.trials = s.trials;
  cfg.seed = s.seed;
  cfg.threads = s.threads;
  cfg.grid_axis = s.axis == "pasrf" ? SlopeAxis::PASRF : SlopeAxis::SRF;
  cfg.sigma_grid = log_spaced(s.sigma_min, s.sigma_max, s.sigma_count);
  double d_min = s.d_min, d_max = s.d_max;
  if (d_min <= 0.0 || d_max <= 0.0) default_separation_window(cfg, d_min, d_max);
  cfg.separation_grid = log_spaced(d_min, d_max, s.d_count);

  const PhaseTransitionGrid grid = sweep(cfg);
  const auto boundary = extract_boundary(grid);
  const auto overlay = theory_overlay(cfg);

  const std::filesystem::path dir(s.out_dir);
  std::filesystem::create_directories(dir);
  write_file(dir / "grid.csv", grid_csv(grid));
  write_file(dir / "boundary.csv", boundary_csv(boundary, cfg));
  write_file(dir / "overlay.csv", overlay_csv(boundary, overlay));

  std::string slope_note = "insufficient boundary points for a slope fit";
  if (boundary.size() >= 3) {
    const SlopeFit fit =
        fit_slope(boundary, cfg.grid_axis, effective_phase(cfg.theta), cfg.omega);
    write_file(dir / "slope.txt", slope_txt(fit));
    std::ostringstream ss;
    ss.precision(4);
    ss << "slope " << fit.slope << " (r2 " << fit.r_squared << ", " << boundary.size()
       << " columns)";
    slope_note = ss.str();
  }
  std::cout << to_string(cfg.task) << '/' << to_string(cfg.method) << " sweep "
            << cfg.separation_grid.size() << "x" << cfg.sigma_grid.size() << " grid, "
            << cfg.trials << " trials/cell: " << slope_note << "; outputs in "
            << dir.string() << '\n';
  return kExitOk;
}

int run_slope(const std::string& input, const std::string& axis, double theta,
              double omega) {
  std::istringstream in(read_input(input));
  std::string line;
  std::getline(in, line);  // header: sigma,d_star,...
  std::vector<BoundaryPoint> boundary;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string sigma_s, d_s;
    std::getline(row, sigma_s, ',');
    std::getline(row, d_s, ',');
    boundary.push_back({std::stod(sigma_s), std::stod(d_s)});
  }
  const SlopeFit fit =
      fit_slope(boundary, axis == "pasrf" ? SlopeAxis::PASRF : SlopeAxis::SRF,
                effective_phase(theta), omega);
  std::cout << slope_txt(fit);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-point spectral super-resolution toolbox"};
  app.require_subcommand(1);
  for (auto* opt : app.get_options()) opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::string config_path;

  // bounds
  auto* bounds_cmd = app.add_subcommand("bounds", "evaluate SRU/SRL formulas");
  CommonOpts bounds_src;
  add_source_opts(bounds_cmd, bounds_src);
  std::string bounds_task, bounds_kind;
  double bounds_ratio = 0.01, bounds_lo = 1e-4, bounds_hi = 1e-1;
  int bounds_points = 25;
  bool bounds_curve = false;
  bounds_cmd->add_option("--task", bounds_task, "detection|localization");
  bounds_cmd->add_option("--kind", bounds_kind, "sru|srl")
      ->check(CLI::IsMember({"sru", "srl"}));
  bounds_cmd->add_option("--sigma-ratio", bounds_ratio, "noise-to-signal ratio sigma/m")
      ->check(CLI::PositiveNumber);
  bounds_cmd->add_flag("--curve", bounds_curve, "emit CSV of (sigma_ratio, value)");
  bounds_cmd->add_option("--sigma-min", bounds_lo, "curve: smallest sigma/m")
      ->check(CLI::PositiveNumber);
  bounds_cmd->add_option("--sigma-max", bounds_hi, "curve: largest sigma/m")
      ->check(CLI::PositiveNumber);
  bounds_cmd->add_option("--points", bounds_points, "curve: grid size")
      ->check(CLI::Range(2, 100000));
  bounds_cmd->add_option("--config", config_path, "flat JSON config file");

  // witness
  auto* wit_cmd = app.add_subcommand("witness", "build an adversarial witness measure");
  CommonOpts wit_src;
  add_source_opts(wit_cmd, wit_src);
  std::string wit_task = "detection";
  double wit_ratio = 0.01, wit_d = 0.0;
  wit_cmd->add_option("--task", wit_task, "detection|localization");
  wit_cmd->add_option("--sigma-ratio", wit_ratio, "noise-to-signal ratio sigma/m")
      ->check(CLI::PositiveNumber);
  wit_cmd->add_option("--d", wit_d, "separation (default 0.95 * SRL)");
  wit_cmd->add_option("--config", config_path, "flat JSON config file");

  // detect
  auto* det_cmd = app.add_subcommand("detect", "source-number detection on a measurement");
  std::string det_method = "l0", det_input = "-";
  double det_sigma = 0.0;
  det_cmd->add_option("--method", det_method, "l0|svt")
      ->check(CLI::IsMember({"l0", "svt"}));
  det_cmd->add_option("--input", det_input, "measurement JSON file ('-' for stdin)");
  det_cmd->add_option("--sigma", det_sigma, "noise level sigma")
      ->required()
      ->check(CLI::PositiveNumber);
  det_cmd->add_option("--config", config_path, "flat JSON config file");

  // locate
  auto* loc_cmd = app.add_subcommand("locate", "two-source location estimation");
  std::string loc_method = "esprit", loc_input = "-";
  double loc_sigma = 1e-6;
  loc_cmd->add_option("--method", loc_method, "music|esprit|ml|cvx")
      ->check(CLI::IsMember({"music", "esprit", "ml", "cvx"}));
  loc_cmd->add_option("--input", loc_input, "measurement JSON file ('-' for stdin)");
  loc_cmd->add_option("--sigma", loc_sigma, "noise level (cvx epsilon = sigma*sqrt(M))")
      ->check(CLI::PositiveNumber);
  loc_cmd->add_option("--config", config_path, "flat JSON config file");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo phase-transition sweep");
  SweepCli sw;
  add_source_opts(sweep_cmd, sw.src);
  sweep_cmd->add_option("--task", sw.task, "detection|localization");
  sweep_cmd->add_option("--method", sw.method, "l0|svt|music|esprit|ml|cvx");
  sweep_cmd->add_option("--trials", sw.trials, "Monte Carlo trials per cell")
      ->check(CLI::Range(1, 1000000));
  sweep_cmd->add_option("--seed", sw.seed, "base RNG seed")->envname("SUPERRES_SEED");
  sweep_cmd->add_option("--sigma-min", sw.sigma_min, "")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--sigma-max", sw.sigma_max, "")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--sigma-count", sw.sigma_count, "")->check(CLI::Range(1, 10000));
  sweep_cmd->add_option("--d-min", sw.d_min, "smallest separation (default: from theory)");
  sweep_cmd->add_option("--d-max", sw.d_max, "largest separation (default: from theory)");
  sweep_cmd->add_option("--d-count", sw.d_count, "")->check(CLI::Range(2, 10000));
  sweep_cmd->add_option("--axis", sw.axis, "srf|pasrf slope axis")
      ->check(CLI::IsMember({"srf", "pasrf"}));
  sweep_cmd->add_option("--out", sw.out_dir, "output directory");
  sweep_cmd->add_option("--threads", sw.threads, "worker threads (0 = hardware)");
  sweep_cmd->add_option("--config", config_path, "flat JSON config file");

  // slope
  auto* slope_cmd = app.add_subcommand("slope", "fit a boundary.csv in log-log");
  std::string slope_input = "boundary.csv", slope_axis = "srf";
  double slope_theta = 0.0, slope_omega = 1.0;
  slope_cmd->add_option("--input", slope_input, "boundary CSV (sigma,d_star,...)");
  slope_cmd->add_option("--axis", slope_axis, "srf|pasrf")
      ->check(CLI::IsMember({"srf", "pasrf"}));
  slope_cmd->add_option("--theta", slope_theta, "relative phase for the PASRF axis");
  slope_cmd->add_option("--omega", slope_omega, "cutoff")->check(CLI::PositiveNumber);
  slope_cmd->add_option("--config", config_path, "flat JSON config file");

  for (auto* cmd : app.get_subcommands({}))
    for (auto* opt : cmd->get_options())
      opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  try {
    std::vector<std::string> args =
        expand_config(std::vector<std::string>(argv + 1, argv + argc));
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (bounds_cmd->parsed())
      return run_bounds(bounds_src, bounds_task, bounds_kind, bounds_ratio, bounds_curve,
                        bounds_lo, bounds_hi, bounds_points);
    if (wit_cmd->parsed()) return run_witness(wit_src, wit_task, wit_ratio, wit_d);
    if (det_cmd->parsed()) return run_detect(det_method, det_input, det_sigma);
    if (loc_cmd->parsed()) return run_locate(loc_method, loc_input, loc_sigma);
    if (sweep_cmd->parsed()) return run_sweep(sw);
    if (slope_cmd->parsed())
      return run_slope(slope_input, slope_axis, slope_theta, slope_omega);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnsupportedWitness& e) {
    std::cerr << "no such construction: " << e.what() << '\n';
    return kExitVerdict;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}

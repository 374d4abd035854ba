#include "superres/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "superres/rng.hpp"
#include "superres/witness.hpp"

namespace superres {

const char* to_string(SweepMethod m) {
  switch (m) {
    case SweepMethod::L0: return "l0";
    case SweepMethod::SVT: return "svt";
    case SweepMethod::MUSIC: return "music";
    case SweepMethod::ESPRIT: return "esprit";
    case SweepMethod::ML: return "ml";
    case SweepMethod::CVX: return "cvx";
  }
  return "?";
}

SweepMethod sweep_method_from_string(const std::string& name) {
  if (name == "l0") return SweepMethod::L0;
  if (name == "svt") return SweepMethod::SVT;
  if (name == "music") return SweepMethod::MUSIC;
  if (name == "esprit") return SweepMethod::ESPRIT;
  if (name == "ml") return SweepMethod::ML;
  if (name == "cvx") return SweepMethod::CVX;
  throw std::invalid_argument("unknown method: " + name);
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  if (lo <= 0.0 || hi <= lo) throw std::domain_error("log_spaced: need 0 < lo < hi");
  if (n < 2) throw std::domain_error("log_spaced: need n >= 2");
  std::vector<double> out(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i) out[i] = std::exp(llo + (lhi - llo) * i / (n - 1));
  return out;
}

namespace {

std::uint64_t trial_seed(std::uint64_t seed, double d, double sigma, int trial) {
  std::uint64_t h = mix64(seed);
  h = hash_combine(h, std::bit_cast<std::uint64_t>(d));
  h = hash_combine(h, std::bit_cast<std::uint64_t>(sigma));
  h = hash_combine(h, static_cast<std::uint64_t>(trial));
  return h;
}

bool detection_method(SweepMethod m) {
  return m == SweepMethod::L0 || m == SweepMethod::SVT;
}

// One Monte Carlo trial. Returns the margin of the verdict: positive iff the
// trial succeeded, with |margin| measuring how far from the decision edge.
double one_trial(const SweepConfig& cfg, double d, double sigma, int trial) {
  const TwoPointSource src =
      TwoPointSource::canonical(cfg.m, cfg.beta, cfg.theta, d, cfg.omega);
  const bool det = detection_method(cfg.method);
  const MeasurementSpec spec(cfg.omega, cfg.method == SweepMethod::SVT ? 3
                                                                       : cfg.sample_count);
  const NoiseDraw noise =
      sample_noise(sigma, spec.count, trial_seed(cfg.seed, d, sigma, trial));
  const Measurement y = synthesize(src, spec, noise);

  if (det) {
    if (cfg.method == SweepMethod::L0) {
      const L0Result r = l0_one_point_feasible(y, sigma, default_l0_grid(cfg.omega));
      return r.best_radius - sigma;  // infeasible (= declared two) ⇔ positive
    }
    const DetectionVerdict v = svt_detect(y, sigma);
    return v.detail - 2.0 * sigma;
  }

  LocationEstimate est;
  try {
    switch (cfg.method) {
      case SweepMethod::MUSIC: est = music_estimate(y); break;
      case SweepMethod::ESPRIT: est = esprit_estimate(y); break;
      case SweepMethod::ML: est = ml_estimate(y); break;
      case SweepMethod::CVX: est = cvx_estimate(y, {}, sigma); break;
      default: throw std::logic_error("one_trial: not a localization method");
    }
  } catch (const EstimationFailure&) {
    return -d;  // estimator failure counts as a failed trial
  }
  const std::array<double, 2> truth{src.y1, src.y2};
  const double r = d / 2.0;
  const double direct = std::max(std::abs(est.y_hat[0] - truth[0]),
                                 std::abs(est.y_hat[1] - truth[1]));
  const double swapped = std::max(std::abs(est.y_hat[0] - truth[1]),
                                  std::abs(est.y_hat[1] - truth[0]));
  return r - std::min(direct, swapped);  // positive ⇔ matched within d/2
}

}  // namespace

bool run_cell(const SweepConfig& config, double d, double sigma, double* margin) {
  double worst = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (int t = 0; t < config.trials; ++t) {
    const double m = one_trial(config, d, sigma, t);
    worst = std::min(worst, m);
    if (m <= 0.0) {  // all-success criterion: first failure settles the cell
      ok = false;
      break;
    }
  }
  if (margin) *margin = worst;
  return ok;
}

bool run_cell(const SweepConfig& config, double d, double sigma) {
  return run_cell(config, d, sigma, nullptr);
}

PhaseTransitionGrid sweep(const SweepConfig& config) {
  if (config.trials < 1) throw std::domain_error("sweep: trials must be >= 1");
  if (config.sigma_grid.empty() || config.separation_grid.empty())
    throw std::domain_error("sweep: grids must be nonempty");
  if (!std::is_sorted(config.sigma_grid.begin(), config.sigma_grid.end()) ||
      !std::is_sorted(config.separation_grid.begin(), config.separation_grid.end()))
    throw std::domain_error("sweep: grids must be sorted ascending");
  if (config.separation_grid.front() <= 0.0 || config.sigma_grid.front() <= 0.0)
    throw std::domain_error("sweep: grids must be positive");
  // canonical sources live at +-d/2 inside the cluster window B_{pi/(2 omega)}
  if (config.separation_grid.back() >= kPi / config.omega)
    throw std::domain_error("sweep: separations must stay below pi/omega");

  PhaseTransitionGrid grid;
  grid.config = config;
  const std::size_t nd = config.separation_grid.size();
  const std::size_t ns = config.sigma_grid.size();
  grid.success.assign(nd, std::vector<std::uint8_t>(ns, 0));
  grid.cell_detail.assign(nd, std::vector<double>(ns, 0.0));

  const unsigned hw = std::thread::hardware_concurrency();
  const unsigned nthreads =
      config.threads > 0 ? static_cast<unsigned>(config.threads) : std::max(1u, hw);
  std::atomic<std::size_t> next{0};
  const std::size_t total = nd * ns;

  auto worker = [&]() {
    for (std::size_t cell = next.fetch_add(1); cell < total; cell = next.fetch_add(1)) {
      const std::size_t i = cell / ns, j = cell % ns;
      double margin = 0.0;
      const bool ok =
          run_cell(config, config.separation_grid[i], config.sigma_grid[j], &margin);
      grid.success[i][j] = ok ? 1 : 0;
      grid.cell_detail[i][j] = margin;
    }
  };
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return grid;
}

std::vector<BoundaryPoint> extract_boundary(const PhaseTransitionGrid& grid) {
  std::vector<BoundaryPoint> out;
  const auto& cfg = grid.config;
  for (std::size_t j = 0; j < cfg.sigma_grid.size(); ++j) {
    for (std::size_t i = 0; i < cfg.separation_grid.size(); ++i) {
      if (grid.success[i][j]) {
        out.push_back({cfg.sigma_grid[j], cfg.separation_grid[i]});
        break;
      }
    }
  }
  return out;
}

SlopeFit fit_slope(const std::vector<BoundaryPoint>& boundary, SlopeAxis axis,
                   double theta_min, double omega) {
  if (boundary.size() < 3)
    throw std::domain_error("fit_slope: need at least 3 boundary points");
  SlopeFit fit;
  fit.points.reserve(boundary.size());
  for (const BoundaryPoint& b : boundary) {
    const double ax = axis == SlopeAxis::SRF ? srf(b.d_star, omega)
                                             : pasrf(b.d_star, omega, theta_min);
    fit.points.emplace_back(std::log(ax), std::log(b.sigma));
  }
  const double n = static_cast<double>(fit.points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (auto [x, y] : fit.points) {
    sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
  }
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  const double cxy = sxy - sx * sy / n;
  if (vx == 0.0) throw std::domain_error("fit_slope: degenerate abscissa");
  fit.slope = cxy / vx;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.r_squared = vy == 0.0 ? 1.0 : (cxy * cxy) / (vx * vy);
  return fit;
}

std::vector<OverlayPoint> theory_overlay(const SweepConfig& config) {
  std::vector<OverlayPoint> out;
  out.reserve(config.sigma_grid.size());
  for (double sigma : config.sigma_grid) {
    OverlayPoint p;
    p.sigma = sigma;
    BoundQuery q;
    q.beta = config.beta;
    q.noise_ratio = sigma / config.m;
    q.theta = config.theta;
    q.omega = config.omega;
    q.task = config.task;
    q.kind = BoundKind::SRL;
    const BoundResult srl = evaluate_bound(q);
    q.kind = BoundKind::SRU;
    const BoundResult sru = evaluate_bound(q);
    if (srl.valid) p.srl_d = srl.value;
    if (sru.valid) p.sru_d = sru.value;
    out.push_back(p);
  }
  return out;
}

std::string grid_csv(const PhaseTransitionGrid& grid) {
  std::ostringstream os;
  os.precision(17);
  os << "d,sigma,success,detail\n";
  const auto& cfg = grid.config;
  for (std::size_t i = 0; i < cfg.separation_grid.size(); ++i)
    for (std::size_t j = 0; j < cfg.sigma_grid.size(); ++j)
      os << cfg.separation_grid[i] << ',' << cfg.sigma_grid[j] << ','
         << (grid.success[i][j] ? 1 : 0) << ',' << grid.cell_detail[i][j] << '\n';
  return os.str();
}

std::string boundary_csv(const std::vector<BoundaryPoint>& boundary,
                         const SweepConfig& config) {
  std::ostringstream os;
  os.precision(17);
  const double tm = effective_phase(config.theta);
  os << "sigma,d_star,srf,pasrf\n";
  for (const BoundaryPoint& b : boundary)
    os << b.sigma << ',' << b.d_star << ',' << srf(b.d_star, config.omega) << ','
       << pasrf(b.d_star, config.omega, tm) << '\n';
  return os.str();
}

std::string slope_txt(const SlopeFit& fit) {
  std::ostringstream os;
  os.precision(17);
  os << "slope " << fit.slope << "\nintercept " << fit.intercept << "\nr2 "
     << fit.r_squared << "\nn_points " << fit.points.size() << '\n';
  return os.str();
}

std::string overlay_csv(const std::vector<BoundaryPoint>& boundary,
                        const std::vector<OverlayPoint>& overlay) {
  std::ostringstream os;
  os.precision(17);
  os << "sigma,d_star,srl_d,sru_d\n";
  for (const OverlayPoint& p : overlay) {
    os << p.sigma << ',';
    bool found = false;
    for (const BoundaryPoint& b : boundary)
      if (b.sigma == p.sigma) {
        os << b.d_star;
        found = true;
        break;
      }
    if (!found) os << "nan";
    os << ',';
    if (p.srl_d) os << *p.srl_d; else os << "nan";
    os << ',';
    if (p.sru_d) os << *p.sru_d; else os << "nan";
    os << '\n';
  }
  return os.str();
}

}  // namespace superres

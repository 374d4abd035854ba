#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "superres/bounds.hpp"
#include "superres/detect.hpp"
#include "superres/locate.hpp"
#include "superres/model.hpp"

namespace superres {

enum class SweepMethod { L0, SVT, MUSIC, ESPRIT, ML, CVX };
enum class SlopeAxis { SRF, PASRF };

const char* to_string(SweepMethod m);
SweepMethod sweep_method_from_string(const std::string& name);

struct SweepConfig {
  Task task = Task::Detection;
  SweepMethod method = SweepMethod::L0;
  double beta = 1.0;
  double theta = 0.0;
  double omega = 1.0;
  double m = 1.0;
  std::vector<double> sigma_grid;       // noise levels σ, log-spaced, sorted
  std::vector<double> separation_grid;  // separations d, sorted ascending
  int trials = 200;
  std::uint64_t seed = 0;
  SlopeAxis grid_axis = SlopeAxis::SRF;
  int sample_count = 10;  // M; SVT switches to the 3-point {−Ω, 0, Ω} spec
  int threads = 0;        // 0 = hardware concurrency
};

std::vector<double> log_spaced(double lo, double hi, int n);

struct PhaseTransitionGrid {
  SweepConfig config;
  // success[i][j] / detail[i][j]: separation i × sigma j. Plain bytes, not
  // vector<bool>, so parallel cell writers never share a word.
  std::vector<std::vector<std::uint8_t>> success;
  std::vector<std::vector<double>> cell_detail;  // worst-case margin per cell
};

struct BoundaryPoint {
  double sigma = 0.0;
  double d_star = 0.0;
};

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> points;  // (log axis value, log sigma)
};

struct OverlayPoint {
  double sigma = 0.0;
  std::optional<double> srl_d;
  std::optional<double> sru_d;
};

// One (d, σ) cell: `trials` independent noise draws, success only if every
// trial succeeds. Per-trial seeds are hashed from (seed, bits(d), bits(σ),
// trial), so the verdict is independent of evaluation order and adding
// trials never turns a failing cell green.
bool run_cell(const SweepConfig& config, double d, double sigma);
bool run_cell(const SweepConfig& config, double d, double sigma, double* margin);

PhaseTransitionGrid sweep(const SweepConfig& config);

// Per σ column, the smallest separation with success; all-fail columns are
// omitted.
std::vector<BoundaryPoint> extract_boundary(const PhaseTransitionGrid& grid);

// OLS of log σ on log(axis value); axis is SRF or PASRF of d_star.
SlopeFit fit_slope(const std::vector<BoundaryPoint>& boundary, SlopeAxis axis,
                   double theta_min, double omega);

// SRL/SRU separation per σ for the configured regime; invalid bounds emit
// gaps.
std::vector<OverlayPoint> theory_overlay(const SweepConfig& config);

// CSV/gnuplot exports (headers document the columns)
std::string grid_csv(const PhaseTransitionGrid& grid);
std::string boundary_csv(const std::vector<BoundaryPoint>& boundary,
                         const SweepConfig& config);
std::string slope_txt(const SlopeFit& fit);
std::string overlay_csv(const std::vector<BoundaryPoint>& boundary,
                        const std::vector<OverlayPoint>& overlay);

}  // namespace superres

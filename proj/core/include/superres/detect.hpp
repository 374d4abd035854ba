#pragma once

#include <vector>

#include "superres/model.hpp"

namespace superres {

enum class DetectionMethod { L0, SVT };

struct DetectionVerdict {
  DetectionMethod method = DetectionMethod::L0;
  bool declared_two = false;
  // SVT: σ̂₂; L0: minimal enclosing radius over the candidate grid
  double detail = 0.0;
};

struct Circle {
  cplx center{0.0, 0.0};
  double radius = 0.0;
};

struct L0Result {
  bool feasible = false;   // some one-point σ-admissible explanation exists
  double best_radius = 0.0;
  double best_y = 0.0;
};

// c_m = Y(ω_m)·e^{−i ŷ ω_m}: demodulate a one-point candidate at ŷ.
std::vector<cplx> rotate_candidates(const Measurement& y, double y_hat);

// Minimal circle covering all points. Randomized incremental (move-to-front)
// Welzl with a fixed shuffle seed, expected linear time, exact on the <= 3
// support points.
Circle smallest_enclosing_circle(const std::vector<cplx>& points);

// Do the three open disks D(c, σ) share a point? Exact geometric test; kept
// as a cross-validation oracle for the Helly argument.
bool triple_disk_feasible(cplx ci, cplx cj, cplx ck, double sigma);

// Default candidate grid: n uniform points over [−π/Ω, π/Ω].
std::vector<double> default_l0_grid(double omega, int n = 1024);

// Feasibility of a one-point σ-admissible measure: min over ŷ of the
// enclosing radius of the rotated samples, with golden-section refinement
// around the best grid point. Feasible ⇔ min radius < σ (1e−12 margin).
// The ℓ0 detector declares two sources iff this is infeasible.
L0Result l0_one_point_feasible(const Measurement& y, double sigma,
                               const std::vector<double>& grid);

DetectionVerdict l0_detect(const Measurement& y, double sigma,
                           const std::vector<double>& grid);

// H = [[Y(−Ω), Y(0)], [Y(0), Y(Ω)]]; declare two sources iff σ̂₂ ≥ 2σ.
DetectionVerdict svt_detect(cplx y_minus, cplx y_zero, cplx y_plus, double sigma);

// Convenience over a measurement whose grid contains {−Ω, 0, Ω}.
DetectionVerdict svt_detect(const Measurement& y, double sigma);

}  // namespace superres

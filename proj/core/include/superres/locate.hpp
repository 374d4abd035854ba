#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "superres/model.hpp"

namespace superres {

// Estimator could not produce two usable locations (pseudospectrum
// coalescence, eigenvalue collapse, fewer than two recovered peaks). A Monte
// Carlo trial catches this and counts it as a failure, not an error.
struct EstimationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class LocationMethod { MUSIC, ESPRIT, ML, CVX };

const char* to_string(LocationMethod m);

struct HankelData {
  // row-major (M−L+1) × L block, entry (p, q) = Y(ω_{p+q})   (0-based)
  std::vector<cplx> matrix;
  int rows = 0;
  int cols = 0;
  int pencil = 0;  // L

  const cplx& at(int p, int q) const { return matrix[p * cols + q]; }
};

struct LocationEstimate {
  std::array<double, 2> y_hat{0.0, 0.0};
  std::array<cplx, 2> amplitudes{cplx{0, 0}, cplx{0, 0}};
  LocationMethod method = LocationMethod::MUSIC;
  double residual = 0.0;           // ‖Y − A x̂‖₂ against the full measurement
  bool degeneracy_warning = false; // ESPRIT eigenvalue modulus far from 1
};

HankelData build_hankel(const Measurement& y, int pencil);

// Balanced pencil L = ⌈M/2⌉ maximizes the smaller Hankel dimension.
int default_pencil(int sample_count);

// Grid of n uniform points over the cluster window [−π/(2Ω), π/(2Ω)].
std::vector<double> cluster_window_grid(double omega, int n);

// Subspace pseudospectrum peak picking on `grid` (default 2048 points over
// the cluster window), iterated parabolic refinement of the two dominant
// peaks, amplitudes by least squares against the full measurement.
LocationEstimate music_estimate(const Measurement& y, int n_sources = 2,
                                const std::vector<double>& grid = {});

// Unitary ESPRIT: forward-backward augmented Hankel → centro-Hermitian →
// real SVD; shift invariance of the signal subspace gives the locations from
// eigenvalue phases, y_k = arg(λ_k)/Δω.
LocationEstimate esprit_estimate(const Measurement& y, int n_sources = 2);

// Exhaustive two-point search over grid pairs, least-squares amplitudes per
// pair, smallest residual wins (ties: smaller separation, then lexicographic).
LocationEstimate ml_estimate(const Measurement& y, const std::vector<double>& grid = {});

struct BpdnOptions {
  int max_iter = 3000;
  double tol = 1e-6;
  // ADMM penalty; <= 0 picks a scale-aware default from ‖Y‖₂
  double rho = 0.0;
  bool record_merit = false;
};

struct BpdnResult {
  std::vector<cplx> x;
  bool converged = false;
  int iterations = 0;
  double residual_norm = 0.0;       // ‖Y − Ax‖₂ at return
  std::vector<double> merit_trace;  // ‖·‖₁ of the feasible iterate, per iteration
};

// min ‖x‖₁ s.t. ‖Y − Ax‖₂ ≤ ε with A[k][g] = e^{i ω_k y_g}, solved by
// operator splitting: elementwise complex soft-thresholding alternated with
// an exact projection onto the ε-ball (range-space Woodbury solve). The
// returned iterate always satisfies ‖Y − Ax‖₂ ≤ ε(1 + tol).
BpdnResult bpdn_solve(const Measurement& y, const std::vector<double>& dictionary_grid,
                      double epsilon, const BpdnOptions& opts = {});

// ε = σ√M; two dominant |x| peaks, contiguous above-half-max runs refined by
// amplitude-weighted centroids.
LocationEstimate cvx_estimate(const Measurement& y, const std::vector<double>& grid,
                              double sigma, const BpdnOptions& opts = {});

// True iff some assignment (identity or swap) puts each estimate strictly
// within d/2 of its own distinct truth point, d = |y₁ − y₂|.
bool match_within_half_d(const std::array<double, 2>& truth,
                         const std::array<double, 2>& estimate);

}  // namespace superres

#include "superres/locate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace superres {

const char* to_string(LocationMethod m) {
  switch (m) {
    case LocationMethod::MUSIC: return "music";
    case LocationMethod::ESPRIT: return "esprit";
    case LocationMethod::ML: return "ml";
    case LocationMethod::CVX: return "cvx";
  }
  return "?";
}

HankelData build_hankel(const Measurement& y, int pencil) {
  const int m = static_cast<int>(y.values.size());
  if (pencil < 2 || pencil > m - 1)
    throw std::invalid_argument("build_hankel: pencil must satisfy 2 <= L <= M-1");
  HankelData h;
  h.pencil = pencil;
  h.cols = pencil;
  h.rows = m - pencil + 1;
  h.matrix.resize(static_cast<std::size_t>(h.rows) * h.cols);
  for (int p = 0; p < h.rows; ++p)
    for (int q = 0; q < h.cols; ++q) h.matrix[p * h.cols + q] = y.values[p + q];
  return h;
}

int default_pencil(int sample_count) { return (sample_count + 1) / 2; }

std::vector<double> cluster_window_grid(double omega, int n) {
  std::vector<double> grid(n);
  const double r = kPi / (2.0 * omega);
  for (int i = 0; i < n; ++i) grid[i] = -r + 2.0 * r * i / (n - 1);
  return grid;
}

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;

MatrixXcd to_eigen(const HankelData& h) {
  MatrixXcd m(h.rows, h.cols);
  for (int p = 0; p < h.rows; ++p)
    for (int q = 0; q < h.cols; ++q) m(p, q) = h.at(p, q);
  return m;
}

// Least-squares amplitudes for two fixed locations against the full
// measurement; returns (amps, residual norm).
std::pair<std::array<cplx, 2>, double> fit_amplitudes(const Measurement& y,
                                                      double y1, double y2) {
  const int m = static_cast<int>(y.values.size());
  MatrixXcd a(m, 2);
  VectorXcd rhs(m);
  for (int k = 0; k < m; ++k) {
    a(k, 0) = std::polar(1.0, y.spec.frequencies[k] * y1);
    a(k, 1) = std::polar(1.0, y.spec.frequencies[k] * y2);
    rhs(k) = y.values[k];
  }
  const VectorXcd x = a.colPivHouseholderQr().solve(rhs);
  const double res = (rhs - a * x).norm();
  return {{x(0), x(1)}, res};
}

// steering vector on the Hankel row geometry: entries e^{i y ω_p} for the
// first (M−L+1) sample frequencies
VectorXcd steering(const Measurement& y, int rows, double loc) {
  VectorXcd a(rows);
  for (int p = 0; p < rows; ++p) a(p) = std::polar(1.0, loc * y.spec.frequencies[p]);
  return a;
}

}  // namespace

LocationEstimate music_estimate(const Measurement& y, int n_sources,
                                const std::vector<double>& grid_in) {
  if (n_sources < 1 || n_sources > 2)
    throw std::invalid_argument("music_estimate: n_sources must be 1 or 2");
  const int m = static_cast<int>(y.values.size());
  const int pencil = default_pencil(m);
  const HankelData h = build_hankel(y, pencil);
  const std::vector<double> grid =
      grid_in.empty() ? cluster_window_grid(y.spec.omega, 2048) : grid_in;

  Eigen::JacobiSVD<MatrixXcd> svd(to_eigen(h), Eigen::ComputeFullU);
  const MatrixXcd noise_basis =
      svd.matrixU().rightCols(h.rows - n_sources);  // V: beyond the signal space

  // D(y) = ‖V^H a(y)‖² ; pseudospectrum P = 1/D peaks where D dips
  auto dvalue = [&](double loc) {
    return (noise_basis.adjoint() * steering(y, h.rows, loc)).squaredNorm();
  };

  std::vector<double> d(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) d[i] = dvalue(grid[i]);

  // interior local minima of D = local maxima of the pseudospectrum
  std::vector<std::size_t> minima;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i)
    if (d[i] < d[i - 1] && d[i] <= d[i + 1]) minima.push_back(i);
  std::sort(minima.begin(), minima.end(),
            [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  if (static_cast<int>(minima.size()) < n_sources)
    throw EstimationFailure("music: fewer pseudospectrum peaks than sources");

  // iterated parabolic interpolation on D around each retained peak
  auto refine = [&](std::size_t idx) {
    double x = grid[idx];
    double hstep = grid[1] - grid[0];
    for (int it = 0; it < 3; ++it) {
      const double f0 = dvalue(x - hstep), f1 = dvalue(x), f2 = dvalue(x + hstep);
      const double denom = f0 - 2.0 * f1 + f2;
      if (denom > 0.0) {
        double shift = 0.5 * (f0 - f2) / denom * hstep;
        shift = std::clamp(shift, -hstep, hstep);
        x += shift;
      }
      hstep *= 0.25;
    }
    return x;
  };

  LocationEstimate est;
  est.method = LocationMethod::MUSIC;
  if (n_sources == 1) {
    const double y0 = refine(minima[0]);
    est.y_hat = {y0, y0};
    cplx acc{0.0, 0.0};
    for (int k = 0; k < m; ++k)
      acc += std::conj(std::polar(1.0, y.spec.frequencies[k] * y0)) * y.values[k];
    const cplx amp = acc / static_cast<double>(m);
    est.amplitudes = {amp, cplx{0.0, 0.0}};
    double res2 = 0.0;
    for (int k = 0; k < m; ++k)
      res2 += std::norm(y.values[k] - amp * std::polar(1.0, y.spec.frequencies[k] * y0));
    est.residual = std::sqrt(res2);
    return est;
  }
  est.y_hat = {refine(minima[0]), refine(minima[1])};
  if (est.y_hat[0] > est.y_hat[1]) std::swap(est.y_hat[0], est.y_hat[1]);
  if (est.y_hat[1] - est.y_hat[0] < 1e-12)
    throw EstimationFailure("music: refined peaks coalesced");
  auto [amps, res] = fit_amplitudes(y, est.y_hat[0], est.y_hat[1]);
  est.amplitudes = amps;
  est.residual = res;
  return est;
}

namespace {

// unitary centro-symmetric transform Q_n (Q_n^H M Q_m is real for
// centro-Hermitian M)
MatrixXcd unitary_q(int n) {
  const int k = n / 2;
  MatrixXcd q = MatrixXcd::Zero(n, n);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const cplx i{0.0, 1.0};
  for (int r = 0; r < k; ++r) {
    q(r, r) = inv_sqrt2;
    q(r, n - k + r) = i * inv_sqrt2;
    q(n - 1 - r, r) = inv_sqrt2;
    q(n - 1 - r, n - k + r) = -i * inv_sqrt2;
  }
  if (n % 2 == 1) q(k, k) = 1.0;
  return q;
}

}  // namespace

LocationEstimate esprit_estimate(const Measurement& y, int n_sources) {
  if (n_sources != 2)
    throw std::invalid_argument("esprit_estimate: only the two-source pencil is supported");
  const int m = static_cast<int>(y.values.size());
  const int pencil = default_pencil(m);
  const HankelData hd = build_hankel(y, pencil);
  const MatrixXcd h = to_eigen(hd);
  const int rows = hd.rows, cols = hd.cols;

  // forward-backward augmentation [H | J conj(H) J] is centro-Hermitian
  MatrixXcd fb(rows, 2 * cols);
  fb.leftCols(cols) = h;
  for (int p = 0; p < rows; ++p)
    for (int q = 0; q < cols; ++q)
      fb(p, cols + q) = std::conj(h(rows - 1 - p, cols - 1 - q));

  const MatrixXcd qr = unitary_q(rows);
  const MatrixXcd qc = unitary_q(2 * cols);
  const MatrixXd t = (qr.adjoint() * fb * qc).real();

  Eigen::JacobiSVD<MatrixXd> svd(t, Eigen::ComputeFullU);
  const MatrixXcd u = qr * svd.matrixU().leftCols(2);  // back to the complex subspace

  // shift invariance between the two maximally overlapping subarrays
  const MatrixXcd u1 = u.topRows(rows - 1);
  const MatrixXcd u2 = u.bottomRows(rows - 1);
  const Eigen::Matrix2cd phi =
      (u1.adjoint() * u1).ldlt().solve(u1.adjoint() * u2);
  const Eigen::ComplexEigenSolver<Eigen::Matrix2cd> eig(phi);

  const double spacing = y.spec.spacing();
  LocationEstimate est;
  est.method = LocationMethod::ESPRIT;
  for (int k = 0; k < 2; ++k) {
    const cplx lambda = eig.eigenvalues()(k);
    const double mod = std::abs(lambda);
    if (mod > 1.5 || mod < 0.5) est.degeneracy_warning = true;
    est.y_hat[k] = std::arg(lambda) / spacing;
  }
  if (est.y_hat[0] > est.y_hat[1]) std::swap(est.y_hat[0], est.y_hat[1]);
  if (est.y_hat[1] - est.y_hat[0] < 1e-12)
    throw EstimationFailure("esprit: eigenvalues collapsed to one location");
  // the phase-unwrapping window |y| < π/Δω must contain the cluster window
  if (kPi / spacing < kPi / (2.0 * y.spec.omega))
    throw std::logic_error("esprit: sample grid too coarse for the cluster window");
  auto [amps, res] = fit_amplitudes(y, est.y_hat[0], est.y_hat[1]);
  est.amplitudes = amps;
  est.residual = res;
  return est;
}

LocationEstimate ml_estimate(const Measurement& y, const std::vector<double>& grid_in) {
  const std::vector<double> grid =
      grid_in.empty() ? cluster_window_grid(y.spec.omega, 512) : grid_in;
  const int g = static_cast<int>(grid.size());
  if (g < 2) throw std::invalid_argument("ml_estimate: grid needs at least 2 points");
  const int m = static_cast<int>(y.values.size());

  // correlations b_j = a(y_j)^H Y and the Gram column a_j^H a_k; on the
  // uniform grid the Gram entry depends only on the index difference, which
  // turns the O(G²) pair scan into O(1) work per pair
  std::vector<cplx> b(g);
  for (int j = 0; j < g; ++j) {
    cplx acc{0.0, 0.0};
    for (int k = 0; k < m; ++k)
      acc += std::conj(std::polar(1.0, y.spec.frequencies[k] * grid[j])) * y.values[k];
    b[j] = acc;
  }
  const double step = grid[1] - grid[0];
  std::vector<cplx> gram(g);
  for (int dlt = 0; dlt < g; ++dlt) {
    cplx acc{0.0, 0.0};
    for (int k = 0; k < m; ++k) acc += std::polar(1.0, y.spec.frequencies[k] * dlt * step);
    gram[dlt] = acc;
  }
  double ynorm2 = 0.0;
  for (const cplx& v : y.values) ynorm2 += std::norm(v);

  double best_res2 = std::numeric_limits<double>::infinity();
  int bj = 0, bk = 1;
  cplx bx1{0, 0}, bx2{0, 0};
  const double md = static_cast<double>(m);
  for (int j = 0; j < g; ++j) {
    for (int k = j + 1; k < g; ++k) {
      const cplx gjk = gram[k - j];  // a_j^H a_k
      const double det = md * md - std::norm(gjk);
      if (det <= 0.0) continue;
      const cplx x1 = (md * b[j] - gjk * b[k]) / det;
      const cplx x2 = (md * b[k] - std::conj(gjk) * b[j]) / det;
      const double fit = (std::conj(b[j]) * x1 + std::conj(b[k]) * x2).real();
      const double res2 = ynorm2 - fit;
      const bool better =
          res2 < best_res2 ||
          (res2 == best_res2 && (k - j < bk - bj || (k - j == bk - bj && j < bj)));
      if (better) {
        best_res2 = res2;
        bj = j;
        bk = k;
        bx1 = x1;
        bx2 = x2;
      }
    }
  }
  LocationEstimate est;
  est.method = LocationMethod::ML;
  est.y_hat = {grid[bj], grid[bk]};
  est.amplitudes = {bx1, bx2};
  // recompute the winning residual directly; the scan's ||Y||^2 - fit form
  // cancels to ~sqrt(eps) near zero
  double res2 = 0.0;
  for (int k = 0; k < m; ++k) {
    const cplx model = bx1 * std::polar(1.0, y.spec.frequencies[k] * grid[bj]) +
                       bx2 * std::polar(1.0, y.spec.frequencies[k] * grid[bk]);
    res2 += std::norm(y.values[k] - model);
  }
  est.residual = std::sqrt(res2);
  return est;
}

BpdnResult bpdn_solve(const Measurement& y, const std::vector<double>& grid,
                      double epsilon, const BpdnOptions& opts) {
  if (epsilon <= 0.0) throw std::domain_error("bpdn_solve: epsilon must be positive");
  if (grid.empty()) throw std::invalid_argument("bpdn_solve: empty dictionary grid");
  const int m = static_cast<int>(y.values.size());
  const int g = static_cast<int>(grid.size());

  MatrixXcd a(m, g);
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < g; ++j) a(k, j) = std::polar(1.0, y.spec.frequencies[k] * grid[j]);
  VectorXcd rhs(m);
  for (int k = 0; k < m; ++k) rhs(k) = y.values[k];

  BpdnResult out;
  out.x.assign(g, cplx{0.0, 0.0});
  if (rhs.norm() <= epsilon) {  // zero is feasible and ℓ1-minimal
    out.converged = true;
    out.residual_norm = rhs.norm();
    return out;
  }

  // K = AA^H eigendecomposition once; the ε-ball projection reduces to a
  // scalar Lagrange solve in the M-dimensional range space
  const Eigen::SelfAdjointEigenSolver<MatrixXcd> es(a * a.adjoint());
  const Eigen::VectorXd dg = es.eigenvalues();
  const MatrixXcd q = es.eigenvectors();

  auto project = [&](const VectorXcd& w) -> VectorXcd {
    const VectorXcd r = a * w - rhs;
    if (r.norm() <= epsilon) return w;
    const VectorXcd rt = q.adjoint() * r;
    auto excess = [&](double lam) {
      double s = 0.0;
      for (int i = 0; i < m; ++i) {
        const double den = 1.0 + lam * dg(i);
        s += std::norm(rt(i)) / (den * den);
      }
      return s - epsilon * epsilon;
    };
    double lo = 0.0, hi = 1.0;
    while (excess(hi) > 0.0) hi *= 2.0;
    for (int it = 0; it < 120 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (excess(mid) > 0.0 ? lo : hi) = mid;
    }
    const double lam = 0.5 * (lo + hi);
    VectorXcd tt(m);
    for (int i = 0; i < m; ++i) tt(i) = rt(i) / (1.0 + lam * dg(i));
    return w - lam * (a.adjoint() * (q * tt));
  };

  const double rho =
      opts.rho > 0.0 ? opts.rho : 32.0 * std::sqrt(static_cast<double>(m)) / rhs.norm();
  const double thr = 1.0 / rho;

  VectorXcd x = VectorXcd::Zero(g), z = VectorXcd::Zero(g), u = VectorXcd::Zero(g);
  int it = 0;
  for (it = 1; it <= opts.max_iter; ++it) {
    for (int j = 0; j < g; ++j) {  // x = soft(z − u, 1/ρ)
      const cplx v = z(j) - u(j);
      const double av = std::abs(v);
      x(j) = av > thr ? v * (1.0 - thr / av) : cplx{0.0, 0.0};
    }
    z = project(x + u);
    u += x - z;
    if (opts.record_merit) {
      // z is feasible after projection, so the merit is plain ‖z‖₁
      double l1 = 0.0;
      for (int j = 0; j < g; ++j) l1 += std::abs(z(j));
      out.merit_trace.push_back(l1);
    }
    if ((x - z).norm() <= opts.tol * std::max(1.0, z.norm())) break;
  }
  // return the projected iterate: feasible by construction even on early stop
  for (int j = 0; j < g; ++j) out.x[j] = z(j);
  out.iterations = std::min(it, opts.max_iter);
  out.converged = it <= opts.max_iter;
  out.residual_norm = (a * z - rhs).norm();
  return out;
}

LocationEstimate cvx_estimate(const Measurement& y, const std::vector<double>& grid_in,
                              double sigma, const BpdnOptions& opts) {
  const std::vector<double> grid =
      grid_in.empty() ? cluster_window_grid(y.spec.omega, 512) : grid_in;
  const int m = static_cast<int>(y.values.size());
  const double eps = std::max(sigma * std::sqrt(static_cast<double>(m)), 1e-12);
  const BpdnResult sol = bpdn_solve(y, grid, eps, opts);

  std::vector<double> mag(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) mag[j] = std::abs(sol.x[j]);

  // local maxima of |x|, keeping only dominant ones (the solver's feasible
  // iterate carries a dense low-level ripple that must not count as a source)
  std::vector<std::size_t> peaks;
  for (std::size_t j = 1; j + 1 < mag.size(); ++j)
    if (mag[j] > mag[j - 1] && mag[j] >= mag[j + 1] && mag[j] > 0.0) peaks.push_back(j);
  if (mag.size() >= 2 && mag.front() > mag[1]) peaks.push_back(0);
  if (mag.size() >= 2 && mag.back() > mag[mag.size() - 2]) peaks.push_back(mag.size() - 1);
  std::sort(peaks.begin(), peaks.end(),
            [&](std::size_t a, std::size_t b) { return mag[a] > mag[b]; });
  if (peaks.empty()) throw EstimationFailure("cvx: no magnitude peaks");
  const std::size_t p1 = peaks[0];
  std::size_t p2 = grid.size();
  for (std::size_t i = 1; i < peaks.size(); ++i) {
    if (mag[peaks[i]] < 0.05 * mag[p1]) break;  // below the dominance floor
    const auto gap = peaks[i] > p1 ? peaks[i] - p1 : p1 - peaks[i];
    if (gap > 1) { p2 = peaks[i]; break; }
  }
  if (p2 == grid.size())
    throw EstimationFailure("cvx: fewer than two dominant separated peaks");

  // centroid of the contiguous run above half the peak height
  auto centroid = [&](std::size_t p) {
    const double half = 0.5 * mag[p];
    std::size_t lo = p, hi = p;
    while (lo > 0 && mag[lo - 1] >= half) --lo;
    while (hi + 1 < mag.size() && mag[hi + 1] >= half) ++hi;
    double wsum = 0.0, lsum = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) {
      wsum += mag[j];
      lsum += mag[j] * grid[j];
    }
    return lsum / wsum;
  };
  LocationEstimate est;
  est.method = LocationMethod::CVX;
  est.y_hat = {centroid(p1), centroid(p2)};
  if (est.y_hat[0] > est.y_hat[1]) std::swap(est.y_hat[0], est.y_hat[1]);
  if (est.y_hat[1] - est.y_hat[0] < 1e-12)
    throw EstimationFailure("cvx: refined peaks coalesced");
  auto [amps, res] = fit_amplitudes(y, est.y_hat[0], est.y_hat[1]);
  est.amplitudes = amps;
  est.residual = res;
  return est;
}

bool match_within_half_d(const std::array<double, 2>& truth,
                         const std::array<double, 2>& estimate) {
  const double d = std::abs(truth[0] - truth[1]);
  if (d == 0.0) throw std::invalid_argument("match_within_half_d: truth points coincide");
  const double r = d / 2.0;
  const bool direct = std::abs(estimate[0] - truth[0]) < r &&
                      std::abs(estimate[1] - truth[1]) < r;
  const bool swapped = std::abs(estimate[0] - truth[1]) < r &&
                       std::abs(estimate[1] - truth[0]) < r;
  return direct || swapped;
}

}  // namespace superres

#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace superres {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// One point mass a·δ_y of a complex discrete measure.
struct Spike {
  double location = 0.0;
  cplx amplitude{0.0, 0.0};
};

// General k-spike complex measure Σ a_j δ_{y_j}. Candidate solutions and
// adversarial witnesses both live here. Locations must be pairwise distinct.
struct DiscreteMeasure {
  std::vector<Spike> spikes;

  DiscreteMeasure() = default;
  explicit DiscreteMeasure(std::vector<Spike> s);

  std::size_t size() const { return spikes.size(); }
};

// Ground truth μ = m e^{iθ₁}δ_{y₁} + β m e^{iθ₂}δ_{y₂} observed through the
// band [−Ω, Ω]. Both sources sit inside one Rayleigh window: |y_j| < π/(2Ω).
struct TwoPointSource {
  double m = 1.0;       // amplitude scale, > 0
  double beta = 1.0;    // amplitude ratio β ≥ 1
  double theta1 = 0.0;  // phase of source 1, in (−π, π]
  double theta2 = 0.0;  // phase of source 2
  double y1 = 0.0;
  double y2 = 0.0;
  double omega = 1.0;   // cutoff Ω > 0

  TwoPointSource() = default;
  TwoPointSource(double m, double beta, double theta1, double theta2,
                 double y1, double y2, double omega);

  // Canonical coordinates used throughout the constructions: locations ±d/2,
  // phases ±θ/2, the β-weighted source carrying phase −θ/2 at −d/2.
  static TwoPointSource canonical(double m, double beta, double theta,
                                  double separation, double omega);

  double separation() const;     // d = |y₁ − y₂|
  double relative_phase() const; // θ = θ₁ − θ₂
  DiscreteMeasure measure() const;
};

// Uniform symmetric sampling grid ω_k = −Ω + 2Ω(k−1)/(M−1). ESPRIT relies on
// the uniform spacing, so it is enforced at construction.
struct MeasurementSpec {
  double omega = 1.0;
  int count = 10;
  std::vector<double> frequencies;

  MeasurementSpec() : MeasurementSpec(1.0, 10) {}
  MeasurementSpec(double omega, int count);

  double spacing() const { return 2.0 * omega / (count - 1); }
};

struct Measurement {
  std::vector<cplx> values;  // Y(ω_k)
  MeasurementSpec spec;
};

// Admissible noise draw: every sample strictly inside the disk of radius σ.
struct NoiseDraw {
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::vector<cplx> samples;

  static NoiseDraw zero(int count);
};

// ℱ[μ](ω) = Σ a_j e^{i y_j ω} evaluated at each frequency.
std::vector<cplx> fourier_of_measure(const DiscreteMeasure& mu,
                                     const std::vector<double>& frequencies);
cplx fourier_of_measure(const DiscreteMeasure& mu, double frequency);

// i.i.d. samples uniform on the open complex disk of radius sigma,
// reproducible per seed.
NoiseDraw sample_noise(double sigma, int count, std::uint64_t seed);

// values[k] = ℱ[μ](ω_k) + W_k
Measurement synthesize(const TwoPointSource& source, const MeasurementSpec& spec,
                       const NoiseDraw& noise);

// Translation: y_j → y_j + x, so ℱ[shifted](ω) = e^{ixω} ℱ[μ](ω).
DiscreteMeasure shift_measure(const DiscreteMeasure& mu, double x);

// JSON object {omega, frequencies: [...], re: [...], im: [...]}; shared by
// the CLI and test fixtures. Doubles round-trip exactly.
std::string measurement_to_json(const Measurement& y);
Measurement measurement_from_json(const std::string& text);

}  // namespace superres

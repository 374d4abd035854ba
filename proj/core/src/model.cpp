#include "superres/model.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "superres/rng.hpp"

namespace superres {

DiscreteMeasure::DiscreteMeasure(std::vector<Spike> s) : spikes(std::move(s)) {
  if (spikes.empty())
    throw std::invalid_argument("DiscreteMeasure: needs at least one spike");
  for (std::size_t i = 0; i < spikes.size(); ++i)
    for (std::size_t j = i + 1; j < spikes.size(); ++j)
      if (spikes[i].location == spikes[j].location)
        throw std::invalid_argument("DiscreteMeasure: locations must be distinct");
}

TwoPointSource::TwoPointSource(double m_, double beta_, double t1, double t2,
                               double y1_, double y2_, double omega_)
    : m(m_), beta(beta_), theta1(t1), theta2(t2), y1(y1_), y2(y2_), omega(omega_) {
  if (m <= 0.0) throw std::domain_error("TwoPointSource: m must be positive");
  if (beta < 1.0) throw std::domain_error("TwoPointSource: beta must be >= 1");
  if (omega <= 0.0) throw std::domain_error("TwoPointSource: omega must be positive");
  if (y1 == y2) throw std::domain_error("TwoPointSource: locations must differ");
  const double window = kPi / (2.0 * omega);
  if (std::abs(y1) >= window || std::abs(y2) >= window)
    throw std::domain_error("TwoPointSource: sources must lie in B_{pi/(2 omega)}(0)");
}

TwoPointSource TwoPointSource::canonical(double m, double beta, double theta,
                                         double separation, double omega) {
  if (separation <= 0.0)
    throw std::domain_error("TwoPointSource::canonical: separation must be positive");
  return TwoPointSource(m, beta, theta / 2.0, -theta / 2.0,
                        separation / 2.0, -separation / 2.0, omega);
}

double TwoPointSource::separation() const { return std::abs(y1 - y2); }
double TwoPointSource::relative_phase() const { return theta1 - theta2; }

DiscreteMeasure TwoPointSource::measure() const {
  return DiscreteMeasure({{y1, m * std::polar(1.0, theta1)},
                          {y2, beta * m * std::polar(1.0, theta2)}});
}

MeasurementSpec::MeasurementSpec(double omega_, int count_)
    : omega(omega_), count(count_) {
  if (omega <= 0.0) throw std::domain_error("MeasurementSpec: omega must be positive");
  if (count < 3) throw std::domain_error("MeasurementSpec: count must be >= 3");
  frequencies.resize(count);
  for (int k = 0; k < count; ++k)
    frequencies[k] = -omega + 2.0 * omega * k / (count - 1);
}

NoiseDraw NoiseDraw::zero(int count) {
  NoiseDraw d;
  d.sigma = 0.0;
  d.samples.assign(static_cast<std::size_t>(count), cplx{0.0, 0.0});
  return d;
}

cplx fourier_of_measure(const DiscreteMeasure& mu, double frequency) {
  cplx acc{0.0, 0.0};
  for (const Spike& s : mu.spikes)
    acc += s.amplitude * std::polar(1.0, s.location * frequency);
  return acc;
}

std::vector<cplx> fourier_of_measure(const DiscreteMeasure& mu,
                                     const std::vector<double>& frequencies) {
  std::vector<cplx> out(frequencies.size());
  for (std::size_t k = 0; k < frequencies.size(); ++k)
    out[k] = fourier_of_measure(mu, frequencies[k]);
  return out;
}

NoiseDraw sample_noise(double sigma, int count, std::uint64_t seed) {
  if (sigma <= 0.0) throw std::domain_error("sample_noise: sigma must be positive");
  if (count < 1) throw std::domain_error("sample_noise: count must be >= 1");
  NoiseDraw draw;
  draw.sigma = sigma;
  draw.seed = seed;
  draw.samples.resize(count);
  SplitMix64 rng(seed);
  for (int k = 0; k < count; ++k) {
    // radius σ√u is uniform in area; u < 1 keeps |W| < σ strict
    const double r = sigma * std::sqrt(rng.next_double());
    const double phi = 2.0 * kPi * rng.next_double();
    draw.samples[k] = std::polar(r, phi);
  }
  return draw;
}

Measurement synthesize(const TwoPointSource& source, const MeasurementSpec& spec,
                       const NoiseDraw& noise) {
  if (static_cast<int>(noise.samples.size()) != spec.count)
    throw std::invalid_argument("synthesize: noise length does not match spec.count");
  if (source.omega != spec.omega)
    throw std::invalid_argument("synthesize: source and spec cutoff differ");
  Measurement y;
  y.spec = spec;
  y.values = fourier_of_measure(source.measure(), spec.frequencies);
  for (int k = 0; k < spec.count; ++k) y.values[k] += noise.samples[k];
  return y;
}

DiscreteMeasure shift_measure(const DiscreteMeasure& mu, double x) {
  DiscreteMeasure out = mu;
  for (Spike& s : out.spikes) s.location += x;
  return out;
}

std::string measurement_to_json(const Measurement& y) {
  nlohmann::json j;
  j["omega"] = y.spec.omega;
  j["frequencies"] = y.spec.frequencies;
  std::vector<double> re(y.values.size()), im(y.values.size());
  for (std::size_t k = 0; k < y.values.size(); ++k) {
    re[k] = y.values[k].real();
    im[k] = y.values[k].imag();
  }
  j["re"] = re;
  j["im"] = im;
  return j.dump();
}

Measurement measurement_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  const auto freqs = j.at("frequencies").get<std::vector<double>>();
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.at("im").get<std::vector<double>>();
  if (re.size() != im.size() || re.size() != freqs.size())
    throw std::invalid_argument("measurement_from_json: array lengths differ");
  Measurement y;
  y.spec = MeasurementSpec(j.at("omega").get<double>(), static_cast<int>(freqs.size()));
  for (std::size_t k = 0; k < freqs.size(); ++k)
    if (std::abs(freqs[k] - y.spec.frequencies[k]) > 1e-9 * y.spec.omega)
      throw std::invalid_argument(
          "measurement_from_json: frequency grid must be uniform and symmetric "
          "over [-omega, omega]");
  // keep the stored grid verbatim so round-trips are bit-identical
  y.spec.frequencies = freqs;
  y.values.resize(re.size());
  for (std::size_t k = 0; k < re.size(); ++k) y.values[k] = cplx{re[k], im[k]};
  return y;
}

}  // namespace superres

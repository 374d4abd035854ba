#include "superres/witness.hpp"

#include <cmath>
#include <stdexcept>

namespace superres {

namespace {

constexpr cplx kI{0.0, 1.0};

// Proof-coordinate sources. Which endpoint carries the β-weighted spike
// follows each appendix construction verbatim.
TwoPointSource canonical_for(Regime regime, double m, double beta, double theta_abs,
                             double d, double omega) {
  switch (regime) {
    case Regime::InPhase:
      // m δ_{−d/2} + βm δ_{+d/2}
      return TwoPointSource(m, beta, 0.0, 0.0, -d / 2.0, d / 2.0, omega);
    case Regime::NearEndpointZero:
    case Regime::LargePhase:
      // m e^{iθ/2} δ_{+d/2} + βm e^{−iθ/2} δ_{−d/2}
      return TwoPointSource(m, beta, theta_abs / 2.0, -theta_abs / 2.0,
                            d / 2.0, -d / 2.0, omega);
    case Regime::NearEndpointPi:
      // m e^{iθ/2} δ_{−d/2} + βm e^{−iθ/2} δ_{+d/2}
      return TwoPointSource(m, beta, theta_abs / 2.0, -theta_abs / 2.0,
                            -d / 2.0, d / 2.0, omega);
  }
  throw std::logic_error("canonical_for: unknown regime");
}

void require_phase(Regime regime, double theta_abs) {
  if (regime == Regime::InPhase && theta_abs != 0.0)
    throw std::invalid_argument("witness: in-phase construction requires theta = 0");
  if (regime != Regime::InPhase && theta_abs == 0.0)
    throw std::invalid_argument("witness: out-of-phase construction requires theta != 0");
}

bool source_matches(const TwoPointSource& a, const TwoPointSource& b) {
  const double tol = 1e-12;
  return std::abs(a.m - b.m) <= tol * a.m && std::abs(a.beta - b.beta) <= tol * a.beta &&
         std::abs(a.theta1 - b.theta1) <= tol && std::abs(a.theta2 - b.theta2) <= tol &&
         std::abs(a.y1 - b.y1) <= tol && std::abs(a.y2 - b.y2) <= tol &&
         a.omega == b.omega;
}

}  // namespace

WitnessCase detection_witness_case(double m, double beta, double theta,
                                   double d, double omega, Regime regime) {
  const double ta = std::abs(theta);
  require_phase(regime, ta);
  WitnessCase wc;
  wc.task = Task::Detection;
  wc.regime = regime;
  wc.source = canonical_for(regime, m, beta, ta, d, omega);

  switch (regime) {
    case Regime::InPhase: {
      // one-support positive measure (β+1)m δ at the center of mass
      wc.witness = DiscreteMeasure({{(beta - 1.0) / (beta + 1.0) * d / 2.0,
                                     cplx{(beta + 1.0) * m, 0.0}}});
      break;
    }
    case Regime::NearEndpointZero: {
      const double f = (1.0 - beta) / (beta + 1.0);
      wc.witness = DiscreteMeasure(
          {{f * d / 2.0, (beta + 1.0) * m * std::polar(1.0, f * ta / 2.0)}});
      break;
    }
    case Regime::NearEndpointPi: {
      if (beta == 1.0)
        throw UnsupportedWitness(
            "near-pi subtractive detection witness needs beta > 1; at beta = 1 the "
            "equal-amplitude two-sided bound applies and no one-point witness "
            "exists below it");
      const double t = kPi - ta;
      const double f = (beta + 1.0) / (beta - 1.0);
      wc.witness = DiscreteMeasure(
          {{f * d / 2.0, kI * (1.0 - beta) * m * std::polar(1.0, f * t / 2.0)}});
      break;
    }
    case Regime::LargePhase: {
      const cplx amp = m * (beta * std::polar(1.0, -ta / 2.0) + std::polar(1.0, ta / 2.0));
      wc.witness = DiscreteMeasure({{-d / 2.0, amp}});
      break;
    }
  }
  return wc;
}

WitnessCase localization_witness_case(double m, double beta, double theta,
                                      double d, double omega, Regime regime) {
  const double ta = std::abs(theta);
  require_phase(regime, ta);
  WitnessCase wc;
  wc.task = Task::Localization;
  wc.regime = regime;
  wc.source = canonical_for(regime, m, beta, ta, d, omega);

  switch (regime) {
    case Regime::InPhase: {
      const double s = std::sqrt(beta + 1.0);
      wc.witness = DiscreteMeasure({{d / 2.0 - d / s, cplx{0.5 * m * s * (s + 1.0), 0.0}},
                                    {d / 2.0 + d / s, cplx{0.5 * m * s * (s - 1.0), 0.0}}});
      break;
    }
    case Regime::NearEndpointZero: {
      const double s = std::sqrt(beta + 1.0);
      wc.witness = DiscreteMeasure(
          {{-d / 2.0 - d / s,
            0.5 * s * (s - 1.0) * m * std::polar(1.0, -(ta / 2.0 + ta / s))},
           {-d / 2.0 + d / s,
            0.5 * s * (s + 1.0) * m * std::polar(1.0, -(ta / 2.0 - ta / s))}});
      break;
    }
    case Regime::NearEndpointPi: {
      if (beta == 1.0)
        throw UnsupportedWitness(
            "near-pi localization witness needs beta > 1: s' = sqrt((beta-1)/beta) "
            "degenerates to 0 and the construction has no limit");
      const double t = kPi - ta;
      const double sp = std::sqrt((beta - 1.0) / beta);
      const cplx a1 = kI * m * beta * sp * (1.0 - sp) / 2.0 *
                      std::polar(1.0, -(t / 2.0 + t / sp));
      const cplx a2 = -kI * m * beta * sp * (1.0 + sp) / 2.0 *
                      std::polar(1.0, -(t / 2.0 - t / sp));
      wc.witness = DiscreteMeasure({{-d / 2.0 - d / sp, a1}, {-d / 2.0 + d / sp, a2}});
      break;
    }
    case Regime::LargePhase: {
      const cplx a1 =
          m * (0.5 * std::polar(1.0, ta / 2.0) + beta * std::polar(1.0, -ta / 2.0));
      const cplx a2 = 0.5 * m * std::polar(1.0, ta / 2.0);
      wc.witness = DiscreteMeasure({{-d / 2.0, a1}, {3.0 * d / 2.0, a2}});
      break;
    }
  }
  return wc;
}

namespace {

WitnessCase rebuild_case(Task task, const TwoPointSource& source, Regime regime) {
  // recover (m, β, θ, d) from the canonical source and reconstruct
  const double theta = source.relative_phase() >= 0.0 ? source.relative_phase()
                                                      : -source.relative_phase();
  const WitnessCase wc =
      task == Task::Detection
          ? detection_witness_case(source.m, source.beta, theta, source.separation(),
                                   source.omega, regime)
          : localization_witness_case(source.m, source.beta, theta, source.separation(),
                                      source.omega, regime);
  if (!source_matches(wc.source, source))
    throw std::invalid_argument(
        "witness: source is not in the regime's canonical layout; build it with "
        "the witness-case constructors or shift/reflect first");
  return wc;
}

}  // namespace

DiscreteMeasure detection_witness(const TwoPointSource& source, Regime regime) {
  return rebuild_case(Task::Detection, source, regime).witness;
}

DiscreteMeasure localization_witness(const TwoPointSource& source, Regime regime) {
  return rebuild_case(Task::Localization, source, regime).witness;
}

double witness_deviation(const TwoPointSource& source, const DiscreteMeasure& witness,
                         int grid_size) {
  if (grid_size < 64)
    throw std::domain_error("witness_deviation: grid_size must be >= 64");
  const DiscreteMeasure mu = source.measure();
  const double omega = source.omega;
  double worst = 0.0;
  for (int k = 0; k < grid_size; ++k) {
    const double w = -omega + 2.0 * omega * k / (grid_size - 1);
    const double dev = std::abs(fourier_of_measure(witness, w) - fourier_of_measure(mu, w));
    worst = std::max(worst, dev);
  }
  return worst;
}

}  // namespace superres

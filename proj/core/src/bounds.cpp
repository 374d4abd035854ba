#include "superres/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "superres/model.hpp"

namespace superres {

const char* to_string(Task t) {
  return t == Task::Detection ? "detection" : "localization";
}
const char* to_string(BoundKind k) { return k == BoundKind::SRU ? "sru" : "srl"; }
const char* to_string(Regime r) {
  switch (r) {
    case Regime::InPhase: return "in-phase";
    case Regime::NearEndpointZero: return "near-zero";
    case Regime::NearEndpointPi: return "near-pi";
    case Regime::LargePhase: return "large-phase";
  }
  return "?";
}

double effective_phase(double theta) {
  const double a = std::abs(theta);
  return std::min(a, kPi - a);
}

double rayleigh_length(double omega) {
  if (omega <= 0.0) throw std::domain_error("rayleigh_length: omega must be positive");
  return kPi / omega;
}

double srf(double d, double omega) {
  if (d <= 0.0) throw std::domain_error("srf: separation must be positive");
  if (omega <= 0.0) throw std::domain_error("srf: omega must be positive");
  return kPi / (d * omega);
}

double pasrf(double d, double omega, double theta_min) {
  if (d <= 0.0) throw std::domain_error("pasrf: separation must be positive");
  if (theta_min < 0.0 || theta_min > kPi / 2.0 + 1e-12)
    throw std::domain_error("pasrf: theta_min must lie in [0, pi/2]");
  return kPi / (d * omega + theta_min);
}

PhaseClassification classify_regime(double beta, double noise_ratio, double theta) {
  if (beta < 1.0) throw std::domain_error("classify_regime: beta must be >= 1");
  if (noise_ratio <= 0.0) throw std::domain_error("classify_regime: noise_ratio must be positive");
  PhaseClassification c;
  c.theta_min = effective_phase(theta);
  c.threshold_detection =
      (4.0 * kPi / 3.0) * std::sqrt(1.0 + 1.25 / beta) * std::sqrt(noise_ratio);
  c.threshold_localization = 1.75 * kPi * std::cbrt(noise_ratio);
  const Regime endpoint =
      std::abs(theta) <= kPi / 2.0 ? Regime::NearEndpointZero : Regime::NearEndpointPi;
  if (c.theta_min == 0.0) {
    c.regime_detection = Regime::InPhase;
    c.regime_localization = Regime::InPhase;
  } else {
    c.regime_detection =
        c.theta_min <= c.threshold_detection ? endpoint : Regime::LargePhase;
    c.regime_localization =
        c.theta_min <= c.threshold_localization ? endpoint : Regime::LargePhase;
  }
  return c;
}

namespace formulas {

double detection_sru_in_phase(double beta, double r) {
  return 2.0 * std::asin(std::sqrt(2.0 * (beta + 1.0) * r / beta));
}
double detection_srl_in_phase(double beta, double r) {
  return 2.0 * std::sqrt((beta + 1.0) / beta * r);
}
double detection_sru_near_endpoint(double beta, double r, double tm) {
  return std::max(0.0, 2.0 * kPi * std::sqrt((2.0 + 2.5 / beta) * r) - tm);
}
double detection_srl_near_zero(double beta, double r, double tm) {
  return std::max(0.0, 2.0 * std::sqrt((beta + 1.0) / beta * r) - tm);
}
double detection_srl_near_pi(double beta, double r, double tm) {
  return std::max(0.0, 2.0 * std::sqrt((beta - 1.0) / beta * r) - tm);
}
double detection_both_near_pi_beta1(double r, double theta_abs) {
  return 2.0 * std::asin(r / std::cos((kPi - theta_abs) / 2.0));
}
double detection_sru_large_phase(double beta, double r, double tm) {
  if (tm < kPi / 4.0)
    return 3.0 * std::asin((2.0 + 2.5 / beta) * r / std::sin(tm));
  const double s2 = std::sqrt(2.0);
  return 4.0 * std::asin((2.0 * s2 + 2.5 * s2 / beta) * r);
}
double detection_srl_large_phase(double r) { return 2.0 * std::asin(r); }

double localization_sru_in_phase(double r) {
  return 3.0 * std::asin(2.0 * std::cbrt(r));
}
double localization_srl_in_phase(double r) { return 2.25 * std::cbrt(r); }
double localization_sru_near_endpoint(double r, double tm) {
  return std::max(0.0, (6.0 * kPi * std::cbrt(r) - tm) / 2.0);
}
double localization_srl_near_zero(double r, double tm) {
  return std::max(0.0, 2.23 * std::cbrt(r) - tm);
}
double localization_srl_near_pi(double beta, double r, double tm) {
  return std::max(0.0, 2.23 * std::cbrt(r / beta) - tm);
}
double localization_sru_large_phase(double r, double tm) {
  if (tm < kPi / 6.0) return 6.0 * std::asin(std::sqrt(2.0 * r / std::sin(tm)));
  return 8.0 * std::asin(std::sqrt(2.0 * r / std::sin(tm + kPi / 3.0)));
}
double localization_srl_large_phase(double r) {
  return 2.0 * std::asin(std::sqrt(r));
}

}  // namespace formulas

namespace {

BoundResult invalid(Regime regime, std::string note) {
  BoundResult b;
  b.value = 0.0;
  b.regime = regime;
  b.valid = false;
  b.note = std::move(note);
  return b;
}

// finish(): scale by 1/Ω exactly once so value(Ω) == value(1)/Ω bit-exactly.
BoundResult finish(double value_at_unit_omega, Regime regime, double omega,
                   bool clamped) {
  BoundResult b;
  b.value = value_at_unit_omega / omega;
  b.regime = regime;
  b.valid = true;
  if (clamped) b.note = "phase term exceeds the noise term; clamped to 0 (always resolvable)";
  return b;
}

}  // namespace

BoundResult detection_bound(const BoundQuery& q) {
  if (q.task != Task::Detection)
    throw std::invalid_argument("detection_bound: query task must be Detection");
  const PhaseClassification cls = classify_regime(q.beta, q.noise_ratio, q.theta);
  const Regime regime = cls.regime_detection;
  const double r = q.noise_ratio;
  const double tm = cls.theta_min;

  switch (regime) {
    case Regime::InPhase:
      if (q.kind == BoundKind::SRU) {
        if (r >= q.beta / (2.0 * (q.beta + 1.0)))
          return invalid(regime, "noise too large for this regime: sigma/m >= beta/(2(beta+1))");
        return finish(formulas::detection_sru_in_phase(q.beta, r), regime, q.omega, false);
      }
      return finish(formulas::detection_srl_in_phase(q.beta, r), regime, q.omega, false);

    case Regime::NearEndpointZero: {
      const double v = q.kind == BoundKind::SRU
                           ? formulas::detection_sru_near_endpoint(q.beta, r, tm)
                           : formulas::detection_srl_near_zero(q.beta, r, tm);
      return finish(v, regime, q.omega, v == 0.0);
    }

    case Regime::NearEndpointPi: {
      if (q.beta == 1.0) {
        // equal amplitudes near π: the two-sided Thm-4 bound covers both kinds
        const double arg = r / std::cos((kPi - std::abs(q.theta)) / 2.0);
        if (arg > 1.0) return invalid(regime, "noise too large for this regime");
        return finish(formulas::detection_both_near_pi_beta1(r, std::abs(q.theta)),
                      regime, q.omega, false);
      }
      const double v = q.kind == BoundKind::SRU
                           ? formulas::detection_sru_near_endpoint(q.beta, r, tm)
                           : formulas::detection_srl_near_pi(q.beta, r, tm);
      return finish(v, regime, q.omega, v == 0.0);
    }

    case Regime::LargePhase:
      if (q.kind == BoundKind::SRU) {
        const double arg = tm < kPi / 4.0
                               ? (2.0 + 2.5 / q.beta) * r / std::sin(tm)
                               : (2.0 * std::sqrt(2.0) + 2.5 * std::sqrt(2.0) / q.beta) * r;
        if (arg > 1.0) return invalid(regime, "noise too large for this regime");
        return finish(formulas::detection_sru_large_phase(q.beta, r, tm), regime,
                      q.omega, false);
      }
      if (r > 1.0) return invalid(regime, "noise too large for this regime");
      return finish(formulas::detection_srl_large_phase(r), regime, q.omega, false);
  }
  return invalid(regime, "unreachable");
}

BoundResult localization_bound(const BoundQuery& q) {
  if (q.task != Task::Localization)
    throw std::invalid_argument("localization_bound: query task must be Localization");
  const PhaseClassification cls = classify_regime(q.beta, q.noise_ratio, q.theta);
  const Regime regime = cls.regime_localization;
  const double r = q.noise_ratio;
  const double tm = cls.theta_min;

  switch (regime) {
    case Regime::InPhase:
      if (q.kind == BoundKind::SRU) {
        if (2.0 * std::cbrt(r) > 1.0)
          return invalid(regime, "noise too large for this regime");
        return finish(formulas::localization_sru_in_phase(r), regime, q.omega, false);
      }
      return finish(formulas::localization_srl_in_phase(r), regime, q.omega, false);

    case Regime::NearEndpointZero:
    case Regime::NearEndpointPi: {
      double v;
      if (q.kind == BoundKind::SRU) {
        v = formulas::localization_sru_near_endpoint(r, tm);
      } else if (regime == Regime::NearEndpointZero) {
        v = formulas::localization_srl_near_zero(r, tm);
      } else {
        v = formulas::localization_srl_near_pi(q.beta, r, tm);
      }
      return finish(v, regime, q.omega, v == 0.0);
    }

    case Regime::LargePhase:
      if (q.kind == BoundKind::SRU) {
        const double arg = tm < kPi / 6.0 ? 2.0 * r / std::sin(tm)
                                          : 2.0 * r / std::sin(tm + kPi / 3.0);
        if (arg > 1.0) return invalid(regime, "noise too large for this regime");
        return finish(formulas::localization_sru_large_phase(r, tm), regime, q.omega,
                      false);
      }
      if (r > 1.0) return invalid(regime, "noise too large for this regime");
      return finish(formulas::localization_srl_large_phase(r), regime, q.omega, false);
  }
  return invalid(regime, "unreachable");
}

BoundResult evaluate_bound(const BoundQuery& q) {
  return q.task == Task::Detection ? detection_bound(q) : localization_bound(q);
}

}  // namespace superres

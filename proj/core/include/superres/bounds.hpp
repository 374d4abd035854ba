#pragma once

#include <string>

namespace superres {

enum class Task { Detection, Localization };
enum class BoundKind { SRU, SRL };

// Phase regimes. The effective phase |θ|_min = min(|θ|, π−|θ|) selects one of
// three behaviours: zero (in-phase scaling), comparable to the noise-ratio
// power (near-endpoint, subtractive), or dominating it (large-phase,
// improved exponents).
enum class Regime { InPhase, NearEndpointZero, NearEndpointPi, LargePhase };

const char* to_string(Task t);
const char* to_string(BoundKind k);
const char* to_string(Regime r);

struct BoundQuery {
  double beta = 1.0;         // β ≥ 1
  double noise_ratio = 0.0;  // σ/m > 0
  double theta = 0.0;        // relative phase θ ∈ (−π, π]
  double omega = 1.0;        // Ω > 0
  Task task = Task::Detection;
  BoundKind kind = BoundKind::SRL;
};

struct BoundResult {
  double value = 0.0;  // separation threshold, location units
  Regime regime = Regime::InPhase;
  bool valid = true;
  std::string note;
};

struct PhaseClassification {
  double theta_min = 0.0;  // ∈ [0, π/2]
  Regime regime_detection = Regime::InPhase;
  Regime regime_localization = Regime::InPhase;
  double threshold_detection = 0.0;     // (4π/3)√(1+1.25/β)(σ/m)^{1/2}
  double threshold_localization = 0.0;  // 1.75π(σ/m)^{1/3}
};

// |θ|_min = min(|θ|, π − |θ|)
double effective_phase(double theta);

// d_RL = π/Ω
double rayleigh_length(double omega);

// SRF = π/(dΩ)
double srf(double d, double omega);

// PASRF = π/(dΩ + |θ|_min); reduces to SRF at θ_min = 0
double pasrf(double d, double omega, double theta_min);

PhaseClassification classify_regime(double beta, double noise_ratio, double theta);

BoundResult detection_bound(const BoundQuery& q);
BoundResult localization_bound(const BoundQuery& q);
BoundResult evaluate_bound(const BoundQuery& q);

// Raw per-theorem branch formulas in location units at Ω = 1 (every bound
// scales as 1/Ω). Exposed so the regime-transition behaviour can be probed
// without going through the classifier. r = σ/m, tm = |θ|_min.
namespace formulas {

double detection_sru_in_phase(double beta, double r);        // 2·arcsin(√(2(β+1)r/β))
double detection_srl_in_phase(double beta, double r);        // 2·√(((β+1)/β)r)
double detection_sru_near_endpoint(double beta, double r, double tm);
double detection_srl_near_zero(double beta, double r, double tm);
double detection_srl_near_pi(double beta, double r, double tm);  // β > 1
double detection_both_near_pi_beta1(double r, double theta_abs); // Thm-4 two-sided bound
double detection_sru_large_phase(double beta, double r, double tm);
double detection_srl_large_phase(double r);

double localization_sru_in_phase(double r);
double localization_srl_in_phase(double r);
double localization_sru_near_endpoint(double r, double tm);
double localization_srl_near_zero(double r, double tm);
double localization_srl_near_pi(double beta, double r, double tm);
double localization_sru_large_phase(double r, double tm);
double localization_srl_large_phase(double r);

}  // namespace formulas

}  // namespace superres

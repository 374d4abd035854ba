#pragma once

#include <stdexcept>

#include "superres/bounds.hpp"
#include "superres/model.hpp"

namespace superres {

// Requested construction does not exist (e.g. the near-π subtractive witness
// needs β > 1; at β = 1 the two-sided equal-amplitude bound applies instead).
struct UnsupportedWitness : std::domain_error {
  using std::domain_error::domain_error;
};

// An adversarial measure together with the exact canonical source it was
// built against. Detection witnesses have one spike, localization witnesses
// two; a localization witness never passes the d/2 matcher of its source.
struct WitnessCase {
  Task task = Task::Detection;
  Regime regime = Regime::InPhase;
  TwoPointSource source;     // proof coordinates: locations ±d/2, phases ±|θ|/2
  DiscreteMeasure witness;
};

// Build the regime-appropriate construction in the proof's own symmetric
// coordinates. Negative θ is folded to |θ| first (reflection invariance).
WitnessCase detection_witness_case(double m, double beta, double theta,
                                   double separation, double omega, Regime regime);
WitnessCase localization_witness_case(double m, double beta, double theta,
                                      double separation, double omega, Regime regime);

// Spec-surface wrappers: the source must already be in the regime's canonical
// layout (throws std::invalid_argument otherwise).
DiscreteMeasure detection_witness(const TwoPointSource& source, Regime regime);
DiscreteMeasure localization_witness(const TwoPointSource& source, Regime regime);

// max over a uniform grid on [−Ω, Ω] of |ℱ[witness](ω) − ℱ[μ](ω)|; the SRL
// proofs certify this stays below 2σ.
double witness_deviation(const TwoPointSource& source, const DiscreteMeasure& witness,
                         int grid_size = 512);

}  // namespace superres

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "superres/bounds.hpp"
#include "superres/locate.hpp"
#include "superres/model.hpp"
#include "superres/witness.hpp"
#include "test_util.hpp"

using namespace superres;

namespace {

// SRL value at unit omega for drawing certification cases per regime/task
double srl_value(Task task, Regime regime, double beta, double r, double tm) {
  if (task == Task::Detection) {
    switch (regime) {
      case Regime::InPhase: return formulas::detection_srl_in_phase(beta, r);
      case Regime::NearEndpointZero: return formulas::detection_srl_near_zero(beta, r, tm);
      case Regime::NearEndpointPi: return formulas::detection_srl_near_pi(beta, r, tm);
      case Regime::LargePhase: return formulas::detection_srl_large_phase(r);
    }
  } else {
    switch (regime) {
      case Regime::InPhase: return formulas::localization_srl_in_phase(r);
      case Regime::NearEndpointZero: return formulas::localization_srl_near_zero(r, tm);
      case Regime::NearEndpointPi: return formulas::localization_srl_near_pi(beta, r, tm);
      case Regime::LargePhase: return formulas::localization_srl_large_phase(r);
    }
  }
  return 0.0;
}

struct DrawnCase {
  double m, beta, theta, sigma, d;
};

// Random admissible case with d = 0.95 x SRL; theta is drawn inside the
// regime window with headroom so the SRL stays positive.
DrawnCase draw_case(testutil::Rand& rnd, Task task, Regime regime) {
  for (;;) {
    DrawnCase c;
    c.m = rnd.log_uniform(0.1, 10.0);
    const double r = rnd.log_uniform(1e-5, 1e-1);
    c.sigma = r * c.m;
    switch (regime) {
      case Regime::InPhase:
        c.beta = rnd.uniform(1.0, 10.0);
        c.theta = 0.0;
        break;
      case Regime::NearEndpointZero: {
        c.beta = rnd.uniform(1.0, 10.0);
        const double x = srl_value(task, regime, c.beta, r, 0.0);
        c.theta = rnd.uniform(0.05, 0.9) * x;
        break;
      }
      case Regime::NearEndpointPi: {
        // s' degenerates for beta near 1 (localization); detection only needs
        // beta > 1
        c.beta = task == Task::Detection ? rnd.uniform(1.2, 10.0) : rnd.uniform(2.2, 10.0);
        const double x = srl_value(task, regime, c.beta, r, 0.0);
        if (x <= 0.0) continue;
        const double tm = rnd.uniform(0.05, 0.9) * x;
        c.theta = kPi - tm;
        break;
      }
      case Regime::LargePhase: {
        c.beta = rnd.uniform(1.0, 10.0);
        const double lo = task == Task::Detection
                              ? (4.0 * kPi / 3.0) * std::sqrt(1.0 + 1.25 / c.beta) *
                                    std::sqrt(r)
                              : 1.75 * kPi * std::cbrt(r);
        if (lo >= kPi / 2 * 0.98) continue;
        c.theta = rnd.uniform(lo * 1.01, kPi / 2);
        break;
      }
    }
    const double tm = effective_phase(c.theta);
    const double srl = srl_value(task, regime, c.beta, r, tm);
    if (srl <= 0.0) continue;
    c.d = 0.95 * srl;
    if (c.d >= kPi) continue;  // keep the canonical source inside the window
    return c;
  }
}

}  // namespace

TEST_CASE("detection witness constructions") {
  // in-phase beta=1: center of mass 2 delta_0
  const WitnessCase w1 = detection_witness_case(1.0, 1.0, 0.0, 0.4, 1.0, Regime::InPhase);
  REQUIRE(w1.witness.size() == 1);
  CHECK(w1.witness.spikes[0].location == 0.0);
  CHECK(std::abs(w1.witness.spikes[0].amplitude - cplx{2.0, 0.0}) < 1e-15);

  // in-phase beta=3: 4 delta_{d/4}
  const double d = 0.2;
  const WitnessCase w3 = detection_witness_case(1.0, 3.0, 0.0, d, 1.0, Regime::InPhase);
  CHECK(w3.witness.spikes[0].location == doctest::Approx(d / 4).epsilon(1e-15));
  CHECK(std::abs(w3.witness.spikes[0].amplitude - cplx{4.0, 0.0}) < 1e-15);

  // large phase beta=1 theta=2pi/5: (e^{i t/2}+e^{-i t/2}) = 2 cos(pi/5) at -d/2
  const WitnessCase wl =
      detection_witness_case(1.0, 1.0, 2.0 * kPi / 5.0, d, 1.0, Regime::LargePhase);
  CHECK(wl.witness.spikes[0].location == doctest::Approx(-d / 2).epsilon(1e-15));
  CHECK(std::abs(wl.witness.spikes[0].amplitude -
                 cplx{1.6180339887498949, 0.0}) < 1e-12);

  CHECK_THROWS_AS(
      detection_witness_case(1.0, 1.0, 35.0 * kPi / 36.0, d, 1.0, Regime::NearEndpointPi),
      UnsupportedWitness);
}

TEST_CASE("localization witness constructions") {
  const double d = 0.3;
  // beta=1: s=sqrt(2), amplitudes (2+-sqrt2)/2 at d/2 -+ d/s
  const WitnessCase w1 =
      localization_witness_case(1.0, 1.0, 0.0, d, 1.0, Regime::InPhase);
  REQUIRE(w1.witness.size() == 2);
  CHECK(w1.witness.spikes[0].location ==
        doctest::Approx(-0.20710678118654752 * d).epsilon(1e-12));
  CHECK(w1.witness.spikes[1].location ==
        doctest::Approx(1.2071067811865475 * d).epsilon(1e-12));
  CHECK(std::abs(w1.witness.spikes[0].amplitude - cplx{1.7071067811865475, 0.0}) < 1e-12);
  CHECK(std::abs(w1.witness.spikes[1].amplitude - cplx{0.29289321881345248, 0.0}) < 1e-12);

  // beta=3: s=2 -> 3m at 0 and 1m at d
  const WitnessCase w3 =
      localization_witness_case(1.0, 3.0, 0.0, d, 1.0, Regime::InPhase);
  CHECK(w3.witness.spikes[0].location == doctest::Approx(0.0));
  CHECK(w3.witness.spikes[1].location == doctest::Approx(d).epsilon(1e-15));
  CHECK(std::abs(w3.witness.spikes[0].amplitude - cplx{3.0, 0.0}) < 1e-14);
  CHECK(std::abs(w3.witness.spikes[1].amplitude - cplx{1.0, 0.0}) < 1e-14);

  // large phase beta=1, theta=pi/2, d=0.1
  const WitnessCase wl =
      localization_witness_case(1.0, 1.0, kPi / 2, 0.1, 1.0, Regime::LargePhase);
  CHECK(wl.witness.spikes[0].location == doctest::Approx(-0.05).epsilon(1e-15));
  CHECK(wl.witness.spikes[1].location == doctest::Approx(0.15).epsilon(1e-15));
  const cplx a1 = 0.5 * std::polar(1.0, kPi / 4) + std::polar(1.0, -kPi / 4);
  const cplx a2 = 0.5 * std::polar(1.0, kPi / 4);
  CHECK(std::abs(wl.witness.spikes[0].amplitude - a1) < 1e-14);
  CHECK(std::abs(wl.witness.spikes[1].amplitude - a2) < 1e-14);

  CHECK_THROWS_AS(
      localization_witness_case(1.0, 1.0, 35.0 * kPi / 36.0, d, 1.0, Regime::NearEndpointPi),
      UnsupportedWitness);
}

TEST_CASE("witness deviation closed forms") {
  // in-phase beta=1, d=0.4: max deviation 4 sin^2(0.1) at the band edge
  const WitnessCase wc = detection_witness_case(1.0, 1.0, 0.0, 0.4, 1.0, Regime::InPhase);
  CHECK(witness_deviation(wc.source, wc.witness) ==
        doctest::Approx(0.039866844317516738).epsilon(1e-12));

  // pointwise: deviation equals 4 m sin^2(d w/4), bounded by m d^2 w^2 / 4
  const DiscreteMeasure mu = wc.source.measure();
  for (double w = -1.0; w <= 1.0; w += 0.05) {
    const double dev =
        std::abs(fourier_of_measure(wc.witness, w) - fourier_of_measure(mu, w));
    const double s = std::sin(0.4 * w / 4.0);
    CHECK(std::abs(dev - 4.0 * s * s) < 1e-12);
    CHECK(dev <= 0.25 * 0.4 * 0.4 * w * w + 1e-12);
  }

  // large-phase detection, d=0.1: max deviation 2 sin(0.05)
  const WitnessCase wl =
      detection_witness_case(1.0, 1.0, 2.0 * kPi / 5.0, 0.1, 1.0, Regime::LargePhase);
  CHECK(witness_deviation(wl.source, wl.witness) ==
        doctest::Approx(0.0999583385413567).epsilon(1e-12));

  // witness equal to the source itself deviates by zero
  CHECK(witness_deviation(wc.source, mu) == 0.0);

  CHECK_THROWS_AS(witness_deviation(wc.source, wc.witness, 32), std::domain_error);
}

TEST_CASE("mass matching at omega = 0") {
  testutil::Rand rnd(31);
  for (int rep = 0; rep < 100; ++rep) {
    const double beta = rnd.uniform(1.0, 10.0);
    const double m = rnd.log_uniform(0.1, 10.0);
    const double d = rnd.uniform(0.05, 1.0);
    const WitnessCase wc = detection_witness_case(m, beta, 0.0, d, 1.0, Regime::InPhase);
    const cplx diff = fourier_of_measure(wc.witness, 0.0) -
                      fourier_of_measure(wc.source.measure(), 0.0);
    CHECK(std::abs(diff) < 1e-12 * (1.0 + beta) * m);

    // near-zero: matched to second order in theta, |diff| <= beta m theta^2/(2(beta+1))
    const double theta = rnd.uniform(0.01, 0.3);
    const WitnessCase wz =
        detection_witness_case(m, beta, theta, d, 1.0, Regime::NearEndpointZero);
    const cplx dz = fourier_of_measure(wz.witness, 0.0) -
                    fourier_of_measure(wz.source.measure(), 0.0);
    CHECK(std::abs(dz) <= beta * m * theta * theta / (2.0 * (beta + 1.0)) + 1e-12);
  }
}

TEST_CASE("SRL certification: deviation below 2 sigma at d = 0.95 SRL") {
  testutil::Rand rnd(4242);
  for (Task task : {Task::Detection, Task::Localization}) {
    for (Regime regime : {Regime::InPhase, Regime::NearEndpointZero,
                          Regime::NearEndpointPi, Regime::LargePhase}) {
      double worst = 0.0;
      for (int rep = 0; rep < 120; ++rep) {
        const DrawnCase c = draw_case(rnd, task, regime);
        const WitnessCase wc =
            task == Task::Detection
                ? detection_witness_case(c.m, c.beta, c.theta, c.d, 1.0, regime)
                : localization_witness_case(c.m, c.beta, c.theta, c.d, 1.0, regime);
        const double dev = witness_deviation(wc.source, wc.witness, 512);
        worst = std::max(worst, dev / (2.0 * c.sigma));
        if (task == Task::Localization) {
          REQUIRE(wc.witness.size() == 2);
          const std::array<double, 2> truth{wc.source.y1, wc.source.y2};
          const std::array<double, 2> est{wc.witness.spikes[0].location,
                                          wc.witness.spikes[1].location};
          CHECK_FALSE(match_within_half_d(truth, est));
        } else {
          CHECK(wc.witness.size() == 1);
        }
      }
      const int task_id = static_cast<int>(task), regime_id = static_cast<int>(regime);
      CAPTURE(task_id);
      CAPTURE(regime_id);
      CHECK(worst < 1.0);
    }
  }
}

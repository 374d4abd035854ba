#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "superres/bounds.hpp"
#include "superres/model.hpp"
#include "test_util.hpp"

using namespace superres;

namespace {

BoundQuery make_query(Task task, BoundKind kind, double beta, double ratio,
                      double theta = 0.0, double omega = 1.0) {
  BoundQuery q;
  q.task = task;
  q.kind = kind;
  q.beta = beta;
  q.noise_ratio = ratio;
  q.theta = theta;
  q.omega = omega;
  return q;
}

}  // namespace

TEST_CASE("effective phase and factors") {
  CHECK(effective_phase(0.0) == 0.0);
  CHECK(effective_phase(kPi / 2) == doctest::Approx(kPi / 2));
  CHECK(effective_phase(35.0 * kPi / 36.0) ==
        doctest::Approx(0.08726646259971647884).epsilon(1e-12));
  CHECK(effective_phase(-35.0 * kPi / 36.0) ==
        doctest::Approx(0.08726646259971647884).epsilon(1e-12));

  CHECK(rayleigh_length(1.0) == doctest::Approx(kPi));
  CHECK(rayleigh_length(kPi) == doctest::Approx(1.0));
  CHECK(rayleigh_length(2.0) == doctest::Approx(1.5707963267948966));
  CHECK_THROWS_AS(rayleigh_length(0.0), std::domain_error);

  CHECK(srf(kPi / 10, 1.0) == doctest::Approx(10.0));
  CHECK(srf(kPi, 1.0) == doctest::Approx(1.0));
  CHECK(srf(0.1, 2.0) == doctest::Approx(15.707963267948966));
  CHECK_THROWS_AS(srf(0.0, 1.0), std::domain_error);

  CHECK(pasrf(0.3, 1.0, 0.0) == srf(0.3, 1.0));
  CHECK(pasrf(0.1, 1.0, kPi / 36) == doctest::Approx(16.77605594710769).epsilon(1e-12));
  CHECK(pasrf(kPi / 2, 1.0, kPi / 2) == doctest::Approx(1.0));
}

TEST_CASE("regime classification") {
  const PhaseClassification zero = classify_regime(1.0, 0.01, 0.0);
  CHECK(zero.regime_detection == Regime::InPhase);
  CHECK(zero.regime_localization == Regime::InPhase);

  // beta=1, sigma/m=0.01: detection threshold (4pi/3) sqrt(2.25) * 0.1 = 0.2 pi
  const PhaseClassification near = classify_regime(1.0, 0.01, kPi / 36);
  CHECK(near.threshold_detection == doctest::Approx(0.2 * kPi).epsilon(1e-12));
  CHECK(near.regime_detection == Regime::NearEndpointZero);

  const PhaseClassification large = classify_regime(1.0, 1e-6, 2.0 * kPi / 5.0);
  CHECK(large.threshold_detection == doctest::Approx(2.0 * kPi * 1e-3).epsilon(1e-9));
  CHECK(large.regime_detection == Regime::LargePhase);

  const PhaseClassification pi_side = classify_regime(3.0, 0.01, 35.0 * kPi / 36.0);
  CHECK(pi_side.regime_detection == Regime::NearEndpointPi);
  CHECK(pi_side.regime_localization == Regime::NearEndpointPi);
}

TEST_CASE("golden bound values") {
  // in-phase detection, beta=3, sigma/m=0.01
  CHECK(std::abs(detection_bound(make_query(Task::Detection, BoundKind::SRL, 3, 0.01)).value -
                 0.23094010767585031) < 1e-9);
  CHECK(std::abs(detection_bound(make_query(Task::Detection, BoundKind::SRU, 3, 0.01)).value -
                 0.32806788204595042) < 1e-9);
  // large-phase detection SRL, sigma/m=0.05 (theta = 2pi/5 clears the threshold)
  CHECK(std::abs(detection_bound(
                     make_query(Task::Detection, BoundKind::SRL, 1, 0.05, kPi / 2))
                     .value -
                 0.10004171361154003) < 1e-9);
  // beta=1 near-pi two-sided bound, theta = 35pi/36, sigma/m = 0.1
  for (BoundKind k : {BoundKind::SRU, BoundKind::SRL}) {
    const BoundResult r = detection_bound(
        make_query(Task::Detection, k, 1, 0.1, 35.0 * kPi / 36.0));
    CHECK(r.regime == Regime::NearEndpointPi);
    CHECK(std::abs(r.value - 0.200526340167851) < 1e-9);
  }
  // localization
  CHECK(std::abs(localization_bound(make_query(Task::Localization, BoundKind::SRL, 1, 0.001))
                     .value -
                 0.225) < 1e-9);
  CHECK(std::abs(localization_bound(make_query(Task::Localization, BoundKind::SRU, 1, 0.001))
                     .value -
                 0.60407376237099237) < 1e-9);
  CHECK(std::abs(localization_bound(
                     make_query(Task::Localization, BoundKind::SRL, 1, 0.01, 2 * kPi / 5))
                     .value -
                 0.20033484232311959) < 1e-9);
}

TEST_CASE("validity flags") {
  // Thm-1 precondition sigma/m < beta/(2(beta+1))
  const BoundResult bad =
      detection_bound(make_query(Task::Detection, BoundKind::SRU, 1.0, 0.3));
  CHECK_FALSE(bad.valid);
  CHECK(!bad.note.empty());
  const BoundResult ok =
      detection_bound(make_query(Task::Detection, BoundKind::SRU, 1.0, 0.24));
  CHECK(ok.valid);

  // clamped near-endpoint value reports a note and stays valid
  const BoundResult clamped =
      detection_bound(make_query(Task::Detection, BoundKind::SRL, 3.0, 1e-4, 0.3));
  if (clamped.value == 0.0) CHECK(!clamped.note.empty());

  CHECK_THROWS_AS(detection_bound(make_query(Task::Localization, BoundKind::SRL, 1, 0.01)),
                  std::invalid_argument);
}

TEST_CASE("SRU dominates SRL whenever both valid") {
  testutil::Rand rnd(555);
  int compared = 0;
  for (int rep = 0; rep < 4000; ++rep) {
    const double beta = rnd.uniform(1.0, 20.0);
    const double ratio = rnd.log_uniform(1e-6, 0.2);
    const double theta = rnd.uniform(-kPi + 1e-6, kPi);
    for (Task task : {Task::Detection, Task::Localization}) {
      const BoundResult sru = evaluate_bound(make_query(task, BoundKind::SRU, beta, ratio, theta));
      const BoundResult srl = evaluate_bound(make_query(task, BoundKind::SRL, beta, ratio, theta));
      if (sru.valid && srl.valid) {
        ++compared;
        CHECK(sru.value >= srl.value - 1e-15);
      }
    }
  }
  CHECK(compared > 4000);  // both tasks, most draws
}

TEST_CASE("scale invariance through the noise ratio") {
  // multiplying sigma and m by powers of two leaves sigma/m bit-identical
  testutil::Rand rnd(808);
  for (int rep = 0; rep < 200; ++rep) {
    const double sigma = rnd.log_uniform(1e-6, 0.1);
    const double m = rnd.log_uniform(0.1, 10.0);
    const double theta = rnd.uniform(-3.0, 3.0);
    const double beta = rnd.uniform(1.0, 8.0);
    for (double c : {0.5, 2.0, 1024.0}) {
      const double r1 = sigma / m;
      const double r2 = (c * sigma) / (c * m);
      REQUIRE(r1 == r2);
      for (Task task : {Task::Detection, Task::Localization}) {
        const BoundResult a = evaluate_bound(make_query(task, BoundKind::SRL, beta, r1, theta));
        const BoundResult b = evaluate_bound(make_query(task, BoundKind::SRL, beta, r2, theta));
        CHECK(a.value == b.value);
      }
    }
  }
}

TEST_CASE("omega scaling is exact division") {
  testutil::Rand rnd(909);
  for (int rep = 0; rep < 300; ++rep) {
    const double beta = rnd.uniform(1.0, 10.0);
    const double ratio = rnd.log_uniform(1e-6, 0.2);
    const double theta = rnd.uniform(-3.1, 3.1);
    const double omega = rnd.log_uniform(0.1, 10.0);
    for (Task task : {Task::Detection, Task::Localization})
      for (BoundKind kind : {BoundKind::SRU, BoundKind::SRL}) {
        const BoundResult at1 = evaluate_bound(make_query(task, kind, beta, ratio, theta, 1.0));
        const BoundResult atw = evaluate_bound(make_query(task, kind, beta, ratio, theta, omega));
        CHECK(at1.valid == atw.valid);
        if (at1.valid) CHECK(atw.value == at1.value / omega);
      }
  }
}

TEST_CASE("monotone in noise within a branch") {
  testutil::Rand rnd(1212);
  for (int rep = 0; rep < 50; ++rep) {
    const double beta = rnd.uniform(1.0, 10.0);
    const double tm = rnd.uniform(0.01, kPi / 2 - 0.01);
    double prev_vals[10];
    int idx = 0;
    for (double r = 1e-5; r <= 1e-2; r *= 4.0, ++idx) {
      const double vals[10] = {
          formulas::detection_sru_in_phase(beta, r),
          formulas::detection_srl_in_phase(beta, r),
          formulas::detection_sru_near_endpoint(beta, r, tm),
          formulas::detection_srl_near_zero(beta, r, tm),
          formulas::detection_srl_near_pi(beta + 0.5, r, tm),
          formulas::detection_srl_large_phase(r),
          formulas::localization_sru_in_phase(r),
          formulas::localization_srl_in_phase(r),
          formulas::localization_srl_near_zero(r, tm),
          formulas::localization_srl_large_phase(r)};
      if (idx > 0)
        for (int i = 0; i < 10; ++i) CHECK(vals[i] >= prev_vals[i] - 1e-15);
      for (int i = 0; i < 10; ++i) prev_vals[i] = vals[i];
    }
  }
}

TEST_CASE("near-endpoint SRL is continuous at theta_min = 0") {
  for (double beta : {1.0, 2.5, 7.0})
    for (double r : {1e-5, 1e-3, 1e-2}) {
      CHECK(formulas::detection_srl_near_zero(beta, r, 0.0) ==
            doctest::Approx(formulas::detection_srl_in_phase(beta, r)).epsilon(1e-15));
    }
}

TEST_CASE("analytic slope laws via finite differences") {
  auto loglog_slope = [](double f1, double f2, double r1, double r2) {
    return (std::log(f2) - std::log(f1)) / (std::log(r2) - std::log(r1));
  };
  const double r1 = 1e-4, r2 = 1e-3;
  CHECK(loglog_slope(formulas::detection_srl_in_phase(2, r1),
                     formulas::detection_srl_in_phase(2, r2), r1, r2) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(loglog_slope(formulas::localization_srl_in_phase(r1),
                     formulas::localization_srl_in_phase(r2), r1, r2) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(loglog_slope(formulas::detection_srl_large_phase(r1),
                     formulas::detection_srl_large_phase(r2), r1, r2) ==
        doctest::Approx(1.0).epsilon(1e-3));
  CHECK(loglog_slope(formulas::localization_srl_large_phase(r1),
                     formulas::localization_srl_large_phase(r2), r1, r2) ==
        doctest::Approx(0.5).epsilon(1e-3));
}

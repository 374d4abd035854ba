#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "superres/model.hpp"
#include "superres/rng.hpp"

namespace testutil {

// deterministic helpers for hand-rolled property tests
struct Rand {
  superres::SplitMix64 rng;
  explicit Rand(std::uint64_t seed) : rng(seed) {}
  double uniform(double lo, double hi) { return lo + (hi - lo) * rng.next_double(); }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  superres::cplx disk(double radius) {
    const double r = radius * std::sqrt(rng.next_double());
    return std::polar(r, 2.0 * superres::kPi * rng.next_double());
  }
};

inline superres::DiscreteMeasure random_measure(Rand& rnd, int max_spikes = 4) {
  const int n = rnd.uniform_int(1, max_spikes);
  std::vector<superres::Spike> spikes;
  for (int i = 0; i < n; ++i) {
    double loc = rnd.uniform(-1.5, 1.5);
    for (const auto& s : spikes)
      if (s.location == loc) loc += 1e-3;
    spikes.push_back({loc, rnd.disk(2.0)});
  }
  return superres::DiscreteMeasure(spikes);
}

}  // namespace testutil

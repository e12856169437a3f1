#pragma once

// Random inputs for property tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "phantom/measure.hpp"
#include "phantom/phantom.hpp"
#include "phantom/randvar.hpp"

namespace phantom::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Phantom phantom(double lo = -10.0, double hi = 10.0) { return {uniform(lo, hi), uniform(lo, hi)}; }

  // Both components bounded away from zero.
  Phantom invertible(double lo = -10.0, double hi = 10.0) {
    for (;;) {
      const Phantom z = phantom(lo, hi);
      if (std::abs(z.re) > 1e-3 && std::abs(z.reduction()) > 1e-3) return z;
    }
  }

  Phantom pseudo_positive(double lo = 0.05, double hi = 5.0) {
    return Phantom::from_components(uniform(lo, hi), uniform(lo, hi));
  }

  // k probabilities with each entry at least `floor` before normalization.
  std::vector<double> simplex(std::size_t k, double floor = 0.01) {
    std::vector<double> v(k);
    double s = 0.0;
    for (double& x : v) s += (x = uniform(floor, 1.0));
    for (double& x : v) x /= s;
    return v;
  }

  // Weights of a strict measure: real terms and reductions are two probability vectors.
  std::vector<Phantom> measure_weights(std::size_t k) {
    const auto re = simplex(k);
    const auto red = simplex(k);
    std::vector<Phantom> w;
    for (std::size_t i = 0; i < k; ++i) w.push_back(Phantom::from_components(re[i], red[i]));
    return w;
  }

  PhantomMeasure measure(std::size_t k) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < k; ++i) labels.push_back("w" + std::to_string(i));
    return PhantomMeasure(SampleSpace(labels), measure_weights(k), MeasureMode::Strict);
  }

  Event event(const SampleSpace& omega) {
    Event e;
    for (const auto& l : omega.outcomes())
      if (integer(0, 1) == 1) e.insert(l);
    return e;
  }

  // Small discrete variable; continuous draws make repeated values practically impossible.
  DiscretePRV prv(std::size_t k, double lo = -10.0, double hi = 10.0) {
    const auto w = measure_weights(k);
    std::vector<Atom> s;
    for (std::size_t i = 0; i < k; ++i) s.push_back({Phantom{uniform(lo, hi), uniform(lo, hi)}, w[i]});
    return DiscretePRV(std::move(s));
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline double rel_err(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

// Relative to the largest component of `want` (at least 1).
inline bool near(const Phantom& got, const Phantom& want, double tol) {
  const double s = std::max({1.0, std::abs(want.re), std::abs(want.ph), std::abs(want.reduction())});
  return std::abs(got.re - want.re) <= tol * s && std::abs(got.ph - want.ph) <= tol * s;
}

}  // namespace phantom::testing

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_set>
#include <vector>

#include "phantom/distributions.hpp"
#include "phantom/limits.hpp"
#include "test_support.hpp"

using namespace phantom;
using phantom::testing::Gen;
using phantom::testing::near;

namespace {

double rms(double a, double b) { return std::sqrt(0.5 * (a * a + b * b)); }

const Phantom kP{0.4, 0.2};

DiscretePRV coin() { return build_discrete(Bernoulli{kP}); }

DiscretePRV constant(const Phantom& c) { return DiscretePRV({{c, Phantom{1}}}); }

// Brute-force per-component Chebyshev sides, with |.| taken as the rms of real term and reduction.
struct ChebOracle {
  double lhs, rhs;
};

ChebOracle chebyshev_oracle(const DiscretePRV& x, double r) {
  const auto& s = x.support();
  double mu[2] = {0, 0}, var[2] = {0, 0}, tail[2] = {0, 0};
  for (int c = 0; c < 2; ++c) {
    for (const Atom& a : s) mu[c] += (c ? a.prob.re + a.prob.ph : a.prob.re) * rms(a.value.re, a.value.re + a.value.ph);
    for (const Atom& a : s) {
      const double w = c ? a.prob.re + a.prob.ph : a.prob.re;
      const double d = rms(a.value.re, a.value.re + a.value.ph) - mu[c];
      var[c] += w * d * d;
      if (std::abs(d) >= r) tail[c] += w;
    }
  }
  return {rms(tail[0], tail[1]), rms(var[0], var[1]) / (r * r)};
}

// sup_x |F_n(x) - Phi(x)| for the standardized Binomial(n, p), both one-sided limits at each atom.
double lattice_ks(int n, double p) {
  const double mu = n * p, sd = std::sqrt(n * p * (1 - p));
  double cdf = 0.0, sup = 0.0, pk = std::pow(1 - p, n);
  for (int k = 0; k <= n; ++k) {
    const double phi = 0.5 * std::erfc(-((k - mu) / sd) / std::numbers::sqrt2);
    sup = std::max(sup, std::abs(phi - cdf));
    cdf += pk;
    sup = std::max(sup, std::abs(cdf - phi));
    pk *= static_cast<double>(n - k) / (k + 1) * p / (1 - p);
  }
  return sup;
}

}  // namespace

TEST(Markov, Examples) {
  const BoundCheck b = markov_bound(coin(), Phantom{0.5, 0}, MarkovVariant::AbsAbs);
  // P(|X| >= 0.5) picks the atom 1 whose |value| is 1, so both sides equal rms(0.4, 0.6)
  EXPECT_NEAR(b.lhs.re, rms(0.4, 0.6), 1e-15);
  EXPECT_NEAR(b.rhs.re, rms(0.4, 0.6) / 0.5, 1e-15);
  EXPECT_TRUE(b.holds);

  const BoundCheck far = markov_bound(coin(), Phantom{5, 0}, MarkovVariant::AbsAbs);
  EXPECT_EQ(far.lhs.re, 0.0);
  EXPECT_TRUE(far.holds);

  const Phantom c{2, 1};
  for (MarkovVariant v : {MarkovVariant::Order, MarkovVariant::AbsOrder, MarkovVariant::AbsAbs}) {
    const BoundCheck eq = markov_bound(constant(c), c, v);
    EXPECT_TRUE(eq.holds);
    EXPECT_TRUE(near(eq.lhs, eq.rhs, 1e-12));
  }
}

TEST(Markov, OrderVariantPreconditions) {
  try {
    markov_bound(coin(), Phantom{1, -2}, MarkovVariant::Order);
    ADD_FAILURE() << "expected BadVariant";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BadVariant);
  }
  const DiscretePRV neg({{Phantom{-1}, Phantom{0.5}}, {Phantom{1}, Phantom{0.5}}});
  EXPECT_THROW(markov_bound(neg, Phantom{0.5}, MarkovVariant::Order), Error);
  EXPECT_THROW(markov_bound(coin(), Phantom{}, MarkovVariant::AbsAbs), Error);
  const BoundCheck b = markov_bound(coin(), Phantom{0.5, 0.1}, MarkovVariant::Order);
  EXPECT_TRUE(b.holds);
  EXPECT_EQ(b.lhs, kP);
}

TEST(Markov, AbsAbsHoldsOnRandomVariables) {
  Gen g(601);
  for (int i = 0; i < 1000; ++i) {
    const DiscretePRV x = g.prv(6, -5, 5);
    const Phantom z = g.phantom(-6, 6);
    const BoundCheck b = markov_bound(x, z, MarkovVariant::AbsAbs);
    ASSERT_TRUE(b.holds) << b.lhs.re << " > " << b.rhs.re;
  }
}

TEST(Chebyshev, CForm) {
  const RealBoundCheck b = chebyshev_c_form(coin(), 2);
  EXPECT_EQ(b.rhs, 0.25);
  EXPECT_TRUE(b.holds);
  Gen g(602);
  for (int i = 0; i < 200; ++i) {
    const double c = g.uniform(0.5, 4);
    const RealBoundCheck r = chebyshev_c_form(g.prv(6, -5, 5), c);
    ASSERT_EQ(r.rhs, 1.0 / (c * c));
    ASSERT_TRUE(r.holds);
  }
  EXPECT_THROW(chebyshev_c_form(constant(Phantom{3, 1}), 2), Error);
}

TEST(Chebyshev, HugeThreshold) {
  const RealBoundCheck b = chebyshev_bound(coin(), Phantom{1e6, 0});
  EXPECT_EQ(b.lhs, 0.0);
  EXPECT_TRUE(b.holds);
}

TEST(Chebyshev, HoldsAndMatchesEnumeration) {
  Gen g(603);
  for (int i = 0; i < 1000; ++i) {
    const DiscretePRV x = g.prv(6, -5, 5);
    const Phantom z = g.phantom(-4, 4);
    const RealBoundCheck b = chebyshev_bound(x, z);
    const ChebOracle o = chebyshev_oracle(x, rms(z.re, z.reduction()));
    ASSERT_NEAR(b.lhs, o.lhs, 1e-12);
    ASSERT_NEAR(b.rhs, o.rhs, 1e-9 * std::max(1.0, o.rhs));
    ASSERT_TRUE(b.holds) << b.lhs << " > " << b.rhs;
  }
}

TEST(Rng, Reproducible) {
  CounterRng a(42, 3), b(42, 3), c(43, 3);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next();
    ASSERT_EQ(x, b.next());
    differs |= x != c.next();
  }
  EXPECT_TRUE(differs);
  EXPECT_EQ(a.draws(), 1000u);
  CounterRng u(7, 0);
  for (int i = 0; i < 10000; ++i) {
    const double v = u.uniform();
    ASSERT_GE(v, 0.0);
    ASSERT_LT(v, 1.0);
  }
}

TEST(Rng, StreamsDoNotOverlap) {
  std::unordered_set<std::uint64_t> seen;
  for (std::uint32_t s = 0; s < 8; ++s) {
    CounterRng r(99, s);
    for (int i = 0; i < 20000; ++i) ASSERT_TRUE(seen.insert(r.next()).second) << "stream " << s << " draw " << i;
  }
}

TEST(Sampling, ComponentLaws) {
  SimConfig cfg;
  cfg.seed = 11;
  cfg.n = 100000;
  const double tol = 4 * std::sqrt(0.25 / cfg.n);
  const struct {
    Selection sel;
    double mean;
  } cases[] = {{Selection::RealComponent, 0.4}, {Selection::ReducedComponent, 0.6}, {Selection::Midpoint, 0.5}};
  for (const auto& c : cases) {
    cfg.selection = c.sel;
    EXPECT_NEAR(component_law(coin(), c.sel).mean(), c.mean, 1e-15);
    const auto xs = sample_iid(coin(), cfg);
    ASSERT_EQ(xs.size(), 100000u);
    for (double v : xs) ASSERT_TRUE(v == 0.0 || v == 1.0);
    double m = 0.0;
    for (double v : xs) m += v;
    EXPECT_NEAR(m / cfg.n, c.mean, tol);
    EXPECT_EQ(xs, sample_iid(coin(), cfg));
  }
  cfg.n = 50;
  cfg.selection = Selection::RealComponent;
  for (double v : sample_iid(constant(Phantom{2, 1}), cfg)) EXPECT_EQ(v, 2.0);
  cfg.selection = Selection::ReducedComponent;
  for (double v : sample_iid(constant(Phantom{2, 1}), cfg)) EXPECT_EQ(v, 3.0);
}

TEST(Wlln, Examples) {
  SimConfig cfg;
  cfg.seed = 5;
  cfg.n = 100000;
  const SimReport r = wlln_experiment(coin(), cfg);
  EXPECT_EQ(r.target_mean, 0.4);
  EXPECT_LT(r.deviation, 3 * std::sqrt(0.24 / cfg.n));
  EXPECT_LT(r.per_n_curve.back().second, r.per_n_curve.front().second);
  EXPECT_EQ(r.per_n_curve.back().first, cfg.n);

  cfg.selection = Selection::ReducedComponent;
  EXPECT_NEAR(wlln_experiment(coin(), cfg).target_mean, 0.6, 1e-15);

  cfg.n = 1000;
  for (const auto& [n, d] : wlln_experiment(constant(Phantom{1.5, -0.5}), cfg).per_n_curve) EXPECT_EQ(d, 0.0) << n;
}

TEST(Wlln, DeterministicAcrossRuns) {
  SimConfig cfg;
  cfg.seed = 77;
  cfg.n = 5000;
  cfg.reps = 16;
  const SimReport a = wlln_experiment(coin(), cfg), b = wlln_experiment(coin(), cfg);
  EXPECT_EQ(a.per_n_curve, b.per_n_curve);
  EXPECT_EQ(a.empirical_mean, b.empirical_mean);
  cfg.seed = 78;
  EXPECT_NE(wlln_experiment(coin(), cfg).per_n_curve, a.per_n_curve);
}

TEST(Slln, Examples) {
  SimConfig cfg;
  cfg.seed = 3;
  cfg.n = 100000;
  cfg.reps = 100;
  cfg.epsilon = 0.01;
  const SimReport r = slln_experiment(coin(), cfg);
  ASSERT_TRUE(r.within_fraction.has_value());
  EXPECT_GE(*r.within_fraction, 0.99);

  cfg.n = 2000;
  cfg.reps = 4;
  EXPECT_EQ(*slln_experiment(constant(Phantom{1, 1}), cfg).within_fraction, 1.0);
  cfg.epsilon = 0.0;
  EXPECT_EQ(*slln_experiment(coin(), cfg).within_fraction, 0.0);
}

TEST(Clt, MatchesLatticeDistance) {
  // W_30 of a Bernoulli lives on 31 points, so its sup distance to Phi cannot fall below the
  // exact lattice value; the empirical KS must sit within sampling noise of it.
  SimConfig cfg;
  cfg.seed = 2024;
  cfg.n = 30;
  cfg.reps = 2000;
  const double dkw = std::sqrt(std::log(2 / 1e-4) / (2.0 * cfg.reps));
  for (const auto& [sel, p] : {std::pair{Selection::RealComponent, 0.4}, {Selection::ReducedComponent, 0.6}}) {
    cfg.selection = sel;
    const SimReport r = clt_experiment(coin(), cfg);
    ASSERT_TRUE(r.ks_statistic.has_value());
    const double exact = lattice_ks(30, p);
    EXPECT_NEAR(exact, 0.0785, 5e-4);
    EXPECT_NEAR(*r.ks_statistic, exact, dkw);
    EXPECT_EQ(r.cdf_bins.size(), 33u);
  }
}

TEST(Clt, KsRangeAndDeterminism) {
  SimConfig cfg;
  cfg.seed = 9;
  cfg.n = 30;
  cfg.reps = 1;
  const SimReport one = clt_experiment(coin(), cfg);
  EXPECT_GE(*one.ks_statistic, 0.0);
  EXPECT_LE(*one.ks_statistic, 1.0);
  cfg.reps = 300;
  const SimReport a = clt_experiment(coin(), cfg), b = clt_experiment(coin(), cfg);
  EXPECT_EQ(*a.ks_statistic, *b.ks_statistic);
  for (std::size_t i = 0; i < a.cdf_bins.size(); ++i) EXPECT_EQ(a.cdf_bins[i].empirical, b.cdf_bins[i].empirical);
  try {
    clt_experiment(constant(Phantom{1, 0}), cfg);
    ADD_FAILURE() << "expected DegenerateVariance";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateVariance);
  }
}

TEST(Clt, RealizationAssemblyMatchesRingStandardization) {
  Gen g(604);
  for (int i = 0; i < 1000; ++i) {
    const double n = g.integer(1, 500);
    const Phantom mu = g.phantom(-3, 3), sigma = g.pseudo_positive(0.1, 3);
    const Phantom s = g.phantom(-500, 500);
    const Phantom ring = (s - Phantom{n} * mu) * inverse(sigma * Phantom{std::sqrt(n)});
    const double w_re = (s.re - n * mu.re) / (sigma.re * std::sqrt(n));
    const double w_red = (s.reduction() - n * mu.reduction()) / (sigma.reduction() * std::sqrt(n));
    ASSERT_TRUE(near(ring, Phantom::from_components(w_re, w_red), 1e-12));
  }
}

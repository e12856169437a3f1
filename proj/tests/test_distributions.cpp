#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "phantom/distributions.hpp"
#include "test_support.hpp"

using namespace phantom;
using phantom::testing::Gen;
using phantom::testing::near;

namespace {

Phantom total_mass(const DiscretePRV& x) {
  Phantom s;
  for (const Atom& a : x.support()) s += a.prob;
  return s;
}

Phantom continuous_mass(const ContinuousPRV& x) {
  return integrate([&](double t) { return x.density_along(t); }, x.lower(), x.upper(), x.quadrature(),
                   x.path().breakpoints());
}

// pmf of a sum of independent integer-valued variables by brute-force convolution
std::map<int, Phantom> convolve(const std::map<int, Phantom>& a, const std::map<int, Phantom>& b) {
  std::map<int, Phantom> out;
  for (const auto& [i, p] : a)
    for (const auto& [j, q] : b) out[i + j] += p * q;
  return out;
}

template <class F>
void expect_kind(ErrorKind kind, F&& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << to_string(kind);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

}  // namespace

TEST(Build, Examples) {
  const DiscretePRV b = build_discrete(Binomial{2, Phantom{0.5, 0}});
  EXPECT_TRUE(near(pmf(b, Phantom{1}), Phantom{0.5, 0}, 1e-15));
  const Phantom p{0.4, 0.2};
  const DiscretePRV x = build_discrete(Bernoulli{p});
  ASSERT_EQ(x.support().size(), 2u);
  EXPECT_EQ(x.support()[0].value, Phantom{0});
  EXPECT_TRUE(near(x.support()[0].prob, Phantom{1} - p, 1e-15));
  EXPECT_EQ(x.support()[1].value, Phantom{1});
  EXPECT_EQ(x.support()[1].prob, p);
  expect_kind(ErrorKind::BadParameter, [] { return build(Poisson{Phantom{-1, 0}}); });
}

TEST(Build, ParameterValidation) {
  expect_kind(ErrorKind::BadParameter, [] { return build(Bernoulli{Phantom{0.5, 0.6}}); });
  expect_kind(ErrorKind::BadParameter, [] { return build(Bernoulli{Phantom{0.5, 0.5}}); });  // 1 - p is a zero divisor
  expect_kind(ErrorKind::BadParameter, [] { return build(Binomial{-1, Phantom{0.5}}); });
  expect_kind(ErrorKind::BadParameter, [] { return build(Geometric{Phantom{0.5}, 0}); });
  expect_kind(ErrorKind::BadParameter, [] { return build(Exponential{Phantom{1, -1}, std::nullopt}); });
  expect_kind(ErrorKind::BadParameter, [] { return build(Normal{Phantom{0}, Phantom{-1, 0}, std::nullopt}); });
  // exponential paths must stay pseudo positive
  expect_kind(ErrorKind::BadParameter,
              [] { return build(Exponential{Phantom{1}, Path::shifted_line(0, 40, -0.5)}); });
}

TEST(Normalization, DiscreteFamilies) {
  Gen g(501);
  for (int n = 0; n <= 20; ++n) {
    const Phantom p = Phantom::from_components(g.uniform(0.05, 0.95), g.uniform(0.05, 0.95));
    EXPECT_TRUE(near(total_mass(build_discrete(Binomial{n, p})), Phantom{1}, 1e-10)) << n;
  }
  for (const Phantom& p : {Phantom{0.3, 0.2}, Phantom{0.05, 0.01}, Phantom{0.9, -0.5}}) {
    const DiscretePRV x = build_discrete(Geometric{p});
    EXPECT_LT(std::abs(x.truncation_residual().re), 1e-12);
    EXPECT_LT(std::abs(x.truncation_residual().reduction()), 1e-12);
    EXPECT_TRUE(near(total_mass(x) + x.truncation_residual(), Phantom{1}, 1e-10));
  }
  for (const Phantom& l : {Phantom{1, 0.5}, Phantom{0.1, 3}, Phantom{40, -10}}) {
    const DiscretePRV x = build_discrete(Poisson{l});
    EXPECT_LT(std::abs(x.truncation_residual().re), 1e-12);
    EXPECT_LT(std::abs(x.truncation_residual().reduction()), 1e-12);
    EXPECT_TRUE(near(total_mass(x) + x.truncation_residual(), Phantom{1}, 1e-10));
  }
}

TEST(Normalization, ExplicitCutoffReportsResidual) {
  const DiscretePRV x = build_discrete(Geometric{Phantom{0.5, 0}, 3});
  EXPECT_EQ(x.support().size(), 3u);
  EXPECT_NEAR(x.truncation_residual().re, 0.125, 1e-15);
  EXPECT_NEAR(total_mass(x).re, 0.875, 1e-15);
}

TEST(Normalization, ContinuousOnRealAndPhantomPaths) {
  const Phantom lambda{1.5, 0.5};
  const std::vector<Path> exp_paths{default_path(Exponential{lambda, std::nullopt}),
                                    Path::zigzag_line(0, 20, 1, 3), Path::zigzag_line(0, 20, 0.2, 1.5)};
  for (const Path& path : exp_paths) {
    const ContinuousPRV x = build_continuous(Exponential{lambda, path});
    EXPECT_TRUE(near(continuous_mass(x), Phantom{1}, 1e-6));
  }
  const Normal base{Phantom{0.5, -0.2}, Phantom{1.2, 0.3}, std::nullopt};
  const Path env = default_path(base);
  const std::vector<Path> normal_paths{env, Path::shifted_line(env.t0(), env.t1(), 0.4),
                                       Path::zigzag_line(env.t0(), env.t1(), -1, 2)};
  for (const Path& path : normal_paths) {
    const ContinuousPRV x = build_continuous(Normal{base.mu, base.sigma, path});
    EXPECT_TRUE(near(continuous_mass(x), Phantom{1}, 1e-6));
  }
}

TEST(Normalization, SineWobblePathLosesMass) {
  // b(t) = 0.1 sin t keeps points pseudo positive, but t -> t + 0.1 sin t does not carry
  // Lebesgue measure to itself, so with the 1/x' factor the reduced side is not normalized.
  const Path wobble([](double t) { return t; }, [](double t) { return 0.1 * std::sin(t); }, 0, 40,
                    [](double) { return 1.0; }, [](double t) { return 0.1 * std::cos(t); });
  expect_kind(ErrorKind::BadParameter, [&] { return build(Exponential{Phantom{1}, wobble}); });
}

TEST(ClosedForm, Examples) {
  const ClosedFormStats e = closed_form_stats(Exponential{Phantom{2, 2}, std::nullopt});
  EXPECT_TRUE(near(e.mean, Phantom{0.5, -0.25}, 1e-15));
  const Normal n{Phantom{1, 2}, Phantom{0.5, 0.5}, std::nullopt};
  const ClosedFormStats ns = closed_form_stats(n);
  EXPECT_EQ(ns.mean, n.mu);
  EXPECT_TRUE(near(ns.variance, n.sigma * n.sigma, 1e-15));
  const ClosedFormStats ps = closed_form_stats(Poisson{Phantom{3, -1}});
  EXPECT_EQ(ps.mean, (Phantom{3, -1}));
  EXPECT_EQ(ps.variance, (Phantom{3, -1}));
  const Phantom p{0.4, 0.2};
  const ClosedFormStats bs = closed_form_stats(Bernoulli{p});
  EXPECT_EQ(bs.variance, p - p * p);
}

TEST(ClosedForm, MatchesBuiltVariables) {
  const std::vector<DistSpec> discrete{Bernoulli{Phantom{0.4, 0.2}}, Binomial{12, Phantom{0.3, 0.4}},
                                       Geometric{Phantom{0.25, 0.25}}, Poisson{Phantom{2.5, 1.5}}};
  for (const DistSpec& s : discrete) {
    const DiscretePRV x = build_discrete(s);
    const ClosedFormStats cf = closed_form_stats(s);
    EXPECT_TRUE(near(moment(x, 1), cf.mean, 1e-9));
    EXPECT_TRUE(near(variance(x), cf.variance, 1e-9));
  }
  const Phantom lambda{2, 2};
  const Normal nrm{Phantom{1, 1}, Phantom{2, -0.5}, std::nullopt};
  const Path env = default_path(nrm);
  const std::vector<DistSpec> continuous{Exponential{lambda, std::nullopt},
                                         Exponential{lambda, Path::zigzag_line(0, 20, 0.5, 1)}, nrm,
                                         Normal{nrm.mu, nrm.sigma, Path::shifted_line(env.t0(), env.t1(), -0.3)},
                                         StdNormal{std::nullopt}};
  for (const DistSpec& s : continuous) {
    const ContinuousPRV x = build_continuous(s);
    const ClosedFormStats cf = closed_form_stats(s);
    EXPECT_TRUE(near(moment(x, 1), cf.mean, 1e-6));
    EXPECT_TRUE(near(variance(x), cf.variance, 1e-6));
  }
}

TEST(ClosedForm, BinomialIsBernoulliConvolution) {
  Gen g(502);
  for (int trial = 0; trial < 20; ++trial) {
    const Phantom p = Phantom::from_components(g.uniform(0.05, 0.95), g.uniform(0.05, 0.95));
    const int n = g.integer(1, 15);
    const Phantom q = Phantom{1} - p;
    std::map<int, Phantom> bern{{0, q}, {1, p}};
    std::map<int, Phantom> acc{{0, Phantom{1}}};
    for (int k = 0; k < n; ++k) acc = convolve(acc, bern);
    const DiscretePRV b = build_discrete(Binomial{n, p});
    for (const auto& [k, w] : acc) ASSERT_TRUE(near(pmf(b, Phantom{static_cast<double>(k)}), w, 1e-10));
  }
}

TEST(Standardize, Examples) {
  const Standardization id = standardize(Normal{Phantom{0}, Phantom{1}, std::nullopt});
  EXPECT_EQ(id.scale, Phantom{1});
  EXPECT_EQ(id.shift, Phantom{});
  const Standardization s = standardize(Normal{Phantom{1, 1}, Phantom{2, 0}, std::nullopt});
  EXPECT_TRUE(near(s.scale, Phantom{0.5, 0}, 1e-15));
  EXPECT_TRUE(near(s.shift, Phantom{-0.5, -0.5}, 1e-15));
  expect_kind(ErrorKind::DegenerateVariance,
              [] { return standardize(Normal{Phantom{0}, Phantom{1, -1}, std::nullopt}); });

  const Normal n{Phantom{1, 1}, Phantom{2, 0.5}, std::nullopt};
  const Standardization t = standardize(n);
  const ContinuousPRV x = build_continuous(n);
  const Phantom m = moment(x, 1), v = variance(x);
  EXPECT_TRUE(near(t.scale * m + t.shift, Phantom{}, 1e-6));
  EXPECT_TRUE(near(t.scale * t.scale * v, Phantom{1}, 1e-6));
}

TEST(Phi, Examples) {
  EXPECT_TRUE(near(phi(Phantom{0}), Phantom{0.5}, 1e-9));
  EXPECT_EQ(phi(Sentinel::PlusInfinity), Phantom{1});
  const double table = 0.5 * std::erfc(-1.96 / std::numbers::sqrt2);
  const Phantom v = phi(Phantom{1.96});
  EXPECT_NEAR(v.re, 0.975, 2e-4);
  EXPECT_NEAR(v.re, table, 1e-9);
  EXPECT_NEAR(v.ph, 0, 1e-9);
  // on a shifted path the reduced side sees the same law, centred on the shift
  const Phantom w = phi(Phantom{0, 0.5}, Path::shifted_line(-12, 12, 0.5));
  EXPECT_NEAR(w.re, 0.5, 1e-9);
  EXPECT_NEAR(w.reduction(), 0.5 * std::erfc(-0.5 / std::numbers::sqrt2), 1e-6);
}

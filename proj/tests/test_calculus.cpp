#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "phantom/calculus.hpp"
#include "test_support.hpp"

using namespace phantom;
using phantom::testing::Gen;
using phantom::testing::near;

namespace {

// Direct ring-arithmetic Horner evaluation.
Phantom horner(const std::vector<Phantom>& c, const Phantom& z) {
  Phantom acc;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::vector<Phantom> antiderivative(const std::vector<Phantom>& c) {
  std::vector<Phantom> out{Phantom{}};
  for (std::size_t k = 0; k < c.size(); ++k) out.push_back(c[k] * Phantom{1.0 / static_cast<double>(k + 1)});
  return out;
}

PhantomPolynomial random_poly(Gen& g, int degree) {
  std::vector<Phantom> c;
  for (int k = 0; k <= degree; ++k) c.push_back(g.phantom(-2, 2));
  return PhantomPolynomial(c);
}

PhantomFn as_fn(const PhantomPolynomial& f) {
  return [f](const Phantom& z) { return poly_eval(f, z); };
}

}  // namespace

TEST(Polynomial, Construction) {
  const PhantomPolynomial f({Phantom{1, 0}, Phantom{2, 1}, Phantom{}, Phantom{}});
  EXPECT_EQ(f.degree(), 1);
  EXPECT_EQ(PhantomPolynomial({Phantom{}}).degree(), -1);
  EXPECT_TRUE(PhantomPolynomial().is_zero());
  EXPECT_EQ(f.real_part(), (std::vector<double>{1, 2}));
  EXPECT_EQ(f.reduced_part(), (std::vector<double>{1, 3}));
}

TEST(Polynomial, Eval) {
  const PhantomPolynomial sq({Phantom{}, Phantom{}, Phantom{1}});
  EXPECT_EQ(poly_eval(sq, {1, 1}), (Phantom{1, 3}));
  const PhantomPolynomial c({Phantom{2.5, -1}});
  EXPECT_EQ(poly_eval(c, {7, -3}), (Phantom{2.5, -1}));
  EXPECT_EQ(poly_eval(PhantomPolynomial(), {7, -3}), Phantom{});
}

TEST(Polynomial, EvalMatchesHorner) {
  Gen g(201);
  for (int i = 0; i < 1000; ++i) {
    const PhantomPolynomial f = random_poly(g, g.integer(0, 8));
    const Phantom z = g.phantom(-2, 2);
    ASSERT_TRUE(near(poly_eval(f, z), horner(f.coefficients(), z), 1e-12));
  }
}

TEST(Polynomial, Conjugate) {
  const PhantomPolynomial f({Phantom{}, Phantom{1, 2}});
  EXPECT_EQ(poly_conjugate(f), PhantomPolynomial({Phantom{}, Phantom{3, -2}}));
  const PhantomPolynomial r({Phantom{1}, Phantom{-2}, Phantom{0.5}});
  EXPECT_EQ(poly_conjugate(r), r);
  Gen g(202);
  for (int i = 0; i < 1000; ++i) {
    const PhantomPolynomial h = random_poly(g, g.integer(0, 6));
    const Phantom z = g.phantom(-2, 2);
    ASSERT_TRUE(near(conjugate(poly_eval(h, z)), poly_eval(poly_conjugate(h), conjugate(z)), 1e-12));
  }
}

TEST(Polynomial, Arithmetic) {
  Gen g(203);
  for (int i = 0; i < 200; ++i) {
    const PhantomPolynomial f = random_poly(g, 3), h = random_poly(g, 4);
    const Phantom w = g.phantom(-2, 2), z = g.phantom(-2, 2);
    ASSERT_TRUE(near(poly_eval(f + h, z), poly_eval(f, z) + poly_eval(h, z), 1e-12));
    ASSERT_TRUE(near(poly_eval(f * h, z), poly_eval(f, z) * poly_eval(h, z), 1e-11));
    ASSERT_TRUE(near(poly_eval(w * f, z), w * poly_eval(f, z), 1e-12));
  }
}

TEST(Polynomial, Derivative) {
  const PhantomPolynomial cube({Phantom{}, Phantom{}, Phantom{}, Phantom{1}});
  EXPECT_EQ(poly_eval(poly_derivative(cube), {1, 1}), (Phantom{3, 9}));
  EXPECT_TRUE(poly_derivative(PhantomPolynomial({Phantom{4, 1}})).is_zero());

  Gen g(204);
  const double h = 1e-5;
  for (int i = 0; i < 200; ++i) {
    const PhantomPolynomial f = random_poly(g, g.integer(1, 6));
    const Phantom z0 = g.phantom(-1.5, 1.5);
    const Path line = Path::shifted_line(-10, 10, z0.ph);
    const double t = z0.re;
    const Phantom fd = (poly_eval(f, line.point(t + h)) - poly_eval(f, line.point(t - h))) * Phantom{0.5 / h};
    ASSERT_TRUE(near(poly_eval(poly_derivative(f), z0), fd, 1e-6));
  }
}

TEST(PathTest, PointAndTangent) {
  const Path r = Path::real_line(-5, 5);
  EXPECT_EQ(r.point(2), (Phantom{2, 0}));
  EXPECT_EQ(r.tangent(2), (Phantom{1, 0}));

  const Path p([](double t) { return t; }, [](double t) { return t * t; }, 0, 3);
  const Phantom d = p.tangent(1);
  EXPECT_NEAR(d.re, 1, 1e-6);
  EXPECT_NEAR(d.ph, 2, 1e-6);
  // one-sided stencil at the ends
  EXPECT_NEAR(p.tangent(0).ph, 0, 1e-6);
  EXPECT_NEAR(p.tangent(3).ph, 6, 1e-6);

  EXPECT_THROW(r.point(5.5), Error);
  EXPECT_THROW(r.tangent(-6), Error);
  try {
    r.point(7);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutOfDomain);
  }
}

TEST(PathTest, ZigzagKeepsBothComponentsMeasurePreserving) {
  const Path z = Path::zigzag_line(0, 10, 1, 3);
  EXPECT_EQ(z.point(0.5), (Phantom{0.5, 0}));
  EXPECT_NEAR(z.point(2).reduction(), 4, 1e-12);
  EXPECT_NEAR(z.point(3).reduction(), 1, 1e-12);
  EXPECT_NEAR(z.point(4).reduction(), 4, 1e-12);
  EXPECT_NEAR(z.point(7).ph, 0, 1e-12);
  // integral of g(red(gamma)) * red(gamma') equals integral of g over the same range
  QuadratureConfig cfg;
  const Phantom one = path_integral([](const Phantom&) { return Phantom{1}; }, z, cfg);
  EXPECT_NEAR(one.re, 10, 1e-9);
  EXPECT_NEAR(one.reduction(), 10, 1e-9);
}

TEST(PathIntegral, Basic) {
  const auto unit = [](const Phantom&) { return Phantom{1}; };
  const Phantom a = path_integral(unit, Path::real_line(0, 1));
  EXPECT_NEAR(a.re, 1, 1e-14);
  EXPECT_NEAR(a.ph, 0, 1e-14);
  const Path diag([](double t) { return t; }, [](double t) { return t; }, 0, 1);
  const Phantom b = path_integral(unit, diag);
  EXPECT_NEAR(b.re, 1, 1e-9);
  EXPECT_NEAR(b.ph, 1, 1e-9);
}

TEST(PathIntegral, FundamentalTheorem) {
  Gen g(205);
  for (int i = 0; i < 200; ++i) {
    const PhantomPolynomial f = random_poly(g, g.integer(0, 5));
    const double c1 = g.uniform(-1, 1), c2 = g.uniform(-1, 1), c3 = g.uniform(-1, 1);
    const Path gamma([=](double t) { return c1 * t + c2 * t * t; }, [=](double t) { return c3 * t * t * t + t; }, -1,
                     1.5, [=](double t) { return c1 + 2 * c2 * t; }, [=](double t) { return 3 * c3 * t * t + 1; });
    const auto F = antiderivative(f.coefficients());
    const Phantom want = horner(F, gamma.point(1.5)) - horner(F, gamma.point(-1));
    ASSERT_TRUE(near(path_integral(as_fn(f), gamma), want, 1e-8));
  }
}

TEST(PathIntegral, LinearityReversalConcatenation) {
  Gen g(206);
  for (int i = 0; i < 100; ++i) {
    const PhantomPolynomial f = random_poly(g, 3), h = random_poly(g, 2);
    const Phantom w = g.phantom(-2, 2);
    const double k = g.uniform(0.2, 2);
    const Path gamma([k](double t) { return std::sin(k * t) + t; }, [k](double t) { return std::cos(k * t); }, 0, 2,
                     [k](double t) { return k * std::cos(k * t) + 1; }, [k](double t) { return -k * std::sin(k * t); });
    const Phantom lhs = path_integral([&](const Phantom& z) { return poly_eval(f, z) + w * poly_eval(h, z); }, gamma);
    const Phantom rhs = path_integral(as_fn(f), gamma) + w * path_integral(as_fn(h), gamma);
    ASSERT_TRUE(near(lhs, rhs, 1e-8));

    const Phantom fwd = path_integral(as_fn(f), gamma);
    ASSERT_TRUE(near(path_integral(as_fn(f), gamma.reversed()), -fwd, 1e-8));
    ASSERT_TRUE(near(path_integral(as_fn(f), gamma, 2, 0), -fwd, 1e-8));

    const Path second = Path::segment(gamma.point(2), Phantom{-1, 3});
    const Phantom joined = path_integral(as_fn(f), concatenate(gamma, second));
    const Phantom sum = fwd + path_integral(as_fn(f), second);
    ASSERT_NEAR(joined.re, sum.re, 1e-8);
    ASSERT_NEAR(joined.ph, sum.ph, 1e-8);
  }
}

TEST(Quadrature, KnownIntegrals) {
  const Phantom s = integrate([](double t) { return Phantom{std::sin(t), std::cos(t)}; }, 0, std::numbers::pi);
  EXPECT_NEAR(s.re, 2, 1e-12);
  EXPECT_NEAR(s.ph, 0, 1e-12);
  const std::vector<double> kink{0.3};
  const Phantom k = integrate([](double t) { return Phantom{std::abs(t - 0.3)}; }, 0, 1, {}, kink);
  EXPECT_NEAR(k.re, 0.5 * (0.09 + 0.49), 1e-13);
  const Phantom peak = integrate([](double t) { return Phantom{1.0 / (1e-4 + t * t)}; }, -1, 1);
  EXPECT_NEAR(peak.re, 2 * std::atan(100.0) * 100.0, 1e-9 * 314);
}

TEST(Quadrature, InfiniteEndpoints) {
  const Path tail([](double t) { return t; }, [](double) { return 0.0; }, 0, std::numeric_limits<double>::infinity());
  const auto decay = [](const Phantom& z) { return exp(-z); };
  EXPECT_THROW(path_integral(decay, tail), Error);
  QuadratureConfig cfg;
  cfg.infinite_truncation = 60;
  EXPECT_NEAR(path_integral(decay, tail, cfg).re, 1, 1e-10);
  Path hinted = tail;
  hinted.with_truncation(50);
  EXPECT_NEAR(path_integral(decay, hinted).re, 1, 1e-10);
}

TEST(Quadrature, FailureIsReported) {
  QuadratureConfig cfg;
  cfg.max_subdivisions = 4;
  try {
    integrate([](double t) { return Phantom{std::sin(1.0 / (t + 1e-3))}; }, 0, 1, cfg);
    ADD_FAILURE() << "expected QuadratureFailure";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::QuadratureFailure);
  }
  try {
    integrate([](double) { return Phantom{std::numeric_limits<double>::quiet_NaN()}; }, 0, 1);
    ADD_FAILURE() << "expected QuadratureFailure";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::QuadratureFailure);
  }
}

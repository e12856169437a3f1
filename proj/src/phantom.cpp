#include "phantom/phantom.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <string>

namespace phantom {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::RootDomain: return "RootDomain";
    case ErrorKind::LogDomain: return "LogDomain";
    case ErrorKind::BadAlpha: return "BadAlpha";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::UnknownOutcome: return "UnknownOutcome";
    case ErrorKind::ConditioningDegenerate: return "ConditioningDegenerate";
    case ErrorKind::BadPartition: return "BadPartition";
    case ErrorKind::BadCoefficients: return "BadCoefficients";
    case ErrorKind::InvalidMeasure: return "InvalidMeasure";
    case ErrorKind::BadOrder: return "BadOrder";
    case ErrorKind::EmptyRange: return "EmptyRange";
    case ErrorKind::BadParameter: return "BadParameter";
    case ErrorKind::DegenerateVariance: return "DegenerateVariance";
    case ErrorKind::BadVariant: return "BadVariant";
    case ErrorKind::SyntaxError: return "SyntaxError";
  }
  return "Error";
}

namespace {

std::atomic<double> g_tau{1e-12};

double real_root(double x, int n) {
  if (n == 2) return std::sqrt(x);
  if (n == 3) return std::cbrt(x);
  if (x < 0.0) return -std::pow(-x, 1.0 / n);
  return std::pow(x, 1.0 / n);
}

std::string show(const Phantom& z) {
  return "(" + std::to_string(z.re) + ", " + std::to_string(z.ph) + ")";
}

std::weak_ordering order_doubles(double x, double y) {
  if (x < y) return std::weak_ordering::less;
  if (x > y) return std::weak_ordering::greater;
  return std::weak_ordering::equivalent;
}

std::weak_ordering order_doubles(double x, double y, double tol) {
  if (std::abs(x - y) <= tol) return std::weak_ordering::equivalent;
  return order_doubles(x, y);
}

}  // namespace

double zero_divisor_tolerance() noexcept { return g_tau.load(std::memory_order_relaxed); }

void set_zero_divisor_tolerance(double tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw Error(ErrorKind::BadParameter, "tolerance must be finite and >= 0");
  g_tau.store(tau, std::memory_order_relaxed);
}

SignClass classify(const Phantom& z) {
  const double tau = zero_divisor_tolerance();
  const double a = z.re;
  const double red = z.reduction();
  const bool a_zero = std::abs(a) <= tau;
  const bool red_zero = std::abs(red) <= tau;
  if (a_zero && red_zero) return SignClass::Zero;
  if (a_zero || red_zero) return SignClass::ZeroDivisor;
  if (a > 0 && z.ph > 0) return SignClass::Positive;
  if (a > 0 && red > 0) return SignClass::PseudoPositive;
  if (a < 0 && z.ph < 0) return SignClass::Negative;
  if (a < 0 && red < 0) return SignClass::PseudoNegative;
  return SignClass::Indefinite;
}

bool is_zero_divisor(const Phantom& z) { return classify(z) == SignClass::ZeroDivisor; }

bool is_invertible(const Phantom& z) {
  const SignClass c = classify(z);
  return c != SignClass::Zero && c != SignClass::ZeroDivisor;
}

bool is_pseudo_positive(const Phantom& z) {
  const SignClass c = classify(z);
  return c == SignClass::Positive || c == SignClass::PseudoPositive;
}

Phantom inverse(const Phantom& z) {
  if (!is_invertible(z)) throw Error(ErrorKind::NotInvertible, show(z) + " is zero or a zero divisor");
  const double ra = 1.0 / z.re;
  return {ra, 1.0 / z.reduction() - ra};
}

Phantom operator/(const Phantom& x, const Phantom& y) {
  if (!is_invertible(y)) throw Error(ErrorKind::NotInvertible, "division by " + show(y));
  const double q = x.re / y.re;
  return {q, x.reduction() / y.reduction() - q};
}

Phantom pow_int(const Phantom& z, int n) {
  if (n == 0) return {1.0, 0.0};
  if (n < 0 && !is_invertible(z)) {
    throw Error(ErrorKind::NotInvertible, "negative power of " + show(z));
  }
  const double pa = std::pow(z.re, n);
  return {pa, std::pow(z.reduction(), n) - pa};
}

Phantom nth_root(const Phantom& z, int n) {
  if (n < 1) throw Error(ErrorKind::RootDomain, "root index must be positive");
  if (n % 2 == 0 && (z.re < 0.0 || z.reduction() < 0.0)) {
    throw Error(ErrorKind::RootDomain, "even root of " + show(z));
  }
  const double ra = real_root(z.re, n);
  return {ra, real_root(z.reduction(), n) - ra};
}

Phantom sqrt(const Phantom& z) { return nth_root(z, 2); }

Phantom exp(const Phantom& z) {
  // e^(a+b) - e^a written as e^a * expm1(b) to keep small phantom terms accurate.
  const double ea = std::exp(z.re);
  return {ea, ea * std::expm1(z.ph)};
}

Phantom log(const Phantom& z) {
  if (!is_pseudo_positive(z)) throw Error(ErrorKind::LogDomain, show(z) + " is not pseudo positive");
  return {std::log(z.re), std::log1p(z.ph / z.re)};
}

double abs(const Phantom& z) { return std::hypot(z.re, z.reduction()) / std::numbers::sqrt2; }

double distance(const Phantom& z, const Phantom& w) { return abs(z - w); }

double norm(std::span<const Phantom> v) {
  double s = 0.0;
  for (const Phantom& z : v) {
    const double m = abs(z);
    s += m * m;
  }
  return std::sqrt(s);
}

double alpha_value(const Phantom& z, double alpha) {
  if (!(alpha > 0.0)) throw Error(ErrorKind::BadAlpha, "alpha must be > 0");
  return z.re + z.ph / alpha;
}

bool is_finite(const Phantom& z) { return std::isfinite(z.re) && std::isfinite(z.ph); }

bool approx_equal(const Phantom& z, const Phantom& w, double tol) {
  return std::abs(z.re - w.re) <= tol && std::abs(z.ph - w.ph) <= tol;
}

OrderKind OrderKind::alpha(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorKind::BadAlpha, "alpha must be finite and > 0");
  return OrderKind(Tag::Alpha, a);
}

std::weak_ordering compare(const Phantom& z, const Phantom& w, const OrderKind& ord) {
  switch (ord.tag()) {
    case OrderKind::Tag::Lex: {
      const auto first = order_doubles(z.re, w.re);
      return first != 0 ? first : order_doubles(z.ph, w.ph);
    }
    case OrderKind::Tag::Alpha:
      return order_doubles(alpha_value(z, ord.alpha_parameter()), alpha_value(w, ord.alpha_parameter()));
    case OrderKind::Tag::RealTerm:
      return order_doubles(z.re, w.re);
    case OrderKind::Tag::AbsNorm:
      return order_doubles(abs(z), abs(w));
  }
  return std::weak_ordering::equivalent;
}

std::weak_ordering compare_approx(const Phantom& z, const Phantom& w, const OrderKind& ord, double tol) {
  switch (ord.tag()) {
    case OrderKind::Tag::Lex: {
      const auto first = order_doubles(z.re, w.re, tol);
      return first != 0 ? first : order_doubles(z.ph, w.ph, tol);
    }
    case OrderKind::Tag::Alpha:
      return order_doubles(alpha_value(z, ord.alpha_parameter()), alpha_value(w, ord.alpha_parameter()), tol);
    case OrderKind::Tag::RealTerm:
      return order_doubles(z.re, w.re, tol);
    case OrderKind::Tag::AbsNorm:
      return order_doubles(abs(z), abs(w), tol);
  }
  return std::weak_ordering::equivalent;
}

}  // namespace phantom

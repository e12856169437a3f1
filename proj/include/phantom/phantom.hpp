#pragma once

// The ring PH = R + pR with p*p = p. A value a + p*b is stored as (re, ph).

#include <compare>
#include <span>

#include "phantom/error.hpp"

namespace phantom {

struct Phantom {
  double re = 0.0;
  double ph = 0.0;

  constexpr Phantom() = default;
  // Reals embed as (x, 0).
  constexpr Phantom(double x) : re(x) {}  // NOLINT(google-explicit-constructor)
  constexpr Phantom(double real_term, double phantom_term) : re(real_term), ph(phantom_term) {}

  // Builds the value whose real term is `re` and whose reduction is `red`.
  static constexpr Phantom from_components(double real_term, double red) {
    return {real_term, red - real_term};
  }

  constexpr double reduction() const { return re + ph; }

  friend constexpr bool operator==(const Phantom&, const Phantom&) = default;
};

inline constexpr Phantom kUnit{0.0, 1.0};  // the idempotent p

// Absolute tolerance on |a| and |a+b| used by classification and invertibility.
double zero_divisor_tolerance() noexcept;
void set_zero_divisor_tolerance(double tau);

constexpr Phantom operator+(const Phantom& x, const Phantom& y) { return {x.re + y.re, x.ph + y.ph}; }
constexpr Phantom operator-(const Phantom& x, const Phantom& y) { return {x.re - y.re, x.ph - y.ph}; }
constexpr Phantom operator-(const Phantom& x) { return {-x.re, -x.ph}; }
constexpr Phantom operator*(const Phantom& x, const Phantom& y) {
  return {x.re * y.re, x.re * y.ph + x.ph * y.re + x.ph * y.ph};
}
Phantom operator/(const Phantom& x, const Phantom& y);

inline Phantom& operator+=(Phantom& x, const Phantom& y) { return x = x + y; }
inline Phantom& operator-=(Phantom& x, const Phantom& y) { return x = x - y; }
inline Phantom& operator*=(Phantom& x, const Phantom& y) { return x = x * y; }
inline Phantom& operator/=(Phantom& x, const Phantom& y) { return x = x / y; }

constexpr double reduction(const Phantom& z) { return z.reduction(); }
constexpr Phantom conjugate(const Phantom& z) { return {z.re + z.ph, -z.ph}; }

Phantom inverse(const Phantom& z);
Phantom pow_int(const Phantom& z, int n);
// Principal real roots per component; odd roots of negatives are allowed.
Phantom nth_root(const Phantom& z, int n);
Phantom sqrt(const Phantom& z);
Phantom exp(const Phantom& z);
Phantom log(const Phantom& z);

double abs(const Phantom& z);
double distance(const Phantom& z, const Phantom& w);
double norm(std::span<const Phantom> v);
double alpha_value(const Phantom& z, double alpha);

bool is_finite(const Phantom& z);
bool approx_equal(const Phantom& z, const Phantom& w, double tol);

enum class SignClass { Zero, Positive, PseudoPositive, Negative, PseudoNegative, ZeroDivisor, Indefinite };

SignClass classify(const Phantom& z);
bool is_zero_divisor(const Phantom& z);
bool is_invertible(const Phantom& z);
bool is_pseudo_positive(const Phantom& z);

class OrderKind {
 public:
  enum class Tag { Lex, Alpha, RealTerm, AbsNorm };

  static constexpr OrderKind lex() { return OrderKind(Tag::Lex, 0.0); }
  static OrderKind alpha(double a);
  static constexpr OrderKind real_term() { return OrderKind(Tag::RealTerm, 0.0); }
  static constexpr OrderKind abs_norm() { return OrderKind(Tag::AbsNorm, 0.0); }

  constexpr Tag tag() const { return tag_; }
  constexpr double alpha_parameter() const { return alpha_; }
  // Lex and Alpha are compatible with the ring operations; the others are not.
  constexpr bool probability_grade() const { return tag_ == Tag::Lex || tag_ == Tag::Alpha; }

  friend constexpr bool operator==(const OrderKind&, const OrderKind&) = default;

 private:
  constexpr OrderKind(Tag t, double a) : tag_(t), alpha_(a) {}
  Tag tag_;
  double alpha_;
};

std::weak_ordering compare(const Phantom& z, const Phantom& w, const OrderKind& ord = OrderKind::lex());
// As compare, but keys that differ by at most tol count as equal.
std::weak_ordering compare_approx(const Phantom& z, const Phantom& w, const OrderKind& ord, double tol);

}  // namespace phantom

#pragma once

// Phantom polynomials, parameterized paths in PH and numerical path integrals.

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "phantom/phantom.hpp"

namespace phantom {

struct QuadratureConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  std::size_t max_subdivisions = std::size_t{1} << 16;
  // Replaces an infinite endpoint t = +-inf by +-infinite_truncation. Unset (NaN) means
  // an infinite endpoint without a path-level hint is an error.
  double infinite_truncation = std::numeric_limits<double>::quiet_NaN();
  // Points used when scanning a path for sublevel sets and extrema.
  std::size_t grid_resolution = 1024;
};

class PhantomPolynomial {
 public:
  PhantomPolynomial() = default;
  explicit PhantomPolynomial(std::vector<Phantom> coefficients);  // ascending degree

  const std::vector<Phantom>& coefficients() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }  // -1 for the zero polynomial
  bool is_zero() const { return coeffs_.empty(); }

  std::vector<double> real_part() const;     // f_re
  std::vector<double> reduced_part() const;  // f^ (coefficient reductions)

  friend bool operator==(const PhantomPolynomial&, const PhantomPolynomial&) = default;

 private:
  std::vector<Phantom> coeffs_;
};

PhantomPolynomial operator+(const PhantomPolynomial& f, const PhantomPolynomial& g);
PhantomPolynomial operator*(const PhantomPolynomial& f, const PhantomPolynomial& g);
PhantomPolynomial operator*(const Phantom& c, const PhantomPolynomial& f);

Phantom poly_eval(const PhantomPolynomial& f, const Phantom& z);
PhantomPolynomial poly_conjugate(const PhantomPolynomial& f);
PhantomPolynomial poly_derivative(const PhantomPolynomial& f);

// A curve t -> a(t) + p*b(t). Paths are assumed free of self-intersections; this is
// not checked.
class Path {
 public:
  using Fn = std::function<double(double)>;

  // Empty derivative functions fall back to finite differences.
  Path(Fn a, Fn b, double t0, double t1, Fn a_deriv = {}, Fn b_deriv = {});

  // Parameter values where a or b is not smooth; quadrature splits there.
  Path& with_breakpoints(std::vector<double> ts);
  // Finite stand-in for an infinite endpoint, preferred over QuadratureConfig's.
  Path& with_truncation(double t);

  double t0() const { return t0_; }
  double t1() const { return t1_; }
  bool contains(double t) const { return t >= t0_ && t <= t1_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  std::optional<double> truncation() const { return truncation_; }

  Phantom point(double t) const;
  Phantom tangent(double t) const;

  // Same trace traversed backwards over the same parameter interval.
  Path reversed() const;

  // a(t) = t, b(t) = 0.
  static Path real_line(double t0, double t1);
  // a(t) = t, b(t) = shift.
  static Path shifted_line(double t0, double t1, double shift);
  // Straight segment from `from` (t = 0) to `to` (t = 1).
  static Path segment(const Phantom& from, const Phantom& to);
  // a(t) = t; the reduction a+b follows t except on [fold_begin, fold_begin + width],
  // where it sweeps that interval three times with slopes 3, -3, 3. Both t -> a(t) and
  // t -> a(t)+b(t) then carry Lebesgue measure to itself, so densities that include a
  // 1/x' factor stay normalized along this path.
  static Path zigzag_line(double t0, double t1, double fold_begin, double width);

 private:
  Fn a_, b_, da_, db_;
  double t0_, t1_;
  std::vector<double> breakpoints_;
  std::optional<double> truncation_;

  friend Path concatenate(const Path& first, const Path& second);
};

// Traverses `first` then `second`; the parameter of `second` is shifted to continue
// from first.t1(). Both domains must be finite.
Path concatenate(const Path& first, const Path& second);

using PhantomFn = std::function<Phantom(const Phantom&)>;

// Integral of f along gamma over the parameter interval [s0, s1] (s0 > s1 flips sign).
Phantom path_integral(const PhantomFn& f, const Path& gamma, double s0, double s1, const QuadratureConfig& cfg = {});
Phantom path_integral(const PhantomFn& f, const Path& gamma, const QuadratureConfig& cfg = {});

// Component-wise adaptive Gauss-Legendre integral of g over [lo, hi].
Phantom integrate(const std::function<Phantom(double)>& g, double lo, double hi, const QuadratureConfig& cfg = {},
                  std::span<const double> breakpoints = {});

// Finite parameter interval actually integrated for gamma's domain.
std::pair<double, double> effective_domain(const Path& gamma, const QuadratureConfig& cfg);

}  // namespace phantom

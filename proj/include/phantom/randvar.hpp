#pragma once

// Discrete and path-based continuous phantom random variables and their statistics.
// Statistics are computed in realization form: the real side uses real terms of values
// and probabilities, the reduced side uses their reductions.

#include <functional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "phantom/calculus.hpp"
#include "phantom/measure.hpp"
#include "phantom/phantom.hpp"

namespace phantom {

enum class Sentinel { MinusInfinity, PlusInfinity };
using CdfArg = std::variant<Phantom, Sentinel>;

struct Atom {
  Phantom value;
  Phantom prob;
};

class DiscretePRV {
 public:
  // Probabilities plus the declared truncation residual must sum to (1,0).
  explicit DiscretePRV(std::vector<Atom> support, MeasureMode mode = MeasureMode::Strict,
                       Phantom truncation_residual = {});

  const std::vector<Atom>& support() const { return support_; }
  MeasureMode mode() const { return mode_; }
  // Probability mass cut off by a finite support (zero for finite families).
  Phantom truncation_residual() const { return residual_; }

 private:
  std::vector<Atom> support_;
  MeasureMode mode_;
  Phantom residual_;
};

struct JointAtom {
  Phantom x;
  Phantom y;
  Phantom prob;
};

class JointDiscretePRV {
 public:
  explicit JointDiscretePRV(std::vector<JointAtom> support, MeasureMode mode = MeasureMode::Strict);
  static JointDiscretePRV independent_product(const DiscretePRV& x, const DiscretePRV& y);

  const std::vector<JointAtom>& support() const { return support_; }
  MeasureMode mode() const { return mode_; }

 private:
  std::vector<JointAtom> support_;
  MeasureMode mode_;
};

class ContinuousPRV {
 public:
  // f_X evaluated at a path point; the tangent is passed for densities carrying a 1/x' factor.
  using Density = std::function<Phantom(const Phantom& point, const Phantom& tangent)>;

  // Checks that the realized density is nonnegative on the grid and integrates to (1,0)
  // within kContinuousNormalization; throws BadParameter otherwise.
  ContinuousPRV(Path path, Density density, QuadratureConfig cfg = {});

  const Path& path() const { return path_; }
  const QuadratureConfig& quadrature() const { return cfg_; }
  // f~(t) = f_X(gamma(t)) * gamma'(t).
  Phantom density_along(double t) const;
  double lower() const { return lo_; }
  double upper() const { return hi_; }
  const std::vector<double>& grid() const { return grid_t_; }
  // Whether ord is monotone (either direction) along the path, judged on the grid.
  bool monotone_under(const OrderKind& ord) const;
  bool lex_monotone() const { return lex_monotone_; }

 private:
  Path path_;
  Density density_;
  QuadratureConfig cfg_;
  double lo_ = 0.0, hi_ = 0.0;
  std::vector<double> grid_t_;
  std::vector<Phantom> grid_x_;
  bool lex_monotone_ = false;

  friend std::vector<std::pair<double, double>> sublevel_intervals(const ContinuousPRV&,
                                                                   const std::function<bool(const Phantom&)>&);
};

inline constexpr double kContinuousNormalization = 1e-6;

// Parameter intervals where pred holds, boundaries refined by bisection between grid points.
std::vector<std::pair<double, double>> sublevel_intervals(const ContinuousPRV& x,
                                                          const std::function<bool(const Phantom&)>& pred);

Phantom pmf(const DiscretePRV& x, const Phantom& z);
Phantom cdf_discrete(const DiscretePRV& x, const CdfArg& z, const OrderKind& ord = OrderKind::lex());
Phantom cdf_continuous(const ContinuousPRV& x, const CdfArg& z, const OrderKind& ord = OrderKind::lex());
Phantom xi_sup(const ContinuousPRV& x, const CdfArg& z, const OrderKind& ord = OrderKind::lex());
Phantom xi_inf(const ContinuousPRV& x, const CdfArg& z, const OrderKind& ord = OrderKind::lex());

Phantom moment(const DiscretePRV& x, int n);
Phantom moment(const ContinuousPRV& x, int n);
Phantom variance(const DiscretePRV& x);
Phantom variance(const ContinuousPRV& x);
Phantom std_dev(const DiscretePRV& x);
Phantom std_dev(const ContinuousPRV& x);
Phantom expect_fn(const DiscretePRV& x, const PhantomFn& g);
Phantom expect_fn(const ContinuousPRV& x, const PhantomFn& g);

Phantom mgf(const DiscretePRV& x, const Phantom& zeta);
Phantom mgf(const ContinuousPRV& x, const Phantom& zeta);
Phantom mgf_linear(const DiscretePRV& x, const Phantom& u, const Phantom& v, const Phantom& zeta);
Phantom mgf_linear(const ContinuousPRV& x, const Phantom& u, const Phantom& v, const Phantom& zeta);
// Caller asserts independence.
Phantom mgf_sum(std::span<const DiscretePRV> xs, const Phantom& zeta);

std::pair<DiscretePRV, DiscretePRV> marginals(const JointDiscretePRV& j);
bool joint_independent(const JointDiscretePRV& j);
Phantom covariance(const JointDiscretePRV& j);
Phantom correlation(const JointDiscretePRV& j);

}  // namespace phantom

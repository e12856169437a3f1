#include "phantom/randvar.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace phantom {

namespace {

constexpr double kTiny = 1e-12;

// Probabilities from closed-form families can be far below the classification tolerance
// while still nonzero, so only exact zeros count here.
bool exact_zero_divisor(const Phantom& p) { return !(p == Phantom{}) && (p.re == 0.0 || p.reduction() == 0.0); }

void check_probabilities(const std::vector<Phantom>& probs, MeasureMode mode, const Phantom& residual,
                         const char* what) {
  Phantom total = residual;
  for (const Phantom& p : probs) {
    if (!is_finite(p) || !in_probability_zone(p)) {
      throw Error(ErrorKind::BadParameter, std::string(what) + ": probability outside the probability zone");
    }
    if (mode == MeasureMode::Strict && exact_zero_divisor(p)) {
      throw Error(ErrorKind::BadParameter, std::string(what) + ": zero-divisor probability in strict mode");
    }
    total += p;
  }
  if (!in_probability_zone(residual)) throw Error(ErrorKind::BadParameter, std::string(what) + ": bad residual");
  if (std::abs(total.re - 1.0) > kMeasureTolerance || std::abs(total.ph) > kMeasureTolerance) {
    throw Error(ErrorKind::BadParameter, std::string(what) + ": probabilities do not sum to (1, 0)");
  }
}

bool lex_less(const Phantom& x, const Phantom& y) { return compare(x, y) < 0; }

// Realization-form expectation of (h(a), h(red)) weighted by (p_re, p^).
template <class H>
Phantom realized_sum(const DiscretePRV& x, H h) {
  double re = 0.0, red = 0.0;
  for (const Atom& at : x.support()) {
    re += at.prob.re * h(at.value.re);
    red += at.prob.reduction() * h(at.value.reduction());
  }
  return Phantom::from_components(re, red);
}

// Clears rounding-level negatives before a square root.
Phantom clamp_nonnegative(Phantom v, double scale) {
  double re = v.re, red = v.reduction();
  const double slack = kTiny * std::max(1.0, scale);
  if (re < 0.0 && re > -slack) re = 0.0;
  if (red < 0.0 && red > -slack) red = 0.0;
  return Phantom::from_components(re, red);
}

}  // namespace

// ------------------------------------------------------------------ discrete

DiscretePRV::DiscretePRV(std::vector<Atom> support, MeasureMode mode, Phantom truncation_residual)
    : support_(std::move(support)), mode_(mode), residual_(truncation_residual) {
  if (support_.empty()) throw Error(ErrorKind::BadParameter, "discrete variable needs a nonempty support");
  std::vector<Phantom> probs, values;
  for (const Atom& a : support_) {
    if (!is_finite(a.value)) throw Error(ErrorKind::BadParameter, "support value is not finite");
    probs.push_back(a.prob);
    values.push_back(a.value);
  }
  check_probabilities(probs, mode_, residual_, "discrete variable");
  std::sort(values.begin(), values.end(), lex_less);
  if (std::adjacent_find(values.begin(), values.end()) != values.end()) {
    throw Error(ErrorKind::BadParameter, "support values must be distinct");
  }
}

Phantom pmf(const DiscretePRV& x, const Phantom& z) {
  for (const Atom& a : x.support())
    if (a.value == z) return a.prob;
  return {};
}

Phantom cdf_discrete(const DiscretePRV& x, const CdfArg& z, const OrderKind& ord) {
  if (!ord.probability_grade()) throw Error(ErrorKind::BadOrder, "cdf needs the lexicographic or an alpha order");
  if (const auto* s = std::get_if<Sentinel>(&z)) return *s == Sentinel::PlusInfinity ? Phantom{1.0} : Phantom{};
  const Phantom& at = std::get<Phantom>(z);
  Phantom total;
  for (const Atom& a : x.support())
    if (compare(a.value, at, ord) <= 0) total += a.prob;
  return total;
}

Phantom moment(const DiscretePRV& x, int n) {
  if (n < 1) throw Error(ErrorKind::BadParameter, "moment order must be positive");
  return realized_sum(x, [n](double v) { return std::pow(v, n); });
}

Phantom variance(const DiscretePRV& x) {
  const Phantom mu = moment(x, 1);
  const double m_re = mu.re, m_red = mu.reduction();
  double re = 0.0, red = 0.0;
  for (const Atom& at : x.support()) {
    const double d = at.value.re - m_re;
    const double e = at.value.reduction() - m_red;
    re += at.prob.re * d * d;
    red += at.prob.reduction() * e * e;
  }
  return Phantom::from_components(re, red);
}

Phantom std_dev(const DiscretePRV& x) {
  const Phantom v = variance(x);
  return sqrt(clamp_nonnegative(v, abs(moment(x, 2))));
}

Phantom expect_fn(const DiscretePRV& x, const PhantomFn& g) {
  Phantom total;
  for (const Atom& a : x.support()) total += g(a.value) * a.prob;
  return total;
}

Phantom mgf(const DiscretePRV& x, const Phantom& zeta) {
  // E[e^0] is the total mass, which is (1,0) by construction.
  if (zeta == Phantom{}) return {1.0, 0.0};
  const double z_re = zeta.re, z_red = zeta.reduction();
  double re = 0.0, red = 0.0;
  for (const Atom& at : x.support()) {
    re += at.prob.re * std::exp(z_re * at.value.re);
    red += at.prob.reduction() * std::exp(z_red * at.value.reduction());
  }
  return Phantom::from_components(re, red);
}

Phantom mgf_linear(const DiscretePRV& x, const Phantom& u, const Phantom& v, const Phantom& zeta) {
  return exp(v * zeta) * mgf(x, u * zeta);
}

Phantom mgf_sum(std::span<const DiscretePRV> xs, const Phantom& zeta) {
  Phantom prod{1.0};
  for (const DiscretePRV& x : xs) prod *= mgf(x, zeta);
  return prod;
}

// --------------------------------------------------------------------- joint

JointDiscretePRV::JointDiscretePRV(std::vector<JointAtom> support, MeasureMode mode)
    : support_(std::move(support)), mode_(mode) {
  if (support_.empty()) throw Error(ErrorKind::BadParameter, "joint variable needs a nonempty support");
  std::vector<Phantom> probs;
  std::vector<std::pair<Phantom, Phantom>> keys;
  for (const JointAtom& a : support_) {
    if (!is_finite(a.x) || !is_finite(a.y)) throw Error(ErrorKind::BadParameter, "support value is not finite");
    probs.push_back(a.prob);
    keys.emplace_back(a.x, a.y);
  }
  check_probabilities(probs, mode_, {}, "joint variable");
  std::sort(keys.begin(), keys.end(), [](const auto& p, const auto& q) {
    const auto c = compare(p.first, q.first);
    return c != 0 ? c < 0 : lex_less(p.second, q.second);
  });
  if (std::adjacent_find(keys.begin(), keys.end()) != keys.end()) {
    throw Error(ErrorKind::BadParameter, "joint support pairs must be distinct");
  }
}

JointDiscretePRV JointDiscretePRV::independent_product(const DiscretePRV& x, const DiscretePRV& y) {
  std::vector<JointAtom> s;
  for (const Atom& a : x.support())
    for (const Atom& b : y.support()) s.push_back({a.value, b.value, a.prob * b.prob});
  const bool strict = x.mode() == MeasureMode::Strict && y.mode() == MeasureMode::Strict;
  return JointDiscretePRV(std::move(s), strict ? MeasureMode::Strict : MeasureMode::Lenient);
}

namespace {

std::vector<Atom> collapse(const std::vector<std::pair<Phantom, Phantom>>& pairs) {
  std::vector<Atom> out;
  for (const auto& [v, p] : pairs) {
    auto it = std::find_if(out.begin(), out.end(), [&](const Atom& a) { return a.value == v; });
    if (it == out.end()) {
      out.push_back({v, p});
    } else {
      it->prob += p;
    }
  }
  return out;
}

}  // namespace

std::pair<DiscretePRV, DiscretePRV> marginals(const JointDiscretePRV& j) {
  std::vector<std::pair<Phantom, Phantom>> xs, ys;
  for (const JointAtom& a : j.support()) {
    xs.emplace_back(a.x, a.prob);
    ys.emplace_back(a.y, a.prob);
  }
  return {DiscretePRV(collapse(xs), j.mode()), DiscretePRV(collapse(ys), j.mode())};
}

bool joint_independent(const JointDiscretePRV& j) {
  const auto [mx, my] = marginals(j);
  for (const Atom& a : mx.support()) {
    for (const Atom& b : my.support()) {
      Phantom joint;
      for (const JointAtom& e : j.support())
        if (e.x == a.value && e.y == b.value) joint = e.prob;
      if (!approx_equal(joint, a.prob * b.prob, kProbabilityEquality)) return false;
    }
  }
  return true;
}

namespace {

struct JointRealized {
  double mx_re = 0, mx_red = 0, my_re = 0, my_red = 0;
  double vx_re = 0, vx_red = 0, vy_re = 0, vy_red = 0;
  double c_re = 0, c_red = 0;
};

JointRealized realize(const JointDiscretePRV& j) {
  JointRealized r;
  for (const JointAtom& a : j.support()) {
    r.mx_re += a.prob.re * a.x.re;
    r.my_re += a.prob.re * a.y.re;
    r.mx_red += a.prob.reduction() * a.x.reduction();
    r.my_red += a.prob.reduction() * a.y.reduction();
  }
  for (const JointAtom& a : j.support()) {
    const double dx = a.x.re - r.mx_re, dy = a.y.re - r.my_re;
    const double ex = a.x.reduction() - r.mx_red, ey = a.y.reduction() - r.my_red;
    r.vx_re += a.prob.re * dx * dx;
    r.vy_re += a.prob.re * dy * dy;
    r.c_re += a.prob.re * dx * dy;
    r.vx_red += a.prob.reduction() * ex * ex;
    r.vy_red += a.prob.reduction() * ey * ey;
    r.c_red += a.prob.reduction() * ex * ey;
  }
  return r;
}

}  // namespace

Phantom covariance(const JointDiscretePRV& j) {
  const JointRealized r = realize(j);
  return Phantom::from_components(r.c_re, r.c_red);
}

Phantom correlation(const JointDiscretePRV& j) {
  const JointRealized r = realize(j);
  if (r.vx_re <= kTiny || r.vy_re <= kTiny || r.vx_red <= kTiny || r.vy_red <= kTiny) {
    throw Error(ErrorKind::DegenerateVariance, "a component variance vanishes");
  }
  const double rho_re = std::clamp(r.c_re / std::sqrt(r.vx_re * r.vy_re), -1.0, 1.0);
  const double rho_red = std::clamp(r.c_red / std::sqrt(r.vx_red * r.vy_red), -1.0, 1.0);
  return Phantom::from_components(rho_re, rho_red);
}

// ---------------------------------------------------------------- continuous

ContinuousPRV::ContinuousPRV(Path path, Density density, QuadratureConfig cfg)
    : path_(std::move(path)), density_(std::move(density)), cfg_(cfg) {
  if (!density_) throw Error(ErrorKind::BadParameter, "density must be callable");
  std::tie(lo_, hi_) = effective_domain(path_, cfg_);
  if (!(hi_ > lo_)) throw Error(ErrorKind::BadParameter, "path domain is empty");
  const std::size_t n = std::max<std::size_t>(cfg_.grid_resolution, 2);
  grid_t_.resize(n + 1);
  grid_x_.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    grid_t_[i] = i == n ? hi_ : lo_ + (hi_ - lo_) * static_cast<double>(i) / static_cast<double>(n);
    grid_x_[i] = path_.point(grid_t_[i]);
  }
  for (std::size_t i = 1; i < n; ++i) {
    const Phantom f = density_along(grid_t_[i]);
    if (!is_finite(f) || f.re < -kTiny || f.reduction() < -kTiny) {
      throw Error(ErrorKind::BadParameter, "density is negative or not finite at t = " + std::to_string(grid_t_[i]));
    }
  }
  lex_monotone_ = monotone_under(OrderKind::lex());
  const Phantom mass = integrate([this](double t) { return density_along(t); }, lo_, hi_, cfg_, path_.breakpoints());
  if (!approx_equal(mass, Phantom{1.0}, kContinuousNormalization)) {
    throw Error(ErrorKind::BadParameter, "density integrates to (" + std::to_string(mass.re) + ", " +
                                             std::to_string(mass.ph) + ") along the path, expected (1, 0)");
  }
}

Phantom ContinuousPRV::density_along(double t) const {
  const Phantom x = path_.point(t);
  const Phantom d = path_.tangent(t);
  return density_(x, d) * d;
}

bool ContinuousPRV::monotone_under(const OrderKind& ord) const {
  bool up = true, down = true;
  for (std::size_t i = 0; i + 1 < grid_x_.size(); ++i) {
    const auto c = compare(grid_x_[i], grid_x_[i + 1], ord);
    if (c > 0) up = false;
    if (c < 0) down = false;
  }
  return up || down;
}

std::vector<std::pair<double, double>> sublevel_intervals(const ContinuousPRV& x,
                                                          const std::function<bool(const Phantom&)>& pred) {
  const auto& ts = x.grid_t_;
  std::vector<char> inside(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) inside[i] = pred(x.grid_x_[i]) ? 1 : 0;

  // Boundary between a and b where pred switches from value `at_a`.
  auto boundary = [&](double a, double b, bool at_a) {
    for (int it = 0; it < 200; ++it) {
      const double m = 0.5 * (a + b);
      if (!(m > a && m < b)) break;
      if (pred(x.path().point(m)) == at_a) {
        a = m;
      } else {
        b = m;
      }
    }
    return at_a ? a : b;
  };

  std::vector<std::pair<double, double>> out;
  double start = inside[0] ? ts[0] : 0.0;
  bool open = inside[0];
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    if (inside[i] == inside[i + 1]) continue;
    const double t = boundary(ts[i], ts[i + 1], inside[i]);
    if (open) {
      out.emplace_back(start, t);
      open = false;
    } else {
      start = t;
      open = true;
    }
  }
  if (open) out.emplace_back(start, ts.back());
  return out;
}

Phantom cdf_continuous(const ContinuousPRV& x, const CdfArg& z, const OrderKind& ord) {
  if (!ord.probability_grade()) throw Error(ErrorKind::BadOrder, "cdf needs the lexicographic or an alpha order");
  if (const auto* s = std::get_if<Sentinel>(&z)) return *s == Sentinel::PlusInfinity ? Phantom{1.0} : Phantom{};
  const Phantom at = std::get<Phantom>(z);
  const auto intervals = sublevel_intervals(x, [&](const Phantom& p) { return compare(p, at, ord) <= 0; });
  Phantom total;
  for (const auto& [a, b] : intervals) {
    if (b > a) {
      total += integrate([&x](double t) { return x.density_along(t); }, a, b, x.quadrature(), x.path().breakpoints());
    }
  }
  return total;
}

namespace {

// Extremal path point satisfying pred: ord-maximal then t-maximal (want_max), or
// ord-minimal then t-minimal.
Phantom extremal(const ContinuousPRV& x, const std::function<bool(const Phantom&)>& pred, const OrderKind& ord,
                 bool want_max) {
  const auto intervals = sublevel_intervals(x, pred);
  if (intervals.empty()) throw Error(ErrorKind::EmptyRange, "no path point on the requested side of z");
  std::vector<double> cands;
  for (const auto& [a, b] : intervals) {
    cands.push_back(a);
    cands.push_back(b);
    for (double t : x.grid())
      if (t > a && t < b) cands.push_back(t);
  }
  double best_t = cands.front();
  Phantom best = x.path().point(best_t);
  for (double t : cands) {
    const Phantom p = x.path().point(t);
    const auto c = compare(p, best, ord);
    const bool better = want_max ? (c > 0 || (c == 0 && t > best_t)) : (c < 0 || (c == 0 && t < best_t));
    if (better) {
      best = p;
      best_t = t;
    }
  }
  return best;
}

}  // namespace

Phantom xi_sup(const ContinuousPRV& x, const CdfArg& z, const OrderKind& ord) {
  if (const auto* s = std::get_if<Sentinel>(&z)) {
    if (*s == Sentinel::MinusInfinity) throw Error(ErrorKind::EmptyRange, "nothing lies below -infinity");
    return extremal(x, [](const Phantom&) { return true; }, ord, true);
  }
  const Phantom at = std::get<Phantom>(z);
  return extremal(x, [&](const Phantom& p) { return compare(p, at, ord) <= 0; }, ord, true);
}

Phantom xi_inf(const ContinuousPRV& x, const CdfArg& z, const OrderKind& ord) {
  if (const auto* s = std::get_if<Sentinel>(&z)) {
    if (*s == Sentinel::PlusInfinity) throw Error(ErrorKind::EmptyRange, "nothing lies above +infinity");
    return extremal(x, [](const Phantom&) { return true; }, ord, false);
  }
  const Phantom at = std::get<Phantom>(z);
  return extremal(x, [&](const Phantom& p) { return compare(p, at, ord) >= 0; }, ord, false);
}

namespace {

// Integrates (h(a(t)) f~_re(t), h(red(t)) f~^(t)) and returns it in realization form.
template <class H>
Phantom realized_integral(const ContinuousPRV& x, H h) {
  auto g = [&](double t) {
    const Phantom p = x.path().point(t);
    const Phantom f = x.density_along(t);
    return Phantom{h(p.re) * f.re, h(p.reduction()) * f.reduction()};
  };
  const Phantom r = integrate(g, x.lower(), x.upper(), x.quadrature(), x.path().breakpoints());
  return Phantom::from_components(r.re, r.ph);
}

}  // namespace

Phantom moment(const ContinuousPRV& x, int n) {
  if (n < 1) throw Error(ErrorKind::BadParameter, "moment order must be positive");
  return realized_integral(x, [n](double v) { return std::pow(v, n); });
}

Phantom variance(const ContinuousPRV& x) {
  const Phantom mu = moment(x, 1);
  auto g = [&](double t) {
    const Phantom p = x.path().point(t);
    const Phantom f = x.density_along(t);
    const double d = p.re - mu.re, e = p.reduction() - mu.reduction();
    return Phantom{d * d * f.re, e * e * f.reduction()};
  };
  const Phantom r = integrate(g, x.lower(), x.upper(), x.quadrature(), x.path().breakpoints());
  return Phantom::from_components(r.re, r.ph);
}

Phantom std_dev(const ContinuousPRV& x) {
  const Phantom v = variance(x);
  return sqrt(clamp_nonnegative(v, abs(v)));
}

Phantom expect_fn(const ContinuousPRV& x, const PhantomFn& g) {
  auto h = [&](double t) { return g(x.path().point(t)) * x.density_along(t); };
  return integrate(h, x.lower(), x.upper(), x.quadrature(), x.path().breakpoints());
}

Phantom mgf(const ContinuousPRV& x, const Phantom& zeta) {
  if (zeta == Phantom{}) return {1.0, 0.0};
  auto g = [&](double t) {
    const Phantom p = x.path().point(t);
    const Phantom f = x.density_along(t);
    return Phantom{std::exp(zeta.re * p.re) * f.re, std::exp(zeta.reduction() * p.reduction()) * f.reduction()};
  };
  const Phantom r = integrate(g, x.lower(), x.upper(), x.quadrature(), x.path().breakpoints());
  return Phantom::from_components(r.re, r.ph);
}

Phantom mgf_linear(const ContinuousPRV& x, const Phantom& u, const Phantom& v, const Phantom& zeta) {
  return exp(v * zeta) * mgf(x, u * zeta);
}

}  // namespace phantom

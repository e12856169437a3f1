#include "phantom/calculus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>
#include <utility>

namespace phantom {

// ---------------------------------------------------------------- polynomials

namespace {

void strip(std::vector<Phantom>& c) {
  while (!c.empty() && c.back() == Phantom{}) c.pop_back();
}

double horner(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

}  // namespace

PhantomPolynomial::PhantomPolynomial(std::vector<Phantom> coefficients) : coeffs_(std::move(coefficients)) {
  strip(coeffs_);
}

std::vector<double> PhantomPolynomial::real_part() const {
  std::vector<double> out;
  out.reserve(coeffs_.size());
  for (const Phantom& c : coeffs_) out.push_back(c.re);
  return out;
}

std::vector<double> PhantomPolynomial::reduced_part() const {
  std::vector<double> out;
  out.reserve(coeffs_.size());
  for (const Phantom& c : coeffs_) out.push_back(c.reduction());
  return out;
}

PhantomPolynomial operator+(const PhantomPolynomial& f, const PhantomPolynomial& g) {
  std::vector<Phantom> c(std::max(f.coefficients().size(), g.coefficients().size()));
  for (std::size_t i = 0; i < f.coefficients().size(); ++i) c[i] += f.coefficients()[i];
  for (std::size_t i = 0; i < g.coefficients().size(); ++i) c[i] += g.coefficients()[i];
  return PhantomPolynomial(std::move(c));
}

PhantomPolynomial operator*(const PhantomPolynomial& f, const PhantomPolynomial& g) {
  if (f.is_zero() || g.is_zero()) return {};
  const auto& fc = f.coefficients();
  const auto& gc = g.coefficients();
  std::vector<Phantom> c(fc.size() + gc.size() - 1);
  for (std::size_t i = 0; i < fc.size(); ++i)
    for (std::size_t j = 0; j < gc.size(); ++j) c[i + j] += fc[i] * gc[j];
  return PhantomPolynomial(std::move(c));
}

PhantomPolynomial operator*(const Phantom& s, const PhantomPolynomial& f) {
  std::vector<Phantom> c = f.coefficients();
  for (Phantom& x : c) x = s * x;
  return PhantomPolynomial(std::move(c));
}

Phantom poly_eval(const PhantomPolynomial& f, const Phantom& z) {
  const double re = horner(f.real_part(), z.re);
  return Phantom::from_components(re, horner(f.reduced_part(), z.reduction()));
}

PhantomPolynomial poly_conjugate(const PhantomPolynomial& f) {
  std::vector<Phantom> c = f.coefficients();
  for (Phantom& x : c) x = conjugate(x);
  return PhantomPolynomial(std::move(c));
}

PhantomPolynomial poly_derivative(const PhantomPolynomial& f) {
  const auto& fc = f.coefficients();
  if (fc.size() <= 1) return {};
  std::vector<Phantom> c(fc.size() - 1);
  for (std::size_t i = 1; i < fc.size(); ++i) c[i - 1] = static_cast<double>(i) * fc[i];
  return PhantomPolynomial(std::move(c));
}

// ---------------------------------------------------------------------- paths

Path::Path(Fn a, Fn b, double t0, double t1, Fn a_deriv, Fn b_deriv)
    : a_(std::move(a)), b_(std::move(b)), da_(std::move(a_deriv)), db_(std::move(b_deriv)), t0_(t0), t1_(t1) {
  if (!a_ || !b_) throw Error(ErrorKind::BadParameter, "path coordinates must be callable");
  if (std::isnan(t0) || std::isnan(t1) || !(t0 <= t1)) throw Error(ErrorKind::BadParameter, "path domain needs t0 <= t1");
}

Path& Path::with_breakpoints(std::vector<double> ts) {
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  std::erase_if(ts, [&](double t) { return !(t > t0_ && t < t1_); });
  breakpoints_ = std::move(ts);
  return *this;
}

Path& Path::with_truncation(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorKind::BadParameter, "truncation must be finite and > 0");
  truncation_ = t;
  return *this;
}

Phantom Path::point(double t) const {
  if (!contains(t)) throw Error(ErrorKind::OutOfDomain, "t = " + std::to_string(t) + " outside path domain");
  return {a_(t), b_(t)};
}

Phantom Path::tangent(double t) const {
  if (!contains(t)) throw Error(ErrorKind::OutOfDomain, "t = " + std::to_string(t) + " outside path domain");
  auto diff = [&](const Fn& f) {
    const double h = 1e-6 * std::max(1.0, std::abs(t));
    if (contains(t - h) && contains(t + h)) return (f(t + h) - f(t - h)) / (2 * h);
    // One-sided second-order stencil at the domain edge.
    const double s = contains(t + 2 * h) ? h : -h;
    return (-3 * f(t) + 4 * f(t + s) - f(t + 2 * s)) / (2 * s);
  };
  const double da = da_ ? da_(t) : diff(a_);
  const double db = db_ ? db_(t) : diff(b_);
  return {da, db};
}

Path Path::reversed() const {
  if (!std::isfinite(t0_) || !std::isfinite(t1_)) throw Error(ErrorKind::BadParameter, "cannot reverse an infinite path");
  const double s = t0_ + t1_;
  Fn a = [f = a_, s](double t) { return f(s - t); };
  Fn b = [f = b_, s](double t) { return f(s - t); };
  Fn da, db;
  if (da_) da = [f = da_, s](double t) { return -f(s - t); };
  if (db_) db = [f = db_, s](double t) { return -f(s - t); };
  Path out(std::move(a), std::move(b), t0_, t1_, std::move(da), std::move(db));
  std::vector<double> bp;
  for (double t : breakpoints_) bp.push_back(s - t);
  out.with_breakpoints(std::move(bp));
  return out;
}

Path Path::real_line(double t0, double t1) {
  return Path([](double t) { return t; }, [](double) { return 0.0; }, t0, t1, [](double) { return 1.0; },
              [](double) { return 0.0; });
}

Path Path::shifted_line(double t0, double t1, double shift) {
  return Path([](double t) { return t; }, [shift](double) { return shift; }, t0, t1, [](double) { return 1.0; },
              [](double) { return 0.0; });
}

Path Path::segment(const Phantom& from, const Phantom& to) {
  const Phantom d = to - from;
  return Path([from, d](double t) { return from.re + t * d.re; }, [from, d](double t) { return from.ph + t * d.ph; },
              0.0, 1.0, [d](double) { return d.re; }, [d](double) { return d.ph; });
}

Path Path::zigzag_line(double t0, double t1, double fold_begin, double width) {
  if (!(width > 0.0) || fold_begin < t0 || fold_begin + width > t1) {
    throw Error(ErrorKind::BadParameter, "zigzag fold must lie inside the domain");
  }
  const double third = width / 3.0;
  const double p1 = fold_begin + third;
  const double p2 = fold_begin + 2 * third;
  const double end = fold_begin + width;
  auto reduced = [=](double t) {
    if (t <= fold_begin || t >= end) return t;
    if (t <= p1) return fold_begin + 3 * (t - fold_begin);
    if (t <= p2) return end - 3 * (t - p1);
    return fold_begin + 3 * (t - p2);
  };
  auto reduced_slope = [=](double t) {
    if (t < fold_begin || t >= end) return 1.0;
    if (t < p1) return 3.0;
    if (t < p2) return -3.0;
    return 3.0;
  };
  Path out([](double t) { return t; }, [reduced](double t) { return reduced(t) - t; }, t0, t1,
           [](double) { return 1.0; }, [reduced_slope](double t) { return reduced_slope(t) - 1.0; });
  out.with_breakpoints({fold_begin, p1, p2, end});
  return out;
}

Path concatenate(const Path& first, const Path& second) {
  if (!std::isfinite(first.t1_) || !std::isfinite(second.t0_) || !std::isfinite(second.t1_) ||
      !std::isfinite(first.t0_)) {
    throw Error(ErrorKind::BadParameter, "concatenation needs finite domains");
  }
  const double split = first.t1_;
  const double shift = second.t0_ - split;
  auto pick = [split, shift](const Path::Fn& f, const Path::Fn& g) -> Path::Fn {
    return [=](double t) { return t <= split ? f(t) : g(t + shift); };
  };
  Path::Fn da, db;
  auto tangent_part = [&](bool real) -> Path::Fn {
    return [first, second, split, shift, real](double t) {
      const Phantom d = t <= split ? first.tangent(t) : second.tangent(t + shift);
      return real ? d.re : d.ph;
    };
  };
  da = tangent_part(true);
  db = tangent_part(false);
  Path out(pick(first.a_, second.a_), pick(first.b_, second.b_), first.t0_, split + (second.t1_ - second.t0_),
           std::move(da), std::move(db));
  std::vector<double> bp = first.breakpoints_;
  bp.push_back(split);
  for (double t : second.breakpoints_) bp.push_back(t - shift);
  out.with_breakpoints(std::move(bp));
  return out;
}

// ----------------------------------------------------------------- quadrature

namespace {

constexpr int kNodes = 15;

struct GaussRule {
  std::array<double, kNodes> x{};
  std::array<double, kNodes> w{};
};

// Nodes and weights of the 15-point Gauss-Legendre rule on [-1, 1] by Newton iteration.
GaussRule make_rule() {
  GaussRule r;
  for (int i = 0; i < kNodes; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (kNodes + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= kNodes; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = kNodes * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.x[i] = x;
    r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

const GaussRule& rule() {
  static const GaussRule r = make_rule();
  return r;
}

Phantom gauss(const std::function<Phantom(double)>& g, double lo, double hi) {
  const GaussRule& r = rule();
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  Phantom acc;
  for (int i = 0; i < kNodes; ++i) acc += r.w[i] * g(mid + half * r.x[i]);
  return half * acc;
}

struct Panel {
  double lo, hi;
  Phantom value;
  double err_re, err_ph;
  double key;
  bool operator<(const Panel& o) const { return key < o.key; }
};

Panel make_panel(const std::function<Phantom(double)>& g, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const Phantom coarse = gauss(g, lo, hi);
  const Phantom fine = gauss(g, lo, mid) + gauss(g, mid, hi);
  Panel p{lo, hi, fine, std::abs(fine.re - coarse.re), std::abs(fine.ph - coarse.ph), 0.0};
  if (!is_finite(fine)) throw Error(ErrorKind::QuadratureFailure, "integrand is not finite");
  // Panels too narrow to split are treated as resolved.
  if (!(mid > lo && mid < hi)) p.err_re = p.err_ph = 0.0;
  return p;
}

double resolve_endpoint(double t, std::optional<double> hint, const QuadratureConfig& cfg) {
  if (std::isfinite(t)) return t;
  double trunc = hint.value_or(cfg.infinite_truncation);
  if (!(trunc > 0.0) || !std::isfinite(trunc)) {
    throw Error(ErrorKind::QuadratureFailure, "infinite endpoint without a truncation");
  }
  return t > 0 ? trunc : -trunc;
}

}  // namespace

Phantom integrate(const std::function<Phantom(double)>& g, double lo, double hi, const QuadratureConfig& cfg,
                  std::span<const double> breakpoints) {
  if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0) || cfg.max_subdivisions < 1) {
    throw Error(ErrorKind::BadParameter, "quadrature tolerances must be positive");
  }
  if (lo > hi) return -integrate(g, hi, lo, cfg, breakpoints);
  lo = resolve_endpoint(lo, std::nullopt, cfg);
  hi = resolve_endpoint(hi, std::nullopt, cfg);
  if (lo >= hi) return {};

  std::vector<double> cuts{lo};
  for (double b : breakpoints)
    if (b > lo && b < hi) cuts.push_back(b);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());

  std::priority_queue<Panel> heap;
  std::vector<Panel> done;
  Phantom total;
  double err_re = 0.0, err_ph = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    Panel p = make_panel(g, cuts[i], cuts[i + 1]);
    total += p.value;
    err_re += p.err_re;
    err_ph += p.err_ph;
    heap.push(p);
  }

  auto scale = [&](double v) { return std::max(cfg.abs_tol, cfg.rel_tol * std::abs(v)); };
  auto rekey = [&](Panel& p) { p.key = p.err_re / scale(total.re) + p.err_ph / scale(total.ph); };
  {
    std::vector<Panel> tmp;
    while (!heap.empty()) {
      tmp.push_back(heap.top());
      heap.pop();
    }
    for (Panel& p : tmp) {
      rekey(p);
      heap.push(p);
    }
  }

  std::size_t subdivisions = 0;
  while (err_re > scale(total.re) || err_ph > scale(total.ph)) {
    if (heap.empty() || heap.top().key == 0.0) {
      throw Error(ErrorKind::QuadratureFailure, "tolerance unreachable at machine resolution");
    }
    if (++subdivisions > cfg.max_subdivisions) {
      throw Error(ErrorKind::QuadratureFailure,
                  "tolerance unmet after " + std::to_string(cfg.max_subdivisions) + " subdivisions");
    }
    Panel p = heap.top();
    heap.pop();
    const double mid = 0.5 * (p.lo + p.hi);
    Panel left = make_panel(g, p.lo, mid);
    Panel right = make_panel(g, mid, p.hi);
    total += left.value + right.value - p.value;
    err_re += left.err_re + right.err_re - p.err_re;
    err_ph += left.err_ph + right.err_ph - p.err_ph;
    rekey(left);
    rekey(right);
    heap.push(left);
    heap.push(right);
    if (subdivisions % 128 == 0) {
      // Refresh running sums to shed accumulated rounding.
      std::vector<Panel> tmp;
      total = {};
      err_re = err_ph = 0.0;
      while (!heap.empty()) {
        tmp.push_back(heap.top());
        heap.pop();
      }
      for (Panel& q : tmp) {
        total += q.value;
        err_re += q.err_re;
        err_ph += q.err_ph;
      }
      for (Panel& q : tmp) {
        rekey(q);
        heap.push(q);
      }
    }
  }

  // Final sum in ascending parameter order for reproducibility.
  std::vector<Panel> all;
  all.reserve(heap.size());
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.lo < y.lo; });
  Phantom sum;
  for (const Panel& p : all) sum += p.value;
  return sum;
}

std::pair<double, double> effective_domain(const Path& gamma, const QuadratureConfig& cfg) {
  return {resolve_endpoint(gamma.t0(), gamma.truncation(), cfg), resolve_endpoint(gamma.t1(), gamma.truncation(), cfg)};
}

Phantom path_integral(const PhantomFn& f, const Path& gamma, double s0, double s1, const QuadratureConfig& cfg) {
  if (!gamma.contains(s0) || !gamma.contains(s1)) {
    throw Error(ErrorKind::OutOfDomain, "integration interval leaves the path domain");
  }
  const auto [lo, hi] = effective_domain(gamma, cfg);
  auto clamp = [&](double s) { return std::isfinite(s) ? s : (s > 0 ? hi : lo); };
  // re: f_re a'; ph: f_re b' + f_ph (a' + b'), i.e. the ring product f * gamma'.
  auto integrand = [&](double t) {
    const Phantom fz = f(gamma.point(t));
    const Phantom d = gamma.tangent(t);
    return Phantom{fz.re * d.re, fz.re * d.ph + fz.ph * (d.re + d.ph)};
  };
  return integrate(integrand, clamp(s0), clamp(s1), cfg, gamma.breakpoints());
}

Phantom path_integral(const PhantomFn& f, const Path& gamma, const QuadratureConfig& cfg) {
  return path_integral(f, gamma, gamma.t0(), gamma.t1(), cfg);
}

}  // namespace phantom

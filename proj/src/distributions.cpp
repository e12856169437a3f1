#include "phantom/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace phantom {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::BadParameter, what);
}

void require_probability(const Phantom& p, const char* name) {
  require(is_finite(p) && in_probability_zone(p, 0.0) && !is_zero_divisor(p),
          std::string(name) + " must lie in the restricted probability zone");
}

void require_pseudo_positive(const Phantom& x, const char* name) {
  require(is_finite(x) && is_pseudo_positive(x), std::string(name) + " must be pseudo positive");
}

double binomial_coefficient(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return std::round(c);
}

double binomial_pmf(int n, int k, double p) {
  return binomial_coefficient(n, k) * std::pow(p, k) * std::pow(1.0 - p, n - k);
}

double poisson_pmf(double lambda, int k) {
  if (lambda < 600.0) {
    double term = std::exp(-lambda);
    for (int i = 1; i <= k; ++i) term *= lambda / i;
    return term;
  }
  return std::exp(-lambda + k * std::log(lambda) - std::lgamma(k + 1.0));
}

// Mass beyond k = last, summed until terms stop contributing.
double poisson_tail(double lambda, int last) {
  double term = poisson_pmf(lambda, last + 1);
  double sum = 0.0;
  for (int k = last + 1; term > 0.0 && k < last + 100000; ++k) {
    sum += term;
    if (k > lambda && term < sum * 1e-17) break;
    term *= lambda / (k + 1);
  }
  return sum;
}

// Upper bound on the Poisson tail beyond `last`, valid once last + 2 > lambda.
double poisson_tail_bound(double lambda, int last) {
  if (last + 2.0 <= lambda) return 1.0;
  return poisson_pmf(lambda, last + 1) / (1.0 - lambda / (last + 2.0));
}

// Atom weight from its two realized components. When the smaller one is below the
// resolution of the larger, storing (re, red - re) loses it; keep one ulp so a strictly
// positive pair never turns into a zero divisor.
Phantom weight(double re, double red) {
  Phantom w = Phantom::from_components(re, red);
  if (re > 0.0 && red > 0.0 && !(w.reduction() > 0.0)) w.ph = std::nextafter(-re, 0.0);
  return w;
}

DiscretePRV make_bernoulli(const Phantom& p) {
  return DiscretePRV({{Phantom{0.0}, Phantom{1.0} - p}, {Phantom{1.0}, p}});
}

DiscretePRV make_binomial(int n, const Phantom& p) {
  std::vector<Atom> s;
  for (int k = 0; k <= n; ++k) {
    s.push_back({Phantom{static_cast<double>(k)},
                 weight(binomial_pmf(n, k, p.re), binomial_pmf(n, k, p.reduction()))});
  }
  return DiscretePRV(std::move(s));
}

DiscretePRV make_geometric(const Phantom& p, int cutoff) {
  const double q_re = 1.0 - p.re, q_red = 1.0 - p.reduction();
  std::vector<Atom> s;
  double w_re = p.re, w_red = p.reduction();
  double tail_re = q_re, tail_red = q_red;  // mass beyond the current k
  for (int k = 1; k <= cutoff; ++k) {
    s.push_back({Phantom{static_cast<double>(k)}, weight(w_re, w_red)});
    if (std::max(tail_re, tail_red) < kTailCutoff) break;
    w_re *= q_re;
    w_red *= q_red;
    tail_re *= q_re;
    tail_red *= q_red;
  }
  const int last = static_cast<int>(s.size());
  const Phantom residual = Phantom::from_components(std::pow(q_re, last), std::pow(q_red, last));
  return DiscretePRV(std::move(s), MeasureMode::Strict, residual);
}

DiscretePRV make_poisson(const Phantom& lambda, int cutoff) {
  const double l_re = lambda.re, l_red = lambda.reduction();
  std::vector<Atom> s;
  int k = 0;
  for (; k < cutoff; ++k) {
    s.push_back({Phantom{static_cast<double>(k)}, weight(poisson_pmf(l_re, k), poisson_pmf(l_red, k))});
    if (std::max(poisson_tail_bound(l_re, k), poisson_tail_bound(l_red, k)) < kTailCutoff) break;
  }
  const int last = static_cast<int>(s.size()) - 1;
  const Phantom residual = Phantom::from_components(poisson_tail(l_re, last), poisson_tail(l_red, last));
  return DiscretePRV(std::move(s), MeasureMode::Strict, residual);
}

void check_pseudo_positive_path(const Path& path, const QuadratureConfig& cfg) {
  const auto [lo, hi] = effective_domain(path, cfg);
  const std::size_t n = std::max<std::size_t>(cfg.grid_resolution, 2);
  for (std::size_t i = 1; i < n; ++i) {
    const double t = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
    require(is_pseudo_positive(path.point(t)), "exponential path leaves the pseudo-positive region");
  }
}

ContinuousPRV make_exponential(const Exponential& d, const QuadratureConfig& cfg) {
  Path path = d.path ? *d.path : default_path(d);
  check_pseudo_positive_path(path, cfg);
  const Phantom lambda = d.lambda;
  auto density = [lambda](const Phantom& x, const Phantom& dx) -> Phantom {
    if (!is_pseudo_positive(x)) return {};
    return lambda * inverse(dx) * exp(-lambda * x);
  };
  return ContinuousPRV(std::move(path), density, cfg);
}

ContinuousPRV make_normal(const Normal& d, const QuadratureConfig& cfg) {
  Path path = d.path ? *d.path : default_path(d);
  const Phantom mu = d.mu;
  const Phantom sigma = d.sigma;
  const Phantom two_var = 2.0 * sigma * sigma;
  const double root_two_pi = std::sqrt(2.0 * std::numbers::pi);
  auto density = [=](const Phantom& x, const Phantom& dx) -> Phantom {
    const Phantom w = x - mu;
    return inverse(sigma * dx * root_two_pi) * exp(-(w * w) / two_var);
  };
  return ContinuousPRV(std::move(path), density, cfg);
}

}  // namespace

bool is_discrete(const DistSpec& spec) {
  return std::holds_alternative<Bernoulli>(spec) || std::holds_alternative<Binomial>(spec) ||
         std::holds_alternative<Geometric>(spec) || std::holds_alternative<Poisson>(spec);
}

void validate_spec(const DistSpec& spec) {
  std::visit(overloaded{
                 [](const Bernoulli& d) { require_probability(d.p, "p"); },
                 [](const Binomial& d) {
                   require(d.n >= 0, "n must be >= 0");
                   require_probability(d.p, "p");
                 },
                 [](const Geometric& d) {
                   require_probability(d.p, "p");
                   require(is_invertible(d.p), "p must be nonzero");
                   require(d.cutoff >= 1, "cutoff must be >= 1");
                 },
                 [](const Poisson& d) {
                   require_pseudo_positive(d.lambda, "lambda");
                   require(d.cutoff >= 1, "cutoff must be >= 1");
                 },
                 [](const Exponential& d) { require_pseudo_positive(d.lambda, "lambda"); },
                 [](const Normal& d) {
                   require(is_finite(d.mu), "mu must be finite");
                   require_pseudo_positive(d.sigma, "sigma");
                 },
                 [](const StdNormal&) {},
             },
             spec);
}

DiscretePRV build_discrete(const DistSpec& spec) {
  validate_spec(spec);
  return std::visit(overloaded{
                        [](const Bernoulli& d) { return make_bernoulli(d.p); },
                        [](const Binomial& d) { return make_binomial(d.n, d.p); },
                        [](const Geometric& d) { return make_geometric(d.p, d.cutoff); },
                        [](const Poisson& d) { return make_poisson(d.lambda, d.cutoff); },
                        [](const auto&) -> DiscretePRV {
                          throw Error(ErrorKind::BadParameter, "not a discrete distribution");
                        },
                    },
                    spec);
}

ContinuousPRV build_continuous(const DistSpec& spec, const QuadratureConfig& cfg) {
  validate_spec(spec);
  try {
    return std::visit(overloaded{
                          [&](const Exponential& d) { return make_exponential(d, cfg); },
                          [&](const Normal& d) { return make_normal(d, cfg); },
                          [&](const StdNormal& d) { return make_normal(Normal{0.0, 1.0, d.path}, cfg); },
                          [](const auto&) -> ContinuousPRV {
                            throw Error(ErrorKind::BadParameter, "not a continuous distribution");
                          },
                      },
                      spec);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotInvertible) {
      throw Error(ErrorKind::BadParameter, std::string("path tangent must be invertible: ") + e.what());
    }
    throw;
  }
}

PRV build(const DistSpec& spec, const QuadratureConfig& cfg) {
  if (is_discrete(spec)) return build_discrete(spec);
  return build_continuous(spec, cfg);
}

Path default_path(const Exponential& d) {
  require_pseudo_positive(d.lambda, "lambda");
  return Path::real_line(0.0, 40.0 / std::min(d.lambda.re, d.lambda.reduction()));
}

Path default_path(const Normal& d) {
  require_pseudo_positive(d.sigma, "sigma");
  const double lo = std::min(d.mu.re - 12 * d.sigma.re, d.mu.reduction() - 12 * d.sigma.reduction());
  const double hi = std::max(d.mu.re + 12 * d.sigma.re, d.mu.reduction() + 12 * d.sigma.reduction());
  return Path::real_line(lo, hi);
}

ClosedFormStats closed_form_stats(const DistSpec& spec) {
  validate_spec(spec);
  const Phantom one{1.0};
  return std::visit(overloaded{
                        [&](const Bernoulli& d) { return ClosedFormStats{d.p, d.p - d.p * d.p}; },
                        [&](const Binomial& d) {
                          const double n = d.n;
                          return ClosedFormStats{n * d.p, n * d.p * (one - d.p)};
                        },
                        [&](const Geometric& d) {
                          return ClosedFormStats{inverse(d.p), (one - d.p) * inverse(d.p * d.p)};
                        },
                        [&](const Poisson& d) { return ClosedFormStats{d.lambda, d.lambda}; },
                        [&](const Exponential& d) {
                          return ClosedFormStats{inverse(d.lambda), inverse(d.lambda * d.lambda)};
                        },
                        [&](const Normal& d) { return ClosedFormStats{d.mu, d.sigma * d.sigma}; },
                        [&](const StdNormal&) { return ClosedFormStats{Phantom{0.0}, one}; },
                    },
                    spec);
}

Standardization standardize(const Normal& d) {
  if (!is_invertible(d.sigma)) throw Error(ErrorKind::DegenerateVariance, "sigma is zero or a zero divisor");
  const Phantom s = inverse(d.sigma);
  return {s, -d.mu * s};
}

Phantom phi(const CdfArg& z, const std::optional<Path>& path, const OrderKind& ord, const QuadratureConfig& cfg) {
  const ContinuousPRV x = build_continuous(StdNormal{path ? *path : Path::real_line(-12.0, 12.0)}, cfg);
  return cdf_continuous(x, z, ord);
}

}  // namespace phantom

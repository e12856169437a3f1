#include "phantom/limits.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

namespace phantom {

// ------------------------------------------------------------------ inequalities

namespace {

Phantom abs_mean(const DiscretePRV& x) {
  double re = 0.0, red = 0.0;
  for (const Atom& a : x.support()) {
    const double m = abs(a.value);
    re += a.prob.re * m;
    red += a.prob.reduction() * m;
  }
  return Phantom::from_components(re, red);
}

// P(|X| >= r) as a phantom probability.
Phantom abs_tail(const DiscretePRV& x, double r) {
  Phantom p;
  for (const Atom& a : x.support())
    if (abs(a.value) >= r) p += a.prob;
  return p;
}

}  // namespace

BoundCheck markov_bound(const DiscretePRV& x, const Phantom& z, MarkovVariant variant, const OrderKind& ord) {
  BoundCheck out;
  switch (variant) {
    case MarkovVariant::Order: {
      if (!is_pseudo_positive(z)) throw Error(ErrorKind::BadVariant, "z must be pseudo positive");
      for (const Atom& a : x.support()) {
        if (compare(a.value, Phantom{}, ord) < 0) throw Error(ErrorKind::BadVariant, "X takes a value below 0");
      }
      for (const Atom& a : x.support())
        if (compare(a.value, z, ord) >= 0) out.lhs += a.prob;
      out.rhs = moment(x, 1) * inverse(z);
      out.holds = compare_approx(out.lhs, out.rhs, ord, kBoundSlack) <= 0;
      return out;
    }
    case MarkovVariant::AbsOrder:
    case MarkovVariant::AbsAbs: {
      const double r = abs(z);
      if (!(r > 0.0)) throw Error(ErrorKind::BadVariant, "z must be nonzero");
      const Phantom lhs = abs_tail(x, r);
      const Phantom rhs = abs_mean(x) * Phantom{1.0 / r};
      if (variant == MarkovVariant::AbsOrder) {
        out.lhs = lhs;
        out.rhs = rhs;
        out.holds = compare_approx(lhs, rhs, ord, kBoundSlack) <= 0;
      } else {
        out.lhs = abs(lhs);
        out.rhs = abs(rhs);
        out.holds = out.lhs.re <= out.rhs.re + kBoundSlack;
      }
      return out;
    }
  }
  return out;
}

namespace {

struct AbsMoments {
  double mu_re, mu_red, var_re, var_red;
};

AbsMoments abs_moments(const DiscretePRV& x) {
  const Phantom mu = abs_mean(x);
  AbsMoments m{mu.re, mu.reduction(), 0.0, 0.0};
  for (const Atom& a : x.support()) {
    const double v = abs(a.value);
    m.var_re += a.prob.re * (v - m.mu_re) * (v - m.mu_re);
    m.var_red += a.prob.reduction() * (v - m.mu_red) * (v - m.mu_red);
  }
  return m;
}

// Component-wise deviation probability with thresholds r_re and r_red.
Phantom deviation_prob(const DiscretePRV& x, const AbsMoments& m, double r_re, double r_red) {
  double p_re = 0.0, p_red = 0.0;
  for (const Atom& a : x.support()) {
    const double v = abs(a.value);
    if (std::abs(v - m.mu_re) >= r_re) p_re += a.prob.re;
    if (std::abs(v - m.mu_red) >= r_red) p_red += a.prob.reduction();
  }
  return Phantom::from_components(p_re, p_red);
}

}  // namespace

RealBoundCheck chebyshev_bound(const DiscretePRV& x, const Phantom& z) {
  const double r = abs(z);
  if (!(r > 0.0)) throw Error(ErrorKind::BadVariant, "z must be nonzero");
  const AbsMoments m = abs_moments(x);
  RealBoundCheck out;
  out.lhs = abs(deviation_prob(x, m, r, r));
  out.rhs = abs(Phantom::from_components(m.var_re, m.var_red)) / (r * r);
  out.holds = out.lhs <= out.rhs + kBoundSlack;
  return out;
}

RealBoundCheck chebyshev_c_form(const DiscretePRV& x, double c) {
  if (!(c > 0.0)) throw Error(ErrorKind::BadVariant, "c must be positive");
  const AbsMoments m = abs_moments(x);
  if (!(m.var_re > 0.0) || !(m.var_red > 0.0)) {
    throw Error(ErrorKind::DegenerateVariance, "|X| has a vanishing component variance");
  }
  RealBoundCheck out;
  out.lhs = abs(deviation_prob(x, m, c * std::sqrt(m.var_re), c * std::sqrt(m.var_red)));
  out.rhs = 1.0 / (c * c);
  out.holds = out.lhs <= out.rhs + kBoundSlack;
  return out;
}

// ---------------------------------------------------------------------- sampling

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

template <class F>
void parallel_for(int count, F f) {
  const int workers = std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, std::max(1, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          f(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

void require_strict(const DiscretePRV& x) {
  if (x.mode() != MeasureMode::Strict) throw Error(ErrorKind::BadParameter, "experiments need a strict variable");
}

void require_config(const SimConfig& cfg) {
  if (cfg.reps < 1 || cfg.n < 1) throw Error(ErrorKind::BadParameter, "reps and n must be >= 1");
  if (cfg.n > (std::int64_t{1} << 32)) throw Error(ErrorKind::BadParameter, "n exceeds one RNG substream");
}

std::vector<std::int64_t> log_grid(std::int64_t n) {
  std::vector<std::int64_t> g;
  for (std::int64_t k = 1; k < n; k *= 2) g.push_back(k);
  g.push_back(n);
  return g;
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint32_t stream) : key_(mix64(seed ^ kGamma)), stream_(stream) {}

std::uint64_t CounterRng::next() {
  if (counter_ >= (std::uint64_t{1} << 32)) throw Error(ErrorKind::BadParameter, "RNG substream exhausted");
  const std::uint64_t word = (stream_ << 32) | counter_++;
  return mix64((word * kGamma) ^ key_);
}

double CounterRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double ComponentLaw::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) m += probs[i] * values[i];
  return m;
}

double ComponentLaw::variance() const {
  const double m = mean();
  double v = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) v += probs[i] * (values[i] - m) * (values[i] - m);
  return v;
}

ComponentLaw component_law(const DiscretePRV& x, Selection selection) {
  ComponentLaw law;
  const auto& s = x.support();
  if (selection == Selection::Midpoint) {
    std::vector<std::string> labels;
    std::vector<Phantom> weights;
    for (std::size_t i = 0; i < s.size(); ++i) {
      labels.push_back(std::to_string(i));
      weights.push_back(s[i].prob);
    }
    const PhantomMeasure m(SampleSpace(labels), weights, x.mode());
    const RealizedMeasure r = select_real(m, RealSelection::uniform(m.space(), 0.5));
    for (std::size_t i = 0; i < s.size(); ++i) {
      law.values.push_back(s[i].value.re + 0.5 * s[i].value.ph);
      law.probs.push_back(std::max(0.0, r.probs[i].second));
    }
    return law;
  }
  double total = 0.0;
  for (const Atom& a : s) {
    const bool real = selection == Selection::RealComponent;
    law.values.push_back(real ? a.value.re : a.value.reduction());
    law.probs.push_back(std::max(0.0, real ? a.prob.re : a.prob.reduction()));
    total += law.probs.back();
  }
  for (double& p : law.probs) p /= total;
  return law;
}

Sampler::Sampler(const ComponentLaw& law, std::uint64_t seed, std::uint32_t stream)
    : values_(law.values), rng_(seed, stream) {
  double acc = 0.0;
  for (double p : law.probs) cumulative_.push_back(acc += p);
}

double Sampler::next() {
  const double u = rng_.uniform() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return values_[static_cast<std::size_t>(it - cumulative_.begin())];
}

std::vector<double> sample_iid(const DiscretePRV& x, const SimConfig& cfg) {
  require_strict(x);
  require_config(cfg);
  Sampler s(component_law(x, cfg.selection), cfg.seed, 0);
  std::vector<double> out(static_cast<std::size_t>(cfg.n));
  for (double& v : out) v = s.next();
  return out;
}

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

namespace {

// Running-mean trajectory statistics for one rep.
struct Trajectory {
  std::vector<double> curve;  // |M_n - mu| at grid points
  double final_mean = 0.0;
  bool window_ok = true;
};

Trajectory run_trajectory(const ComponentLaw& law, const SimConfig& cfg, int rep, const std::vector<std::int64_t>& grid,
                          double mu, bool track_window) {
  Sampler s(law, cfg.seed, static_cast<std::uint32_t>(rep));
  Trajectory t;
  const std::int64_t window_start = cfg.n - cfg.n / 10;
  double sum = 0.0;
  std::size_t g = 0;
  for (std::int64_t k = 1; k <= cfg.n; ++k) {
    sum += s.next();
    const double m = sum / static_cast<double>(k);
    if (g < grid.size() && grid[g] == k) {
      t.curve.push_back(std::abs(m - mu));
      ++g;
    }
    if (track_window && k >= window_start && !(std::abs(m - mu) < cfg.epsilon)) t.window_ok = false;
  }
  t.final_mean = sum / static_cast<double>(cfg.n);
  return t;
}

SimReport running_mean_report(const DiscretePRV& x, const SimConfig& cfg, bool track_window) {
  require_strict(x);
  require_config(cfg);
  const ComponentLaw law = component_law(x, cfg.selection);
  const double mu = law.mean();
  const auto grid = log_grid(cfg.n);
  std::vector<Trajectory> runs(static_cast<std::size_t>(cfg.reps));
  parallel_for(cfg.reps, [&](int r) { runs[r] = run_trajectory(law, cfg, r, grid, mu, track_window); });

  SimReport rep;
  rep.target_mean = mu;
  int ok = 0;
  for (const Trajectory& t : runs) {
    rep.empirical_mean += t.final_mean;
    ok += t.window_ok ? 1 : 0;
  }
  rep.empirical_mean /= cfg.reps;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double d = 0.0;
    for (const Trajectory& t : runs) d += t.curve[i];
    rep.per_n_curve.emplace_back(grid[i], d / cfg.reps);
  }
  rep.deviation = rep.per_n_curve.back().second;
  if (track_window) rep.within_fraction = static_cast<double>(ok) / cfg.reps;
  return rep;
}

}  // namespace

SimReport wlln_experiment(const DiscretePRV& x, const SimConfig& cfg) { return running_mean_report(x, cfg, false); }

SimReport slln_experiment(const DiscretePRV& x, const SimConfig& cfg) { return running_mean_report(x, cfg, true); }

SimReport clt_experiment(const DiscretePRV& x, const SimConfig& cfg) {
  require_strict(x);
  require_config(cfg);
  const ComponentLaw law = component_law(x, cfg.selection);
  const double mu = law.mean();
  const double var = law.variance();
  if (!(var > 1e-15)) throw Error(ErrorKind::DegenerateVariance, "selected component has zero variance");
  const double n = static_cast<double>(cfg.n);
  const double scale = std::sqrt(var * n);

  std::vector<double> sums(static_cast<std::size_t>(cfg.reps));
  parallel_for(cfg.reps, [&](int r) {
    Sampler s(law, cfg.seed, static_cast<std::uint32_t>(r));
    double sum = 0.0;
    for (std::int64_t k = 0; k < cfg.n; ++k) sum += s.next();
    sums[r] = sum;
  });

  std::vector<double> w;
  SimReport rep;
  for (double sum : sums) {
    w.push_back((sum - n * mu) / scale);
    rep.empirical_mean += sum / n;
  }
  rep.empirical_mean /= cfg.reps;
  rep.target_mean = mu;
  rep.deviation = std::abs(rep.empirical_mean - mu);
  rep.per_n_curve.emplace_back(cfg.n, rep.deviation);

  std::sort(w.begin(), w.end());
  const double count = static_cast<double>(w.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double f = standard_normal_cdf(w[i]);
    ks = std::max({ks, (i + 1) / count - f, f - i / count});
  }
  rep.ks_statistic = std::clamp(ks, 0.0, 1.0);

  for (int k = -16; k <= 16; ++k) {
    const double edge = k * 0.25;
    const auto below = std::upper_bound(w.begin(), w.end(), edge) - w.begin();
    rep.cdf_bins.push_back({edge, static_cast<double>(below) / count, standard_normal_cdf(edge)});
  }
  return rep;
}

}  // namespace phantom

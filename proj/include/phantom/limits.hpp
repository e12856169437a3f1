#pragma once

// Markov and Chebyshev bounds, and seeded Monte-Carlo runs of the limit theorems on the
// real and reduced components of a discrete phantom variable.

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "phantom/randvar.hpp"

namespace phantom {

// ------------------------------------------------------------------ inequalities

enum class MarkovVariant { Order, AbsOrder, AbsAbs };

// For AbsAbs both sides are reals stored with ph = 0.
struct BoundCheck {
  Phantom lhs;
  Phantom rhs;
  bool holds = false;
};

struct RealBoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

// Slack allowed when deciding whether a bound holds.
inline constexpr double kBoundSlack = 1e-12;

BoundCheck markov_bound(const DiscretePRV& x, const Phantom& z, MarkovVariant variant,
                        const OrderKind& ord = OrderKind::lex());

// |P(||X| - mu| >= |z|)| <= |Var(|X|)| / |z|^2. The deviation event is evaluated per
// component: the real side with P_re and the real-side mean of |X|, the reduced side
// with P^ and the reduced mean.
RealBoundCheck chebyshev_bound(const DiscretePRV& x, const Phantom& z);
// Same with |z| = c * sigma per component; the bound is exactly 1/c^2.
RealBoundCheck chebyshev_c_form(const DiscretePRV& x, double c);

// ---------------------------------------------------------------------- sampling

// Counter-based generator: draw i of stream s is mix64((s << 32 | i) * gamma ^ key(seed)),
// with mix64 the SplitMix64 finalizer. Each step is a bijection on 64-bit words, so
// distinct (stream, counter) pairs never produce the same state.
inline constexpr std::string_view kRngAlgorithm = "splitmix64-counter-v1";

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint32_t stream);
  std::uint64_t next();
  double uniform();  // in [0, 1) with 53 random bits
  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

enum class Selection { RealComponent, ReducedComponent, Midpoint };

struct SimConfig {
  std::uint64_t seed = 0;
  int reps = 1;
  std::int64_t n = 1;
  Selection selection = Selection::RealComponent;
  double epsilon = 0.01;  // SLLN window tolerance
};

// The standard real distribution a selection picks out of a phantom variable.
struct ComponentLaw {
  std::vector<double> values;
  std::vector<double> probs;  // normalized
  double mean() const;
  double variance() const;
};

ComponentLaw component_law(const DiscretePRV& x, Selection selection);

class Sampler {
 public:
  Sampler(const ComponentLaw& law, std::uint64_t seed, std::uint32_t stream);
  double next();

 private:
  std::vector<double> values_;
  std::vector<double> cumulative_;
  CounterRng rng_;
};

// Draws cfg.n samples from stream 0.
std::vector<double> sample_iid(const DiscretePRV& x, const SimConfig& cfg);

struct CdfBin {
  double edge;
  double empirical;
  double target;
};

struct SimReport {
  double empirical_mean = 0.0;
  double target_mean = 0.0;
  double deviation = 0.0;
  std::optional<double> ks_statistic;
  std::vector<std::pair<std::int64_t, double>> per_n_curve;
  // SLLN only: share of reps whose trailing window stayed within epsilon.
  std::optional<double> within_fraction;
  // CLT only: empirical and normal CDF of W_n on a fixed grid.
  std::vector<CdfBin> cdf_bins;
};

// Classical standard normal CDF via erfc.
double standard_normal_cdf(double x);

SimReport wlln_experiment(const DiscretePRV& x, const SimConfig& cfg);
SimReport clt_experiment(const DiscretePRV& x, const SimConfig& cfg);
SimReport slln_experiment(const DiscretePRV& x, const SimConfig& cfg);

}  // namespace phantom

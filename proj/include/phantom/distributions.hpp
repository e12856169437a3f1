#pragma once

// Named phantom distributions and their closed-form statistics.

#include <optional>
#include <variant>

#include "phantom/calculus.hpp"
#include "phantom/randvar.hpp"

namespace phantom {

// Upper bound on support size for the infinite discrete families. Construction stops
// earlier once both component tails fall below kTailCutoff.
inline constexpr int kDefaultCutoff = 1 << 20;
inline constexpr double kTailCutoff = 1e-12;

struct Bernoulli {
  Phantom p;
};
struct Binomial {
  int n = 1;
  Phantom p;
};
struct Geometric {
  Phantom p;
  int cutoff = kDefaultCutoff;
};
struct Poisson {
  Phantom lambda;
  int cutoff = kDefaultCutoff;
};
struct Exponential {
  Phantom lambda;
  std::optional<Path> path;
};
struct Normal {
  Phantom mu;
  Phantom sigma;
  std::optional<Path> path;
};
struct StdNormal {
  std::optional<Path> path;
};

using DistSpec = std::variant<Bernoulli, Binomial, Geometric, Poisson, Exponential, Normal, StdNormal>;
using PRV = std::variant<DiscretePRV, ContinuousPRV>;

bool is_discrete(const DistSpec& spec);
void validate_spec(const DistSpec& spec);  // throws BadParameter

PRV build(const DistSpec& spec, const QuadratureConfig& cfg = {});
DiscretePRV build_discrete(const DistSpec& spec);
ContinuousPRV build_continuous(const DistSpec& spec, const QuadratureConfig& cfg = {});

// Real-line paths on [0, 40/min(lambda_re, lambda^)] and on the +-12 sigma envelope.
Path default_path(const Exponential& d);
Path default_path(const Normal& d);

struct ClosedFormStats {
  Phantom mean;
  Phantom variance;
};

ClosedFormStats closed_form_stats(const DistSpec& spec);

// Y = scale * X + shift has mean (0,0) and variance (1,0).
struct Standardization {
  Phantom scale;
  Phantom shift;
};

Standardization standardize(const Normal& d);

// Standard phantom normal CDF, by default on the real line over [-12, 12].
Phantom phi(const CdfArg& z, const std::optional<Path>& path = std::nullopt, const OrderKind& ord = OrderKind::lex(),
            const QuadratureConfig& cfg = {});

}  // namespace phantom

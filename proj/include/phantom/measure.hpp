#pragma once

// Finite phantom probability spaces. Events are subsets of outcome labels.

#include <cstddef>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "phantom/phantom.hpp"

namespace phantom {

// Tolerance for membership in the probability zone and for normalization.
inline constexpr double kMeasureTolerance = 1e-9;
// Tolerance for equality of phantom probabilities.
inline constexpr double kProbabilityEquality = 1e-10;

enum class MeasureMode { Strict, Lenient };

class SampleSpace {
 public:
  explicit SampleSpace(std::vector<std::string> outcomes);

  std::size_t size() const { return outcomes_.size(); }
  const std::vector<std::string>& outcomes() const { return outcomes_; }
  const std::string& label(std::size_t i) const { return outcomes_.at(i); }
  std::optional<std::size_t> index_of(std::string_view label) const;

  friend bool operator==(const SampleSpace& x, const SampleSpace& y) { return x.outcomes_ == y.outcomes_; }

 private:
  std::vector<std::string> outcomes_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

using Event = std::set<std::string, std::less<>>;

Event event_union(const Event& a, const Event& b);
Event event_intersection(const Event& a, const Event& b);
Event event_complement(const SampleSpace& omega, const Event& a);
Event whole(const SampleSpace& omega);

// True when w lies in the closed probability zone: re in [0,1], -re <= ph <= 1 - re.
bool in_probability_zone(const Phantom& w, double tol = kMeasureTolerance);

struct Finding {
  std::string outcome;  // empty for findings about the whole measure
  std::string axiom;
  std::string message;
};

struct ValidationReport {
  bool valid = true;
  std::vector<Finding> findings;
};

class PhantomMeasure {
 public:
  // Does not validate; see validate() and validated().
  PhantomMeasure(SampleSpace space, std::vector<Phantom> weights, MeasureMode mode);
  // Throws InvalidMeasure listing the findings when validation fails.
  static PhantomMeasure validated(SampleSpace space, std::vector<Phantom> weights, MeasureMode mode);

  const SampleSpace& space() const { return space_; }
  const std::vector<Phantom>& weights() const { return weights_; }
  MeasureMode mode() const { return mode_; }
  Phantom weight(std::string_view label) const;

 private:
  SampleSpace space_;
  std::vector<Phantom> weights_;
  MeasureMode mode_;
};

ValidationReport validate(const PhantomMeasure& m);

Phantom prob(const PhantomMeasure& m, const Event& a);
Phantom complement_prob(const PhantomMeasure& m, const Event& a);
Phantom union_prob(const PhantomMeasure& m, const Event& a, const Event& b);
Phantom conditional(const PhantomMeasure& m, const Event& a, const Event& b);
Phantom total_probability(const PhantomMeasure& m, const std::vector<Event>& partition, const Event& b);
Phantom bayes(const PhantomMeasure& m, const std::vector<Event>& partition, const Event& b, std::size_t i);
bool independent(const PhantomMeasure& m, const Event& a, const Event& b);
PhantomMeasure compound(const std::vector<PhantomMeasure>& measures, const std::vector<Phantom>& coeffs);

// Interpolation coordinate u in [0,1] per outcome.
class RealSelection {
 public:
  explicit RealSelection(std::map<std::string, double, std::less<>> u);
  static RealSelection uniform(const SampleSpace& omega, double u);
  double at(std::string_view label) const;

 private:
  std::map<std::string, double, std::less<>> u_;
};

struct RealizedMeasure {
  std::vector<std::pair<std::string, double>> probs;  // in sample-space order
  double renormalization = 1.0;                       // sum of re + u*ph before dividing
};

RealizedMeasure select_real(const PhantomMeasure& m, const RealSelection& sel);

}  // namespace phantom

#include "phantom/measure.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <sstream>

namespace phantom {

SampleSpace::SampleSpace(std::vector<std::string> outcomes) : outcomes_(std::move(outcomes)) {
  if (outcomes_.empty()) throw Error(ErrorKind::BadParameter, "sample space needs at least one outcome");
  for (std::size_t i = 0; i < outcomes_.size(); ++i) {
    if (!index_.emplace(outcomes_[i], i).second) {
      throw Error(ErrorKind::BadParameter, "duplicate outcome label '" + outcomes_[i] + "'");
    }
  }
}

std::optional<std::size_t> SampleSpace::index_of(std::string_view label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Event event_union(const Event& a, const Event& b) {
  Event out = a;
  out.insert(b.begin(), b.end());
  return out;
}

Event event_intersection(const Event& a, const Event& b) {
  Event out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()), Event::key_compare{});
  return out;
}

Event event_complement(const SampleSpace& omega, const Event& a) {
  Event out;
  for (const std::string& w : omega.outcomes())
    if (!a.contains(w)) out.insert(w);
  return out;
}

Event whole(const SampleSpace& omega) { return Event(omega.outcomes().begin(), omega.outcomes().end()); }

bool in_probability_zone(const Phantom& w, double tol) {
  return w.re >= -tol && w.re <= 1.0 + tol && w.ph >= -w.re - tol && w.ph <= 1.0 - w.re + tol;
}

PhantomMeasure::PhantomMeasure(SampleSpace space, std::vector<Phantom> weights, MeasureMode mode)
    : space_(std::move(space)), weights_(std::move(weights)), mode_(mode) {
  if (weights_.size() != space_.size()) throw Error(ErrorKind::BadParameter, "one weight per outcome required");
}

PhantomMeasure PhantomMeasure::validated(SampleSpace space, std::vector<Phantom> weights, MeasureMode mode) {
  PhantomMeasure m(std::move(space), std::move(weights), mode);
  const ValidationReport r = validate(m);
  if (!r.valid) {
    std::string msg;
    for (const Finding& f : r.findings) msg += (f.outcome.empty() ? "" : f.outcome + ": ") + f.message + "; ";
    throw Error(ErrorKind::InvalidMeasure, msg);
  }
  return m;
}

Phantom PhantomMeasure::weight(std::string_view label) const {
  const auto i = space_.index_of(label);
  if (!i) throw Error(ErrorKind::UnknownOutcome, std::string(label));
  return weights_[*i];
}

ValidationReport validate(const PhantomMeasure& m) {
  ValidationReport r;
  auto add = [&](std::string outcome, std::string axiom, std::string message) {
    r.valid = false;
    r.findings.push_back({std::move(outcome), std::move(axiom), std::move(message)});
  };
  const double tol = kMeasureTolerance;
  Phantom total;
  for (std::size_t i = 0; i < m.space().size(); ++i) {
    const std::string& label = m.space().label(i);
    const Phantom w = m.weights()[i];
    if (!is_finite(w)) {
      add(label, "finite", "weight is not finite");
      continue;
    }
    total += w;
    if (w.re < -tol || w.re > 1.0 + tol) add(label, "nonnegativity", "real term outside [0, 1]");
    if (w.ph < -w.re - tol || w.ph > 1.0 - w.re + tol) {
      add(label, "phantomization", "phantom term outside [-re, 1 - re]");
    }
    if (m.mode() == MeasureMode::Strict && is_zero_divisor(w)) {
      add(label, "zero divisor", "weight is a zero divisor, not allowed in strict mode");
    }
  }
  if (std::abs(total.re - 1.0) > tol || std::abs(total.ph) > tol) {
    std::ostringstream s;
    s << "weights sum to (" << total.re << ", " << total.ph << "), expected (1, 0)";
    add("", "normalization", s.str());
  }
  return r;
}

Phantom prob(const PhantomMeasure& m, const Event& a) {
  Phantom s;
  for (const std::string& label : a) s += m.weight(label);
  return s;
}

Phantom complement_prob(const PhantomMeasure& m, const Event& a) {
  for (const std::string& label : a) (void)m.weight(label);
  return Phantom{1.0} - prob(m, a);
}

Phantom union_prob(const PhantomMeasure& m, const Event& a, const Event& b) {
  return prob(m, a) + prob(m, b) - prob(m, event_intersection(a, b));
}

namespace {

void require_strict(const PhantomMeasure& m) {
  if (m.mode() != MeasureMode::Strict) {
    throw Error(ErrorKind::ConditioningDegenerate, "conditioning requires a strict measure");
  }
}

void check_partition(const PhantomMeasure& m, const std::vector<Event>& partition) {
  Event seen;
  for (const Event& block : partition) {
    for (const std::string& label : block) {
      (void)m.weight(label);
      if (!seen.insert(label).second) throw Error(ErrorKind::BadPartition, "outcome '" + label + "' in two blocks");
    }
  }
  if (seen.size() != m.space().size()) throw Error(ErrorKind::BadPartition, "blocks do not cover the sample space");
}

}  // namespace

Phantom conditional(const PhantomMeasure& m, const Event& a, const Event& b) {
  require_strict(m);
  const Phantom pb = prob(m, b);
  if (!is_invertible(pb)) throw Error(ErrorKind::ConditioningDegenerate, "P(B) is zero or a zero divisor");
  return prob(m, event_intersection(a, b)) / pb;
}

Phantom total_probability(const PhantomMeasure& m, const std::vector<Event>& partition, const Event& b) {
  require_strict(m);
  check_partition(m, partition);
  Phantom s;
  for (const Event& block : partition) s += prob(m, block) * conditional(m, b, block);
  return s;
}

Phantom bayes(const PhantomMeasure& m, const std::vector<Event>& partition, const Event& b, std::size_t i) {
  require_strict(m);
  check_partition(m, partition);
  if (i >= partition.size()) throw Error(ErrorKind::BadPartition, "block index out of range");
  std::vector<Phantom> terms;
  Phantom denom;
  for (const Event& block : partition) {
    terms.push_back(prob(m, block) * conditional(m, b, block));
    denom += terms.back();
  }
  if (!is_invertible(denom)) throw Error(ErrorKind::ConditioningDegenerate, "P(B) is zero or a zero divisor");
  return terms[i] / denom;
}

bool independent(const PhantomMeasure& m, const Event& a, const Event& b) {
  return approx_equal(prob(m, event_intersection(a, b)), prob(m, a) * prob(m, b), kProbabilityEquality);
}

PhantomMeasure compound(const std::vector<PhantomMeasure>& measures, const std::vector<Phantom>& coeffs) {
  if (measures.empty() || measures.size() != coeffs.size()) {
    throw Error(ErrorKind::BadCoefficients, "need one coefficient per measure");
  }
  Phantom total;
  bool strict = true;
  for (std::size_t i = 0; i < measures.size(); ++i) {
    if (!(measures[i].space() == measures[0].space())) {
      throw Error(ErrorKind::BadCoefficients, "measures live on different sample spaces");
    }
    if (!in_probability_zone(coeffs[i])) throw Error(ErrorKind::BadCoefficients, "coefficient outside probability zone");
    total += coeffs[i];
    strict = strict && measures[i].mode() == MeasureMode::Strict;
  }
  if (std::abs(total.re - 1.0) > kMeasureTolerance || std::abs(total.ph) > kMeasureTolerance) {
    throw Error(ErrorKind::BadCoefficients, "coefficients must sum to (1, 0)");
  }
  std::vector<Phantom> w(measures[0].space().size());
  for (std::size_t i = 0; i < measures.size(); ++i)
    for (std::size_t k = 0; k < w.size(); ++k) w[k] += coeffs[i] * measures[i].weights()[k];
  PhantomMeasure out(measures[0].space(), std::move(w), strict ? MeasureMode::Strict : MeasureMode::Lenient);
  if (!validate(out).valid) throw Error(ErrorKind::BadCoefficients, "mixture is not a valid measure in its mode");
  return out;
}

RealSelection::RealSelection(std::map<std::string, double, std::less<>> u) : u_(std::move(u)) {
  for (const auto& [label, x] : u_) {
    if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorKind::BadParameter, "selection for '" + label + "' outside [0, 1]");
  }
}

RealSelection RealSelection::uniform(const SampleSpace& omega, double u) {
  std::map<std::string, double, std::less<>> m;
  for (const std::string& w : omega.outcomes()) m.emplace(w, u);
  return RealSelection(std::move(m));
}

double RealSelection::at(std::string_view label) const {
  auto it = u_.find(label);
  if (it == u_.end()) throw Error(ErrorKind::UnknownOutcome, "no selection for '" + std::string(label) + "'");
  return it->second;
}

RealizedMeasure select_real(const PhantomMeasure& m, const RealSelection& sel) {
  RealizedMeasure out;
  double total = 0.0;
  for (std::size_t i = 0; i < m.space().size(); ++i) {
    const std::string& label = m.space().label(i);
    const Phantom w = m.weights()[i];
    out.probs.emplace_back(label, w.re + sel.at(label) * w.ph);
    total += out.probs.back().second;
  }
  out.renormalization = total;
  for (auto& entry : out.probs) entry.second /= total;
  return out;
}

}  // namespace phantom

#include "riskweave/fmea.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "riskweave/errors.hpp"

namespace riskweave {

namespace {

RatingScales make_scales() {
  RatingScales s;
  s.severity = {{
      {1, "None", "No effect"},
      {2, "Very Minor", "Very minor effects"},
      {3, "Minor Effects", "Causes minor effects"},
      {4, "Very Low", "Very low severity but most individuals notice it"},
      {5, "Low", "Low severity"},
      {6, "Moderate", "Moderate severity"},
      {7, "High", "High severity"},
      {8, "Very High", "Irrecoverable severity"},
      {9, "Hazardous - Warning", "Extremely severe but with a warning"},
      {10, "Hazardous - No Warning", "Extremely severe, catastrophic"},
  }};
  // Probability bands as published; bands without their own label share the
  // likelihood class of the rank above.
  s.occurrence = {{
      {1, "Remote: Highly improbable risk", "Less than 1 in 15000000"},
      {2, "Low: Relatively rare risks", "1 in 1500000"},
      {3, "Low: Relatively rare risks", "1 in 15000"},
      {4, "Moderate: Occasional risks", "1 in 2000"},
      {5, "Moderate: Occasional risks", "1 in 400"},
      {6, "Moderate: Occasional risks", "1 in 80"},
      {7, "High: Repeating risks", "1 in 20"},
      {8, "High: Repeating risks", "1 in 8"},
      {9, "Very High - Almost Inevitable", "1 in 3"},
      {10, "Very High - Almost Inevitable", "1 in 2 or more"},
  }};
  s.detection = {{
      {1, "Almost Certain",
       "Almost certain that the potential risk will be detected with existing controls"},
      {2, "Very Likely", "Highly likely that the potential risk will be detected"},
      {3, "Likely", "Very likely that the potential risk will be detected with existing controls"},
      {4, "Relatively Likely",
       "Relatively likely that the potential risk will be detected with existing controls"},
      {5, "Moderate",
       "Possible in half of the cases that the potential risk will be detected with existing "
       "controls"},
      {6, "Low", "Low likelihood that the risk will be detected even with existing controls"},
      {7, "Very Low",
       "Very low likelihood that the risk will be detected even with existing controls"},
      {8, "Unlikely",
       "Highly unlikely that the risk will be detected even with existing controls"},
      {9, "Very Unlikely",
       "Very unlikely that the risk will be detected even with existing controls"},
      {10, "Absolutely None",
       "No controls exist, or if they do, they cannot detect the potential risk"},
  }};
  return s;
}

}  // namespace

const RatingScales& rating_scales() {
  static const RatingScales scales = make_scales();
  return scales;
}

void validate(const FmeaItem& item) {
  for (int v : {item.s, item.o, item.d})
    if (v < 1 || v > 10)
      throw ValidationError("FMEA item '" + item.cause + "' has rank " + std::to_string(v) +
                            " outside 1..10");
}

ExponentWeights correct_weights(double severity, double occurrence, double detection) {
  for (double v : {severity, occurrence, detection})
    if (!(v > 0.0)) throw ValidationError("parameter priorities must be positive");
  const double sum = severity + occurrence + detection;
  if (std::abs(sum - 1.0) > 1e-6)
    throw ValidationError("parameter priorities sum to " + std::to_string(sum) + ", expected 1");
  return {3.0 * severity, 3.0 * occurrence, 3.0 * detection};
}

double classic_rpn(const FmeaItem& item) {
  return static_cast<double>(item.s * item.o * item.d);
}

double weighted_rpn(const FmeaItem& item, const ExponentWeights& w) {
  return std::pow(item.s, w.severity) * std::pow(item.o, w.occurrence) *
         std::pow(item.d, w.detection);
}

std::vector<SodTriple> recover_sod(double rpn_classic, double rpn_weighted,
                                   const ExponentWeights& weights) {
  const long target = std::lround(rpn_classic);
  std::vector<std::pair<double, SodTriple>> candidates;
  for (int s = 1; s <= 10; ++s)
    for (int o = 1; o <= 10; ++o)
      for (int d = 1; d <= 10; ++d) {
        if (s * o * d != target) continue;
        const double w = weighted_rpn({"", "", s, o, d}, weights);
        candidates.emplace_back(std::abs(w - rpn_weighted) / rpn_weighted, SodTriple{s, o, d});
      }
  if (candidates.empty())
    throw ComputationError("no (s, o, d) triple has product " + std::to_string(target));

  double best = std::numeric_limits<double>::infinity();
  for (const auto& [err, t] : candidates) best = std::min(best, err);
  std::vector<SodTriple> out;
  for (const auto& [err, t] : candidates)
    if (err <= best + 1e-12) out.push_back(t);
  return out;
}

std::vector<RiskRecord> score(const std::vector<FmeaItem>& items, const ExponentWeights& weights) {
  std::vector<RiskRecord> out;
  out.reserve(items.size());
  for (const FmeaItem& item : items) {
    validate(item);
    out.push_back({item, classic_rpn(item), weighted_rpn(item, weights), 0, 0});
  }
  return out;
}

void rank(std::vector<RiskRecord>& records, RankKey key) {
  auto value = [key](const RiskRecord& r) {
    return key == RankKey::classic ? r.rpn_classic : r.rpn_weighted;
  };
  auto tied = [key](double a, double b) {
    if (key == RankKey::classic) return a == b;
    return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b));
  };
  for (RiskRecord& r : records) {
    const double v = value(r);
    int greater = 0;
    for (const RiskRecord& other : records) {
      const double u = value(other);
      if (u > v && !tied(u, v)) ++greater;
    }
    (key == RankKey::classic ? r.rank_classic : r.rank_weighted) = greater + 1;
  }
}

}  // namespace riskweave

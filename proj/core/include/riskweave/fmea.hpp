#pragma once

#include <array>
#include <string>
#include <tuple>
#include <vector>

#include "riskweave/model.hpp"

namespace riskweave {

struct RatingLevel {
  int rank = 0;
  std::string label;
  std::string description;
};

/// The three 1..10 scales experts use to score a failure cause.  Each array
/// is indexed by rank - 1.
struct RatingScales {
  std::array<RatingLevel, 10> severity;
  std::array<RatingLevel, 10> occurrence;
  std::array<RatingLevel, 10> detection;
};

const RatingScales& rating_scales();

struct FmeaItem {
  std::string failure_mode;
  ElementId cause;
  int s = 1;
  int o = 1;
  int d = 1;

  bool operator==(const FmeaItem&) const = default;
};

/// Throws ValidationError unless every rank lies in 1..10.
void validate(const FmeaItem& item);

struct ExponentWeights {
  double severity = 1.0;
  double occurrence = 1.0;
  double detection = 1.0;

  double sum() const { return severity + occurrence + detection; }
};

inline constexpr ExponentWeights kNeutralExponents{1.0, 1.0, 1.0};

/// Scales normalized parameter priorities by the parameter count, so equal
/// priorities give exponents (1, 1, 1).  Throws ValidationError on a
/// nonpositive normal or normals that do not sum to one.
ExponentWeights correct_weights(double severity, double occurrence, double detection);

double classic_rpn(const FmeaItem& item);
double weighted_rpn(const FmeaItem& item, const ExponentWeights& weights);

using SodTriple = std::tuple<int, int, int>;

/// All (s, o, d) with s*o*d == round(rpn_classic) whose weighted RPN is
/// closest (relative error) to `rpn_weighted`; ties are all returned.
/// Throws ComputationError when no triple has that classic product.
std::vector<SodTriple> recover_sod(double rpn_classic, double rpn_weighted,
                                   const ExponentWeights& weights);

struct RiskRecord {
  FmeaItem item;
  double rpn_classic = 0.0;
  double rpn_weighted = 0.0;
  int rank_classic = 0;
  int rank_weighted = 0;
};

enum class RankKey { classic, weighted };

/// Scores every item with both formulas (ranks unset).
std::vector<RiskRecord> score(const std::vector<FmeaItem>& items, const ExponentWeights& weights);

/// Competition ranking ("1224"), descending.  Classic ties use exact
/// equality, weighted ties a 1e-9 relative tolerance.  Input order is kept.
void rank(std::vector<RiskRecord>& records, RankKey key);

}  // namespace riskweave

#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "riskweave/fmea.hpp"

namespace riskweave {

struct ComparisonRow {
  ElementId cause;
  std::string failure_mode;
  double rpn_classic = 0.0;
  double rpn_weighted = 0.0;
  int rank_classic = 0;
  int rank_weighted = 0;
  /// rank_classic - rank_weighted: positive means the cause became more
  /// critical under the weighted RPN.
  int rank_shift = 0;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  /// rank -> size, for ranks shared by two or more items.
  std::map<int, int> classic_ties;
  std::map<int, int> weighted_ties;
  int weighted_above_classic = 0;
  int weighted_below_classic = 0;
  double spearman = 0.0;
};

/// Joins two ranked record lists on cause.  Throws ValidationError when the
/// item sets differ.
ComparisonReport compare(const std::vector<RiskRecord>& classic,
                         const std::vector<RiskRecord>& weighted);

/// Convenience: both rank columns already live in one record list.
ComparisonReport compare(const std::vector<RiskRecord>& ranked);

/// Top-k rows by |rank_shift|, ties in declaration order.
std::vector<ComparisonRow> largest_shifts(const ComparisonReport& report, std::size_t k);

/// Average ranks (1-based, ascending) with tied values sharing the mean of
/// the positions they cover.
std::vector<double> midrank(const std::vector<double>& values);

/// Spearman's rho: Pearson correlation of midranks.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

/// respondents x items, no missing cells.
using ResponseMatrix = std::vector<std::vector<double>>;

/// k/(k-1) * (1 - sum of item variances / variance of totals), with n-1
/// variances.  Throws ValidationError for fewer than 2 items or respondents,
/// ragged rows, or zero total variance.
double cronbach_alpha(const ResponseMatrix& responses);

}  // namespace riskweave

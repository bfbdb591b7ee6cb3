#include "riskweave/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "riskweave/errors.hpp"

namespace riskweave {

namespace {

std::map<int, int> tie_groups(const std::vector<int>& ranks) {
  std::map<int, int> counts;
  for (int r : ranks) ++counts[r];
  std::erase_if(counts, [](const auto& kv) { return kv.second < 2; });
  return counts;
}

double sample_variance(const std::vector<double>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size() - 1);
}

}  // namespace

ComparisonReport compare(const std::vector<RiskRecord>& classic,
                         const std::vector<RiskRecord>& weighted) {
  if (classic.size() != weighted.size())
    throw ValidationError("classic and weighted record lists have different lengths");

  ComparisonReport report;
  std::vector<int> classic_ranks, weighted_ranks;
  std::vector<double> classic_values, weighted_values;
  for (const RiskRecord& c : classic) {
    auto it = std::find_if(weighted.begin(), weighted.end(),
                           [&](const RiskRecord& w) { return w.item.cause == c.item.cause; });
    if (it == weighted.end())
      throw ValidationError("cause '" + c.item.cause + "' missing from weighted records");

    ComparisonRow row{c.item.cause, c.item.failure_mode, c.rpn_classic, it->rpn_weighted,
                      c.rank_classic, it->rank_weighted, c.rank_classic - it->rank_weighted};
    if (row.rpn_weighted > row.rpn_classic) ++report.weighted_above_classic;
    if (row.rpn_weighted < row.rpn_classic) ++report.weighted_below_classic;
    classic_ranks.push_back(row.rank_classic);
    weighted_ranks.push_back(row.rank_weighted);
    classic_values.push_back(row.rpn_classic);
    weighted_values.push_back(row.rpn_weighted);
    report.rows.push_back(std::move(row));
  }
  report.classic_ties = tie_groups(classic_ranks);
  report.weighted_ties = tie_groups(weighted_ranks);
  report.spearman = spearman(classic_values, weighted_values);
  return report;
}

ComparisonReport compare(const std::vector<RiskRecord>& ranked) {
  return compare(ranked, ranked);
}

std::vector<ComparisonRow> largest_shifts(const ComparisonReport& report, std::size_t k) {
  std::vector<ComparisonRow> rows = report.rows;
  std::stable_sort(rows.begin(), rows.end(), [](const ComparisonRow& a, const ComparisonRow& b) {
    return std::abs(a.rank_shift) > std::abs(b.rank_shift);
  });
  if (rows.size() > k) rows.resize(k);
  return rows;
}

std::vector<double> midrank(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw ValidationError("spearman needs two equal-length samples of size >= 2");
  const auto ra = midrank(a);
  const auto rb = midrank(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;  // a constant sample has no ordering
  return sab / std::sqrt(saa * sbb);
}

double cronbach_alpha(const ResponseMatrix& responses) {
  if (responses.size() < 2) throw ValidationError("cronbach_alpha needs at least 2 respondents");
  const std::size_t k = responses.front().size();
  if (k < 2) throw ValidationError("cronbach_alpha needs at least 2 items");
  for (const auto& row : responses)
    if (row.size() != k) throw ValidationError("response matrix has ragged rows");

  double item_variance = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<double> column;
    for (const auto& row : responses) column.push_back(row[j]);
    item_variance += sample_variance(column);
  }
  std::vector<double> totals;
  for (const auto& row : responses) totals.push_back(std::accumulate(row.begin(), row.end(), 0.0));
  const double total_variance = sample_variance(totals);
  if (total_variance == 0.0)
    throw ValidationError("cronbach_alpha undefined: total scores have zero variance");

  const double kd = static_cast<double>(k);
  return kd / (kd - 1.0) * (1.0 - item_variance / total_variance);
}

}  // namespace riskweave

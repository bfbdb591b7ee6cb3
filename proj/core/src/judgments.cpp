#include "riskweave/judgments.hpp"

#include <algorithm>
#include <charconv>

#include "riskweave/errors.hpp"

namespace riskweave {

bool on_saaty_scale(const Rational& value) {
  const auto n = value.numerator();
  const auto d = value.denominator();
  if (n <= 0) return false;
  return (d == 1 && n <= 9) || (n == 1 && d <= 9);
}

Rational parse_rational(const std::string& text) {
  auto parse_int = [&](std::string_view part) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc() || ptr != part.data() + part.size())
      throw ValidationError("malformed judgment '" + text + "'");
    return v;
  };
  std::string_view sv(text);
  const auto slash = sv.find('/');
  const std::int64_t num = parse_int(sv.substr(0, slash));
  const std::int64_t den = slash == std::string_view::npos ? 1 : parse_int(sv.substr(slash + 1));
  if (num <= 0 || den <= 0) throw ValidationError("nonpositive judgment '" + text + "'");
  return Rational(num, den);
}

std::string format_rational(const Rational& value) {
  if (value.denominator() == 1) return std::to_string(value.numerator());
  return std::to_string(value.numerator()) + "/" + std::to_string(value.denominator());
}

double to_double(const Rational& value) {
  return boost::rational_cast<double>(value);
}

ComparisonMatrix::ComparisonMatrix(std::string context, std::vector<NodeId> order,
                                   std::vector<Rational> upper)
    : context_(std::move(context)), order_(std::move(order)), upper_(std::move(upper)) {
  const std::size_t n = order_.size();
  if (upper_.size() != n * (n - (n > 0 ? 1 : 0)) / 2)
    throw ValidationError("matrix '" + context_ + "' has wrong number of judgments");
  for (const Rational& v : upper_)
    if (v <= Rational(0)) throw ValidationError("nonpositive judgment in '" + context_ + "'");
}

std::size_t ComparisonMatrix::upper_index(std::size_t i, std::size_t j) const {
  const std::size_t n = order_.size();
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

Rational ComparisonMatrix::at(std::size_t i, std::size_t j) const {
  if (i == j) return Rational(1);
  if (i < j) return upper_[upper_index(i, j)];
  return Rational(1) / upper_[upper_index(j, i)];
}

Eigen::MatrixXd ComparisonMatrix::to_dense() const {
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = to_double(at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
  return m;
}

ComparisonMatrix ComparisonMatrix::reordered(const std::vector<NodeId>& order) const {
  if (order.size() != order_.size())
    throw ValidationError("reorder of '" + context_ + "' changes size");
  std::vector<std::size_t> src;
  for (const auto& id : order) {
    auto it = std::find(order_.begin(), order_.end(), id);
    if (it == order_.end()) throw ValidationError("reorder of '" + context_ + "' names '" + id + "'");
    src.push_back(static_cast<std::size_t>(it - order_.begin()));
  }
  std::vector<Rational> upper;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size(); ++j) upper.push_back(at(src[i], src[j]));
  return ComparisonMatrix(context_, order, std::move(upper));
}

namespace {

std::pair<std::size_t, std::size_t> locate(const ComparisonContext& context, const Judgment& j) {
  if (j.row == j.col)
    throw ValidationError("judgment compares '" + j.row + "' with itself");
  auto r = context.index_of(j.row);
  auto c = context.index_of(j.col);
  if (!r || !c)
    throw ValidationError("judgment " + j.row + " vs " + j.col + " is not part of context '" +
                          context.id + "'");
  return {*r, *c};
}

}  // namespace

ComparisonMatrix matrix_from_judgments(const ComparisonContext& context,
                                       std::span<const Judgment> judgments) {
  const std::size_t n = context.size();
  std::vector<std::optional<Rational>> upper(n * (n - (n > 0 ? 1 : 0)) / 2);
  auto slot = [n](std::size_t i, std::size_t j) { return i * n - i * (i + 1) / 2 + (j - i - 1); };

  for (const Judgment& j : judgments) {
    if (j.context != context.id) continue;
    auto [r, c] = locate(context, j);
    if (!on_saaty_scale(j.value))
      throw ValidationError("judgment " + j.row + " vs " + j.col + " = " +
                            format_rational(j.value) + " is off the 1/9..9 scale");
    const Rational value = r < c ? j.value : Rational(1) / j.value;
    auto& cell = upper[slot(std::min(r, c), std::max(r, c))];
    if (cell)
      throw ValidationError("duplicate judgment for pair " + context.compared[std::min(r, c)] +
                            " / " + context.compared[std::max(r, c)] + " in '" + context.id + "'");
    cell = value;
  }

  std::vector<Rational> values;
  values.reserve(upper.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& cell = upper[slot(i, j)];
      if (!cell)
        throw ValidationError("missing judgment for pair " + context.compared[i] + " / " +
                              context.compared[j] + " in '" + context.id + "'");
      values.push_back(*cell);
    }
  }
  return ComparisonMatrix(context.id, context.compared, std::move(values));
}

CompletenessReport completeness(const ComparisonContext& context,
                                std::span<const Judgment> judgments) {
  const std::size_t n = context.size();
  std::vector<std::vector<bool>> seen(n, std::vector<bool>(n, false));
  for (const Judgment& j : judgments) {
    if (j.context != context.id || j.row == j.col) continue;
    auto r = context.index_of(j.row);
    auto c = context.index_of(j.col);
    if (!r || !c) continue;
    seen[std::min(*r, *c)][std::max(*r, *c)] = true;
  }
  CompletenessReport report;
  report.total = n * (n - (n > 0 ? 1 : 0)) / 2;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (seen[i][j])
        ++report.answered;
      else
        report.missing.emplace_back(context.compared[i], context.compared[j]);
    }
  report.progress = report.total == 0 ? 1.0
                                      : static_cast<double>(report.answered) /
                                            static_cast<double>(report.total);
  return report;
}

void JudgmentSet::upsert(const ComparisonContext& context, Judgment judgment) {
  auto [r, c] = locate(context, judgment);
  if (!on_saaty_scale(judgment.value))
    throw ValidationError("judgment value " + format_rational(judgment.value) +
                          " is off the 1/9..9 scale");
  judgment.context = context.id;
  if (r > c) {
    std::swap(judgment.row, judgment.col);
    judgment.value = Rational(1) / judgment.value;
    std::swap(r, c);
  }
  entries_[{context.id, r, c}] = std::move(judgment);
}

std::vector<Judgment> JudgmentSet::for_context(const std::string& context_id) const {
  std::vector<Judgment> out;
  for (auto it = entries_.lower_bound({context_id, 0, 0});
       it != entries_.end() && std::get<0>(it->first) == context_id; ++it)
    out.push_back(it->second);
  return out;
}

std::vector<Judgment> JudgmentSet::all() const {
  std::vector<Judgment> out;
  out.reserve(entries_.size());
  for (const auto& [key, j] : entries_) out.push_back(j);
  return out;
}

}  // namespace riskweave

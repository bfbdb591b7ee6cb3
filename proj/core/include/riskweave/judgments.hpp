#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/rational.hpp>

#include "riskweave/model.hpp"

namespace riskweave {

using Rational = boost::rational<std::int64_t>;

/// True for the 17 values of the Saaty scale: 1/9 .. 1/2, 1, 2 .. 9.
bool on_saaty_scale(const Rational& value);

/// Parses "3", "1/7", "7/1".  Throws ValidationError on malformed text or a
/// nonpositive value (the scale check is separate).
Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& value);
double to_double(const Rational& value);

struct Judgment {
  std::string context;
  NodeId row;
  NodeId col;
  Rational value{1};

  bool operator==(const Judgment&) const = default;
};

/// Positive reciprocal matrix over a context's compared items.  Only the
/// upper triangle is stored as supplied; the lower triangle is its exact
/// reciprocal.
class ComparisonMatrix {
 public:
  ComparisonMatrix() = default;
  /// `upper` lists a[i][j] for i < j in row-major order.
  ComparisonMatrix(std::string context, std::vector<NodeId> order, std::vector<Rational> upper);

  const std::string& context() const { return context_; }
  const std::vector<NodeId>& order() const { return order_; }
  std::size_t size() const { return order_.size(); }

  Rational at(std::size_t i, std::size_t j) const;
  Eigen::MatrixXd to_dense() const;

  /// Same judgments expressed over a permuted order.
  ComparisonMatrix reordered(const std::vector<NodeId>& order) const;

  bool operator==(const ComparisonMatrix&) const = default;

 private:
  std::size_t upper_index(std::size_t i, std::size_t j) const;

  std::string context_;
  std::vector<NodeId> order_;
  std::vector<Rational> upper_;
};

/// Builds the reciprocal matrix for `context`.  Every unordered pair must be
/// judged exactly once.  Throws ValidationError naming the missing pair, the
/// duplicate pair, or the off-scale value.
ComparisonMatrix matrix_from_judgments(const ComparisonContext& context,
                                       std::span<const Judgment> judgments);

struct CompletenessReport {
  std::size_t answered = 0;
  std::size_t total = 0;
  std::vector<std::pair<NodeId, NodeId>> missing;  // canonical (i < j) order
  double progress = 1.0;
  bool complete() const { return missing.empty(); }
};

CompletenessReport completeness(const ComparisonContext& context,
                                std::span<const Judgment> judgments);

/// Judgments keyed by (context, unordered pair); later writes replace earlier
/// ones.  Stored orientation follows the context's compared order.
class JudgmentSet {
 public:
  /// Validates against `context` and stores.  Throws ValidationError for
  /// row == col, off-scale value, or a node outside the context.
  void upsert(const ComparisonContext& context, Judgment judgment);

  std::vector<Judgment> for_context(const std::string& context_id) const;
  std::vector<Judgment> all() const;
  std::size_t size() const { return entries_.size(); }

 private:
  using Key = std::tuple<std::string, std::size_t, std::size_t>;
  std::map<Key, Judgment> entries_;
};

}  // namespace riskweave

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "riskweave/judgments.hpp"

namespace riskweave {

struct PriorityVector {
  std::string context;
  std::vector<NodeId> ids;
  std::vector<double> weights;

  double weight_of(const NodeId& id) const;
};

/// Which random-index table divides CI.  `saaty` is the textbook 1..10 table;
/// `super_decisions` is the table shipped with the Super Decisions software.
enum class RandomIndexTable { saaty, super_decisions };

const char* to_string(RandomIndexTable table);
RandomIndexTable parse_random_index_table(const std::string& text);

/// RI(n) for n = 1..10.  Throws ValidationError outside that range.
double random_index(std::size_t n, RandomIndexTable table = RandomIndexTable::saaty);

inline constexpr double kConsistencyThreshold = 0.1;

struct ConsistencyReport {
  std::size_t n = 0;
  double lambda_max = 0.0;
  double ci = 0.0;
  double cr = 0.0;
  double ri = 0.0;

  bool acceptable() const { return cr <= kConsistencyThreshold; }
};

struct EigenResult {
  PriorityVector priorities;
  double lambda_max = 0.0;
  int iterations = 0;
};

/// Power iteration from the uniform vector, normalized by component sum each
/// step, until successive iterates differ by less than `tol` in max-norm.
/// lambda_max is the mean of (Av)_i / v_i at convergence.
EigenResult principal_eigenvector(const ComparisonMatrix& matrix, double tol = 1e-12,
                                  int max_iter = 1000);

ConsistencyReport consistency(const ComparisonMatrix& matrix,
                              RandomIndexTable table = RandomIndexTable::saaty);
/// Same, reusing an already computed lambda_max.
ConsistencyReport consistency(std::size_t n, double lambda_max,
                              RandomIndexTable table = RandomIndexTable::saaty);

struct RevisionHint {
  std::size_t row = 0;  // row < col
  std::size_t col = 0;
  NodeId row_id;
  NodeId col_id;
  double deviation = 0.0;  // |ln a_ij - ln(w_i / w_j)|
};

/// The upper-triangle entry that disagrees most with the priorities.
/// Throws ValidationError for n < 3 ("nothing to revise").
RevisionHint most_inconsistent_judgment(const ComparisonMatrix& matrix,
                                        const PriorityVector& priorities);

}  // namespace riskweave

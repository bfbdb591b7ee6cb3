#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "riskweave/model.hpp"
#include "riskweave/priority.hpp"

namespace riskweave {

enum class Stage { unweighted, weighted, limit };

const char* to_string(Stage stage);
Stage parse_stage(const std::string& text);

/// Square matrix over every element of the network.  Entry (i, j) is the
/// influence of element i with respect to element j.
struct Supermatrix {
  std::vector<ElementId> index;
  std::vector<ClusterId> cluster_of;  // parallel to index
  Eigen::MatrixXd entries;
  Stage stage = Stage::unweighted;

  std::size_t size() const { return index.size(); }
  std::size_t position(const ElementId& id) const;
  double at(const ElementId& row, const ElementId& col) const;
};

/// Priority vectors keyed by context id.
using PriorityMap = std::map<std::string, PriorityVector>;

/// Places each element-level priority vector into the column of its control
/// element.  Within-cluster vectors go to the goal column.  Cluster-level
/// contexts (criteria vs goal, cluster inner dependence) are not placed here;
/// they feed derive_cluster_weights().  Single-item contexts need no entry in
/// `priorities` (unit weight).  Throws ValidationError naming the first
/// missing context.
Supermatrix assemble_unweighted(const DecisionNetwork& network,
                                const std::vector<ComparisonContext>& contexts,
                                const PriorityMap& priorities);

/// Block weights: weights[column cluster][row cluster].
struct ClusterWeights {
  std::map<ClusterId, std::map<ClusterId, double>> by_column;

  double get(const ClusterId& column, const ClusterId& row) const;
  bool has_column(const ClusterId& column) const { return by_column.contains(column); }
};

/// Block weights implied by the cluster-level contexts:
///  - goal column: criteria-vs-goal priorities;
///  - criteria column C with a controlling-C vector p over m criteria
///    clusters: alternatives 1/2, C itself (1/m)/2, other clusters
///    ((m-1)/m) p(k) / 2;
///  - any other column: no entry (equal block weights at weighting time).
ClusterWeights derive_cluster_weights(const DecisionNetwork& network,
                                      const std::vector<ComparisonContext>& contexts,
                                      const PriorityMap& priorities);

/// Multiplies each block by its cluster weight and rescales every column to
/// sum to one.  Columns with no weight entry use equal weights over their
/// nonzero blocks.  All-zero columns become identity columns.  Throws
/// ValidationError for a negative weight or a nonzero column whose weighted
/// blocks all vanish.
Supermatrix weight_and_normalize(const Supermatrix& unweighted, const ClusterWeights& weights);

struct LimitResult {
  Supermatrix matrix;
  long long power = 0;   // exponent of the last even power computed
  bool cesaro = false;   // period-2 behaviour averaged
  double residual = 0.0;
};

/// Raises a column-stochastic matrix to powers 2, 4, 8, ... until successive
/// powers agree within `tol` (max-norm).  If the squared sequence settles but
/// M^(2k) and M^(2k+1) stay apart, returns their average.  Throws
/// ComputationError once the power would exceed `max_pow`.
LimitResult limit(const Supermatrix& weighted, double tol = 1e-10, long long max_pow = 1'000'000);

struct SynthesizedPriorities {
  std::vector<ElementId> alternatives;
  std::vector<double> raw;
  std::vector<double> normals;
  std::vector<double> ideals;

  double normal_of(const ElementId& id) const;
};

/// Normalizes raw alternative weights (normals sum to one, ideals divide by
/// the maximum).  Throws ComputationError when every raw value is zero.
SynthesizedPriorities synthesize(std::vector<ElementId> alternatives, std::vector<double> raw);

/// Reads the alternatives rows of the goal column of a limit supermatrix.
SynthesizedPriorities synthesize_alternatives(const Supermatrix& limit_matrix,
                                              const DecisionNetwork& network);

}  // namespace riskweave

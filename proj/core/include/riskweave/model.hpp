#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace riskweave {

using ElementId = std::string;
using ClusterId = std::string;
/// Either an ElementId or a ClusterId, depending on the context level.
using NodeId = std::string;

enum class ClusterKind { goal, criteria, alternatives };
enum class EdgeLevel { element, cluster };

const char* to_string(ClusterKind kind);
const char* to_string(EdgeLevel level);
ClusterKind parse_cluster_kind(const std::string& text);
EdgeLevel parse_edge_level(const std::string& text);

struct Element {
  ElementId id;
  std::string label;

  bool operator==(const Element&) const = default;
};

struct Cluster {
  ClusterId id;
  std::string label;
  ClusterKind kind = ClusterKind::criteria;
  std::vector<Element> elements;

  bool operator==(const Cluster&) const = default;
};

/// `source` depends on `target`: when `source` is the control node, `target`
/// is one of the items compared under it.
struct DependencyEdge {
  NodeId source;
  NodeId target;
  EdgeLevel level = EdgeLevel::element;

  bool operator==(const DependencyEdge&) const = default;
};

struct NetworkDefinition {
  std::string name;
  std::string description;
  std::vector<Cluster> clusters;
  std::vector<DependencyEdge> edges;

  bool operator==(const NetworkDefinition&) const = default;
};

enum class ContextKind {
  criteria_vs_goal,     // criteria clusters compared under the goal
  cluster_inner,        // criteria clusters compared under one controlling cluster
  within_cluster,       // elements of one criteria cluster
  element_inner,        // inner-dependence elements under one controlling element
  alternatives,         // alternatives compared under one criteria element
};

const char* to_string(ContextKind kind);

/// One pairwise-comparison task: the items in `compared` are judged against
/// each other with respect to `control`.
struct ComparisonContext {
  std::string id;
  ContextKind kind = ContextKind::alternatives;
  NodeId control;
  std::string control_label;
  std::vector<NodeId> compared;
  std::vector<std::string> compared_labels;

  std::size_t size() const { return compared.size(); }
  /// Contexts with a single compared item carry an implicit unit priority.
  bool needs_judgments() const { return compared.size() >= 2; }
  std::optional<std::size_t> index_of(const NodeId& node) const;
  std::string question(std::size_t a, std::size_t b) const;

  bool operator==(const ComparisonContext&) const = default;
};

/// Validated ANP network: one goal cluster holding the goal element, one or
/// more criteria clusters, one alternatives cluster.  Immutable once built.
class DecisionNetwork {
 public:
  const std::string& name() const { return def_.name; }
  const std::string& description() const { return def_.description; }
  const std::vector<Cluster>& clusters() const { return def_.clusters; }
  const std::vector<DependencyEdge>& edges() const { return def_.edges; }

  const Cluster& goal_cluster() const { return def_.clusters[goal_]; }
  const Cluster& alternatives_cluster() const { return def_.clusters[alternatives_]; }
  const Element& goal() const { return goal_cluster().elements.front(); }
  std::vector<const Cluster*> criteria_clusters() const;

  /// All elements in declaration order (goal, criteria, alternatives as declared).
  const std::vector<ElementId>& element_order() const { return element_order_; }
  std::size_t element_count() const { return element_order_.size(); }

  bool has_element(const ElementId& id) const { return element_cluster_.contains(id); }
  bool has_cluster(const ClusterId& id) const { return cluster_index_.contains(id); }
  const Cluster& cluster(const ClusterId& id) const;
  const ClusterId& cluster_of(const ElementId& id) const;
  const std::string& label_of(const NodeId& id) const;
  /// Position of an element in element_order().
  std::size_t position(const ElementId& id) const;

  /// Targets of edges from `source` at the given level, in declaration order.
  std::vector<NodeId> dependents(const NodeId& source, EdgeLevel level) const;

  NetworkDefinition to_definition() const { return def_; }

  bool operator==(const DecisionNetwork& other) const { return def_ == other.def_; }

 private:
  friend DecisionNetwork build_network(NetworkDefinition definition);

  NetworkDefinition def_;
  std::size_t goal_ = 0;
  std::size_t alternatives_ = 0;
  std::vector<ElementId> element_order_;
  std::unordered_map<ElementId, ClusterId> element_cluster_;
  std::unordered_map<ElementId, std::size_t> element_position_;
  std::unordered_map<ClusterId, std::size_t> cluster_index_;
  std::unordered_map<NodeId, std::string> labels_;
};

/// Validates a definition.  Throws ValidationError on duplicate ids, dangling
/// edge endpoints, a missing goal or alternatives cluster, or empty clusters.
DecisionNetwork build_network(NetworkDefinition definition);

/// Every comparison task implied by the network, in a fixed order: criteria
/// vs goal, inner dependence per controlling cluster, sub-criteria within each
/// cluster, inner dependence per controlling element, alternatives per
/// criteria element.
std::vector<ComparisonContext> comparison_contexts(const DecisionNetwork& network);

}  // namespace riskweave

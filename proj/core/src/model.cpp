#include "riskweave/model.hpp"

#include <algorithm>
#include <unordered_set>

#include "riskweave/errors.hpp"

namespace riskweave {

const char* to_string(ClusterKind kind) {
  switch (kind) {
    case ClusterKind::goal: return "goal";
    case ClusterKind::criteria: return "criteria";
    case ClusterKind::alternatives: return "alternatives";
  }
  return "?";
}

const char* to_string(EdgeLevel level) {
  return level == EdgeLevel::element ? "element" : "cluster";
}

const char* to_string(ContextKind kind) {
  switch (kind) {
    case ContextKind::criteria_vs_goal: return "criteria_vs_goal";
    case ContextKind::cluster_inner: return "cluster_inner";
    case ContextKind::within_cluster: return "within_cluster";
    case ContextKind::element_inner: return "element_inner";
    case ContextKind::alternatives: return "alternatives";
  }
  return "?";
}

ClusterKind parse_cluster_kind(const std::string& text) {
  if (text == "goal") return ClusterKind::goal;
  if (text == "criteria") return ClusterKind::criteria;
  if (text == "alternatives") return ClusterKind::alternatives;
  throw ValidationError("unknown cluster kind '" + text + "'");
}

EdgeLevel parse_edge_level(const std::string& text) {
  if (text == "element") return EdgeLevel::element;
  if (text == "cluster") return EdgeLevel::cluster;
  throw ValidationError("unknown edge level '" + text + "'");
}

std::optional<std::size_t> ComparisonContext::index_of(const NodeId& node) const {
  auto it = std::find(compared.begin(), compared.end(), node);
  if (it == compared.end()) return std::nullopt;
  return static_cast<std::size_t>(it - compared.begin());
}

std::string ComparisonContext::question(std::size_t a, std::size_t b) const {
  return "How important is " + compared_labels.at(a) + " relative to " +
         compared_labels.at(b) + " when " + control_label + " is controlled?";
}

std::vector<const Cluster*> DecisionNetwork::criteria_clusters() const {
  std::vector<const Cluster*> out;
  for (const auto& c : def_.clusters)
    if (c.kind == ClusterKind::criteria) out.push_back(&c);
  return out;
}

const Cluster& DecisionNetwork::cluster(const ClusterId& id) const {
  auto it = cluster_index_.find(id);
  if (it == cluster_index_.end()) throw NotFoundError("unknown cluster '" + id + "'");
  return def_.clusters[it->second];
}

const ClusterId& DecisionNetwork::cluster_of(const ElementId& id) const {
  auto it = element_cluster_.find(id);
  if (it == element_cluster_.end()) throw NotFoundError("unknown element '" + id + "'");
  return it->second;
}

const std::string& DecisionNetwork::label_of(const NodeId& id) const {
  auto it = labels_.find(id);
  if (it == labels_.end()) throw NotFoundError("unknown node '" + id + "'");
  return it->second;
}

std::size_t DecisionNetwork::position(const ElementId& id) const {
  auto it = element_position_.find(id);
  if (it == element_position_.end()) throw NotFoundError("unknown element '" + id + "'");
  return it->second;
}

std::vector<NodeId> DecisionNetwork::dependents(const NodeId& source, EdgeLevel level) const {
  std::vector<NodeId> out;
  for (const auto& e : def_.edges)
    if (e.level == level && e.source == source) out.push_back(e.target);
  return out;
}

DecisionNetwork build_network(NetworkDefinition definition) {
  DecisionNetwork net;
  net.def_ = std::move(definition);
  const auto& clusters = net.def_.clusters;

  if (clusters.empty()) throw ValidationError("network has no clusters");

  std::optional<std::size_t> goal, alternatives;
  std::size_t criteria_count = 0;
  std::unordered_set<std::string> ids;
  for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
    const Cluster& c = clusters[ci];
    if (c.id.empty()) throw ValidationError("cluster with empty id");
    if (!ids.insert(c.id).second) throw ValidationError("duplicate id '" + c.id + "'");
    net.cluster_index_[c.id] = ci;
    net.labels_[c.id] = c.label.empty() ? c.id : c.label;

    switch (c.kind) {
      case ClusterKind::goal:
        if (goal) throw ValidationError("more than one goal cluster");
        if (c.elements.size() != 1)
          throw ValidationError("goal cluster '" + c.id + "' must hold exactly one element");
        goal = ci;
        break;
      case ClusterKind::alternatives:
        if (alternatives) throw ValidationError("more than one alternatives cluster");
        if (c.elements.size() < 2)
          throw ValidationError("alternatives cluster '" + c.id + "' needs at least 2 elements");
        alternatives = ci;
        break;
      case ClusterKind::criteria:
        if (c.elements.empty())
          throw ValidationError("criteria cluster '" + c.id + "' is empty");
        ++criteria_count;
        break;
    }
  }
  if (!goal) throw ValidationError("missing goal cluster");
  if (!alternatives) throw ValidationError("missing alternatives cluster");
  if (criteria_count == 0) throw ValidationError("network has no criteria cluster");
  net.goal_ = *goal;
  net.alternatives_ = *alternatives;

  for (const Cluster& c : clusters) {
    for (const Element& e : c.elements) {
      if (e.id.empty()) throw ValidationError("element with empty id in cluster '" + c.id + "'");
      if (!ids.insert(e.id).second) throw ValidationError("duplicate id '" + e.id + "'");
      net.element_cluster_[e.id] = c.id;
      net.element_position_[e.id] = net.element_order_.size();
      net.element_order_.push_back(e.id);
      net.labels_[e.id] = e.label.empty() ? e.id : e.label;
    }
  }

  auto is_criteria_cluster = [&](const NodeId& id) {
    auto it = net.cluster_index_.find(id);
    return it != net.cluster_index_.end() && clusters[it->second].kind == ClusterKind::criteria;
  };
  auto is_criteria_element = [&](const NodeId& id) {
    auto it = net.element_cluster_.find(id);
    return it != net.element_cluster_.end() && is_criteria_cluster(it->second);
  };

  std::unordered_set<std::string> seen_edges;
  for (const DependencyEdge& e : net.def_.edges) {
    const std::string key = std::string(to_string(e.level)) + '\n' + e.source + '\n' + e.target;
    if (!seen_edges.insert(key).second)
      throw ValidationError("duplicate edge " + e.source + " -> " + e.target);

    if (e.level == EdgeLevel::cluster) {
      for (const NodeId* end : {&e.source, &e.target}) {
        if (!net.cluster_index_.contains(*end))
          throw ValidationError("dangling edge endpoint '" + *end + "'");
        if (!is_criteria_cluster(*end))
          throw ValidationError("cluster edge endpoint '" + *end + "' is not a criteria cluster");
      }
      if (e.source == e.target)
        throw ValidationError("cluster self-dependence '" + e.source + "' is not supported");
    } else {
      for (const NodeId* end : {&e.source, &e.target}) {
        if (!net.element_cluster_.contains(*end))
          throw ValidationError("dangling edge endpoint '" + *end + "'");
        if (!is_criteria_element(*end))
          throw ValidationError("element edge endpoint '" + *end + "' is not a criteria element");
      }
    }
  }

  // Element edges need their clusters to be identical or connected.
  for (const DependencyEdge& e : net.def_.edges) {
    if (e.level != EdgeLevel::element) continue;
    const ClusterId& a = net.element_cluster_.at(e.source);
    const ClusterId& b = net.element_cluster_.at(e.target);
    if (a == b) continue;
    const bool connected = std::any_of(
        net.def_.edges.begin(), net.def_.edges.end(), [&](const DependencyEdge& c) {
          return c.level == EdgeLevel::cluster && c.source == a && c.target == b;
        });
    if (!connected)
      throw ValidationError("element edge " + e.source + " -> " + e.target +
                            " crosses unconnected clusters " + a + " -> " + b);
  }
  return net;
}

namespace {

ComparisonContext make_context(const DecisionNetwork& net, std::string id, ContextKind kind,
                               const NodeId& control, std::vector<NodeId> compared) {
  ComparisonContext ctx;
  ctx.id = std::move(id);
  ctx.kind = kind;
  ctx.control = control;
  ctx.control_label = net.label_of(control);
  ctx.compared = std::move(compared);
  for (const auto& node : ctx.compared) ctx.compared_labels.push_back(net.label_of(node));
  return ctx;
}

}  // namespace

std::vector<ComparisonContext> comparison_contexts(const DecisionNetwork& net) {
  std::vector<ComparisonContext> out;
  const auto criteria = net.criteria_clusters();

  std::vector<NodeId> criteria_ids;
  for (const Cluster* c : criteria) criteria_ids.push_back(c->id);
  out.push_back(make_context(net, "goal", ContextKind::criteria_vs_goal, net.goal().id,
                             criteria_ids));

  // Compared sets follow cluster/element declaration order, not edge order.
  auto in_cluster_order = [&](std::vector<NodeId> nodes) {
    std::sort(nodes.begin(), nodes.end(), [&](const NodeId& a, const NodeId& b) {
      auto pa = std::find(criteria_ids.begin(), criteria_ids.end(), a);
      auto pb = std::find(criteria_ids.begin(), criteria_ids.end(), b);
      return pa < pb;
    });
    return nodes;
  };
  auto in_element_order = [&](std::vector<NodeId> nodes) {
    std::sort(nodes.begin(), nodes.end(), [&](const NodeId& a, const NodeId& b) {
      return net.position(a) < net.position(b);
    });
    return nodes;
  };

  for (const Cluster* c : criteria) {
    auto deps = net.dependents(c->id, EdgeLevel::cluster);
    if (deps.empty()) continue;
    out.push_back(make_context(net, "cluster-inner:" + c->id, ContextKind::cluster_inner, c->id,
                               in_cluster_order(std::move(deps))));
  }

  for (const Cluster* c : criteria) {
    std::vector<NodeId> members;
    for (const Element& e : c->elements) members.push_back(e.id);
    out.push_back(make_context(net, "within:" + c->id, ContextKind::within_cluster, c->id,
                               std::move(members)));
  }

  for (const Cluster* c : criteria) {
    for (const Element& e : c->elements) {
      auto deps = net.dependents(e.id, EdgeLevel::element);
      if (deps.empty()) continue;
      out.push_back(make_context(net, "inner:" + e.id, ContextKind::element_inner, e.id,
                                 in_element_order(std::move(deps))));
    }
  }

  std::vector<NodeId> alternatives;
  for (const Element& e : net.alternatives_cluster().elements) alternatives.push_back(e.id);
  for (const Cluster* c : criteria)
    for (const Element& e : c->elements)
      out.push_back(make_context(net, "alternatives:" + e.id, ContextKind::alternatives, e.id,
                                 alternatives));
  return out;
}

}  // namespace riskweave

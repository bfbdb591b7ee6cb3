#include "riskweave/supermatrix.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "riskweave/errors.hpp"

namespace riskweave {

const char* to_string(Stage stage) {
  switch (stage) {
    case Stage::unweighted: return "unweighted";
    case Stage::weighted: return "weighted";
    case Stage::limit: return "limit";
  }
  return "?";
}

Stage parse_stage(const std::string& text) {
  if (text == "unweighted") return Stage::unweighted;
  if (text == "weighted") return Stage::weighted;
  if (text == "limit") return Stage::limit;
  throw ValidationError("unknown supermatrix stage '" + text + "'");
}

std::size_t Supermatrix::position(const ElementId& id) const {
  auto it = std::find(index.begin(), index.end(), id);
  if (it == index.end()) throw NotFoundError("element '" + id + "' not in supermatrix");
  return static_cast<std::size_t>(it - index.begin());
}

double Supermatrix::at(const ElementId& row, const ElementId& col) const {
  return entries(static_cast<Eigen::Index>(position(row)), static_cast<Eigen::Index>(position(col)));
}

double ClusterWeights::get(const ClusterId& column, const ClusterId& row) const {
  auto c = by_column.find(column);
  if (c == by_column.end()) return 0.0;
  auto r = c->second.find(row);
  return r == c->second.end() ? 0.0 : r->second;
}

namespace {

const PriorityVector* lookup(const PriorityMap& priorities, const ComparisonContext& ctx) {
  auto it = priorities.find(ctx.id);
  if (it != priorities.end()) return &it->second;
  if (!ctx.needs_judgments()) return nullptr;
  throw ValidationError("missing priority vector for context '" + ctx.id + "'");
}

double weight_in(const PriorityVector* pv, const ComparisonContext& ctx, std::size_t i) {
  if (!pv) return 1.0;
  return pv->weight_of(ctx.compared[i]);
}

}  // namespace

Supermatrix assemble_unweighted(const DecisionNetwork& network,
                                const std::vector<ComparisonContext>& contexts,
                                const PriorityMap& priorities) {
  Supermatrix sm;
  sm.index = network.element_order();
  for (const auto& id : sm.index) sm.cluster_of.push_back(network.cluster_of(id));
  const auto n = static_cast<Eigen::Index>(sm.index.size());
  sm.entries = Eigen::MatrixXd::Zero(n, n);
  sm.stage = Stage::unweighted;

  const auto goal_col = static_cast<Eigen::Index>(network.position(network.goal().id));
  for (const ComparisonContext& ctx : contexts) {
    Eigen::Index col = 0;
    switch (ctx.kind) {
      case ContextKind::criteria_vs_goal:
      case ContextKind::cluster_inner:
        continue;
      case ContextKind::within_cluster:
        col = goal_col;
        break;
      case ContextKind::element_inner:
      case ContextKind::alternatives:
        col = static_cast<Eigen::Index>(network.position(ctx.control));
        break;
    }
    const PriorityVector* pv = lookup(priorities, ctx);
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      const auto row = static_cast<Eigen::Index>(network.position(ctx.compared[i]));
      sm.entries(row, col) = weight_in(pv, ctx, i);
    }
  }
  return sm;
}

ClusterWeights derive_cluster_weights(const DecisionNetwork& network,
                                      const std::vector<ComparisonContext>& contexts,
                                      const PriorityMap& priorities) {
  ClusterWeights weights;
  const auto criteria = network.criteria_clusters();
  const double m = static_cast<double>(criteria.size());
  const ClusterId& alternatives = network.alternatives_cluster().id;

  for (const ComparisonContext& ctx : contexts) {
    if (ctx.kind == ContextKind::criteria_vs_goal) {
      const PriorityVector* pv = lookup(priorities, ctx);
      auto& column = weights.by_column[network.goal_cluster().id];
      for (std::size_t i = 0; i < ctx.size(); ++i) column[ctx.compared[i]] = weight_in(pv, ctx, i);
    } else if (ctx.kind == ContextKind::cluster_inner) {
      const PriorityVector* pv = lookup(priorities, ctx);
      auto& column = weights.by_column[ctx.control];
      column[alternatives] = 0.5;
      column[ctx.control] = 0.5 / m;
      for (std::size_t i = 0; i < ctx.size(); ++i)
        column[ctx.compared[i]] = 0.5 * (m - 1.0) / m * weight_in(pv, ctx, i);
    }
  }
  return weights;
}

Supermatrix weight_and_normalize(const Supermatrix& unweighted, const ClusterWeights& weights) {
  Supermatrix out = unweighted;
  out.stage = Stage::weighted;
  const auto n = static_cast<Eigen::Index>(unweighted.size());

  for (const auto& [column, rows] : weights.by_column)
    for (const auto& [row, w] : rows)
      if (w < 0.0 || !std::isfinite(w))
        throw ValidationError("negative cluster weight " + row + " in column " + column);

  for (Eigen::Index j = 0; j < n; ++j) {
    auto col = out.entries.col(j);
    for (Eigen::Index i = 0; i < n; ++i)
      if (col(i) < 0.0)
        throw ValidationError("negative supermatrix entry at " + unweighted.index[i] + ", " +
                              unweighted.index[j]);
    if (col.sum() == 0.0) {
      col(j) = 1.0;
      continue;
    }
    const ClusterId& col_cluster = unweighted.cluster_of[j];
    if (weights.has_column(col_cluster)) {
      for (Eigen::Index i = 0; i < n; ++i) col(i) *= weights.get(col_cluster, unweighted.cluster_of[i]);
    } else {
      std::set<ClusterId> blocks;
      for (Eigen::Index i = 0; i < n; ++i)
        if (col(i) != 0.0) blocks.insert(unweighted.cluster_of[i]);
      col /= static_cast<double>(blocks.size());
    }
    const double sum = col.sum();
    if (!(sum > 0.0))
      throw ValidationError("column " + unweighted.index[j] +
                            " is nonzero but its weighted blocks vanish");
    col /= sum;
  }
  return out;
}

LimitResult limit(const Supermatrix& weighted, double tol, long long max_pow) {
  const Eigen::MatrixXd& m = weighted.entries;
  Eigen::MatrixXd power = m;
  long long exponent = 1;
  Eigen::MatrixXd prev_odd;

  while (exponent <= max_pow / 2) {
    Eigen::MatrixXd squared = power * power;
    exponent *= 2;
    const double even_delta = (squared - power).cwiseAbs().maxCoeff();
    Eigen::MatrixXd odd = squared * m;
    const double parity_gap = (odd - squared).cwiseAbs().maxCoeff();

    if (even_delta < tol && parity_gap < tol) {
      LimitResult r{weighted, exponent, false, even_delta};
      r.matrix.entries = std::move(squared);
      r.matrix.stage = Stage::limit;
      return r;
    }
    // Period two: the even powers and the odd powers each settle, apart.
    if (prev_odd.size() != 0 && even_delta < tol &&
        (odd - prev_odd).cwiseAbs().maxCoeff() < tol) {
      LimitResult r{weighted, exponent, true, parity_gap};
      r.matrix.entries = 0.5 * (squared + odd);
      r.matrix.stage = Stage::limit;
      return r;
    }
    prev_odd = std::move(odd);
    power = std::move(squared);
  }
  throw ComputationError("supermatrix limit did not converge by power " + std::to_string(exponent) +
                         " (max_pow " + std::to_string(max_pow) +
                         "); no period-2 cycle detected");
}

double SynthesizedPriorities::normal_of(const ElementId& id) const {
  for (std::size_t i = 0; i < alternatives.size(); ++i)
    if (alternatives[i] == id) return normals[i];
  throw NotFoundError("alternative '" + id + "' not synthesized");
}

SynthesizedPriorities synthesize(std::vector<ElementId> alternatives, std::vector<double> raw) {
  SynthesizedPriorities s;
  s.alternatives = std::move(alternatives);
  s.raw = std::move(raw);
  double sum = 0.0, max = 0.0;
  for (double v : s.raw) {
    sum += v;
    max = std::max(max, v);
  }
  if (!(sum > 0.0))
    throw ComputationError("alternatives receive no weight: the model never reaches them");
  for (double v : s.raw) {
    s.normals.push_back(v / sum);
    s.ideals.push_back(v / max);
  }
  return s;
}

SynthesizedPriorities synthesize_alternatives(const Supermatrix& limit_matrix,
                                              const DecisionNetwork& network) {
  const auto goal = static_cast<Eigen::Index>(limit_matrix.position(network.goal().id));
  std::vector<ElementId> ids;
  std::vector<double> raw;
  for (const Element& e : network.alternatives_cluster().elements) {
    ids.push_back(e.id);
    raw.push_back(limit_matrix.entries(static_cast<Eigen::Index>(limit_matrix.position(e.id)), goal));
  }
  return synthesize(std::move(ids), std::move(raw));
}

}  // namespace riskweave

#include "riskweave/pipeline.hpp"

#include <algorithm>
#include <set>

namespace riskweave {

using nlohmann::json;

const char* to_string(WeightsSource source) {
  return source == WeightsSource::computed ? "computed" : "paper";
}

WeightsSource parse_weights_source(const std::string& text) {
  if (text == "computed") return WeightsSource::computed;
  if (text == "paper") return WeightsSource::paper;
  throw ValidationError("unknown weights source '" + text + "' (expected computed or paper)");
}

namespace {

std::string describe(const std::vector<MissingPair>& missing) {
  std::string text = std::to_string(missing.size()) + " unjudged pair(s)";
  const std::size_t shown = std::min<std::size_t>(missing.size(), 5);
  for (std::size_t i = 0; i < shown; ++i)
    text += (i == 0 ? ": " : ", ") + missing[i].context + " [" + missing[i].row + " / " +
            missing[i].col + "]";
  if (missing.size() > shown) text += ", ...";
  return text;
}

}  // namespace

IncompleteJudgmentsError::IncompleteJudgmentsError(std::vector<MissingPair> missing)
    : ValidationError("incomplete judgments: " + describe(missing)), missing_(std::move(missing)) {}

std::vector<std::string> IncompleteJudgmentsError::contexts() const {
  std::vector<std::string> out;
  for (const MissingPair& m : missing_)
    if (out.empty() || out.back() != m.context) out.push_back(m.context);
  return out;
}

std::vector<MissingPair> missing_pairs(const std::vector<ComparisonContext>& contexts,
                                       std::span<const Judgment> judgments) {
  std::vector<MissingPair> out;
  for (const ComparisonContext& ctx : contexts)
    for (auto& [a, b] : completeness(ctx, judgments).missing) out.push_back({ctx.id, a, b});
  return out;
}

ContextResult evaluate_context(const ComparisonContext& context,
                               std::span<const Judgment> judgments, RandomIndexTable table) {
  ContextResult r;
  r.context = context;
  if (!context.needs_judgments()) {
    r.priorities = {context.id, context.compared, std::vector<double>(context.size(), 1.0)};
    r.consistency = consistency(context.size(), static_cast<double>(context.size()), table);
    return r;
  }
  r.matrix = matrix_from_judgments(context, judgments);
  EigenResult eig = principal_eigenvector(r.matrix);
  r.priorities = std::move(eig.priorities);
  r.iterations = eig.iterations;
  r.consistency = consistency(context.size(), eig.lambda_max, table);
  return r;
}

std::vector<ContextResult> evaluate_contexts(const ModelDocument& model,
                                             std::span<const Judgment> judgments) {
  std::vector<ContextResult> out;
  for (const ComparisonContext& ctx : model.contexts)
    if (completeness(ctx, judgments).complete())
      out.push_back(evaluate_context(ctx, judgments, model.random_index));
  return out;
}

const Supermatrix& PipelineResult::stage(Stage s) const {
  switch (s) {
    case Stage::unweighted: return unweighted;
    case Stage::weighted: return weighted;
    case Stage::limit: break;
  }
  return limit.matrix;
}

ExponentWeights correct_weights(const SynthesizedPriorities& p) {
  return correct_weights(p.normal_of("severity"), p.normal_of("occurrence"),
                         p.normal_of("detection"));
}

PipelineResult run_pipeline(const ModelDocument& model, std::span<const Judgment> judgments,
                            const PipelineOptions& options) {
  if (auto missing = missing_pairs(model.contexts, judgments); !missing.empty())
    throw IncompleteJudgmentsError(std::move(missing));

  PipelineResult r;
  r.weights_source = options.weights_source;
  PriorityMap priorities;
  for (const ComparisonContext& ctx : model.contexts) {
    r.contexts.push_back(evaluate_context(ctx, judgments, model.random_index));
    priorities.emplace(ctx.id, r.contexts.back().priorities);
  }

  r.unweighted = assemble_unweighted(model.network, model.contexts, priorities);
  const ClusterWeights blocks = derive_cluster_weights(model.network, model.contexts, priorities);
  r.weighted = weight_and_normalize(r.unweighted, blocks);
  r.limit = limit(r.weighted, options.limit_tol, options.limit_max_pow);
  r.computed = synthesize_alternatives(r.limit.matrix, model.network);

  const bool fmea = !model.fmea_items.empty();
  if (options.weights_source == WeightsSource::paper) {
    if (!model.precomputed)
      throw ValidationError("model '" + model.name + "' carries no precomputed weights");
    const PrecomputedWeights& pw = *model.precomputed;
    std::vector<ElementId> ids;
    std::vector<double> raw;
    const auto& source = pw.raw.empty() ? pw.normals : pw.raw;
    for (const Element& e : model.network.alternatives_cluster().elements) {
      auto it = source.find(e.id);
      if (it == source.end())
        throw ValidationError("precomputed weights lack alternative '" + e.id + "'");
      ids.push_back(e.id);
      raw.push_back(it->second);
    }
    r.used = synthesize(std::move(ids), std::move(raw));
    if (pw.exponents) {
      r.exponents = *pw.exponents;
      r.exponent_source = "pinned";
    } else if (fmea) {
      r.exponents = correct_weights(r.used);
      r.exponent_source = "corrected precomputed normals";
    }
  } else {
    r.used = r.computed;
    if (fmea) {
      r.exponents = correct_weights(r.used);
      r.exponent_source = "corrected limit normals";
    }
  }

  if (fmea) {
    r.records = score(model.fmea_items, r.exponents);
    rank(r.records, RankKey::classic);
    rank(r.records, RankKey::weighted);
    r.comparison = compare(r.records);
  }
  return r;
}

json to_json(const ConsistencyReport& c) {
  return {{"n", c.n},
          {"lambda_max", c.lambda_max},
          {"ci", c.ci},
          {"cr", c.cr},
          {"ri", c.ri},
          {"acceptable", c.acceptable()}};
}

json to_json(const Supermatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.entries.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.entries.cols(); ++j) row.push_back(m.entries(i, j));
    rows.push_back(std::move(row));
  }
  return {{"stage", to_string(m.stage)}, {"index", m.index}, {"clusters", m.cluster_of}, {"entries", rows}};
}

json to_json(const ComparisonReport& report) {
  json rows = json::array();
  for (const ComparisonRow& r : report.rows)
    rows.push_back({{"cause", r.cause},
                    {"failure_mode", r.failure_mode},
                    {"rpn_classic", r.rpn_classic},
                    {"rpn_weighted", r.rpn_weighted},
                    {"rank_classic", r.rank_classic},
                    {"rank_weighted", r.rank_weighted},
                    {"rank_shift", r.rank_shift}});
  auto ties = [](const std::map<int, int>& m) {
    json out = json::array();
    for (auto [rank, size] : m) out.push_back({{"rank", rank}, {"size", size}});
    return out;
  };
  json shifts = json::array();
  for (const ComparisonRow& r : largest_shifts(report, 3))
    shifts.push_back({{"cause", r.cause}, {"rank_classic", r.rank_classic},
                      {"rank_weighted", r.rank_weighted}, {"rank_shift", r.rank_shift}});
  return {{"rows", rows},
          {"classic_ties", ties(report.classic_ties)},
          {"weighted_ties", ties(report.weighted_ties)},
          {"weighted_above_classic", report.weighted_above_classic},
          {"weighted_below_classic", report.weighted_below_classic},
          {"spearman", report.spearman},
          {"largest_shifts", shifts}};
}

namespace {

json weights_json(const SynthesizedPriorities& p) {
  json out = json::array();
  for (std::size_t i = 0; i < p.alternatives.size(); ++i)
    out.push_back({{"id", p.alternatives[i]},
                   {"raw", p.raw[i]},
                   {"normal", p.normals[i]},
                   {"ideal", p.ideals[i]}});
  return out;
}

}  // namespace

json results_json(const ModelDocument& model, const PipelineResult& r, const std::string& hash) {
  json consistency = json::array();
  for (const ContextResult& c : r.contexts) {
    if (!c.context.needs_judgments()) continue;
    json row = to_json(c.consistency);
    row["context"] = c.context.id;
    consistency.push_back(std::move(row));
  }

  json table = json::array();
  for (const RiskRecord& rec : r.records)
    table.push_back({{"cause", rec.item.cause},
                     {"failure_mode", rec.item.failure_mode},
                     {"s", rec.item.s},
                     {"o", rec.item.o},
                     {"d", rec.item.d},
                     {"rpn_classic", rec.rpn_classic},
                     {"rpn_weighted", rec.rpn_weighted},
                     {"rank_classic", rec.rank_classic},
                     {"rank_weighted", rec.rank_weighted}});

  json out;
  out["model"] = model.name;
  out["judgment_log_hash"] = hash;
  out["weights_source"] = to_string(r.weights_source);
  out["provenance"] = {
      {"stages", {"priorities", "unweighted", "cluster_weights", "weighted", "limit", "synthesis",
                  "correction", "rpn", "ranking", "comparison"}},
      {"random_index", to_string(model.random_index)},
      {"limit", {{"power", r.limit.power}, {"cesaro", r.limit.cesaro}, {"residual", r.limit.residual}}},
      {"exponent_source", r.exponent_source}};
  out["consistency"] = consistency;
  out["alternative_weights"] = weights_json(r.used);
  out["computed_alternative_weights"] = weights_json(r.computed);
  if (!r.records.empty())
    out["exponents"] = {{"severity", r.exponents.severity},
                        {"occurrence", r.exponents.occurrence},
                        {"detection", r.exponents.detection}};
  else
    out["exponents"] = nullptr;
  out["rpn_table"] = table;
  out["comparison"] = r.comparison ? to_json(*r.comparison) : json(nullptr);
  return out;
}

}  // namespace riskweave

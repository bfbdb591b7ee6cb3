#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "riskweave/analysis.hpp"
#include "riskweave/errors.hpp"
#include "riskweave/fmea.hpp"
#include "riskweave/priority.hpp"
#include "riskweave/store.hpp"
#include "riskweave/supermatrix.hpp"

namespace riskweave {

/// Where the FMEA exponents come from: the limit synthesis of the supplied
/// judgments, or the weights pinned in the model document.
enum class WeightsSource { computed, paper };

const char* to_string(WeightsSource source);
WeightsSource parse_weights_source(const std::string& text);

struct MissingPair {
  std::string context;
  NodeId row;
  NodeId col;
};

/// Not every comparison context has all of its pairs judged.
class IncompleteJudgmentsError : public ValidationError {
 public:
  explicit IncompleteJudgmentsError(std::vector<MissingPair> missing);

  const std::vector<MissingPair>& missing() const noexcept { return missing_; }
  /// Distinct context ids, in emission order.
  std::vector<std::string> contexts() const;

 private:
  std::vector<MissingPair> missing_;
};

std::vector<MissingPair> missing_pairs(const std::vector<ComparisonContext>& contexts,
                                       std::span<const Judgment> judgments);

struct ContextResult {
  ComparisonContext context;
  ComparisonMatrix matrix;  // empty for single-item contexts
  PriorityVector priorities;
  ConsistencyReport consistency;
  int iterations = 0;
};

/// Priority vector and consistency of one complete context.
ContextResult evaluate_context(const ComparisonContext& context,
                               std::span<const Judgment> judgments, RandomIndexTable table);

/// Every context whose pairs are all judged; incomplete ones are skipped.
std::vector<ContextResult> evaluate_contexts(const ModelDocument& model,
                                             std::span<const Judgment> judgments);

struct PipelineOptions {
  WeightsSource weights_source = WeightsSource::computed;
  double limit_tol = 1e-10;
  long long limit_max_pow = 1'000'000;
};

struct PipelineResult {
  WeightsSource weights_source = WeightsSource::computed;
  std::vector<ContextResult> contexts;
  Supermatrix unweighted;
  Supermatrix weighted;
  LimitResult limit;
  SynthesizedPriorities computed;  // from the limit supermatrix
  SynthesizedPriorities used;      // feeds the exponents
  ExponentWeights exponents;
  std::string exponent_source;
  std::vector<RiskRecord> records;  // input order, both ranks set
  std::optional<ComparisonReport> comparison;

  const Supermatrix& stage(Stage s) const;
};

/// Priorities, supermatrix, limit, synthesis, exponent correction, RPNs,
/// ranks and comparison.  Throws IncompleteJudgmentsError when any context
/// lacks a pair, ComputationError when the limit does not settle.
PipelineResult run_pipeline(const ModelDocument& model, std::span<const Judgment> judgments,
                            const PipelineOptions& options = {});

/// Exponents from normalized weights keyed by severity/occurrence/detection.
ExponentWeights correct_weights(const SynthesizedPriorities& normals);

nlohmann::json to_json(const ConsistencyReport& report);
nlohmann::json to_json(const Supermatrix& matrix);
nlohmann::json to_json(const ComparisonReport& report);
/// Results payload.  Object keys are sorted and arrays keep pipeline order,
/// so equal inputs dump to identical bytes.
nlohmann::json results_json(const ModelDocument& model, const PipelineResult& result,
                            const std::string& judgment_hash);

}  // namespace riskweave

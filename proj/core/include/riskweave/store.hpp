#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "riskweave/fmea.hpp"
#include "riskweave/judgments.hpp"
#include "riskweave/model.hpp"
#include "riskweave/priority.hpp"
#include "riskweave/supermatrix.hpp"

namespace riskweave {

inline constexpr int kSchemaVersion = 1;

/// Transcription note carried by a model document (readings, fills,
/// discrepancies against reported values).
struct ManifestNote {
  std::string kind;
  std::string text;
  std::optional<std::string> context;
};

struct ContextMeta {
  std::string id;
  std::optional<double> reported_cr;
  std::string source;
};

struct AlternateReading {
  std::string label;
  ComparisonMatrix matrix;
  std::string note;
};

struct MatrixRecord {
  ComparisonMatrix matrix;
  std::vector<AlternateReading> alternates;
};

struct PrecomputedWeights {
  std::string source;
  std::map<ElementId, double> raw;
  std::map<ElementId, double> normals;
  std::optional<ExponentWeights> exponents;
};

/// In-memory form of `model.json` (schema v1).
struct ModelDocument {
  std::string name;
  std::string description;
  RandomIndexTable random_index = RandomIndexTable::saaty;
  DecisionNetwork network;
  std::vector<ComparisonContext> contexts;  // derived from the network
  std::vector<ContextMeta> context_meta;
  std::vector<MatrixRecord> matrices;       // document order and orientation
  std::vector<FmeaItem> fmea_items;
  std::optional<PrecomputedWeights> precomputed;
  std::vector<ManifestNote> notes;

  /// Upper-triangle judgments of every matrix, in document order.
  std::vector<Judgment> judgments() const;
  const ComparisonContext& context(const std::string& id) const;
  const ContextMeta* meta(const std::string& id) const;
  const MatrixRecord* matrix(const std::string& context_id) const;
  /// Manifest notes rendered one per line, for surfacing as warnings.
  std::vector<std::string> warnings() const;
};

/// Validates and converts a parsed document.  Throws SchemaError (with a
/// JSON pointer) on structural problems and ValidationError on semantic
/// ones: non-reciprocal matrix, nonpositive or off-scale judgment, unknown id.
ModelDocument load_model(const nlohmann::json& document);
ModelDocument load_model_text(std::string_view text);
/// Throws IoError when the file cannot be read.
ModelDocument load_model_file(const std::filesystem::path& path);

nlohmann::json to_json(const ModelDocument& model);
nlohmann::json to_json(const NetworkDefinition& definition);
NetworkDefinition network_from_json(const nlohmann::json& network, const std::string& path = "/network");

/// The reference model compiled into the library.
std::string_view bundled_fixture_json();
inline constexpr std::string_view kBundledModelName = "paper-anp-fmea";
const ModelDocument& bundled_model();

/// `rpn_table.csv`: cause,S,O,D,rpn_classic,rpn_weighted,rank_classic,rank_weighted
void write_rpn_csv(std::ostream& out, const std::vector<RiskRecord>& records);
/// `supermatrix_<stage>.csv`: header row and first column hold element ids.
void write_supermatrix_csv(std::ostream& out, const Supermatrix& matrix);

}  // namespace riskweave

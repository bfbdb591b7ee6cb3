#include "riskweave/store.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "riskweave/errors.hpp"

namespace riskweave {

using nlohmann::json;

namespace {

const json& require(const json& node, const char* key, const std::string& path) {
  if (!node.is_object()) throw SchemaError(path, "expected an object");
  auto it = node.find(key);
  if (it == node.end()) throw SchemaError(path + "/" + key, "required field missing");
  return *it;
}

std::string require_string(const json& node, const char* key, const std::string& path) {
  const json& v = require(node, key, path);
  if (!v.is_string()) throw SchemaError(path + "/" + key, "expected a string");
  return v.get<std::string>();
}

std::string optional_string(const json& node, const char* key, const std::string& path) {
  auto it = node.find(key);
  if (it == node.end()) return {};
  if (!it->is_string()) throw SchemaError(path + "/" + key, "expected a string");
  return it->get<std::string>();
}

const json& require_array(const json& node, const char* key, const std::string& path) {
  const json& v = require(node, key, path);
  if (!v.is_array()) throw SchemaError(path + "/" + key, "expected an array");
  return v;
}

double require_number(const json& node, const char* key, const std::string& path) {
  const json& v = require(node, key, path);
  if (!v.is_number()) throw SchemaError(path + "/" + key, "expected a number");
  return v.get<double>();
}

int require_int(const json& node, const char* key, const std::string& path) {
  const json& v = require(node, key, path);
  if (!v.is_number_integer()) throw SchemaError(path + "/" + key, "expected an integer");
  return v.get<int>();
}

std::string at(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

/// Parses a full square matrix of "a/b" strings and checks it is a positive
/// reciprocal matrix on the Saaty scale.
ComparisonMatrix parse_matrix(const std::string& context, const std::vector<NodeId>& order,
                              const json& rows, const std::string& path) {
  const std::size_t n = order.size();
  if (!rows.is_array() || rows.size() != n)
    throw SchemaError(path, "expected " + std::to_string(n) + " rows");
  std::vector<std::vector<Rational>> cells(n);
  for (std::size_t i = 0; i < n; ++i) {
    const json& row = rows[i];
    if (!row.is_array() || row.size() != n)
      throw SchemaError(at(path, i), "expected " + std::to_string(n) + " entries");
    for (std::size_t j = 0; j < n; ++j) {
      const json& cell = row[j];
      std::string text;
      if (cell.is_string())
        text = cell.get<std::string>();
      else if (cell.is_number_integer())
        text = std::to_string(cell.get<long long>());
      else
        throw SchemaError(at(at(path, i), j), "expected a rational string such as \"1/7\"");
      try {
        cells[i].push_back(parse_rational(text));
      } catch (const ValidationError& e) {
        throw SchemaError(at(at(path, i), j), e.what());
      }
    }
  }
  std::vector<Rational> upper;
  for (std::size_t i = 0; i < n; ++i) {
    if (cells[i][i] != Rational(1)) throw ValidationError(at(at(path, i), i) + ": diagonal entry must be 1");
    for (std::size_t j = i + 1; j < n; ++j) {
      if (cells[i][j] * cells[j][i] != Rational(1))
        throw ValidationError(at(at(path, i), j) + ": non-reciprocal matrix (" +
                              format_rational(cells[i][j]) + " vs " +
                              format_rational(cells[j][i]) + ")");
      if (!on_saaty_scale(cells[i][j]))
        throw ValidationError(at(at(path, i), j) + ": judgment " + format_rational(cells[i][j]) +
                              " is off the 1/9..9 scale");
      upper.push_back(cells[i][j]);
    }
  }
  return ComparisonMatrix(context, order, std::move(upper));
}

json matrix_rows(const ComparisonMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(format_rational(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::map<ElementId, double> parse_parameter_map(const json& node, const std::string& path,
                                                const DecisionNetwork& network) {
  if (!node.is_object()) throw SchemaError(path, "expected an object");
  std::map<ElementId, double> out;
  for (const auto& [key, value] : node.items()) {
    if (!value.is_number()) throw SchemaError(path + "/" + key, "expected a number");
    if (!network.has_element(key) || network.cluster_of(key) != network.alternatives_cluster().id)
      throw ValidationError(path + "/" + key + ": unknown alternative '" + key + "'");
    out[key] = value.get<double>();
  }
  return out;
}

}  // namespace

NetworkDefinition network_from_json(const json& network, const std::string& path) {
  NetworkDefinition def;
  def.name = optional_string(network, "name", path);
  def.description = optional_string(network, "description", path);
  const json& clusters = require_array(network, "clusters", path);
  if (clusters.empty()) throw SchemaError(path + "/clusters", "must not be empty");
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    const std::string cp = at(path + "/clusters", i);
    Cluster c;
    c.id = require_string(clusters[i], "id", cp);
    c.label = optional_string(clusters[i], "label", cp);
    try {
      c.kind = parse_cluster_kind(require_string(clusters[i], "kind", cp));
    } catch (const SchemaError&) {
      throw;
    } catch (const ValidationError& e) {
      throw SchemaError(cp + "/kind", e.what());
    }
    const json& elements = require_array(clusters[i], "elements", cp);
    for (std::size_t k = 0; k < elements.size(); ++k) {
      const std::string ep = at(cp + "/elements", k);
      c.elements.push_back({require_string(elements[k], "id", ep),
                            optional_string(elements[k], "label", ep)});
    }
    def.clusters.push_back(std::move(c));
  }
  if (auto it = network.find("edges"); it != network.end()) {
    if (!it->is_array()) throw SchemaError(path + "/edges", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string ep = at(path + "/edges", i);
      DependencyEdge e;
      e.source = require_string((*it)[i], "source", ep);
      e.target = require_string((*it)[i], "target", ep);
      try {
        e.level = parse_edge_level(require_string((*it)[i], "level", ep));
      } catch (const SchemaError&) {
        throw;
      } catch (const ValidationError& ex) {
        throw SchemaError(ep + "/level", ex.what());
      }
      def.edges.push_back(std::move(e));
    }
  }
  return def;
}

json to_json(const NetworkDefinition& def) {
  json clusters = json::array();
  for (const Cluster& c : def.clusters) {
    json elements = json::array();
    for (const Element& e : c.elements) elements.push_back({{"id", e.id}, {"label", e.label}});
    clusters.push_back(
        {{"id", c.id}, {"label", c.label}, {"kind", to_string(c.kind)}, {"elements", elements}});
  }
  json edges = json::array();
  for (const DependencyEdge& e : def.edges)
    edges.push_back({{"source", e.source}, {"target", e.target}, {"level", to_string(e.level)}});
  return {{"clusters", clusters}, {"edges", edges}};
}

ModelDocument load_model(const json& doc) {
  if (!doc.is_object()) throw SchemaError("", "document must be a JSON object");
  const int version = require_int(doc, "schema_version", "");
  if (version != kSchemaVersion)
    throw SchemaError("/schema_version", "unsupported schema version " + std::to_string(version));

  ModelDocument model;
  model.name = require_string(doc, "name", "");
  model.description = optional_string(doc, "description", "");
  if (auto it = doc.find("random_index"); it != doc.end()) {
    if (!it->is_string()) throw SchemaError("/random_index", "expected a string");
    try {
      model.random_index = parse_random_index_table(it->get<std::string>());
    } catch (const ValidationError& e) {
      throw SchemaError("/random_index", e.what());
    }
  }

  NetworkDefinition def = network_from_json(require(doc, "network", ""), "/network");
  def.name = model.name;
  def.description = model.description;
  model.network = build_network(std::move(def));
  model.contexts = comparison_contexts(model.network);

  auto known_context = [&](const std::string& id) {
    for (const auto& c : model.contexts)
      if (c.id == id) return true;
    return false;
  };

  if (auto it = doc.find("contexts"); it != doc.end()) {
    if (!it->is_array()) throw SchemaError("/contexts", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string p = at("/contexts", i);
      ContextMeta meta;
      meta.id = require_string((*it)[i], "id", p);
      if (!known_context(meta.id)) throw ValidationError(p + ": unknown context '" + meta.id + "'");
      if (auto r = (*it)[i].find("reported_cr"); r != (*it)[i].end() && !r->is_null()) {
        if (!r->is_number()) throw SchemaError(p + "/reported_cr", "expected a number");
        meta.reported_cr = r->get<double>();
      }
      meta.source = optional_string((*it)[i], "source", p);
      model.context_meta.push_back(std::move(meta));
    }
  }

  const json& matrices = require_array(doc, "matrices", "");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    const std::string p = at("/matrices", i);
    const std::string ctx_id = require_string(matrices[i], "context", p);
    if (!known_context(ctx_id)) throw ValidationError(p + ": unknown context '" + ctx_id + "'");
    if (!seen.insert(ctx_id).second)
      throw ValidationError(p + ": second matrix for context '" + ctx_id + "'");
    const ComparisonContext& ctx = model.context(ctx_id);

    std::vector<NodeId> order;
    if (auto o = matrices[i].find("order"); o != matrices[i].end()) {
      if (!o->is_array()) throw SchemaError(p + "/order", "expected an array");
      for (std::size_t k = 0; k < o->size(); ++k) {
        if (!(*o)[k].is_string()) throw SchemaError(at(p + "/order", k), "expected a string");
        order.push_back((*o)[k].get<std::string>());
      }
      std::vector<NodeId> a = order, b = ctx.compared;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      if (a != b)
        throw ValidationError(p + "/order: does not list the items of context '" + ctx_id + "'");
    } else {
      order = ctx.compared;
    }

    MatrixRecord record{parse_matrix(ctx_id, order, require(matrices[i], "rows", p), p + "/rows"),
                        {}};
    if (auto alts = matrices[i].find("alternates"); alts != matrices[i].end()) {
      if (!alts->is_array()) throw SchemaError(p + "/alternates", "expected an array");
      for (std::size_t k = 0; k < alts->size(); ++k) {
        const std::string ap = at(p + "/alternates", k);
        record.alternates.push_back(
            {require_string((*alts)[k], "label", ap),
             parse_matrix(ctx_id, order, require((*alts)[k], "rows", ap), ap + "/rows"),
             optional_string((*alts)[k], "note", ap)});
      }
    }
    model.matrices.push_back(std::move(record));
  }

  if (auto it = doc.find("fmea_items"); it != doc.end()) {
    if (!it->is_array()) throw SchemaError("/fmea_items", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string p = at("/fmea_items", i);
      FmeaItem item;
      item.failure_mode = optional_string((*it)[i], "failure_mode", p);
      item.cause = require_string((*it)[i], "cause", p);
      item.s = require_int((*it)[i], "s", p);
      item.o = require_int((*it)[i], "o", p);
      item.d = require_int((*it)[i], "d", p);
      if (!model.network.has_element(item.cause))
        throw ValidationError(p + "/cause: unknown element '" + item.cause + "'");
      try {
        validate(item);
      } catch (const ValidationError& e) {
        throw ValidationError(p + ": " + e.what());
      }
      model.fmea_items.push_back(std::move(item));
    }
  }

  if (auto it = doc.find("precomputed_weights"); it != doc.end() && !it->is_null()) {
    const std::string p = "/precomputed_weights";
    PrecomputedWeights pw;
    pw.source = optional_string(*it, "source", p);
    if (auto r = it->find("raw"); r != it->end()) pw.raw = parse_parameter_map(*r, p + "/raw", model.network);
    pw.normals = parse_parameter_map(require(*it, "normals", p), p + "/normals", model.network);
    if (auto e = it->find("exponents"); e != it->end()) {
      pw.exponents = ExponentWeights{require_number(*e, "severity", p + "/exponents"),
                                     require_number(*e, "occurrence", p + "/exponents"),
                                     require_number(*e, "detection", p + "/exponents")};
    }
    model.precomputed = std::move(pw);
  }

  if (auto it = doc.find("manifest"); it != doc.end()) {
    const json& notes = require_array(*it, "notes", "/manifest");
    for (std::size_t i = 0; i < notes.size(); ++i) {
      const std::string p = at("/manifest/notes", i);
      ManifestNote note{require_string(notes[i], "kind", p), require_string(notes[i], "text", p),
                        std::nullopt};
      if (auto c = notes[i].find("context"); c != notes[i].end()) {
        if (!c->is_string()) throw SchemaError(p + "/context", "expected a string");
        note.context = c->get<std::string>();
        if (!known_context(*note.context))
          throw ValidationError(p + "/context: unknown context '" + *note.context + "'");
      }
      model.notes.push_back(std::move(note));
    }
  }
  return model;
}

ModelDocument load_model_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  return load_model(doc);
}

ModelDocument load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read model file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_model_text(buffer.str());
}

json to_json(const ModelDocument& model) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["name"] = model.name;
  doc["description"] = model.description;
  doc["random_index"] = to_string(model.random_index);
  doc["network"] = to_json(model.network.to_definition());

  json contexts = json::array();
  for (const ContextMeta& m : model.context_meta) {
    json c = {{"id", m.id}};
    if (m.reported_cr) c["reported_cr"] = *m.reported_cr;
    if (!m.source.empty()) c["source"] = m.source;
    contexts.push_back(std::move(c));
  }
  doc["contexts"] = contexts;

  json matrices = json::array();
  for (const MatrixRecord& r : model.matrices) {
    json m = {{"context", r.matrix.context()},
              {"order", r.matrix.order()},
              {"rows", matrix_rows(r.matrix)}};
    if (!r.alternates.empty()) {
      json alts = json::array();
      for (const AlternateReading& a : r.alternates)
        alts.push_back({{"label", a.label}, {"rows", matrix_rows(a.matrix)}, {"note", a.note}});
      m["alternates"] = alts;
    }
    matrices.push_back(std::move(m));
  }
  doc["matrices"] = matrices;

  json items = json::array();
  for (const FmeaItem& i : model.fmea_items)
    items.push_back({{"failure_mode", i.failure_mode}, {"cause", i.cause}, {"s", i.s}, {"o", i.o}, {"d", i.d}});
  doc["fmea_items"] = items;

  if (model.precomputed) {
    json pw = {{"source", model.precomputed->source}, {"normals", model.precomputed->normals}};
    if (!model.precomputed->raw.empty()) pw["raw"] = model.precomputed->raw;
    if (const auto& e = model.precomputed->exponents)
      pw["exponents"] = {{"severity", e->severity}, {"occurrence", e->occurrence}, {"detection", e->detection}};
    doc["precomputed_weights"] = pw;
  }

  json notes = json::array();
  for (const ManifestNote& n : model.notes) {
    json note = {{"kind", n.kind}, {"text", n.text}};
    if (n.context) note["context"] = *n.context;
    notes.push_back(std::move(note));
  }
  doc["manifest"] = {{"notes", notes}};
  return doc;
}

std::vector<Judgment> ModelDocument::judgments() const {
  std::vector<Judgment> out;
  for (const MatrixRecord& r : matrices) {
    const auto& order = r.matrix.order();
    for (std::size_t i = 0; i < order.size(); ++i)
      for (std::size_t j = i + 1; j < order.size(); ++j)
        out.push_back({r.matrix.context(), order[i], order[j], r.matrix.at(i, j)});
  }
  return out;
}

const ComparisonContext& ModelDocument::context(const std::string& id) const {
  for (const auto& c : contexts)
    if (c.id == id) return c;
  throw NotFoundError("unknown context '" + id + "'");
}

const ContextMeta* ModelDocument::meta(const std::string& id) const {
  for (const auto& m : context_meta)
    if (m.id == id) return &m;
  return nullptr;
}

const MatrixRecord* ModelDocument::matrix(const std::string& context_id) const {
  for (const auto& m : matrices)
    if (m.matrix.context() == context_id) return &m;
  return nullptr;
}

std::vector<std::string> ModelDocument::warnings() const {
  std::vector<std::string> out;
  for (const ManifestNote& n : notes)
    out.push_back("[" + n.kind + "]" + (n.context ? " " + *n.context : std::string()) + ": " + n.text);
  return out;
}

const ModelDocument& bundled_model() {
  static const ModelDocument model = load_model_text(bundled_fixture_json());
  return model;
}

void write_rpn_csv(std::ostream& out, const std::vector<RiskRecord>& records) {
  out << "cause,S,O,D,rpn_classic,rpn_weighted,rank_classic,rank_weighted\n";
  for (const RiskRecord& r : records)
    out << fmt::format("{},{},{},{},{:.0f},{:.4f},{},{}\n", r.item.cause, r.item.s, r.item.o,
                       r.item.d, r.rpn_classic, r.rpn_weighted, r.rank_classic, r.rank_weighted);
}

void write_supermatrix_csv(std::ostream& out, const Supermatrix& m) {
  out << "element";
  for (const auto& id : m.index) out << ',' << id;
  out << '\n';
  for (std::size_t i = 0; i < m.size(); ++i) {
    out << m.index[i];
    for (std::size_t j = 0; j < m.size(); ++j)
      out << ',' << fmt::format("{:.6g}", m.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    out << '\n';
  }
}

}  // namespace riskweave

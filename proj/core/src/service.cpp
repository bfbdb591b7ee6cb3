#include "riskweave/service.hpp"

#include <cmath>

#include "riskweave/pipeline.hpp"

namespace riskweave {

namespace fs = std::filesystem;
using nlohmann::json;

struct SessionService::Live {
  std::mutex mutex;
  SessionRecord record;
  JudgmentSet judgments;
  std::shared_ptr<const ModelDocument> model;
};

namespace {

Response error(int status, const std::string& message, json extra = json::object()) {
  extra["error"] = message;
  return {status, std::move(extra)};
}

/// Maps engine exceptions onto HTTP statuses.
template <typename F>
Response guarded(F&& handler) {
  try {
    return handler();
  } catch (const IncompleteJudgmentsError& e) {
    json missing = json::array();
    for (const MissingPair& m : e.missing())
      missing.push_back({{"context", m.context}, {"row", m.row}, {"col", m.col}});
    return error(409, e.what(), {{"missing", missing}, {"missing_contexts", e.contexts()}});
  } catch (const NotFoundError& e) {
    return error(404, e.what());
  } catch (const ValidationError& e) {
    return error(400, e.what());
  } catch (const ComputationError& e) {
    return error(500, e.what(), {{"stage", "computation"}});
  } catch (const Error& e) {
    return error(500, e.what());
  } catch (const std::exception& e) {
    return error(500, std::string("internal error: ") + e.what());
  }
}

json parse_body(const std::string& body) {
  json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw ValidationError("request body must be a JSON object");
  return doc;
}

std::string string_field(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_string())
    throw ValidationError(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

json progress_json(const CompletenessReport& r) {
  return {{"answered", r.answered}, {"total", r.total}, {"progress", r.progress}, {"complete", r.complete()}};
}

/// Nearest Saaty-scale value to `ratio` on a log scale.
Rational nearest_on_scale(double ratio) {
  Rational best(1);
  double best_gap = std::abs(std::log(ratio));
  for (std::int64_t k = 2; k <= 9; ++k) {
    for (Rational candidate : {Rational(k), Rational(1, k)}) {
      const double gap = std::abs(std::log(ratio) - std::log(to_double(candidate)));
      if (gap < best_gap) {
        best_gap = gap;
        best = candidate;
      }
    }
  }
  return best;
}

}  // namespace

SessionService::SessionService(ServiceConfig config)
    : config_(std::move(config)), store_(config_.store_root) {
  add_model(bundled_model());
  std::error_code ec;
  const fs::path dir = config_.store_root / "models";
  if (fs::is_directory(dir, ec)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir, ec))
      if (entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const fs::path& f : files) add_model(load_model_file(f));
  }
}

SessionService::~SessionService() = default;

void SessionService::add_model(ModelDocument model) {
  std::unique_lock lock(models_mutex_);
  const std::string name = model.name;
  models_[name] = std::make_shared<const ModelDocument>(std::move(model));
}

std::shared_ptr<const ModelDocument> SessionService::model(const std::string& name) const {
  std::shared_lock lock(models_mutex_);
  auto it = models_.find(name);
  if (it == models_.end()) throw NotFoundError("unknown model '" + name + "'");
  return it->second;
}

std::shared_ptr<SessionService::Live> SessionService::live(const std::string& id) {
  std::lock_guard lock(sessions_mutex_);
  if (auto it = sessions_.find(id); it != sessions_.end()) return it->second;
  auto session = std::make_shared<Live>();
  session->record = store_.load(id);
  session->model = model(session->record.model);
  for (const LogEntry& e : session->record.log)
    session->judgments.upsert(session->model->context(e.judgment.context), e.judgment);
  sessions_.emplace(id, session);
  return session;
}

json SessionService::summary(const Live& s) const {
  const auto judgments = s.judgments.all();
  json contexts = json::array();
  std::size_t answered = 0, total = 0;
  bool complete = true;
  for (const ComparisonContext& ctx : s.model->contexts) {
    const CompletenessReport r = completeness(ctx, judgments);
    answered += r.answered;
    total += r.total;
    complete = complete && r.complete();
    json c = progress_json(r);
    c["id"] = ctx.id;
    c["kind"] = to_string(ctx.kind);
    c["control"] = ctx.control;
    c["compared"] = ctx.compared;
    if (r.complete() && ctx.needs_judgments())
      c["consistency"] = to_json(evaluate_context(ctx, judgments, s.model->random_index).consistency);
    contexts.push_back(std::move(c));
  }
  return {{"id", s.record.id},
          {"model", s.model->name},
          {"contexts", contexts},
          {"entries", s.record.log.size()},
          {"progress",
           {{"answered", answered},
            {"total", total},
            {"progress", total == 0 ? 1.0 : static_cast<double>(answered) / static_cast<double>(total)},
            {"complete", complete}}}};
}

Response SessionService::health() const {
  std::shared_lock lock(models_mutex_);
  return {200, {{"status", "ok"}, {"models", models_.size()}}};
}

Response SessionService::list_models() const {
  std::shared_lock lock(models_mutex_);
  json out = json::array();
  for (const auto& [name, m] : models_)
    out.push_back({{"name", name},
                   {"description", m->description},
                   {"contexts", m->contexts.size()},
                   {"fmea_items", m->fmea_items.size()},
                   {"precomputed_weights", m->precomputed.has_value()}});
  return {200, {{"models", out}}};
}

Response SessionService::create_session(const std::string& body) {
  return guarded([&] {
    const json doc = parse_body(body);
    const auto m = model(string_field(doc, "model"));
    auto session = std::make_shared<Live>();
    session->record = store_.create(m->name);
    session->model = m;
    std::lock_guard lock(sessions_mutex_);
    sessions_[session->record.id] = session;
    return Response{201, summary(*session)};
  });
}

Response SessionService::list_sessions() {
  return guarded([&] {
    json out = json::array();
    for (const std::string& id : store_.list()) {
      try {
        auto s = live(id);
        std::lock_guard lock(s->mutex);
        out.push_back({{"id", id}, {"model", s->record.model}, {"entries", s->record.log.size()}});
      } catch (const Error& e) {
        out.push_back({{"id", id}, {"error", e.what()}});
      }
    }
    return Response{200, {{"sessions", out}}};
  });
}

Response SessionService::get_session(const std::string& id) {
  return guarded([&] {
    auto s = live(id);
    std::lock_guard lock(s->mutex);
    return Response{200, summary(*s)};
  });
}

Response SessionService::next_pair(const std::string& id) {
  return guarded([&] {
    auto s = live(id);
    std::lock_guard lock(s->mutex);
    const auto judgments = s->judgments.all();
    for (const ComparisonContext& ctx : s->model->contexts) {
      const CompletenessReport r = completeness(ctx, judgments);
      if (r.complete()) continue;
      const auto& [a, b] = r.missing.front();
      const std::size_t i = *ctx.index_of(a), j = *ctx.index_of(b);
      return Response{200,
                      {{"context", ctx.id},
                       {"kind", to_string(ctx.kind)},
                       {"control", ctx.control},
                       {"control_label", ctx.control_label},
                       {"row", a},
                       {"col", b},
                       {"row_label", ctx.compared_labels[i]},
                       {"col_label", ctx.compared_labels[j]},
                       {"question", ctx.question(i, j)},
                       {"progress", progress_json(r)}}};
    }
    return Response{204, nullptr};
  });
}

Response SessionService::put_judgment(const std::string& id, const std::string& body) {
  return guarded([&]() -> Response {
    auto s = live(id);
    const json doc = parse_body(body);
    Judgment j;
    j.context = string_field(doc, "context");
    j.row = string_field(doc, "row");
    j.col = string_field(doc, "col");
    auto v = doc.find("value");
    if (v == doc.end()) return error(400, "field 'value' is required");
    if (v->is_number_integer()) {
      const auto n = v->get<std::int64_t>();
      if (n <= 0) return error(422, "nonpositive judgment " + std::to_string(n));
      j.value = Rational(n);
    } else if (v->is_string()) {
      try {
        j.value = parse_rational(v->get<std::string>());
      } catch (const ValidationError& e) {
        return error(422, e.what());
      }
    } else {
      return error(422, "value must be an integer or an \"a/b\" string");
    }

    const ComparisonContext& ctx = s->model->context(j.context);
    if (j.row == j.col) return error(409, "judgment compares '" + j.row + "' with itself");
    for (const NodeId& node : {j.row, j.col})
      if (!ctx.index_of(node))
        return error(404, "'" + node + "' is not compared in context '" + ctx.id + "'");
    if (!on_saaty_scale(j.value))
      return error(422, "judgment " + format_rational(j.value) + " is off the 1/9..9 scale");

    std::lock_guard lock(s->mutex);
    JudgmentSet next = s->judgments;
    next.upsert(ctx, j);
    store_.append(s->record, j);
    s->judgments = std::move(next);

    const auto judgments = s->judgments.all();
    const CompletenessReport r = completeness(ctx, judgments);
    json out = {{"context", ctx.id}, {"progress", progress_json(r)}};
    std::size_t answered = 0, total = 0;
    for (const ComparisonContext& c : s->model->contexts) {
      const CompletenessReport cr = completeness(c, judgments);
      answered += cr.answered;
      total += cr.total;
    }
    out["session_progress"] = {{"answered", answered}, {"total", total}, {"complete", answered == total}};
    if (r.complete()) {
      const ContextResult res = evaluate_context(ctx, judgments, s->model->random_index);
      out["consistency"] = to_json(res.consistency);
      if (!res.consistency.acceptable() && ctx.size() >= 3) {
        const RevisionHint hint = most_inconsistent_judgment(res.matrix, res.priorities);
        const double implied = res.priorities.weights[hint.row] / res.priorities.weights[hint.col];
        const Rational current = res.matrix.at(hint.row, hint.col);
        out["most_inconsistent"] = {
            {"row", hint.row_id},
            {"col", hint.col_id},
            {"value", format_rational(current)},
            {"deviation", hint.deviation},
            {"direction", to_double(current) > implied ? "decrease" : "increase"},
            {"suggested", format_rational(nearest_on_scale(implied))}};
      }
    }
    return Response{200, out};
  });
}

Response SessionService::compute(Live& s, const std::string& weights_source, bool want_matrix,
                                 const std::string& stage) {
  const WeightsSource source = parse_weights_source(weights_source.empty() ? "computed" : weights_source);
  const Stage st = want_matrix ? parse_stage(stage.empty() ? "limit" : stage) : Stage::limit;
  std::lock_guard lock(s.mutex);
  const std::string hash = log_hash(s.record.log);
  const std::string key = to_string(source);
  if (!want_matrix && !s.record.dirty && s.record.cache_hash == hash) {
    if (auto it = s.record.cache.find(key); it != s.record.cache.end()) return {200, it->second};
  }
  const auto judgments = s.judgments.all();
  const PipelineResult result = run_pipeline(*s.model, judgments, {source});
  if (want_matrix) {
    json out = to_json(result.stage(st));
    out["judgment_log_hash"] = hash;
    return {200, out};
  }
  json payload = results_json(*s.model, result, hash);
  if (s.record.cache_hash != hash) s.record.cache.clear();
  s.record.cache[key] = payload;
  s.record.cache_hash = hash;
  s.record.dirty = false;
  store_.save_snapshot(s.record);
  return {200, payload};
}

Response SessionService::results(const std::string& id, const std::string& weights_source) {
  return guarded([&] { return compute(*live(id), weights_source, false, {}); });
}

Response SessionService::supermatrix(const std::string& id, const std::string& stage,
                                     const std::string& weights_source) {
  return guarded([&] { return compute(*live(id), weights_source, true, stage); });
}

}  // namespace riskweave

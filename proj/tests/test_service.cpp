#include <thread>

#include "doctest.h"
#include "riskweave/http_server.hpp"
#include "riskweave/pipeline.hpp"
#include "riskweave/service.hpp"
#include "support.hpp"

// After Eigen: <resolv.h> defines a `_res` macro that Eigen uses as a parameter name.
#include "httplib.h"

using namespace riskweave;
using nlohmann::json;

namespace {

std::string judgment_body(const Judgment& j) {
  return json{{"context", j.context}, {"row", j.row}, {"col", j.col}, {"value", format_rational(j.value)}}.dump();
}

std::string create(SessionService& svc) {
  const Response r = svc.create_session(R"({"model": "paper-anp-fmea"})");
  REQUIRE(r.status == 201);
  return r.body["id"].get<std::string>();
}

void answer_all(SessionService& svc, const std::string& id) {
  for (const Judgment& j : bundled_model().judgments())
    REQUIRE(svc.put_judgment(id, judgment_body(j)).status == 200);
}

}  // namespace

TEST_CASE("session creation") {
  SessionService svc({rwtest::scratch_dir("svc-create"), "*"});
  const Response r = svc.create_session(R"({"model": "paper-anp-fmea"})");
  CHECK(r.status == 201);
  CHECK(r.body["contexts"].size() >= 25);
  CHECK(r.body["contexts"][0]["id"] == "goal");
  CHECK(r.body["progress"]["answered"] == 0);
  CHECK(svc.create_session(R"({"model": "nope"})").status == 404);
  CHECK(svc.create_session("not json").status == 400);
  CHECK(svc.create_session(R"({"model": 3})").status == 400);
  CHECK(svc.health().body["status"] == "ok");
  CHECK(svc.list_models().body["models"][0]["name"] == "paper-anp-fmea");
}

TEST_CASE("next pair walks contexts in emission order") {
  SessionService svc({rwtest::scratch_dir("svc-next"), "*"});
  const std::string id = create(svc);
  const Response first = svc.next_pair(id);
  CHECK(first.status == 200);
  CHECK(first.body["context"] == "goal");
  CHECK(first.body["row"] == "skills");
  CHECK(first.body["col"] == "power");
  CHECK(first.body["question"].get<std::string>().find("How important is Individual Skills Risk relative to Power Risks") == 0);
  CHECK(svc.next_pair("s9999").status == 404);
  answer_all(svc, id);
  CHECK(svc.next_pair(id).status == 204);
}

TEST_CASE("judgment submission and consistency feedback") {
  SessionService svc({rwtest::scratch_dir("svc-put"), "*"});
  const std::string id = create(svc);
  auto put = [&](const std::string& body) { return svc.put_judgment(id, body); };
  CHECK(put(R"({"context":"goal","row":"skills","col":"power","value":11})").status == 422);
  CHECK(put(R"({"context":"goal","row":"skills","col":"power","value":"2/3"})").status == 422);
  CHECK(put(R"({"context":"goal","row":"skills","col":"power","value":0.5})").status == 422);
  CHECK(put(R"({"context":"goal","row":"skills","col":"skills","value":3})").status == 409);
  CHECK(put(R"({"context":"ghost","row":"skills","col":"power","value":3})").status == 404);
  CHECK(put(R"({"context":"goal","row":"skills","col":"ghost","value":3})").status == 404);
  CHECK(put(R"({"context":"goal"})").status == 400);
  CHECK(svc.put_judgment("s9999", R"({"context":"goal","row":"skills","col":"power","value":3})").status == 404);

  // Main-criteria judgments from the fixture, one at a time.
  const ModelDocument& m = bundled_model();
  Response last;
  for (const Judgment& j : m.judgments())
    if (j.context == "goal") last = put(judgment_body(j));
  REQUIRE(last.status == 200);
  CHECK(last.body["progress"]["complete"] == true);
  const double cr = last.body["consistency"]["cr"].get<double>();
  const auto oracle = rwtest::oracle_cr(m.matrix("goal")->matrix.to_dense(), rwtest::super_decisions_ri(5));
  CHECK(cr == doctest::Approx(oracle).epsilon(1e-8));
  CHECK_FALSE(last.body.contains("most_inconsistent"));

  // Revising a pair keeps progress and recomputes CR.
  const Response revised = put(R"({"context":"goal","row":"skills","col":"power","value":9})");
  CHECK(revised.body["progress"]["answered"] == last.body["progress"]["answered"]);
  CHECK(revised.body["consistency"]["cr"].get<double>() > 0.1);
  REQUIRE(revised.body.contains("most_inconsistent"));
  CHECK(revised.body["most_inconsistent"]["row"] == "skills");
  CHECK(revised.body["most_inconsistent"]["col"] == "power");
  CHECK(revised.body["most_inconsistent"]["direction"] == "decrease");
}

TEST_CASE("results gating, caching and determinism") {
  const auto root = rwtest::scratch_dir("svc-results");
  SessionService svc({root, "*"});
  const std::string id = create(svc);
  const Response incomplete = svc.results(id, "");
  CHECK(incomplete.status == 409);
  CHECK(incomplete.body["missing"].size() > 0);
  CHECK(incomplete.body["missing_contexts"][0] == "goal");

  answer_all(svc, id);
  const Response computed = svc.results(id, "computed");
  REQUIRE(computed.status == 200);
  const Response pinned = svc.results(id, "paper");
  REQUIRE(pinned.status == 200);
  CHECK(svc.results(id, "bogus").status == 400);

  const auto& table = pinned.body["rpn_table"];
  for (const auto& row : table)
    if (row["cause"] == "political_power") CHECK(row["rank_weighted"] == 1);
  CHECK(std::abs(pinned.body["exponents"]["occurrence"].get<double>() - 0.69) <= 0.02);
  CHECK(computed.body["judgment_log_hash"] == pinned.body["judgment_log_hash"]);
  CHECK(computed.body["provenance"]["stages"].size() == 10);

  // Cached reply is byte-identical; a new judgment invalidates it.
  CHECK(svc.results(id, "computed").body.dump() == computed.body.dump());
  REQUIRE(svc.put_judgment(id, R"({"context":"alternatives:humility","row":"severity","col":"occurrence","value":"1/9"})").status == 200);
  const Response after = svc.results(id, "computed");
  CHECK(after.body["judgment_log_hash"] != computed.body["judgment_log_hash"]);
  CHECK(after.body.dump() != computed.body.dump());

  // Replay of the log into a fresh session gives the identical payload.
  const SessionRecord rec = SessionStore(root).load(id);
  const std::string fresh = create(svc);
  for (const LogEntry& e : rec.log) REQUIRE(svc.put_judgment(fresh, judgment_body(e.judgment)).status == 200);
  CHECK(svc.results(fresh, "computed").body.dump() == after.body.dump());

  // A restarted service serves the same payload from disk.
  SessionService restarted({root, "*"});
  CHECK(restarted.results(id, "computed").body.dump() == after.body.dump());
  CHECK(restarted.list_sessions().body["sessions"].size() == 2);

  const Response sm = svc.supermatrix(id, "weighted", "");
  CHECK(sm.status == 200);
  CHECK(sm.body["stage"] == "weighted");
  CHECK(svc.supermatrix(id, "bogus", "").status == 400);
  CHECK(svc.supermatrix(id, "", "").body["stage"] == "limit");
}

TEST_CASE("http routes") {
  SessionService svc({rwtest::scratch_dir("svc-http"), "https://example.test"});
  HttpServer server(svc);
  server.bind("127.0.0.1", 0);
  std::thread worker([&] { server.run(); });
  httplib::Client client("127.0.0.1", server.port());

  auto health = client.Get("/health");
  REQUIRE(health);
  CHECK(health->status == 200);
  CHECK(health->get_header_value("Access-Control-Allow-Origin") == "https://example.test");
  CHECK(json::parse(health->body)["status"] == "ok");

  auto created = client.Post("/sessions", R"({"model":"paper-anp-fmea"})", "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  const std::string id = json::parse(created->body)["id"];
  CHECK(client.Post("/sessions", "{", "application/json")->status == 400);
  CHECK(client.Post("/sessions", R"({"model":"x"})", "application/json")->status == 404);

  CHECK(client.Get("/sessions/" + id + "/next")->status == 200);
  CHECK(client.Get("/sessions/nope/next")->status == 404);
  auto bad = client.Put("/sessions/" + id + "/judgments",
                        R"({"context":"goal","row":"skills","col":"power","value":11})", "application/json");
  CHECK(bad->status == 422);
  auto ok = client.Put("/sessions/" + id + "/judgments",
                       R"({"context":"goal","row":"skills","col":"power","value":"1/3"})", "application/json");
  CHECK(ok->status == 200);
  CHECK(client.Get("/sessions/" + id + "/results")->status == 409);
  CHECK(client.Get("/sessions/" + id + "/supermatrix?stage=limit")->status == 409);
  CHECK(client.Get("/models")->status == 200);
  CHECK(json::parse(client.Get("/sessions")->body)["sessions"].size() == 1);
  CHECK(client.Options("/sessions")->status == 204);
  CHECK(client.Get("/nowhere")->status == 404);

  server.stop();
  worker.join();
}

TEST_CASE("binding an occupied port fails") {
  SessionService svc({rwtest::scratch_dir("svc-bind"), "*"});
  HttpServer a(svc), b(svc);
  a.bind("127.0.0.1", 0);
  CHECK_THROWS_AS(b.bind("127.0.0.1", a.port()), IoError);
  CHECK(parse_address("0.0.0.0:80") == std::pair<std::string, int>{"0.0.0.0", 80});
  CHECK(parse_address("9000") == std::pair<std::string, int>{"127.0.0.1", 9000});
  CHECK_THROWS_AS(parse_address("host:port"), ValidationError);
}

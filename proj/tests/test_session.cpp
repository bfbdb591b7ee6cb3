#include <fstream>

#include "doctest.h"
#include "riskweave/session.hpp"
#include "support.hpp"

using namespace riskweave;

TEST_CASE("session round trip") {
  SessionStore store(rwtest::scratch_dir("session-roundtrip"));
  SessionRecord r = store.create("paper-anp-fmea");
  CHECK(r.id == "s0001");
  store.append(r, {"goal", "skills", "power", Rational(1, 3)});
  store.append(r, {"goal", "skills", "knowledge", Rational(7)});
  store.append(r, {"goal", "skills", "power", Rational(2)});

  const SessionRecord loaded = store.load(r.id);
  CHECK(loaded == r);
  REQUIRE(loaded.log.size() == 3);
  CHECK(loaded.log[0].judgment.value == Rational(1, 3));
  CHECK(loaded.log[2].seq == 3);
  CHECK(loaded.dirty);

  SessionRecord cached = loaded;
  cached.dirty = false;
  cached.cache_hash = log_hash(cached.log);
  cached.cache["computed"] = {{"x", 1.5}};
  store.save(cached);
  CHECK(store.load(r.id) == cached);

  CHECK(store.create("paper-anp-fmea").id == "s0002");
  CHECK(store.list() == std::vector<std::string>{"s0001", "s0002"});
}

TEST_CASE("unknown session is not found") {
  SessionStore store(rwtest::scratch_dir("session-missing"));
  CHECK_THROWS_AS(store.load("s0042"), NotFoundError);
  CHECK_THROWS_AS(store.load("../etc"), NotFoundError);
}

TEST_CASE("truncated log names the last replayable entry") {
  const auto root = rwtest::scratch_dir("session-truncated");
  SessionStore store(root);
  SessionRecord r = store.create("m");
  for (int k = 2; k <= 4; ++k) store.append(r, {"goal", "a", "b", Rational(k)});

  const auto log = root / "session" / r.id / "log.jsonl";
  std::ifstream in(log);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();
  std::ofstream(log, std::ios::trunc) << text.substr(0, text.size() - 20);

  try {
    store.load(r.id);
    FAIL("truncated log accepted");
  } catch (const CorruptLogError& e) {
    CHECK(e.last_valid() == 2);
    CHECK(std::string(e.what()).find("last replayable entry is 2") != std::string::npos);
  }
}

TEST_CASE("log hash ignores timestamps and follows content") {
  LogEntry a{1, "2020-01-01T00:00:00.000Z", {"goal", "a", "b", Rational(3)}};
  LogEntry b = a;
  b.timestamp = "2030-01-01T00:00:00.000Z";
  CHECK(log_hash({a}) == log_hash({b}));
  b.judgment.value = Rational(1, 3);
  CHECK(log_hash({a}) != log_hash({b}));
  CHECK(log_hash(std::vector<LogEntry>{}) != log_hash({a}));
}

TEST_CASE("stale snapshot cache is dropped on load") {
  const auto root = rwtest::scratch_dir("session-stale");
  SessionStore store(root);
  SessionRecord r = store.create("m");
  store.append(r, {"goal", "a", "b", Rational(3)});
  r.dirty = false;
  r.cache_hash = log_hash(r.log);
  r.cache["computed"] = 1;
  store.save_snapshot(r);
  // A log line appended behind the snapshot's back invalidates the cache.
  std::ofstream(root / "session" / r.id / "log.jsonl", std::ios::app)
      << to_json(LogEntry{2, "t", {"goal", "a", "b", Rational(5)}}).dump() << '\n';
  const SessionRecord loaded = store.load(r.id);
  CHECK(loaded.dirty);
  CHECK(loaded.cache.empty());
  CHECK(loaded.log.size() == 2);
}

#include "riskweave/session.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace riskweave {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  const auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}.{:03}Z", tm.tm_year + 1900, tm.tm_mon + 1,
                     tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, ms);
}

void write_file(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out << text;
    if (!out.flush()) throw IoError("cannot write '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot replace '" + path.string() + "': " + ec.message());
}

bool valid_id(const std::string& id) {
  if (id.empty() || id.size() > 64) return false;
  for (char c : id)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')) return false;
  return true;
}

}  // namespace

std::string log_hash(const std::vector<LogEntry>& log) {
  std::vector<Judgment> judgments;
  judgments.reserve(log.size());
  for (const LogEntry& e : log) judgments.push_back(e.judgment);
  return log_hash(std::span<const Judgment>(judgments));
}

std::string log_hash(std::span<const Judgment> judgments) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0x1f;  // field separator
    h *= 0x100000001b3ULL;
  };
  for (const Judgment& j : judgments) {
    feed(j.context);
    feed(j.row);
    feed(j.col);
    feed(format_rational(j.value));
  }
  return fmt::format("fnv1a64:{:016x}", h);
}

json to_json(const LogEntry& e) {
  return {{"seq", e.seq},
          {"ts", e.timestamp},
          {"context", e.judgment.context},
          {"row", e.judgment.row},
          {"col", e.judgment.col},
          {"value", format_rational(e.judgment.value)}};
}

LogEntry log_entry_from_json(const json& node) {
  LogEntry e;
  e.seq = node.at("seq").get<std::uint64_t>();
  e.timestamp = node.at("ts").get<std::string>();
  e.judgment.context = node.at("context").get<std::string>();
  e.judgment.row = node.at("row").get<std::string>();
  e.judgment.col = node.at("col").get<std::string>();
  e.judgment.value = parse_rational(node.at("value").get<std::string>());
  return e;
}

SessionStore::SessionStore(fs::path root) : root_(std::move(root)) {}

fs::path SessionStore::dir(const std::string& id) const { return root_ / "session" / id; }

bool SessionStore::exists(const std::string& id) const {
  return valid_id(id) && fs::exists(dir(id) / "log.jsonl");
}

std::vector<std::string> SessionStore::list() const {
  std::vector<std::string> ids;
  std::error_code ec;
  const fs::path base = root_ / "session";
  if (!fs::is_directory(base, ec)) return ids;
  for (const auto& entry : fs::directory_iterator(base, ec))
    if (entry.is_directory() && fs::exists(entry.path() / "log.jsonl"))
      ids.push_back(entry.path().filename().string());
  std::sort(ids.begin(), ids.end());
  return ids;
}

SessionRecord SessionStore::create(const std::string& model) {
  std::lock_guard lock(id_mutex_);
  std::error_code ec;
  fs::create_directories(root_ / "session", ec);
  if (ec) throw IoError("cannot create session store under '" + root_.string() + "': " + ec.message());
  int next = 1;
  for (const std::string& id : list()) {
    if (id.size() == 5 && id[0] == 's') {
      try {
        next = std::max(next, std::stoi(id.substr(1)) + 1);
      } catch (const std::exception&) {
      }
    }
  }
  SessionRecord record;
  record.id = fmt::format("s{:04}", next);
  record.model = model;
  fs::create_directories(dir(record.id), ec);
  if (ec) throw IoError("cannot create session directory: " + ec.message());
  save(record);
  return record;
}

void SessionStore::save_snapshot(const SessionRecord& r) const {
  json snap = {{"id", r.id},
               {"model", r.model},
               {"entries", r.log.size()},
               {"log_hash", log_hash(r.log)},
               {"dirty", r.dirty},
               {"cache_hash", r.cache_hash},
               {"cache", r.cache}};
  write_file(dir(r.id) / "snapshot.json", snap.dump(2) + "\n");
}

void SessionStore::save(const SessionRecord& r) {
  if (!valid_id(r.id)) throw ValidationError("invalid session id '" + r.id + "'");
  std::error_code ec;
  fs::create_directories(dir(r.id), ec);
  if (ec) throw IoError("cannot create session directory: " + ec.message());
  std::string text;
  for (const LogEntry& e : r.log) text += to_json(e).dump() + "\n";
  write_file(dir(r.id) / "log.jsonl", text);
  save_snapshot(r);
}

const LogEntry& SessionStore::append(SessionRecord& r, Judgment judgment) {
  LogEntry e{r.log.size() + 1, utc_now(), std::move(judgment)};
  {
    std::ofstream out(dir(r.id) / "log.jsonl", std::ios::binary | std::ios::app);
    if (!out) throw IoError("cannot append to log of session '" + r.id + "'");
    out << to_json(e).dump() << '\n';
    if (!out.flush()) throw IoError("cannot append to log of session '" + r.id + "'");
  }
  r.log.push_back(std::move(e));
  r.dirty = true;
  r.cache.clear();
  r.cache_hash.clear();
  save_snapshot(r);
  return r.log.back();
}

SessionRecord SessionStore::load(const std::string& id) const {
  if (!exists(id)) throw NotFoundError("unknown session '" + id + "'");
  SessionRecord r;
  r.id = id;

  std::ifstream snap_in(dir(id) / "snapshot.json", std::ios::binary);
  if (!snap_in) throw IoError("missing snapshot for session '" + id + "'");
  json snap;
  try {
    snap = json::parse(snap_in);
    r.model = snap.at("model").get<std::string>();
  } catch (const json::exception& e) {
    throw IoError("corrupt snapshot for session '" + id + "': " + e.what());
  }

  std::ifstream log_in(dir(id) / "log.jsonl", std::ios::binary);
  if (!log_in) throw IoError("cannot read log of session '" + id + "'");
  std::string line;
  std::uint64_t last = 0;
  std::size_t line_no = 0;
  while (std::getline(log_in, line)) {
    ++line_no;
    const bool terminated = !log_in.eof();
    if (line.empty() && !terminated) break;
    try {
      if (!terminated) throw std::runtime_error("unterminated line");
      LogEntry e = log_entry_from_json(json::parse(line));
      if (e.seq != last + 1) throw std::runtime_error("out-of-sequence entry " + std::to_string(e.seq));
      r.log.push_back(std::move(e));
      last = r.log.back().seq;
    } catch (const std::exception& ex) {
      throw CorruptLogError(fmt::format("corrupt log for session '{}' at line {} ({}); last replayable "
                                        "entry is {}",
                                        id, line_no, ex.what(), last),
                            last);
    }
  }

  const std::string hash = log_hash(r.log);
  const bool consistent = snap.value("log_hash", std::string()) == hash;
  r.dirty = !consistent || snap.value("dirty", true);
  if (!r.dirty && snap.value("cache_hash", std::string()) == hash && snap.contains("cache")) {
    r.cache_hash = hash;
    r.cache = snap["cache"].get<std::map<std::string, json>>();
  } else {
    r.dirty = true;
  }
  return r;
}

}  // namespace riskweave

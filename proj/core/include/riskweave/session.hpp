#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "riskweave/errors.hpp"
#include "riskweave/judgments.hpp"

namespace riskweave {

struct LogEntry {
  std::uint64_t seq = 0;  // 1-based, contiguous
  std::string timestamp;  // UTC, ISO 8601
  Judgment judgment;

  bool operator==(const LogEntry&) const = default;
};

/// Persistent elicitation session.  `cache` maps a weights source to a
/// results payload; it is valid only while `dirty` is false and
/// `cache_hash` equals the hash of `log`.
struct SessionRecord {
  std::string id;
  std::string model;
  std::vector<LogEntry> log;
  bool dirty = true;
  std::string cache_hash;
  std::map<std::string, nlohmann::json> cache;

  bool operator==(const SessionRecord&) const = default;
};

/// Raised when a log line cannot be parsed.  `last_valid` is the sequence
/// number of the last replayable entry (0 when none).
class CorruptLogError : public IoError {
 public:
  CorruptLogError(const std::string& message, std::uint64_t last_valid)
      : IoError(message), last_valid_(last_valid) {}

  std::uint64_t last_valid() const noexcept { return last_valid_; }

 private:
  std::uint64_t last_valid_;
};

/// FNV-1a over the canonical text of every logged judgment, in order.
/// Timestamps are excluded so a replayed log hashes identically.
std::string log_hash(const std::vector<LogEntry>& log);
/// Same hash for a bare judgment sequence.
std::string log_hash(std::span<const Judgment> judgments);

nlohmann::json to_json(const LogEntry& entry);
LogEntry log_entry_from_json(const nlohmann::json& node);

/// Directory-backed store: <root>/session/<id>/log.jsonl (append-only) and
/// <root>/session/<id>/snapshot.json.  Thread-safe for id allocation; each
/// session file has a single writer.
class SessionStore {
 public:
  explicit SessionStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  /// Allocates the next id ("s0001", ...) and writes an empty session.
  SessionRecord create(const std::string& model);
  /// Appends one timestamped judgment to the log and rewrites the snapshot.
  const LogEntry& append(SessionRecord& record, Judgment judgment);
  /// Rewrites both files from `record`.
  void save(const SessionRecord& record);
  /// Rewrites only the snapshot (cache state); the log is untouched.
  void save_snapshot(const SessionRecord& record) const;
  /// Replays log.jsonl; the snapshot supplies the model and the cache.
  /// Throws NotFoundError for an unknown id, CorruptLogError for a bad log.
  SessionRecord load(const std::string& id) const;
  bool exists(const std::string& id) const;
  /// Session ids in lexicographic order.
  std::vector<std::string> list() const;

 private:
  std::filesystem::path dir(const std::string& id) const;

  std::filesystem::path root_;
  std::mutex id_mutex_;
};

}  // namespace riskweave

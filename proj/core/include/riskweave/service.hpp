#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "json.hpp"
#include "riskweave/session.hpp"
#include "riskweave/store.hpp"

namespace riskweave {

/// Transport-neutral reply: HTTP status plus JSON body (null for 204).
struct Response {
  int status = 200;
  nlohmann::json body;
};

struct ServiceConfig {
  std::filesystem::path store_root = "riskweave-store";
  std::string cors_origin = "*";
};

/// Elicitation sessions over a shared model catalogue.  Handlers may run on
/// any thread: mutations of one session are serialized by a per-session
/// mutex, distinct sessions proceed concurrently.
class SessionService {
 public:
  /// Registers the bundled model and every `*.json` under <store>/models.
  explicit SessionService(ServiceConfig config);
  ~SessionService();

  const ServiceConfig& config() const { return config_; }
  void add_model(ModelDocument model);

  Response health() const;
  Response list_models() const;
  Response create_session(const std::string& body);
  Response list_sessions();
  Response get_session(const std::string& id);
  Response next_pair(const std::string& id);
  Response put_judgment(const std::string& id, const std::string& body);
  Response results(const std::string& id, const std::string& weights_source);
  Response supermatrix(const std::string& id, const std::string& stage,
                       const std::string& weights_source);

 private:
  struct Live;
  std::shared_ptr<Live> live(const std::string& id);
  std::shared_ptr<const ModelDocument> model(const std::string& name) const;
  nlohmann::json summary(const Live& session) const;
  Response compute(Live& session, const std::string& weights_source, bool supermatrix,
                   const std::string& stage);

  ServiceConfig config_;
  SessionStore store_;
  mutable std::shared_mutex models_mutex_;
  std::map<std::string, std::shared_ptr<const ModelDocument>> models_;
  std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Live>> sessions_;
};

}  // namespace riskweave

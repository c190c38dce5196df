#pragma once

#include "reqont/api.hpp"
#include "reqont/repository.hpp"

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

namespace httplib {
class Server;
}

namespace reqont {

enum class ReloadMode { manual, on_signal };

struct ServiceConfig {
  std::string bind_address = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::filesystem::path repository_root;
  ReloadMode reload = ReloadMode::manual;
};

/// Throws std::invalid_argument for a port outside [0, 65535]; 0 is only
/// meaningful for tests that bind an ephemeral port.
void check_config(const ServiceConfig& config);

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
  std::uint64_t snapshot_version = 0;
  std::map<std::string, std::string> headers;
};

/// Read-only JSON service over one repository. Every request works on the
/// snapshot that was current when it started; reload() builds a new one and
/// swaps it in, so in-flight requests finish on the old version.
class Service {
 public:
  /// Loads the repository; throws IoError/ParseError (refuses to start).
  explicit Service(ServiceConfig config);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  struct Snapshot {
    std::shared_ptr<const LoadedRepository> repo;
    std::uint64_t version = 0;
    std::string loaded_at;  // ISO 8601, UTC
  };

  std::shared_ptr<const Snapshot> current() const;

  /// Rebuilds from disk. On failure the old snapshot stays and the error is
  /// reported by /api/v1/health (503) until a reload succeeds.
  bool reload();

  /// Transport-independent request handling (used by the HTTP server).
  ApiResponse handle(const std::string& method, const std::string& path, const api::Params& params) const;

  /// Called with the snapshot version right after a request pinned it.
  void set_request_observer(std::function<void(std::uint64_t)> observer);

  /// Binds and serves on a background thread; returns the bound port.
  int start();
  /// Blocks until stop() is called from elsewhere.
  void wait();
  void stop();

  const ServiceConfig& config() const { return config_; }

 private:
  ApiResponse route(const Snapshot& snap, const std::string& path, const api::Params& params) const;

  ServiceConfig config_;
  RepositoryLayout layout_;
  mutable std::mutex state_mutex_;
  std::shared_ptr<const Snapshot> state_;
  std::optional<std::string> reload_error_;
  std::mutex reload_mutex_;
  std::uint64_t next_version_ = 1;
  std::function<void(std::uint64_t)> observer_;

  std::unique_ptr<httplib::Server> server_;
  std::unique_ptr<std::thread> server_thread_;
};

}  // namespace reqont

#include "reqont/service.hpp"

#include <httplib.h>

#include <chrono>
#include <ctime>
#include <stdexcept>
#include <thread>

namespace reqont {

using nlohmann::json;

namespace {

constexpr std::string_view kPrefix = "/api/v1";

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

ApiResponse error(int status, const std::string& code, const std::string& message) {
  return {status, api::error_body(code, message), 0, {}};
}

ApiResponse listing(const api::Listing& l) {
  return {200, l.items, 0, {{"X-Total-Count", std::to_string(l.total)}}};
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start < path.size()) {
    auto end = path.find('/', start);
    if (end == std::string_view::npos) end = path.size();
    if (end > start) parts.emplace_back(path.substr(start, end - start));
    start = end + 1;
  }
  return parts;
}

}  // namespace

void check_config(const ServiceConfig& config) {
  if (config.port < 0 || config.port > 65535) {
    throw std::invalid_argument("port must be in [1, 65535], got " + std::to_string(config.port));
  }
}

Service::Service(ServiceConfig config) : config_(std::move(config)) {
  check_config(config_);
  layout_ = RepositoryLayout::at(config_.repository_root);
  auto repo = std::make_shared<const LoadedRepository>(load_repository(layout_));
  state_ = std::make_shared<const Snapshot>(Snapshot{std::move(repo), next_version_++, utc_now()});
}

Service::~Service() { stop(); }

std::shared_ptr<const Service::Snapshot> Service::current() const {
  std::lock_guard lock(state_mutex_);
  return state_;
}

bool Service::reload() {
  std::lock_guard reloading(reload_mutex_);
  try {
    auto layout = RepositoryLayout::at(config_.repository_root);
    auto repo = std::make_shared<const LoadedRepository>(load_repository(layout));
    auto fresh = std::make_shared<const Snapshot>(Snapshot{std::move(repo), next_version_, utc_now()});
    std::lock_guard lock(state_mutex_);
    layout_ = std::move(layout);
    state_ = std::move(fresh);
    ++next_version_;
    reload_error_.reset();
    return true;
  } catch (const std::exception& e) {
    std::lock_guard lock(state_mutex_);
    reload_error_ = e.what();
    return false;
  }
}

void Service::set_request_observer(std::function<void(std::uint64_t)> observer) { observer_ = std::move(observer); }

ApiResponse Service::handle(const std::string& method, const std::string& path, const api::Params& params) const {
  std::shared_ptr<const Snapshot> snap;
  std::optional<std::string> reload_error;
  {
    std::lock_guard lock(state_mutex_);
    snap = state_;
    reload_error = reload_error_;
  }
  if (observer_) observer_(snap->version);

  ApiResponse response;
  if (method != "GET") {
    response = error(405, "method_not_allowed", "the service is read-only");
  } else if (path == std::string(kPrefix) + "/health") {
    response.body = {{"status", reload_error ? "degraded" : "ok"},
                     {"snapshot_loaded_at", snap->loaded_at},
                     {"snapshot_version", snap->version},
                     {"n_references", snap->repo->snapshot->records().size()},
                     {"quarantined_references", snap->repo->quarantined.size()}};
    if (reload_error) {
      response.status = 503;
      response.body["reload_error"] = *reload_error;
    }
  } else {
    try {
      response = route(*snap, path, params);
    } catch (const api::BadRequest& e) {
      response = error(400, e.code(), e.what());
    } catch (const UnknownCharacteristic& e) {
      response = error(400, e.code(), e.what());
    } catch (const UnknownFactor& e) {
      response = error(404, e.code(), e.what());
    }
  }
  response.snapshot_version = snap->version;
  return response;
}

ApiResponse Service::route(const Snapshot& snap, const std::string& path, const api::Params& params) const {
  const OntologySnapshot& onto = *snap.repo->snapshot;
  const auto parts = split_path(path);
  if (parts.size() < 3 || parts[0] != "api" || parts[1] != "v1") {
    return error(404, "not_found", "no such endpoint: " + path);
  }
  const std::string& resource = parts[2];

  if (parts.size() == 3) {
    if (resource == "schema") {
      api::check_params(params, {});
      return {200, structure_to_json(onto.schema()), 0, {}};
    }
    if (resource == "factors") {
      api::check_params(params, {"scope", "aspect", "text_query", "has_approach", "has_dataset", "accessibility",
                                 "evidence", "practitioners", "limit", "offset"});
      return listing(api::factors(onto, api::parse_filter(params), api::parse_page(params)));
    }
    for (const auto& [plural, taxonomy] : {std::pair<std::string_view, std::string_view>{"descriptions", "description"},
                                           {"datasets", "dataset"},
                                           {"approaches", "approach"}}) {
      if (resource == plural) {
        api::check_params(params, {"limit", "offset"});
        return listing(api::objects(onto, taxonomy, api::parse_page(params)));
      }
    }
    api::check_params(params, {});
    if (resource == "stats") return {200, api::stats(onto), 0, {}};
    if (resource == "gaps") return {200, api::gaps(onto), 0, {}};
    if (resource == "authors") return {200, api::authors(onto), 0, {}};
    if (resource == "validation") return {200, api::validation(*snap.repo), 0, {}};
  } else if (resource == "factors" && (parts.size() == 4 || (parts.size() == 5 && parts[4] == "resources"))) {
    api::check_params(params, {});
    const auto resources = resources_for_factor(onto, parts[3]);
    if (parts.size() == 4) return {200, factor_json(onto, *resources.factor), 0, {}};
    return {200, to_json(onto, resources), 0, {}};
  }
  return error(404, "not_found", "no such endpoint: " + path);
}

int Service::start() {
  server_ = std::make_unique<httplib::Server>();
  const auto serve = [this](const httplib::Request& req, httplib::Response& res) {
    api::Params params(req.params.begin(), req.params.end());
    const ApiResponse out = handle(req.method, req.path, params);
    res.status = out.status;
    for (const auto& [name, value] : out.headers) res.set_header(name, value);
    res.set_header("X-Snapshot-Version", std::to_string(out.snapshot_version));
    res.set_content(out.body.dump(), "application/json; charset=utf-8");
  };
  server_->Get(".*", serve);
  server_->Post(".*", serve);
  server_->Put(".*", serve);
  server_->Patch(".*", serve);
  server_->Delete(".*", serve);

  const int port = config_.port == 0 ? server_->bind_to_any_port(config_.bind_address)
                                     : (server_->bind_to_port(config_.bind_address, config_.port) ? config_.port : -1);
  if (port < 0) throw IoError("cannot bind " + config_.bind_address + ":" + std::to_string(config_.port));
  server_thread_ = std::make_unique<std::thread>([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port;
}

void Service::wait() {
  if (server_thread_ && server_thread_->joinable()) server_thread_->join();
}

void Service::stop() {
  if (server_) server_->stop();
  wait();
  server_thread_.reset();
}

}  // namespace reqont

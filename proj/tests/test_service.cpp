#include "golden.hpp"

#include "reqont/cli.hpp"
#include "reqont/service.hpp"

#include <gtest/gtest.h>
#include <httplib.h>

#include <atomic>
#include <condition_variable>
#include <future>
#include <map>
#include <sstream>
#include <thread>

using namespace reqont;
using namespace reqont::testing;
using nlohmann::json;

namespace {

ServiceConfig config_for(const fs::path& root) {
  ServiceConfig config;
  config.repository_root = root;
  config.port = 0;
  return config;
}

void add_reference(const fs::path& root) {
  auto doc = json::parse(read_file(root / "extractions" / "femmer2017rapid.json"));
  doc["reference"]["key"] = "femmer2017copy";
  write_file(root / "extractions" / "femmer2017copy.json", doc.dump());
}

httplib::Result get(httplib::Client& client, const GoldenCase& c) {
  httplib::Params params(c.params.begin(), c.params.end());
  if (c.method == "POST") return client.Post(c.path, "", "application/json");
  return client.Get(c.path, params, httplib::Headers{});
}

}  // namespace

TEST(Service, GoldenResponses) {
  Service service(config_for(kSeedDir));
  for (const auto& c : golden_cases()) {
    const auto response = service.handle(c.method, c.path, to_params(c));
    const std::string diff = check_golden(c, golden_form(response));
    EXPECT_TRUE(diff.empty()) << diff;
  }
}

TEST(Service, GoldenCasesCoverEveryEndpointAndStatus) {
  std::set<std::string> paths;
  std::set<int> statuses;
  Service service(config_for(kSeedDir));
  for (const auto& c : golden_cases()) {
    paths.insert(c.path);
    statuses.insert(service.handle(c.method, c.path, to_params(c)).status);
  }
  for (const char* endpoint :
       {"/api/v1/schema", "/api/v1/factors", "/api/v1/factors/containing-subflows",
        "/api/v1/factors/containing-subflows/resources", "/api/v1/descriptions", "/api/v1/datasets",
        "/api/v1/approaches", "/api/v1/stats", "/api/v1/gaps", "/api/v1/authors", "/api/v1/validation",
        "/api/v1/health"}) {
    EXPECT_TRUE(paths.contains(endpoint)) << endpoint;
    EXPECT_EQ(service.handle("GET", endpoint, {}).status, 200) << endpoint;
  }
  EXPECT_EQ(statuses, (std::set<int>{200, 400, 404, 405}));
}

TEST(Service, PaginationPastEndIsEmpty) {
  Service service(config_for(kSeedDir));
  for (const char* endpoint : {"/api/v1/descriptions", "/api/v1/datasets", "/api/v1/approaches"}) {
    const auto r = service.handle("GET", endpoint, {{"offset", "5"}, {"limit", "10"}});
    EXPECT_EQ(r.status, 200) << endpoint;
    EXPECT_EQ(r.body, nlohmann::json::array()) << endpoint;
    EXPECT_EQ(r.headers.at("X-Total-Count"), "1") << endpoint;
  }
}

TEST(Service, SpecExamples) {
  Service service(config_for(kSeedDir));
  auto r = service.handle("GET", "/api/v1/factors", {{"scope", "use case"}});
  EXPECT_EQ(r.status, 200);
  ASSERT_TRUE(r.body.is_array());
  EXPECT_EQ(r.body.size(), 1u);
  EXPECT_EQ(r.headers.at("X-Total-Count"), "1");

  r = service.handle("GET", "/api/v1/factors/unknown-key", {});
  EXPECT_EQ(r.status, 404);
  EXPECT_EQ(r.body["code"], "unknown_factor");

  r = service.handle("GET", "/api/v1/factors", {{"scope", "chapter"}});
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(r.body["code"], "unknown_characteristic");

  r = service.handle("GET", "/api/v1/health", {});
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.body["status"], "ok");
  EXPECT_EQ(r.body["n_references"], 2);
  EXPECT_TRUE(r.body.contains("snapshot_loaded_at"));
}

TEST(Service, Pagination) {
  Service service(config_for(kFixtureDir / "synthetic12"));
  const auto all = service.handle("GET", "/api/v1/factors", {});
  ASSERT_EQ(all.body.size(), 7u);
  const auto page = service.handle("GET", "/api/v1/factors", {{"limit", "2"}, {"offset", "3"}});
  EXPECT_EQ(page.headers.at("X-Total-Count"), "7");
  ASSERT_EQ(page.body.size(), 2u);
  EXPECT_EQ(page.body[0], all.body[3]);
  EXPECT_EQ(page.body[1], all.body[4]);
}

TEST(Service, HttpTransportMatchesHandler) {
  Service service(config_for(kSeedDir));
  const int port = service.start();
  httplib::Client client("127.0.0.1", port);
  for (const auto& c : golden_cases()) {
    auto res = get(client, c);
    ASSERT_TRUE(res) << c.name;
    EXPECT_EQ(res->get_header_value("Content-Type"), "application/json; charset=utf-8");
    EXPECT_EQ(res->get_header_value("X-Snapshot-Version"), "1");
    const auto actual = golden_form(res->status, res->get_header_value("X-Total-Count"), json::parse(res->body));
    const auto direct = golden_form(service.handle(c.method, c.path, to_params(c)));
    EXPECT_EQ(actual, direct) << c.name;
  }
  service.stop();
}

TEST(Service, ReloadPicksUpChanges) {
  TempDir dir;
  copy_repository(kSeedDir, dir.path());
  Service service(config_for(dir.path()));
  EXPECT_EQ(service.handle("GET", "/api/v1/stats", {}).body["n_references"], 2);
  add_reference(dir.path());
  EXPECT_EQ(service.handle("GET", "/api/v1/stats", {}).body["n_references"], 2);
  ASSERT_TRUE(service.reload());
  const auto r = service.handle("GET", "/api/v1/stats", {});
  EXPECT_EQ(r.body["n_references"], 3);
  EXPECT_EQ(r.snapshot_version, 2u);
}

TEST(Service, FailedReloadKeepsOldSnapshotAndDegradesHealth) {
  TempDir dir;
  copy_repository(kSeedDir, dir.path());
  Service service(config_for(dir.path()));
  write_file(dir.path() / "extractions" / "broken.json", "{ not json");
  EXPECT_FALSE(service.reload());
  const auto health = service.handle("GET", "/api/v1/health", {});
  EXPECT_EQ(health.status, 503);
  EXPECT_EQ(health.body["status"], "degraded");
  EXPECT_NE(health.body["reload_error"].get<std::string>().find("broken.json"), std::string::npos);
  const auto stats = service.handle("GET", "/api/v1/stats", {});
  EXPECT_EQ(stats.status, 200);
  EXPECT_EQ(stats.body["n_references"], 2);
  EXPECT_EQ(stats.snapshot_version, 1u);

  fs::remove(dir.path() / "extractions" / "broken.json");
  EXPECT_TRUE(service.reload());
  EXPECT_EQ(service.handle("GET", "/api/v1/health", {}).status, 200);
}

TEST(Service, RefusesToStartOnParseFailure) {
  TempDir dir;
  copy_repository(kSeedDir, dir.path());
  write_file(dir.path() / "structure.json", "[");
  EXPECT_THROW(Service(config_for(dir.path())), ParseError);
  fs::remove(dir.path() / "structure.json");
  EXPECT_THROW(Service(config_for(dir.path())), IoError);
}

TEST(Service, StartsWithDomainViolations) {
  TempDir dir;
  copy_repository(kSeedDir, dir.path());
  auto doc = json::parse(read_file(dir.path() / "extractions" / "femmer2017rapid.json"));
  doc["objects"][0]["relations"]["descriptions"] = {"femmer2017requirements#description:gone"};
  write_file(dir.path() / "extractions" / "femmer2017rapid.json", doc.dump());
  Service service(config_for(dir.path()));
  const auto validation = service.handle("GET", "/api/v1/validation", {});
  EXPECT_EQ(validation.status, 200);
  EXPECT_EQ(validation.body["link_errors"][0]["code"], "dangling-relation");
  EXPECT_EQ(validation.body["quarantined_references"], json::array({"femmer2017rapid"}));
  EXPECT_EQ(service.handle("GET", "/api/v1/stats", {}).body["n_references"], 1);
}

TEST(Service, InFlightRequestFinishesOnOldSnapshot) {
  TempDir dir;
  copy_repository(kSeedDir, dir.path());
  Service service(config_for(dir.path()));

  std::mutex m;
  std::condition_variable cv;
  bool pinned = false;
  bool release = false;
  std::atomic<bool> hold_next{true};
  service.set_request_observer([&](std::uint64_t) {
    if (!hold_next.exchange(false)) return;
    std::unique_lock lock(m);
    pinned = true;
    cv.notify_all();
    cv.wait(lock, [&] { return release; });
  });

  auto in_flight = std::async(std::launch::async, [&] { return service.handle("GET", "/api/v1/stats", {}); });
  {
    std::unique_lock lock(m);
    cv.wait(lock, [&] { return pinned; });
  }
  add_reference(dir.path());
  ASSERT_TRUE(service.reload());
  const auto fresh = service.handle("GET", "/api/v1/stats", {});
  {
    std::lock_guard lock(m);
    release = true;
  }
  cv.notify_all();
  const auto old = in_flight.get();

  EXPECT_EQ(old.snapshot_version, 1u);
  EXPECT_EQ(old.body["n_references"], 2);
  EXPECT_EQ(fresh.snapshot_version, 2u);
  EXPECT_EQ(fresh.body["n_references"], 3);
}

TEST(Service, ConcurrentReadsSeeOneVersionEach) {
  TempDir dir;
  copy_repository(kSeedDir, dir.path());
  Service service(config_for(dir.path()));
  const int port = service.start();

  std::atomic<bool> done{false};
  std::thread reloader([&] {
    for (int i = 0; i < 20; ++i) {
      if (i % 2 == 0) {
        add_reference(dir.path());
      } else {
        fs::remove(dir.path() / "extractions" / "femmer2017copy.json");
      }
      service.reload();
    }
    done = true;
  });

  std::mutex m;
  std::map<std::string, std::set<int>> counts_by_version;
  std::vector<std::thread> readers;
  for (int t = 0; t < 3; ++t) {
    readers.emplace_back([&] {
      httplib::Client client("127.0.0.1", port);
      while (!done) {
        auto res = client.Get("/api/v1/stats");
        if (!res) continue;
        const int n = json::parse(res->body)["n_references"];
        std::lock_guard lock(m);
        counts_by_version[res->get_header_value("X-Snapshot-Version")].insert(n);
      }
    });
  }
  reloader.join();
  for (auto& r : readers) r.join();
  service.stop();

  ASSERT_FALSE(counts_by_version.empty());
  for (const auto& [version, counts] : counts_by_version) {
    EXPECT_EQ(counts.size(), 1u) << "version " << version;
    const int expected = std::stoi(version) % 2 == 0 ? 3 : 2;
    EXPECT_EQ(*counts.begin(), expected) << "version " << version;
  }
}

TEST(Service, ReadOnly) {
  TempDir dir;
  copy_repository(kSeedDir, dir.path());
  std::map<fs::path, std::string> before;
  for (const auto& e : fs::recursive_directory_iterator(dir.path())) {
    if (e.is_regular_file()) before[e.path()] = read_file(e.path());
  }
  Service service(config_for(dir.path()));
  for (const auto& c : golden_cases()) service.handle(c.method, c.path, to_params(c));
  for (const char* method : {"POST", "PUT", "PATCH", "DELETE"}) {
    EXPECT_EQ(service.handle(method, "/api/v1/factors/containing-subflows", {}).status, 405);
  }
  std::map<fs::path, std::string> after;
  for (const auto& e : fs::recursive_directory_iterator(dir.path())) {
    if (e.is_regular_file()) after[e.path()] = read_file(e.path());
  }
  EXPECT_EQ(before, after);
}

TEST(Service, PortOutOfRangeIsRejected) {
  ServiceConfig config = config_for(kSeedDir);
  config.port = 70000;
  EXPECT_THROW(check_config(config), std::invalid_argument);
}

TEST(Service, CliAndHttpAnswersAreIdentical) {
  Service service(config_for(kFixtureDir / "synthetic12"));
  const std::string repo = (kFixtureDir / "synthetic12").string();
  const auto cli_json = [&](std::vector<std::string> args) {
    args.insert(args.end(), {"--repo", repo, "--format", "json"});
    std::ostringstream out, err;
    EXPECT_EQ(run_cli(args, out, err), 0) << err.str();
    return json::parse(out.str());
  };
  EXPECT_EQ(cli_json({"stats"}), service.handle("GET", "/api/v1/stats", {}).body);
  EXPECT_EQ(cli_json({"gaps"}), service.handle("GET", "/api/v1/gaps", {}).body);
  EXPECT_EQ(cli_json({"authors"}), service.handle("GET", "/api/v1/authors", {}).body);
  EXPECT_EQ(cli_json({"query"}), service.handle("GET", "/api/v1/factors", {}).body);
  EXPECT_EQ(cli_json({"query", "--scope", "word"}), service.handle("GET", "/api/v1/factors", {{"scope", "word"}}).body);
  EXPECT_EQ(cli_json({"query", "--aspect", "ambiguity:impacted negatively", "--has-approach", "true"}),
            service.handle("GET", "/api/v1/factors",
                           {{"aspect", "ambiguity:impacted negatively"}, {"has_approach", "true"}})
                .body);
  EXPECT_EQ(cli_json({"query", "--limit", "2", "--offset", "1"}),
            service.handle("GET", "/api/v1/factors", {{"limit", "2"}, {"offset", "1"}}).body);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <thread>

#include "support.hpp"
#include "tdebt/error.hpp"
#include "tdebt/ingest.hpp"

using namespace tdebt;
using nlohmann::json;

namespace {

// In-process metrics server: project "demo" has 5 analyses over 2 pages,
// "empty" has none, "secure" wants a bearer token, anything else is 404.
struct MockServer {
  httplib::Server server;
  int port = 0;
  std::thread thread;

  MockServer() {
    server.Get("/api/snapshots", [](const httplib::Request& req, httplib::Response& res) {
      const std::string project = req.get_param_value("project");
      const int page = std::stoi(req.get_param_value("p"));

      if (project == "secure" && req.get_header_value("Authorization") != "Bearer sesame") {
        res.status = 401;
        return;
      }
      if (project != "demo" && project != "empty" && project != "secure") {
        res.status = 404;
        return;
      }

      json analyses = json::array();
      if (project != "empty") {
        const int total = 5, page_size = 3;
        const int first = (page - 1) * page_size;
        for (int i = first; i < std::min(total, first + page_size); ++i) {
          std::string sha(40, '0');
          sha[39] = static_cast<char>('a' + i);
          json measures = {
              {"classes", 100 + i},
              {"ncloc", std::to_string(9000 + 10 * i)},  // string-typed number
              {"ncloc_language_distribution", "java=8000;xml=100"},
              {"sqale_index", 5000 + i},
              {"reliability_remediation_effort", 200 + i},
          };
          analyses.push_back({{"sha", sha},
                              {"date", "202" + std::to_string(i % 3) + "-01-01T00:00:00Z"},
                              {"measures", measures}});
        }
      }
      res.set_content(json{{"analyses", analyses}}.dump(), "application/json");
    });
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }

  ~MockServer() {
    server.stop();
    thread.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port); }
};

std::vector<std::string> some_keys() {
  return {"classes", "ncloc", "ncloc_language_distribution", "sqale_index",
          "reliability_remediation_effort"};
}

}  // namespace

TEST_CASE("fetch: zero analyses gives an empty list") {
  MockServer mock;
  auto snaps = fetch_snapshots(mock.url(), "empty", some_keys());
  CHECK(snaps.empty());
}

TEST_CASE("fetch: pagination is followed to exhaustion") {
  MockServer mock;
  auto snaps = fetch_snapshots(mock.url(), "demo", some_keys());
  REQUIRE(snaps.size() == 5);
  CHECK(snaps[0].metric("classes") == 100);
  CHECK(snaps[4].metric("classes") == 104);
  CHECK(snaps[1].metric("ncloc") == 9010);  // string-typed measure parsed
  CHECK(snaps[0].sqale_index == 5000);
  // Measures not returned by the server stay missing.
  CHECK(is_missing(snaps[0].metric("complexity")));
  CHECK(is_missing(snaps[0].security_remediation_effort));
  auto lang =
      snaps[2].distributions[*schema::distribution_index("ncloc_language_distribution")];
  REQUIRE(lang.has_value());
  CHECK(lang->at("java") == 8000);
}

TEST_CASE("fetch: 401 maps to an auth error with no partial data") {
  MockServer mock;
  try {
    fetch_snapshots(mock.url(), "secure", some_keys());
    FAIL("expected auth error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Auth);
  }
  // Same project succeeds once the token is supplied.
  auto snaps = fetch_snapshots(mock.url(), "secure", some_keys(), std::string("sesame"));
  CHECK(snaps.size() == 5);
}

TEST_CASE("fetch: unknown project maps to not-found") {
  MockServer mock;
  try {
    fetch_snapshots(mock.url(), "nope", some_keys());
    FAIL("expected not-found error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotFound);
  }
}

TEST_CASE("fetch: unreachable server raises a transport error naming attempts") {
  FetchOptions options;
  options.max_attempts = 2;
  options.timeout_seconds = 1;
  try {
    fetch_snapshots("http://127.0.0.1:9", "demo", some_keys(), std::nullopt, options);
    FAIL("expected transport error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Transport);
    CHECK(std::string(e.what()).find("2 attempts") != std::string::npos);
  }
}

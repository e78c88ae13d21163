// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cstdlib>
#include <future>
#include <thread>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "cohortkg/api.hpp"
#include "cohortkg/cohort_query.hpp"
#include "support.hpp"

namespace service = cohortkg::service;
namespace t = cohortkg::testing;
using nlohmann::ordered_json;

namespace {

const service::Api& api() { return t::fixture_api(); }

service::Response post(const std::string& path, const ordered_json& body) {
  return api().handle("POST", path, body.dump());
}

// Asks the kernel for an unused port, then releases it for the server.
int free_port() {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) return -1;
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  socklen_t len = sizeof addr;
  int port = -1;
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0 &&
      ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len) == 0) {
    port = ntohs(addr.sin_port);
  }
  ::close(fd);
  return port;
}

}  // namespace

TEST(Api, Goldens) {
  const bool update = std::getenv("COHORTKG_UPDATE_GOLDEN") != nullptr;
  for (const auto& problem : t::check_api_goldens(api(), update)) ADD_FAILURE() << problem;
}

TEST(Api, FacetsAlwaysListAllFive) {
  for (const auto& study : api().corpus().studies()) {
    auto r = api().handle("GET", "/api/studies/" + study.study_id + "/facets");
    ASSERT_EQ(r.status, 200);
    ASSERT_EQ(r.body["facets"].size(), 5u);
    std::vector<std::string> ids;
    for (const auto& f : r.body["facets"]) ids.push_back(f["id"]);
    EXPECT_EQ(ids, (std::vector<std::string>{"age", "bmi", "sbp", "hba1c", "glucose"}));
  }
}

TEST(Api, StudiesCohortSizeIsQuerySum) {
  auto r = api().handle("GET", "/api/studies");
  ASSERT_EQ(r.status, 200);
  ASSERT_EQ(r.body.size(), 20u);
  for (const auto& item : r.body) {
    const auto* study = api().corpus().find(item["study_id"]);
    ASSERT_TRUE(study);
    std::int64_t sum = 0;
    for (const auto& arm : study->arms) sum += arm.population_size;
    EXPECT_EQ(item["cohort_size"].get<std::int64_t>(), sum);
  }
  // The quality query with no thresholds reports the same cohort sizes.
  auto q = post("/api/query/quality",
                {{"min_cohort", 0}, {"drug_family", "sco:Intervention"}, {"arm_fraction", 1e-9}});
  ASSERT_EQ(q.status, 200);
  for (const auto& m : q.body["matches"]) {
    for (const auto& item : r.body) {
      if (item["study_id"] == m["study_id"]) {
        EXPECT_EQ(item["cohort_size"], m["cohort_size"]);
      }
    }
  }
}

TEST(Api, QueryEndpoints) {
  auto match = post("/api/query/match",
                    {{"criteria", {{{"test", {{"type", "has_subset_with"},
                                              {"values", {"Male", "African American"}}}}}}}});
  ASSERT_EQ(match.status, 200) << match.body.dump();
  EXPECT_EQ(match.body["percentage"], 75.0);
  auto limitation = post("/api/query/limitation",
                         {{"subgroup", {{"characteristic", "Age"},
                                        {"test", {{"type", "statistic_bound"},
                                                  {"which", "upper_bound"},
                                                  {"op", "<"},
                                                  {"threshold", 70}}}}}});
  ASSERT_EQ(limitation.status, 200) << limitation.body.dump();
  EXPECT_EQ(limitation.body["numerator"], 10);
  EXPECT_EQ(limitation.body["denominator"], 21);
  // The response decodes back into the same report.
  auto decoded = limitation.body.get<cohortkg::query::QueryReport>();
  EXPECT_EQ(ordered_json(decoded), limitation.body);

  auto quality = post("/api/query/quality",
                      {{"min_cohort", 1000}, {"drug_family", "sco:Guanidines"},
                       {"arm_fraction", 0.3333333333333333}});
  ASSERT_EQ(quality.status, 200);
  EXPECT_EQ(quality.body["percentage"], 5.0);
}

TEST(Api, QueryErrors) {
  auto zero = post("/api/query/quality",
                   {{"min_cohort", 1000}, {"drug_family", "sco:Guanidines"}, {"arm_fraction", 0}});
  EXPECT_EQ(zero.status, 400);
  EXPECT_EQ(zero.body["error"], "bad_request");
  EXPECT_EQ(post("/api/query/nothing", ordered_json::object()).status, 404);
  EXPECT_EQ(api().handle("POST", "/api/query/match", "{nope").status, 400);
  EXPECT_EQ(post("/api/query/match", {{"criteria", ordered_json::array()}}).status, 400);
  EXPECT_EQ(api().handle("GET", "/api/query/match").status, 405);
}

TEST(Api, ErrorBodiesAreErrorAndDetailOnly) {
  for (const auto& r : {api().handle("GET", "/nothing"), api().handle("DELETE", "/api/studies"),
                        api().handle("POST", "/api/similarity", "[]"),
                        post("/api/similarity", {{"study_id", "x"}, {"arm_id", "y"}, {"patient_id", "z"}})}) {
    EXPECT_GE(r.status, 400);
    EXPECT_TRUE(r.body.contains("error"));
    EXPECT_TRUE(r.body.contains("detail"));
    EXPECT_EQ(r.body.size(), 2u) << r.body.dump();
  }
}

TEST(Api, PercentEncodedStudyId) {
  EXPECT_EQ(api().handle("GET", "/api/studies/Telmisartan%52amipril/facets").status, 200);
  EXPECT_EQ(api().handle("GET", "/api/studies/Telmisartan%52amipril/facets?x=1").status, 200);
}

TEST(Api, IdenticalRequestsIdenticalResponses) {
  const ordered_json body = {{"study_id", "MetforminCardioOutcomes"}, {"arm_id", "Main"},
                             {"patient_id", "NH004"}};
  auto first = post("/api/similarity", body);
  std::vector<std::future<service::Response>> futures;
  for (int i = 0; i < 8; ++i) {
    futures.push_back(std::async(std::launch::async, [&] { return post("/api/similarity", body); }));
  }
  for (auto& f : futures) {
    auto r = f.get();
    EXPECT_EQ(r.status, first.status);
    EXPECT_EQ(r.body, first.body);
  }
}

TEST(ServerConfig, Validation) {
  EXPECT_EQ(service::parse_bind("127.0.0.1:8080").port, 8080);
  EXPECT_EQ(service::parse_bind("localhost:1").host, "localhost");
  EXPECT_THROW(service::parse_bind("127.0.0.1:0"), std::invalid_argument);
  EXPECT_THROW(service::parse_bind("127.0.0.1:65536"), std::invalid_argument);
  EXPECT_THROW(service::parse_bind("127.0.0.1"), std::invalid_argument);
  EXPECT_THROW(service::parse_bind("host:80x"), std::invalid_argument);
  service::ServerConfig config;
  config.corpus_dir = t::fixture_corpus_dir();
  config.patients_file = t::data_dir() / "patients" / "nhanes_sample.csv";
  config.vocab_file = t::vocab_path();
  EXPECT_NO_THROW(service::validate(config));
  config.patients_file = "/nonexistent.csv";
  EXPECT_THROW(service::validate(config), std::invalid_argument);
}

TEST(HttpServer, ServesJsonWithCors) {
  service::ServerConfig config;
  config.corpus_dir = t::fixture_corpus_dir();
  config.patients_file = t::data_dir() / "patients" / "nhanes_sample.csv";
  config.vocab_file = t::vocab_path();
  config.cors_allowlist = {"http://localhost:5173"};
  const int port = free_port();
  ASSERT_GT(port, 0);
  config.bind_address = "127.0.0.1:" + std::to_string(port);
  std::promise<void> ready;
  std::thread server([&] {
    service::serve(api(), config, [&](const std::string&) { ready.set_value(); });
  });
  // Stops and joins even when an assertion returns early.
  struct Stop {
    std::thread& thread;
    ~Stop() {
      service::stop_server();
      thread.join();
    }
  } stop{server};
  ASSERT_EQ(ready.get_future().wait_for(std::chrono::seconds(10)), std::future_status::ready);

  httplib::Client client("127.0.0.1", port);
  auto studies = client.Get("/api/studies", {{"Origin", "http://localhost:5173"}});
  ASSERT_TRUE(studies);
  EXPECT_EQ(studies->status, 200);
  EXPECT_EQ(studies->get_header_value("Access-Control-Allow-Origin"), "http://localhost:5173");
  EXPECT_EQ(ordered_json::parse(studies->body), api().handle("GET", "/api/studies").body);

  auto other = client.Get("/api/studies", {{"Origin", "http://evil.example"}});
  ASSERT_TRUE(other);
  EXPECT_FALSE(other->has_header("Access-Control-Allow-Origin"));

  auto sim = client.Post("/api/similarity",
                         R"({"study_id":"ObesityLifestyle","arm_id":"Main","patient_id":"NH001"})",
                         "application/json");
  ASSERT_TRUE(sim);
  EXPECT_EQ(sim->status, 422);
  EXPECT_EQ(ordered_json::parse(sim->body)["error"], "insufficient_axes");

  auto preflight = client.Options("/api/similarity", {{"Origin", "http://localhost:5173"}});
  ASSERT_TRUE(preflight);
  EXPECT_EQ(preflight->status, 204);

}

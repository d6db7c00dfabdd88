// Licensed under the Apache 2.0 license. See LICENSE in the project root.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

using nlohmann::json;

namespace {

const std::string cli = COMPOSER_CLI_PATH;
const std::string fixtures = COMPOSER_FIXTURE_DIR;
const std::string registry = fixtures + "/fraud_detection.registry.json";
const std::string request = fixtures + "/fraud_detection.request.json";

int run(const std::string& cmd, std::string* out = nullptr) {
  const std::string redirected = cmd + " 2>/dev/null";
  FILE* pipe = popen(redirected.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string text;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) text.append(buf, n);
  int status = pclose(pipe);
  if (out) *out = text;
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("compose and verify form a closed loop") {
  std::string out;
  REQUIRE(run(cli + " compose " + registry + " " + request, &out) == 0);
  json doc = json::parse(out);
  CHECK(doc["totalQos"] == 410);
  CHECK(doc["serviceCount"] == 4);

  const std::string tmp = "/tmp/composer_cli_sol.json";
  std::ofstream(tmp) << out;
  CHECK(run(cli + " verify " + registry + " " + request + " " + tmp) == 0);

  SUBCASE("tampered match edge fails verification") {
    json bad = doc;
    bad["matches"][0]["output"] = "xsd:boolean";
    std::ofstream(tmp) << bad.dump();
    std::string report;
    CHECK(run(cli + " verify " + registry + " " + request + " " + tmp, &report) == 4);
    CHECK(json::parse(report)["valid"] == false);
  }

  SUBCASE("wrong claimed qos fails verification") {
    json bad = doc;
    bad["totalQos"] = 400;
    std::ofstream(tmp) << bad.dump();
    std::string report;
    CHECK(run(cli + " verify " + registry + " " + request + " " + tmp, &report) == 4);
    std::string text = report;
    CHECK(text.find("400") != std::string::npos);
    CHECK(text.find("410") != std::string::npos);
  }
}

TEST_CASE("search strategy flags") {
  for (const std::string strategy : {"local", "global", "hybrid"}) {
    std::string out;
    REQUIRE(run(cli + " compose " + registry + " " + request + " --search " + strategy,
                &out) == 0);
    json doc = json::parse(out);
    CHECK(doc["totalQos"] == 410);
    CHECK(doc["serviceCount"] == 4);
  }
  // throughput criterion flag
  std::string out;
  REQUIRE(run(cli + " compose " + registry + " " + request + " --criterion throughput",
              &out) == 0);
  CHECK(json::parse(out)["criterion"] == "throughput");
}

TEST_CASE("hybrid never returns more services than local") {
  const std::string dir = "/tmp/composer_cli_cmp";
  REQUIRE(run(cli + " gen --seed 11 --services 400 --out " + dir + " --name c1") == 0);
  const std::string files = dir + "/c1.registry.json " + dir + "/c1.request.json";
  std::string local_out, hybrid_out;
  REQUIRE(run(cli + " compose " + files + " --search local --timeout-secs 30",
              &local_out) == 0);
  REQUIRE(run(cli + " compose " + files + " --search hybrid --timeout-secs 30",
              &hybrid_out) == 0);
  json l = json::parse(local_out), h = json::parse(hybrid_out);
  CHECK(h["serviceCount"].get<int>() <= l["serviceCount"].get<int>());
  CHECK(h["totalQos"] == l["totalQos"]);
}

TEST_CASE("permissive match policy round-trips through verify") {
  std::string out;
  REQUIRE(run(cli + " compose " + registry + " " + request + " --match-policy paper",
              &out) == 0);
  json doc = json::parse(out);
  CHECK(doc["totalQos"] == 410);
  CHECK(doc["matchPolicy"] == "paper");  // the verifier re-checks under it
  const std::string tmp = "/tmp/composer_cli_paper.json";
  std::ofstream(tmp) << out;
  CHECK(run(cli + " verify " + registry + " " + request + " " + tmp) == 0);
  CHECK(run(cli + " compose " + registry + " " + request + " --match-policy bogus") != 0);
}

TEST_CASE("throughput solutions round-trip, endpoints carry unbounded cost") {
  std::string out;
  REQUIRE(run(cli + " compose " + registry + " " + request + " --criterion throughput",
              &out) == 0);
  json doc = json::parse(out);
  CHECK(doc["criterion"] == "throughput");
  for (const auto& s : doc["services"])
    if (s["id"] == "So" || s["id"] == "Si") CHECK(s["qos"] == "unbounded");
  const std::string tmp = "/tmp/composer_cli_th.json";
  std::ofstream(tmp) << out;
  CHECK(run(cli + " verify " + registry + " " + request + " " + tmp) == 0);
}

TEST_CASE("no-prune produces the same answer") {
  std::string pruned, raw;
  REQUIRE(run(cli + " compose " + registry + " " + request, &pruned) == 0);
  REQUIRE(run(cli + " compose " + registry + " " + request + " --no-prune", &raw) == 0);
  json a = json::parse(pruned), b = json::parse(raw);
  CHECK(a["totalQos"] == b["totalQos"]);
  CHECK(a["serviceCount"] == b["serviceCount"]);
  CHECK(b["pruneReport"]["passes"].empty());
}

TEST_CASE("missing and unsolvable inputs map to exit codes") {
  CHECK(run(cli + " compose /nonexistent.json " + request) == 1);

  const std::string bad_request = "/tmp/composer_cli_badreq.json";
  std::ofstream(bad_request)
      << R"({"provided": ["ont4:ClientID"], "wanted": ["xsd:boolean"]})";
  CHECK(run(cli + " compose " + registry + " " + bad_request) == 2);
}

TEST_CASE("generation is reproducible and composable") {
  const std::string dir = "/tmp/composer_cli_gen";
  REQUIRE(run(cli + " gen --seed 7 --services 300 --out " + dir + " --name a") == 0);
  REQUIRE(run(cli + " gen --seed 7 --services 300 --out " + dir + " --name b") == 0);

  auto slurp = [](const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  CHECK(slurp(dir + "/a.registry.json") == slurp(dir + "/b.registry.json"));
  CHECK(slurp(dir + "/a.request.json") == slurp(dir + "/b.request.json"));

  std::string out;
  REQUIRE(run(cli + " compose " + dir + "/a.registry.json " + dir + "/a.request.json",
              &out) == 0);
  CHECK(json::parse(out)["serviceCount"].get<int>() >= 1);
}

TEST_CASE("bench emits one row per dataset and criterion") {
  const std::string dir = "/tmp/composer_cli_bench";
  REQUIRE(run(cli + " gen --seed 3 --services 200 --out " + dir + " --name d1") == 0);
  REQUIRE(run(cli + " gen --seed 4 --services 250 --out " + dir + " --name d2") == 0);

  std::string out;
  REQUIRE(run(cli + " bench " + dir + " --timeout-secs 20", &out) == 0);
  json rows = json::parse(out);
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows) {
    CHECK(row.contains("optimalQos"));
    CHECK(row["local"]["services"].get<int>() >= 1);
  }

  // deterministic counts across reruns (times vary)
  std::string again;
  REQUIRE(run(cli + " bench " + dir + " --timeout-secs 20", &again) == 0);
  json rows2 = json::parse(again);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i]["optimalQos"] == rows2[i]["optimalQos"]);
    CHECK(rows[i]["local"]["services"] == rows2[i]["local"]["services"]);
  }

  // a hopeless timeout forces the dash convention in the global column
  // while local stays intact
  std::string dashed;
  REQUIRE(run(cli + " bench " + dir + " --timeout-secs 0.0000001", &dashed) == 0);
  for (const auto& row : json::parse(dashed)) {
    CHECK(row["global"] == "-");
    CHECK(row["local"]["services"].get<int>() >= 1);
  }

  // table format renders
  std::string table;
  REQUIRE(run(cli + " bench " + dir + " --format table", &table) == 0);
  CHECK(table.find("dataset") != std::string::npos);
}

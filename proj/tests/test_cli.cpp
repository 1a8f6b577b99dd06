#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "edgenav/errors.hpp"
#include "edgenav/scheduler.hpp"
#include "testutil.hpp"

namespace {

int run(const std::string& args) {
  const std::string cmd =
      std::string(EDGENAV_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::vector<std::string> lines_of(const std::string& path) {
  std::istringstream in(testutil::read_file(path));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> fields_of(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> fields;
  std::string field;
  while (std::getline(in, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("gen-traces writes the corpus and is seed-deterministic") {
  testutil::ScopedTempDir dir("cli_gen");
  REQUIRE(run("gen-traces --seed 3 --out \"" + dir.file("a") + "\"") == 0);
  for (const char* name :
       {"route.csv", "bandwidth_b1.csv", "bandwidth_b2.csv", "bandwidth_b3.csv",
        "bandwidth_b4.csv", "manifest.json"}) {
    CAPTURE(name);
    CHECK(!testutil::read_file(dir.file("a") + "/" + name).empty());
  }
  REQUIRE(run("gen-traces --seed 3 --out \"" + dir.file("b") + "\"") == 0);
  CHECK(testutil::read_file(dir.file("a") + "/route.csv") ==
        testutil::read_file(dir.file("b") + "/route.csv"));
  CHECK(testutil::read_file(dir.file("a") + "/bandwidth_b2.csv") ==
        testutil::read_file(dir.file("b") + "/bandwidth_b2.csv"));
  REQUIRE(run("gen-traces --seed 4 --out \"" + dir.file("c") + "\"") == 0);
  CHECK(testutil::read_file(dir.file("a") + "/route.csv") !=
        testutil::read_file(dir.file("c") + "/route.csv"));
}

TEST_CASE("eval with the onboard policy is reproducible byte for byte") {
  testutil::ScopedTempDir dir("cli_eval");
  const std::string base = "eval --policy local --episodes 2 --seed 5 --out \"";
  REQUIRE(run(base + dir.file("a") + "\"") == 0);
  REQUIRE(run(base + dir.file("b") + "\"") == 0);
  for (const char* name : {"episodes.csv", "decisions.csv", "summary.csv"}) {
    CAPTURE(name);
    const std::string a = testutil::read_file(dir.file("a") + "/" + name);
    CHECK(!a.empty());
    CHECK(a == testutil::read_file(dir.file("b") + "/" + name));
  }

  const auto episodes = lines_of(dir.file("a") + "/episodes.csv");
  REQUIRE(episodes.size() >= 3);
  CHECK(episodes[0] ==
        "v_max,episode,qon,mean_latency_s,distance_m,offload_ratio,crashed,"
        "decisions");
  for (std::size_t i = 1; i < episodes.size(); ++i) {
    const auto f = fields_of(episodes[i]);
    REQUIRE(f.size() == 8);
    CHECK(f[5] == "0");  // the onboard policy never offloads
  }
}

TEST_CASE("distance scales with the speed cap while decisions do not") {
  testutil::ScopedTempDir dir("cli_vmax");
  REQUIRE(run("eval --policy local --episodes 1 --seed 9 --vmax 1.5,3 --out \"" +
              dir.file("o") + "\"") == 0);
  const auto summary = lines_of(dir.file("o") + "/summary.csv");
  REQUIRE(summary.size() == 3);
  CHECK(summary[0] ==
        "v_max,episodes,mean_qon,mean_latency_s,mean_distance_m,offload_ratio,"
        "crash_rate");
  const auto slow = fields_of(summary[1]);
  const auto fast = fields_of(summary[2]);
  REQUIRE(slow.size() == 7);
  REQUIRE(fast.size() == 7);
  CHECK(slow[0] == "1.5");
  CHECK(fast[0] == "3");
  // Error sequences do not depend on v_max, so the quality column matches and
  // distance doubles with the cap.
  CHECK(slow[2] == fast[2]);
  CHECK(slow[3] == fast[3]);
  const double d_slow = std::stod(slow[4]);
  const double d_fast = std::stod(fast[4]);
  CHECK(d_fast == doctest::Approx(2.0 * d_slow).epsilon(1e-8));
}

TEST_CASE("train produces a loadable agent and a per-episode log") {
  testutil::ScopedTempDir dir("cli_train");
  REQUIRE(run("train --episodes 0 --seed 2 --out \"" + dir.file("t0") + "\"") ==
          0);
  const edgenav::A2cAgent fresh =
      edgenav::load_agent(dir.file("t0") + "/agent.ckpt");
  CHECK(fresh.config.episodes == 0);
  CHECK(fresh.actor.widths().back() == 12);

  REQUIRE(run("train --episodes 2 --seed 2 --out \"" + dir.file("t2") + "\"") ==
          0);
  const auto log = lines_of(dir.file("t2") + "/training_log.csv");
  REQUIRE(log.size() == 3);
  CHECK(log[0] == "episode,mean_reward");
  const edgenav::A2cAgent trained =
      edgenav::load_agent(dir.file("t2") + "/agent.ckpt");
  CHECK(trained.config.episodes == 2);

  REQUIRE(run("eval --policy a2c --checkpoint \"" + dir.file("t2") +
              "/agent.ckpt\" --episodes 1 --vmax 3 --out \"" + dir.file("e") +
              "\"") == 0);
  CHECK(!testutil::read_file(dir.file("e") + "/summary.csv").empty());
}

TEST_CASE("fleet runs a small swarm and reports every drone") {
  testutil::ScopedTempDir dir("cli_fleet");
  REQUIRE(run("fleet --strategy even --drones 2 --policy local --lambda 4 "
              "--out \"" +
              dir.file("f") + "\"") == 0);
  const auto drones = lines_of(dir.file("f") + "/drones.csv");
  REQUIRE(drones.size() == 3);
  CHECK(drones[0] ==
        "drone,bandwidth_preset,qon,mean_latency_s,distance_m,offload_ratio,"
        "crashed,decisions,steps");
  const auto summary = lines_of(dir.file("f") + "/summary.csv");
  REQUIRE(summary.size() == 2);
  CHECK(summary[0] == "strategy,drones,lambda,mean_qon");
  const auto row = fields_of(summary[1]);
  CHECK(row[0] == "even");
  CHECK(row[1] == "2");
  CHECK(!testutil::read_file(dir.file("f") + "/epochs.csv").empty());
}

TEST_CASE("fit-regression recovers a logarithmic link curve") {
  testutil::ScopedTempDir dir("cli_fit");
  std::ostringstream csv;
  csv << "bandwidth_kbps,offloading_ratio\n";
  const double a = 0.12, c = -0.2;  // keeps every sample ratio inside [0, 1]
  for (double b : {400.0, 1100.0, 3000.0, 8100.0, 15000.0}) {
    char line[80];
    std::snprintf(line, sizeof line, "%.17g,%.17g\n", b,
                  a * std::log(b) + c);
    csv << line;
  }
  testutil::write_file(dir.file("samples.csv"), csv.str());
  REQUIRE(run("fit-regression --samples \"" + dir.file("samples.csv") +
              "\" --out \"" + dir.file("o") + "\"") == 0);
  const auto out = lines_of(dir.file("o") + "/regression.csv");
  REQUIRE(out.size() == 2);
  CHECK(out[0] == "a,c,f_min,f_max");
  const auto row = fields_of(out[1]);
  CHECK(std::stod(row[0]) == doctest::Approx(a).epsilon(1e-9));
  CHECK(std::stod(row[1]) == doctest::Approx(c).epsilon(1e-9));

  testutil::write_file(dir.file("bad.csv"), "bandwidth,ratio\n100,0.5\n");
  CHECK(run("fit-regression --samples \"" + dir.file("bad.csv") +
            "\" --out \"" + dir.file("o2") + "\"") == 1);
}

TEST_CASE("usage errors exit with a failure code") {
  testutil::ScopedTempDir dir("cli_err");
  CHECK(run("eval --policy a2c --episodes 1 --out \"" + dir.file("x") +
            "\"") == 1);  // a2c needs a checkpoint
  CHECK(run("eval --warp-speed 9 --out \"" + dir.file("y") + "\"") != 0);
  CHECK(run("eval --policy local --episodes 1 --out /proc/nonexistent/x") != 0);
  CHECK(run("frobnicate") != 0);
  CHECK(run("--help") == 0);

  testutil::write_file(dir.file("broken.json"), "{");
  CHECK(run("eval --policy local --episodes 1 --config \"" +
            dir.file("broken.json") + "\" --out \"" + dir.file("z") + "\"") ==
        1);
  testutil::write_file(dir.file("unknown.json"), R"({"sim": {"bogus": 1}})");
  CHECK(run("eval --policy local --episodes 1 --config \"" +
            dir.file("unknown.json") + "\" --out \"" + dir.file("w") + "\"") ==
        1);
}

}  // TEST_SUITE

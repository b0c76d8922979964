#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cperc/cli.hpp"

using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cperc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cperc::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("cperc_test_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("gw rows classify each dimension") {
  const Outcome o = run_cli({"gw", "--rho", "1.5", "--kappa", "0.9", "--d-max", "100"});
  REQUIRE(o.code == 0);
  const json doc = json::parse(o.out);
  CHECK(doc["tool"] == "cperc");
  CHECK(doc["command"] == "gw");
  CHECK(doc["version"] == cperc::cli::version());
  CHECK(doc["config"]["seed"] == 1);
  const json& rows = doc["rows"];
  REQUIRE(rows.size() == 100);
  for (const json& r : rows) {
    const int d = r["d"];
    CHECK(r["class"] == (d <= 7 ? "supercritical" : "subcritical"));
    CHECK((r["log_r_d"].get<double>() > 0.0) == (d <= 7));
  }
  CHECK(doc["kappa_critical"].get<double>() == doctest::Approx(0.9797958971));
}

TEST_CASE("threshold output is byte identical across runs and thread counts") {
  const std::vector<std::string> base{"threshold", "--d", "2", "--L", "8", "--replicates", "60"};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> args{"--seed", "9"};
    args.insert(args.end(), extra.begin(), extra.end());
    args.insert(args.end(), base.begin(), base.end());
    return run_cli(args);
  };
  const Outcome a = with({"--threads", "1"});
  const Outcome b = with({"--threads", "1"});
  const Outcome c = with({"--threads", "8"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  const json doc = json::parse(a.out);
  CHECK(doc["config"]["seed"] == 9);
  CHECK(doc["estimate"]["lambda_tilde"].get<double>() > 1.0);
  CHECK(doc["estimate"]["curve"].size() >= 6);
}

TEST_CASE("embed-bounds reports increasing eta and decreasing interference") {
  const Outcome o =
      run_cli({"embed-bounds", "--rho", "1.5", "--kappa", "0.99", "--d", "40,80,160,320", "--pairs", "2000"});
  REQUIRE(o.code == 0);
  const json doc = json::parse(o.out);
  CHECK(doc["eta_increasing"] == true);
  CHECK(doc["interference_decreasing"] == true);
  REQUIRE(doc["rows"].size() == 4);
  for (const json& r : doc["rows"]) {
    CHECK(r["inclusions"]["inclus1"] == true);
    CHECK(r["inclusions"]["inclus2"] == true);
    CHECK(r["inclusions"]["violations1"] == 0);
  }
}

TEST_CASE("exit codes") {
  const Outcome bad_measure = run_cli({"sample", "--d", "2", "--lambda", "1", "--measure", "nope"});
  CHECK(bad_measure.code == 2);
  const json e = json::parse(bad_measure.err);
  CHECK(e["error"]["category"] == "validation");
  CHECK(e["tool"] == "cperc");

  CHECK(run_cli({"sample", "--d", "2"}).code == 2);           // missing --lambda
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"gw", "--d-max", "5", "--rho", "0.5"}).code == 2);

  const Outcome huge = run_cli({"sample", "--d", "3", "--lambda", "1e9", "--L", "100"});
  CHECK(huge.code == 3);
  CHECK(json::parse(huge.err)["error"]["category"] == "sizing");

  const Outcome io = run_cli({"--out", "/nonexistent_dir_cperc/x.json", "gw", "--d-max", "3"});
  CHECK(io.code == 1);
  CHECK(json::parse(io.err)["error"]["category"] == "runtime");

  CHECK(run_cli({"--version"}).code == 0);
  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("config file values yield to the command line") {
  const auto cfg = temp_path("config.toml");
  {
    std::ofstream f(cfg);
    f << "seed = 5\n[gw]\nkappa = 0.5\nd-max = 3\n";
  }
  const Outcome from_file = run_cli({"--config", cfg.string(), "gw"});
  REQUIRE(from_file.code == 0);
  const json a = json::parse(from_file.out);
  CHECK(a["config"]["seed"] == 5);
  CHECK(a["config"]["kappa"] == 0.5);
  CHECK(a["rows"].size() == 3);

  const Outcome override_ = run_cli({"--config", cfg.string(), "--seed", "6", "gw", "--kappa", "0.7"});
  REQUIRE(override_.code == 0);
  const json b = json::parse(override_.out);
  CHECK(b["config"]["seed"] == 6);
  CHECK(b["config"]["kappa"] == 0.7);
  CHECK(b["config"]["d_max"] == 3);
  std::filesystem::remove(cfg);
}

TEST_CASE("--out writes the header with version and config") {
  const auto path = temp_path("out.json");
  const Outcome o = run_cli({"--out", path.string(), "embed-volumes", "--d", "20,40"});
  REQUIRE(o.code == 0);
  CHECK(o.out.empty());
  const json doc = json::parse(slurp(path));
  CHECK(doc["version"] == cperc::cli::version());
  CHECK(doc["command"] == "embed-volumes");
  CHECK(doc["config"]["d"] == json::array({20, 40}));
  CHECK(doc["rows"][0]["volumes"]["sandwich_holds"] == true);
  std::filesystem::remove(path);
}

TEST_CASE("CSV outputs open with a JSON comment line") {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"sample", "--d", "2", "--lambda", "0.3", "--L", "5"},
        std::vector<std::string>{"clusters", "--d", "2", "--lambda", "0.3", "--L", "5"},
        std::vector<std::string>{"gw", "--d-max", "4", "--format", "csv"}}) {
    const Outcome o = run_cli(args);
    REQUIRE(o.code == 0);
    REQUIRE(o.out.rfind("# {", 0) == 0);
    const std::string first = o.out.substr(2, o.out.find('\n') - 2);
    CHECK(json::parse(first)["tool"] == "cperc");
  }
}

TEST_CASE("clusters reads back a sampled configuration") {
  const auto path = temp_path("balls.csv");
  REQUIRE(run_cli({"--out", path.string(), "sample", "--d", "2", "--lambda", "0.4", "--L", "6"}).code == 0);
  const Outcome direct = run_cli({"clusters", "--d", "2", "--lambda", "0.4", "--L", "6", "--format", "json"});
  const Outcome read =
      run_cli({"clusters", "--d", "2", "--L", "6", "--input", path.string(), "--format", "json"});
  REQUIRE(direct.code == 0);
  REQUIRE(read.code == 0);
  const json a = json::parse(direct.out), b = json::parse(read.out);
  CHECK(a["balls"] == b["balls"]);
  CHECK(a["cluster_stats"] == b["cluster_stats"]);
  std::filesystem::remove(path);
}

TEST_CASE("oriented and embed-gplus subcommands") {
  const Outcome o = run_cli({"oriented", "--p", "0.3,0.9", "--n-max", "30", "--runs", "200"});
  REQUIRE(o.code == 0);
  const json doc = json::parse(o.out);
  REQUIRE(doc["rows"].size() == 2);
  CHECK(doc["rows"][0]["survival_frequency"].get<double>() <
        doc["rows"][1]["survival_frequency"].get<double>());

  const Outcome g = run_cli({"embed-gplus", "--d", "6", "--replicates", "200"});
  REQUIRE(g.code == 0);
  const json gd = json::parse(g.out);
  CHECK(gd["consistent_3se"] == true);
  CHECK(run_cli({"embed-gplus", "--d", "6", "--x0", "0,0"}).code == 2);
}

TEST_CASE("installed binary runs end to end") {
  const std::string cmd = std::string(CPERC_TOOL_PATH) + " gw --d-max 3 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string text;
  char buf[4096];
  while (const std::size_t n = fread(buf, 1, sizeof buf, pipe)) text.append(buf, n);
  const int status = pclose(pipe);
  CHECK(status == 0);
  CHECK(json::parse(text)["rows"].size() == 3);
  CHECK(text == run_cli({"gw", "--d-max", "3"}).out);
}

#include "eopt/report.hpp"
#include "test_util.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace eopt;
using json_io::Json;
namespace fs = std::filesystem;

namespace {

Json full_shift() { return {{"alphabet", 2}, {"transitions", "full"}}; }

Json diag_config() {
  return {{"system", full_shift()},
          {"cocycle",
           {{"d", 2}, {"memory", 1}, {"matrices", {{"0", {{2, 0}, {0, 1}}}, {"1", {{2, 0}, {0, 1}}}}}}},
          {"experiment", "beta"},
          {"params", {{"n_max", 24}, {"p_max", 12}, {"gap_tol", 1e-3}}}};
}

Json birkhoff_config() {
  return {{"system", full_shift()},
          {"potential", {{"memory", 1}, {"values", {{"0", 0}, {"1", 1}}}}},
          {"experiment", "birkhoff"}};
}

Json jsr_config() {
  return {{"system", full_shift()},
          {"cocycle", {{"d", 2}, {"memory", 1}, {"matrices", {{"0", {{1, 1}, {0, 1}}}, {"1", {{1, 0}, {1, 1}}}}}}},
          {"experiment", "beta"},
          {"params", {{"n_max", 12}, {"p_max", 8}, {"gap_tol", 1e-3}}}};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("eopt_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

RunOutcome quiet(const Json& config, const RunOptions& options = {}) {
  std::ostringstream log;
  return execute(config, options, log);
}

}  // namespace

TEST_SUITE("cli_report") {
  TEST_CASE("beta report for a constant diagonal cocycle") {
    const auto out = quiet(diag_config());
    CHECK(out.exit_code == kExitOk);
    const Json& b = out.report["results"]["bracket"];
    CHECK(std::abs(b["lower"].get<double>() - std::log(2.0)) <= 1e-12);
    CHECK(std::abs(b["upper"].get<double>() - std::log(2.0)) <= 1e-12);
    CHECK(out.report["status"] == "ok");
    CHECK(out.report["tool_version"] == std::string(kToolVersion));
    CHECK(out.report["norm_tag"] == "spectral");
    CHECK(out.report["series"] == "kind,n_or_p,value");
    CHECK(out.series_csv.rfind("kind,n_or_p,value\n", 0) == 0);
    CHECK(out.report["provenance"]["bracket.lower"] == "bracket");
    CHECK_FALSE(out.report["results"]["unique_at_resolution"].get<bool>());
  }

  TEST_CASE("birkhoff report") {
    const auto out = quiet(birkhoff_config());
    CHECK(out.exit_code == kExitOk);
    CHECK(out.report["results"]["beta"] == "1");
    CHECK(out.report["results"]["unique"] == true);
    CHECK(out.report["results"]["critical_cycles"] == Json::array({"1"}));
    CHECK(out.report["provenance"]["beta"] == "exact-rational");
  }

  TEST_CASE("parse and validation errors") {
    std::ostringstream log;
    const auto bad = execute_text("{\"system\": ", {}, log);
    CHECK(bad.exit_code == kExitInvalid);
    CHECK(bad.report["error"]["code"] == "ParseError");
    CHECK(bad.report["status"] == "error");

    Json no_exp = birkhoff_config();
    no_exp.erase("experiment");
    CHECK(quiet(no_exp).report["error"]["code"] == "ValidationError");
    Json unknown = birkhoff_config();
    unknown["experiment"] = "nonsense";
    CHECK(quiet(unknown).exit_code == kExitInvalid);
    Json both = birkhoff_config();
    both["cocycle"] = diag_config()["cocycle"];
    both["experiment"] = "beta";
    CHECK(quiet(both).exit_code == kExitInvalid);
    Json probe = birkhoff_config();
    probe["experiment"] = "probe";
    const auto no_seed = quiet(probe);
    CHECK(no_seed.exit_code == kExitInvalid);
    CHECK(no_seed.report["error"]["message"].get<std::string>().find("seed") != std::string::npos);
    Json singular = diag_config();
    singular["cocycle"]["matrices"]["1"] = {{1, 1}, {1, 1}};
    CHECK(quiet(singular).report["error"]["code"] == "NotInvertible");
    Json bad_tol = diag_config();
    bad_tol["params"]["gap_tol"] = -1;
    CHECK(quiet(bad_tol).exit_code == kExitInvalid);
    CHECK(quiet(Json::array()).exit_code == kExitInvalid);
  }

  TEST_CASE("budget exhaustion") {
    Json cfg = jsr_config();
    cfg["params"]["word_cap"] = 20;
    cfg["params"]["gap_tol"] = 1e-12;
    const auto out = quiet(cfg);
    CHECK(out.exit_code == kExitBudget);
    CHECK(out.report["error"]["code"] == "BudgetExceeded");
    CHECK(out.report.contains("partial_bracket"));
  }

  TEST_CASE("digest ignores output paths and threads") {
    Json a = diag_config();
    Json b = a;
    b["out"] = {{"report", "x.json"}};
    b["params"]["threads"] = 4;
    CHECK(config_digest(a) == config_digest(b));
    Json c = a;
    c["params"]["gap_tol"] = 1e-4;
    CHECK(config_digest(a) != config_digest(c));
    CHECK(config_digest(a).size() == 64);
  }

  TEST_CASE("cache hits, misses and corrupt entries") {
    TempDir dir;
    RunOptions opts;
    opts.cache_dir = dir.path.string();
    const Json cfg = jsr_config();
    const auto first = quiet(cfg, opts);
    CHECK(first.report["meta"]["cached"] == false);
    const auto second = quiet(cfg, opts);
    CHECK(second.report["meta"]["cached"] == true);
    CHECK(body_hash(first.report) == body_hash(second.report));
    CHECK(first.series_csv == second.series_csv);

    Json changed = cfg;
    changed["params"]["gap_tol"] = 1e-4;
    CHECK(quiet(changed, opts).report["meta"]["cached"] == false);

    const fs::path entry = dir.path / (config_digest(cfg) + ".json");
    REQUIRE(fs::exists(entry));
    {
      std::ofstream out(entry);
      out << "{ not json";
    }
    std::ostringstream log;
    const auto third = execute(cfg, opts, log);
    CHECK(third.report["meta"]["cached"] == false);
    CHECK(log.str().find("CacheCorrupt") != std::string::npos);
    CHECK(body_hash(third.report) == body_hash(first.report));

    Json tampered = Json::parse(std::ifstream(entry));
    tampered["body"]["results"]["slack"] = 0.5;
    {
      std::ofstream out(entry);
      out << tampered.dump();
    }
    std::ostringstream log2;
    CHECK(execute(cfg, opts, log2).report["meta"]["cached"] == false);
    CHECK(log2.str().find("CacheCorrupt") != std::string::npos);
  }

  TEST_CASE("reports are deterministic across runs and thread counts") {
    Json probe = birkhoff_config();
    probe["experiment"] = "probe";
    probe["params"] = {{"seed", 42}, {"samples", 50}};
    Json lambda = birkhoff_config();
    lambda["experiment"] = "lambda";
    lambda["params"] = {{"seed", 3}, {"measures", {{{"cycle", "0"}}, {{"cycle", "1"}}}}};
    for (const Json& cfg : {jsr_config(), diag_config(), birkhoff_config(), probe, lambda}) {
      const auto a = quiet(cfg);
      const auto b = quiet(cfg);
      RunOptions threaded;
      threaded.threads = 4;
      const auto c = quiet(cfg, threaded);
      CHECK(a.exit_code == kExitOk);
      CHECK(body_hash(a.report) == body_hash(b.report));
      CHECK(body_hash(a.report) == body_hash(c.report));
      CHECK(a.series_csv == c.series_csv);
      CHECK(a.report["meta"]["body_sha256"] == body_hash(a.report));
    }
  }

  TEST_CASE("every experiment runs") {
    const Json gamma = {{"memory", 1}, {"values", {{"0", 0}, {"1", 1}}}};
    struct Case {
      const char* experiment;
      Json params;
    };
    const std::vector<Case> cases{
        {"perturb", {{"gamma", gamma}, {"grid", 6}}},
        {"irregular", {{"c1", "0"}, {"c2", "1"}, {"depth", 6}, {"control", {{"preamble", "1"}, {"period", "01"}}}}},
        {"flatten", {{"values", {1, 0.99, -1}}, {"n", 1}}},
        {"measure", {{"measures", {{{"cycle", "0"}}, {{"stochastic", {{0.5, 0.5}, {0.5, 0.5}}}}}}}},
    };
    for (const auto& c : cases) {
      Json cfg = birkhoff_config();
      cfg["experiment"] = c.experiment;
      cfg["params"] = c.params;
      const auto out = quiet(cfg);
      INFO(c.experiment);
      CHECK(out.exit_code == kExitOk);
      CHECK(out.report["experiment"] == c.experiment);
      CHECK(out.report.contains("provenance"));
    }
    Json flatten = birkhoff_config();
    flatten["experiment"] = "flatten";
    flatten["params"] = {{"values", {1, 0.99, -1}}, {"n", 1}};
    const auto f = quiet(flatten);
    CHECK(f.report["results"]["g"] == Json::array({"1/2", "1/2", "-1/2"}));
    CHECK(f.report["results"]["argmax_count"] == 2);
    Json perturb = birkhoff_config();
    perturb["experiment"] = "perturb";
    perturb["params"] = {{"gamma", gamma}, {"grid", 3}};
    const auto p = quiet(perturb);
    CHECK(p.series_csv.rfind("epsilon,diam,hausdorff_to_limit,num_extreme_values\n", 0) == 0);
  }

  TEST_CASE("run writes report and series files") {
    TempDir dir;
    const fs::path config = dir.path / "c.json";
    const fs::path report = dir.path / "r.json";
    {
      std::ofstream out(config);
      out << jsr_config().dump();
    }
    std::ostringstream log;
    CHECK(run(config.string(), report.string(), {}, log) == kExitOk);
    REQUIRE(fs::exists(report));
    const Json written = Json::parse(std::ifstream(report));
    CHECK(written["meta"]["series_path"] == (dir.path / "r.csv").string());
    CHECK(fs::exists(dir.path / "r.csv"));
    CHECK(run((dir.path / "missing.json").string(), report.string(), {}, log) == kExitInvalid);

    RunOptions birk;
    birk.experiment = "birkhoff";
    {
      std::ofstream out(config);
      out << birkhoff_config().dump();
    }
    CHECK(run(config.string(), report.string(), birk, log) == kExitOk);
  }
}

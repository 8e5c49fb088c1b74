#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "mrca/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = mrca::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "mrca_cli_tests" / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("shortest round-trip floats") {
    CHECK(mrca::io::format_double(0.1) == "0.1");
    CHECK(mrca::io::format_double(1.0) == "1");
    CHECK(std::stod(mrca::io::format_double(1.0 / 3.0)) == 1.0 / 3.0);
  }

  TEST_CASE("unwritable output path raises IoError") {
    const fs::path blocker = scratch("blocker");
    fs::create_directories(blocker.parent_path());
    std::ofstream(blocker) << "file";
    CHECK_THROWS_AS(mrca::io::open_output(blocker / "sub" / "x.csv"), mrca::io::IoError);
  }
}

TEST_SUITE("cli") {
  TEST_CASE("usage errors exit with 2") {
    CHECK(run({}).code == mrca::cli::kUsage);
    CHECK(run({"nonsense"}).code == mrca::cli::kUsage);
    CHECK(run({"tables", "--which", "Q"}).code == mrca::cli::kUsage);
    CHECK(run({"simulate-lookdown", "--levels", "2", "--out", scratch("bad").string()}).code == mrca::cli::kUsage);
    CHECK(run({"simulate-particles", "--cap", "3", "--out", scratch("bad2").string()}).code == mrca::cli::kUsage);
    CHECK(run({"--help"}).code == mrca::cli::kOk);
  }

  TEST_CASE("I/O errors exit with 3") {
    const fs::path blocker = scratch("blocker_file");
    fs::create_directories(blocker.parent_path());
    std::ofstream(blocker) << "file";
    CHECK(run({"tables", "--which", "L", "--out", (blocker / "x").string()}).code == mrca::cli::kIo);
  }

  TEST_CASE("tables L") {
    const auto dir = scratch("tables_L");
    const auto r = run({"tables", "--which", "L", "--max", "5", "--out", dir.string()});
    REQUIRE(r.code == 0);
    const auto rows = lines(slurp(dir / "table_L.csv"));
    REQUIRE(rows.size() == 6);
    CHECK(rows[0] == "value,weight,tail_bound");
    CHECK(rows[1].rfind("1,1/3,", 0) == 0);
    CHECK(rows[2] == "2,1/6,");
    CHECK(rows[3] == "3,1/10,");
    CHECK(rows[4] == "4,1/15,");
    CHECK(rows[5] == "5,1/21,");
    CHECK(fs::exists(dir / "manifest.json"));
  }

  TEST_CASE("tables Z carries exact rows, pgf samples and moments") {
    const auto dir = scratch("tables_Z");
    REQUIRE(run({"tables", "--which", "Z", "--max", "6", "--out", dir.string()}).code == 0);
    const auto text = slurp(dir / "table_Z.csv");
    CHECK(text.find("0,1/3,") != std::string::npos);
    CHECK(text.find("1,11/27,") != std::string::npos);
    CHECK(fs::exists(dir / "table_Z_pgf.csv"));
    const auto m = json::parse(slurp(dir / "table_Z_moments.json"));
    CHECK(m["mean"].get<double>() == doctest::Approx(1.0));

    const auto jdir = scratch("tables_Z_json");
    REQUIRE(run({"tables", "--which", "Z", "--format", "json", "--out", jdir.string()}).code == 0);
    const auto doc = json::parse(slurp(jdir / "table_Z.json"));
    CHECK(doc["table"]["rows"][1]["exact"] == "11/27");
    CHECK(doc["pgf"].size() == 5);
  }

  TEST_CASE("tables Tc, K, LI and pi") {
    const auto dir = scratch("tables_misc");
    const auto tc = run({"tables", "--which", "Tc", "--out", dir.string()});
    REQUIRE(tc.code == 0);
    CHECK(tc.out.find("expected_Tc,0.5797362") != std::string::npos);
    const auto k = run({"tables", "--which", "K", "--level", "3", "--out", dir.string()});
    CHECK(k.out.find("1,2/3,") != std::string::npos);
    CHECK(k.out.find("2,1/3") != std::string::npos);
    const auto li = run({"tables", "--which", "LI", "--level", "2", "--max", "5", "--out", dir.string()});
    CHECK(li.out.find("3,1/5,") != std::string::npos);  // (1/30) / (1/6)
    const auto pi = run({"tables", "--which", "pi", "--max", "3", "--level", "2", "--out", dir.string()});
    CHECK(pi.out.find("\"()\",1/3") != std::string::npos);
    CHECK(pi.out.find("\"(3,2)\",1/30") != std::string::npos);
  }

  TEST_CASE("simulate-lookdown: increasing E column and determinism") {
    const auto a = scratch("ld_a");
    const auto b = scratch("ld_b");
    const std::vector<std::string> base{"simulate-lookdown", "--levels", "50", "--t-end", "200", "--seed", "7",
                                        "--theta", "2"};
    auto args_a = base;
    args_a.insert(args_a.end(), {"--out", a.string()});
    auto args_b = base;
    args_b.insert(args_b.end(), {"--out", b.string()});
    REQUIRE(run(args_a).code == 0);
    REQUIRE(run(args_b).code == 0);
    for (const char* f : {"events.csv", "mrca.csv", "observables.csv", "substitutions.csv", "summary.json"}) {
      CHECK_MESSAGE(slurp(a / f) == slurp(b / f), f);
    }
    const auto rows = lines(slurp(a / "mrca.csv"));
    REQUIRE(rows.size() > 10);
    CHECK(rows[0] == "E,B");
    double prev = -1e300;
    for (std::size_t k = 1; k < rows.size(); ++k) {
      const double e = std::stod(rows[k].substr(0, rows[k].find(',')));
      CHECK(e > prev);
      prev = e;
    }
    const auto manifest = json::parse(slurp(a / "manifest.json"));
    CHECK(manifest["seed"] == 7);
    CHECK(manifest["seed_from_entropy"] == false);
    CHECK(manifest["outputs"].size() == 6);
  }

  TEST_CASE("simulate-lookdown: tiny window reports open curves") {
    const auto dir = scratch("ld_small");
    const auto r = run({"simulate-lookdown", "--levels", "3", "--t-end", "0.05", "--seed", "1", "--out", dir.string()});
    REQUIRE(r.code == 0);
    const auto summary = json::parse(slurp(dir / "summary.json"));
    CHECK(summary.contains("open_curves"));
  }

  TEST_CASE("simulate-lookdown: jsonl event log") {
    const auto dir = scratch("ld_jsonl");
    REQUIRE(run({"simulate-lookdown", "--levels", "5", "--t-end", "3", "--seed", "2", "--format", "jsonl", "--out",
                 dir.string()})
                .code == 0);
    const auto first = lines(slurp(dir / "events.jsonl")).at(0);
    const auto ev = json::parse(first);
    CHECK(ev.contains("t"));
    CHECK(ev["i"].get<int>() < ev["j"].get<int>());
  }

  TEST_CASE("simulate-particles: exits, replay and entropy seeds") {
    const auto dir = scratch("pp");
    const auto r = run({"simulate-particles", "--cap", "100", "--horizon", "300", "--seed", "5", "--init", "stationary",
                        "--out", dir.string()});
    REQUIRE(r.code == 0);
    CHECK(lines(slurp(dir / "exits.csv")).size() > 1);
    CHECK(fs::exists(dir / "trajectory.csv"));
    const auto summary = json::parse(slurp(dir / "summary.json"));
    CHECK(summary.contains("gap_statistics"));

    const auto again = scratch("pp_replay");
    REQUIRE(run({"replay", (dir / "manifest.json").string(), "--out", again.string()}).code == 0);
    for (const char* f : {"exits.csv", "trajectory.csv", "summary.json"}) {
      CHECK_MESSAGE(slurp(dir / f) == slurp(again / f), f);
    }

    const auto free = scratch("pp_entropy");
    REQUIRE(run({"simulate-particles", "--cap", "50", "--horizon", "10", "--no-trajectory", "--out", free.string()})
                .code == 0);
    const auto m = json::parse(slurp(free / "manifest.json"));
    CHECK(m["seed_from_entropy"] == true);
    CHECK(!fs::exists(free / "trajectory.csv"));
  }

  TEST_CASE("default output directory comes from the environment") {
    const auto dir = scratch("env_out");
    ::setenv(mrca::cli::kOutDirEnv, dir.string().c_str(), 1);
    const auto r = run({"tables", "--which", "L", "--max", "3"});
    ::unsetenv(mrca::cli::kOutDirEnv);
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "table_L.csv"));
  }

  TEST_CASE("verify quick subset writes a report") {
    const auto dir = scratch("verify");
    const auto r = run({"verify", "--profile", "quick", "--only", "1", "2", "10", "--seed", "3", "--out", dir.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("criterion 1 PASS") != std::string::npos);
    const auto report = json::parse(slurp(dir / "report.json"));
    CHECK(report["criteria"].size() == 3);
    CHECK(report["pass"] == true);
    CHECK(run({"verify", "--only", "12", "--out", dir.string()}).code == mrca::cli::kUsage);
  }
}

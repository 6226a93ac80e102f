#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "cbi/io.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

const fs::path& work_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "cbi_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunResult run_cli(const std::string& args) {
  const fs::path out = work_dir() / "stdout.txt";
  const fs::path err = work_dir() / "stderr.txt";
  const std::string cmd = std::string(CBI_CLI_PATH) + " " + args + " > " +
                          out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = cbi::read_text_file(out.string());
  r.err = cbi::read_text_file(err.string());
  return r;
}

std::string write_file(const std::string& name, const std::string& content) {
  const fs::path p = work_dir() / name;
  std::ofstream f(p);
  f << content;
  return p.string();
}

const char* kDriftParams = R"({"c": 0.0, "beta": 1.0, "b": 0.0, "nu": [], "mu": []})";

}  // namespace

TEST_CASE("simulate writes an exact deterministic skeleton") {
  const std::string params = write_file("drift.json", kDriftParams);
  const std::string out = (work_dir() / "drift.csv").string();
  const RunResult r =
      run_cli("simulate --params " + params + " --n 3 --seed 5 --out " + out);
  REQUIRE(r.code == 0);
  CHECK(cbi::read_text_file(out) == "k,x\n0,0\n1,1\n2,2\n3,3\n");

  const auto meta = nlohmann::json::parse(r.out);
  CHECK(meta.at("command") == "simulate");
  CHECK(meta.at("n").get<int>() == 3);
  CHECK(meta.at("seed").get<std::uint64_t>() == 5);
  CHECK(meta.at("scheme") == "exact-pure-immigration");
}

TEST_CASE("simulate draws and reports a seed when none is given") {
  const std::string params = write_file("drift2.json", kDriftParams);
  const std::string out = (work_dir() / "seeded.csv").string();
  const RunResult r = run_cli("simulate --params " + params + " --n 2 --out " + out);
  REQUIRE(r.code == 0);
  const auto meta = nlohmann::json::parse(r.out);
  CHECK(meta.contains("seed"));
  CHECK(fs::exists(out));
}

TEST_CASE("estimate recovers the worked fixture") {
  const std::string in = write_file("fix.csv", "k,x\n0,0\n1,1\n2,3\n");
  const RunResult r = run_cli("estimate --in " + in);
  REQUIRE(r.code == 0);
  const auto est = nlohmann::json::parse(r.out);
  CHECK(est.at("hn_holds").get<bool>());
  CHECK(est.at("rho_hat").get<double>() == doctest::Approx(2.0));
  CHECK(est.at("betabar_hat").get<double>() == doctest::Approx(1.0));
  CHECK(est.at("b_tilde_hat").get<double>() == doctest::Approx(std::log(2.0)));
}

TEST_CASE("usage and input errors exit with code 1 and write no output") {
  const std::string params = write_file("drift3.json", kDriftParams);
  const std::string out = (work_dir() / "never.csv").string();

  CHECK(run_cli("simulate --params " + params + " --n 3 --bogus-flag --out " + out).code == 1);
  CHECK_FALSE(fs::exists(out));

  CHECK(run_cli("estimate --in " + (work_dir() / "missing.csv").string()).code == 1);

  const std::string bad = write_file("bad.json", "{\"c\": -1.0, \"beta\": 0.0, \"b\": 0.0}");
  CHECK(run_cli("simulate --params " + bad + " --n 3 --seed 1 --out " + out).code == 1);
  CHECK_FALSE(fs::exists(out));

  const std::string garbled = write_file("garbled.csv", "k,x\n0,0\n5,1\n");
  CHECK(run_cli("estimate --in " + garbled).code == 1);

  CHECK(run_cli("").code != 0);
}

TEST_CASE("moments subcommand reports the one-step variance constant") {
  const std::string params =
      write_file("varfix.json",
                 R"({"c": 1.0, "beta": 0.0, "b": 0.0, "nu": [{"z": 2.0, "rate": 0.5}], "mu": []})");
  const RunResult r = run_cli("moments --params " + params + " --t 1 --q 2");
  REQUIRE(r.code == 0);
  const auto m = nlohmann::json::parse(r.out);
  CHECK(m.at("t").get<double>() == 1.0);
  CHECK(m.at("values")[2].get<double>() == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("moments refuses a step too coarse for a stiff kernel") {
  const std::string params =
      write_file("stiff.json", R"({"c": 1.0, "beta": 0.5, "b": 3.0, "nu": [], "mu": []})");
  const RunResult r = run_cli("moments --params " + params + " --t 1 --q 8 --step 0.25");
  CHECK(r.code == 2);
  CHECK(r.err.find("step") != std::string::npos);
}

TEST_CASE("limit sampler degenerates to zero errors without branching noise") {
  const std::string params = write_file("drift4.json", kDriftParams);
  const std::string out = (work_dir() / "limits.csv").string();
  const RunResult r =
      run_cli("limit --params " + params + " --reps 5 --grid 100 --seed 2 --out " + out);
  REQUIRE(r.code == 0);
  std::ifstream csv(out);
  std::string header;
  std::getline(csv, header);
  CHECK(header == "rep,e1,e2");
  int rows = 0;
  for (std::string line; std::getline(csv, line);) {
    if (line.empty()) continue;
    CHECK(line == std::to_string(rows) + ",0,0");
    ++rows;
  }
  CHECK(rows == 5);
}

TEST_CASE("experiment reports are byte-identical across worker counts") {
  const std::string config = write_file("exp.json", R"({
    "params": {"c": 0.0, "beta": 0.0, "b": 0.0,
               "nu": [{"z": 1.0, "rate": 1.0}], "mu": []},
    "n_values": [50],
    "replicates": 100,
    "grid_points": 200,
    "seed": 9,
    "regime": "pure-immigration"
  })");
  const std::string out1 = (work_dir() / "report1.json").string();
  const std::string out2 = (work_dir() / "report2.json").string();
  REQUIRE(run_cli("experiment --config " + config + " --out " + out1 + " --workers 1").code == 0);
  REQUIRE(run_cli("experiment --config " + config + " --out " + out2 + " --workers 2").code == 0);
  CHECK(cbi::read_text_file(out1) == cbi::read_text_file(out2));
  CHECK(cbi::read_text_file(out1 + ".errors.csv") == cbi::read_text_file(out2 + ".errors.csv"));
  CHECK(nlohmann::json::parse(cbi::read_text_file(out1)).at("per_n")[0].at("n").get<int>() == 50);
}

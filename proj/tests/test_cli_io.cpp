#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "orbitcount/experiments.hpp"

using namespace orbitcount;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path sandbox() {
  auto dir = fs::temp_directory_path() / "orbitcount_cli_test";
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const std::string& name, const nlohmann::json& j) {
  auto p = sandbox() / name;
  std::ofstream out(p, std::ios::trunc);
  out << j.dump(2);
  return p;
}

nlohmann::json small_orbit_config(const fs::path& out_prefix) {
  return nlohmann::json{
      {"experiment", "orbit-count"},
      {"surface", {{"preset", "modular_torus"}}},
      {"functional", {{"kind", "length"}, {"surface", {{"preset", "modular_torus"}}}}},
      {"system", {"1:a1", "1:b1"}},
      {"L_grid", {{"min", 8.0}, {"max", 20.0}, {"points", 4}, {"log", true}}},
      {"margin", 1.6},
      {"out", out_prefix.string()}};
}

}  // namespace

TEST_CASE("experiment runner smoke and determinism") {
  auto cfg = write_config("orbit.json", small_orbit_config(sandbox() / "run1"));
  auto artifacts = run_experiment(cfg.string());
  REQUIRE(artifacts.size() == 2);

  auto rows = read_csv(artifacts[0]);
  REQUIRE(rows.size() == 1 + 4);  // header row + one per grid point
  CHECK(rows[0] == std::vector<std::string>{"L", "count_orbit", "count_group", "saturated"});

  // rerun with a different artifact path: byte-identical CSV
  auto cfg2 = write_config("orbit2.json", small_orbit_config(sandbox() / "run2"));
  auto artifacts2 = run_experiment(cfg2.string());
  CHECK(slurp(artifacts[0]) == slurp(artifacts2[0]));

  // threads do not change the bytes
  RunOverrides ov;
  ov.threads = 8;
  ov.out = (sandbox() / "run3").string();
  auto artifacts3 = run_experiment(cfg.string(), ov);
  CHECK(slurp(artifacts[0]) == slurp(artifacts3[0]));

  // the artifact regenerates from its manifest's embedded config alone
  auto manifest = nlohmann::json::parse(slurp(artifacts.back()));
  auto cfg4 = write_config("from_manifest.json", manifest["config"]);
  RunOverrides ov4;
  ov4.out = (sandbox() / "run4").string();
  auto artifacts4 = run_experiment(cfg4.string(), ov4);
  CHECK(slurp(artifacts[0]) == slurp(artifacts4[0]));
}

TEST_CASE("checkpoint resume reproduces the run") {
  auto ck = (sandbox() / "ckpt").string();
  fs::remove(ck + ".m1");
  fs::remove(ck + ".m2");

  auto full_cfg = write_config("full.json", small_orbit_config(sandbox() / "full"));
  auto full = run_experiment(full_cfg.string());

  auto halted_json = small_orbit_config(sandbox() / "halted");
  halted_json["halt_after_expansions"] = 25;
  auto halted_cfg = write_config("halted.json", halted_json);
  RunOverrides ov;
  ov.resume = ck;
  run_experiment(halted_cfg.string(), ov);  // writes a checkpoint mid-run

  auto resume_json = small_orbit_config(sandbox() / "resumed");
  auto resume_cfg = write_config("resume.json", resume_json);
  auto resumed = run_experiment(resume_cfg.string(), ov);
  CHECK(slurp(full[0]) == slurp(resumed[0]));
  fs::remove(ck + ".m1");
  fs::remove(ck + ".m2");
}

TEST_CASE("validation reports") {
  // missing surface field
  auto bad = write_config("bad.json", nlohmann::json{{"experiment", "length"},
                                                     {"system", {"1:a1"}}});
  auto rep = validate_config(bad.string());
  CHECK(!rep.ok);
  REQUIRE(!rep.errors.empty());
  CHECK(rep.errors[0].find("surface") != std::string::npos);

  // non-filling system in an orbit-count config: precondition warning with witness
  auto nf = small_orbit_config(sandbox() / "nf");
  nf["system"] = {"1:a1"};
  auto nf_cfg = write_config("nf.json", nf);
  auto nf_rep = validate_config(nf_cfg.string());
  CHECK(nf_rep.ok);
  REQUIRE(!nf_rep.warnings.empty());
  CHECK(nf_rep.warnings[0].find("not filling") != std::string::npos);
  CHECK(nf_rep.warnings[0].find("witness") != std::string::npos);

  // valid config: ok with a resource estimate
  auto ok_cfg = write_config("ok.json", small_orbit_config(sandbox() / "ok"));
  auto ok_rep = validate_config(ok_cfg.string());
  CHECK(ok_rep.ok);
  CHECK(ok_rep.errors.empty());
  CHECK(!ok_rep.resource_estimate.empty());
}

TEST_CASE("csv schema versioning") {
  auto p = sandbox() / "weird.csv";
  {
    std::ofstream out(p, std::ios::trunc);
    out << "# orbitcount-csv v999 mystery\ncolumns\n1,2,3\n";
  }
  CHECK_THROWS_AS(read_csv(p.string()), config_error);
}

#ifdef ORBITCOUNT_CLI_PATH
TEST_CASE("command line exit codes") {
  std::string cli = ORBITCOUNT_CLI_PATH;
  auto cfg = write_config("cli.json", small_orbit_config(sandbox() / "cli_run"));

  std::string cmd_ok = cli + " run --config " + cfg.string() + " > /dev/null 2>&1";
  CHECK(std::system(cmd_ok.c_str()) == 0);

  std::string cmd_bad = cli + " run --config /nonexistent.json > /dev/null 2>&1";
  int rc = std::system(cmd_bad.c_str());
  CHECK(WEXITSTATUS(rc) == 1);

  std::string cmd_val = cli + " validate --config " + cfg.string() + " > /dev/null 2>&1";
  CHECK(std::system(cmd_val.c_str()) == 0);

  // subcommand / config mismatch is a config error
  std::string cmd_mismatch = cli + " ratio --config " + cfg.string() + " > /dev/null 2>&1";
  CHECK(WEXITSTATUS(std::system(cmd_mismatch.c_str())) == 1);
}
#endif

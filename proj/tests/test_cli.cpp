#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "interlace/commands.hpp"

using namespace interlace;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run_cli(const std::string& args, const std::string& tag) {
  fs::path log = fs::temp_directory_path() / ("interlace_test_" + tag + ".log");
  std::string cmd = std::string(INTERLACE_CLI_BIN) + " " + args + " > " + log.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::ostringstream os;
  os << in.rdbuf();
  return {code, os.str()};
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("catalog lists the six families") {
  auto r = run_cli("catalog --json", "catalog");
  REQUIRE(r.exit_code == 0);
  json doc = json::parse(r.output);
  CHECK(doc.at("families").size() == 6);
  CHECK(doc.at("presets").size() >= 9);
}

TEST_CASE("catalog resolves preset aliases") {
  auto r = run_cli("catalog --preset fig5-upper --json", "alias");
  REQUIRE(r.exit_code == 0);
  json doc = json::parse(r.output);
  CHECK(doc.at("potential").at("family") == "square_well");
  CHECK(doc.at("potential").at("params").at("b").get<double>() == doctest::Approx(4.2762));

  auto bad = run_cli("catalog --preset no-such-thing", "alias_bad");
  CHECK(bad.exit_code == cli::kUsageError);
}

TEST_CASE("solve writes deterministic results that round-trip") {
  fs::path d1 = fresh_dir("interlace_solve_a");
  fs::path d2 = fresh_dir("interlace_solve_b");
  auto r1 = run_cli("solve --preset poschl-teller --out " + d1.string(), "solve1");
  REQUIRE(r1.exit_code == 0);
  auto r2 = run_cli("--threads 1 solve --preset poschl-teller --out " + d2.string(), "solve2");
  REQUIRE(r2.exit_code == 0);

  std::string j1 = read_text_file((d1 / "result.json").string());
  std::string j2 = read_text_file((d2 / "result.json").string());
  CHECK(j1 == j2);  // byte-identical regardless of thread count

  PotentialSpec spec;
  BoundStateResult res = result_from_json(json::parse(j1), &spec);
  REQUIRE(res.energies.size() == 1);
  CHECK(res.energies[0] == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(family_name(spec) == "poschl_teller");

  // emitted JSON re-parses to the identical document
  CHECK(dump_json(result_to_json(res, spec)) == j1);

  // CSV contract: header plus one line per node, comma separated
  std::ifstream csv(d1 / "state_0.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "x,psi_re,psi_im,rho");
}

TEST_CASE("solve rejects a transfer method on a confining potential") {
  auto r = run_cli("solve --preset cubic-oscillator --method transfer", "mismatch");
  CHECK(r.exit_code == cli::kUsageError);
}

TEST_CASE("solve accepts an inline spec file") {
  fs::path d = fresh_dir("interlace_specfile");
  write_text_file((d / "spec.json").string(),
                  R"({"family": "poschl_teller", "params": {"kappa": 2}})");
  auto r = run_cli("solve --spec " + (d / "spec.json").string() +
                       " --window-lo -3 --window-hi -0.05 --out " + d.string(),
                   "specfile");
  REQUIRE(r.exit_code == 0);
  json doc = json::parse(read_text_file((d / "result.json").string()));
  CHECK(doc.at("energies").at(0).get<double>() == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("solve honors parameter overrides") {
  fs::path d = fresh_dir("interlace_solve_kappa");
  auto r = run_cli("solve --preset poschl-teller --kappa 2 --out " + d.string(), "kappa");
  REQUIRE(r.exit_code == 0);
  json doc = json::parse(read_text_file((d / "result.json").string()));
  CHECK(doc.at("potential").at("params").at("kappa").get<double>() == doctest::Approx(2.0));
  CHECK(doc.at("energies").at(0).get<double>() == doctest::Approx(-1.0).epsilon(1e-6));
}

TEST_CASE("analyze consumes solver output") {
  fs::path d = fresh_dir("interlace_analyze");
  auto r1 = run_cli("solve --preset poschl-teller --out " + d.string(), "an_solve");
  REQUIRE(r1.exit_code == 0);
  auto r2 = run_cli("analyze " + (d / "result.json").string() + " --out " + d.string(), "an_run");
  REQUIRE(r2.exit_code == 0);
  json rep = json::parse(read_text_file((d / "report.json").string()));
  REQUIRE(rep.at("states").size() == 1);
  const json& s = rep.at("states").at(0);
  CHECK(s.at("n_r").get<int>() == 0);
  CHECK(s.at("n_i").get<int>() == 1);
  CHECK(s.at("interlaced").get<bool>());
  CHECK(s.at("count_law_ok").get<bool>());
  CHECK(s.at("wronskian").at("identity_residual").get<double>() < 1e-5);
  CHECK(s.at("density").at("n_maxima").get<int>() == 1);
  CHECK(s.at("residual").get<double>() < 1e-4);
  CHECK(fs::exists(d / "analysis_state_0.csv"));

  auto bad = run_cli("analyze /nonexistent/result.json", "an_bad");
  CHECK(bad.exit_code == cli::kUsageError);
}

TEST_CASE("darboux generates a family with a manifest") {
  fs::path d = fresh_dir("interlace_darboux");
  auto r = run_cli("darboux --c0 2 --c1 0 --lambda 1.7 --levels 3 --out " + d.string(), "dbx");
  REQUIRE(r.exit_code == 0);
  json manifest = json::parse(read_text_file((d / "manifest.json").string()));
  CHECK(manifest.at("lambda").get<double>() == doctest::Approx(1.7));
  CHECK(manifest.at("ermakov_constant").get<double>() == doctest::Approx(1.7));
  CHECK(manifest.at("coefficient_form") == "quadratic");
  json result = json::parse(read_text_file((d / "result.json").string()));
  CHECK(result.at("states").size() == 4);  // psi_0 .. psi_3
  std::vector<double> expect = {-1.0, 1.0, 3.0, 5.0};
  for (int i = 0; i < 4; ++i)
    CHECK(result.at("energies").at(i).get<double>() == doctest::Approx(expect[i]).epsilon(1e-10));
  CHECK(fs::exists(d / "potential.json"));

  // inadmissible parameters exit with a usage error and a diagnostic
  auto bad = run_cli("darboux --c0 1.2 --c1 1 --lambda -0.02", "dbx_bad");
  CHECK(bad.exit_code == cli::kUsageError);
  CHECK(bad.output.find("radicand") != std::string::npos);
}

TEST_CASE("INTERLACE_OUT provides the default output directory") {
  fs::path d = fresh_dir("interlace_envout");
  fs::path log = fs::temp_directory_path() / "interlace_test_env.log";
  std::string cmd = "INTERLACE_OUT=" + d.string() + " " + std::string(INTERLACE_CLI_BIN) +
                    " darboux --c0 2 --c1 0 --lambda 1.7 --levels 0 > " + log.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 0);
  CHECK(fs::exists(d / "manifest.json"));
  CHECK(fs::exists(d / "result.json"));
}

TEST_CASE("reproduce runs a single fast table") {
  auto r = run_cli("reproduce 4 --data " + std::string(INTERLACE_DATA_DIR) +
                       "/reference_tables.json",
                   "rep4");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("table 4: PASS") != std::string::npos);

  auto bad = run_cli("reproduce 9", "rep_bad");
  CHECK(bad.exit_code == cli::kUsageError);
}

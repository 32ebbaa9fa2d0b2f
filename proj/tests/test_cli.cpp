#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_tool(const std::string& args) {
  static int counter = 0;
  const fs::path log = fs::temp_directory_path() /
                       ("sheafenergy_cli_" + std::to_string(counter++) + ".log");
  const std::string cmd =
      std::string(SHEAFENERGY_TOOL_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  RunResult out;
  out.exit_code = WEXITSTATUS(raw);
  std::ifstream in(log);
  std::ostringstream buf;
  buf << in.rdbuf();
  out.output = buf.str();
  fs::remove(log);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sheafenergy_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("cli sigma writes the field and origin fiber") {
  const fs::path dir = fresh_dir("sigma");
  const RunResult r = run_tool("sigma --r 1 --grid 41 --out " + dir.string());
  CHECK(r.exit_code == 0);
  const std::string csv = slurp(dir / "sigma_field.csv");
  CHECK(csv.rfind("q1,q2,f1,f2,exists,degenerate\n", 0) == 0);
  CHECK(csv.find("0,0,0,-1.5707963267948966,1,origin") != std::string::npos);
  const std::string fiber = slurp(dir / "origin_fiber.json");
  CHECK(fiber.find("-1.5707963267948966") != std::string::npos);

  // r = 2: origin f2 = -2 pi
  const RunResult r2 = run_tool("sigma --r 2 --grid 21 --out " + dir.string());
  CHECK(r2.exit_code == 0);
  CHECK(slurp(dir / "sigma_field.csv").find("0,0,0,-6.2831853071795862,1,origin") !=
        std::string::npos);

  // even node counts violate the grid precondition
  CHECK(run_tool("sigma --r 1 --grid 40 --out " + dir.string()).exit_code == 2);
}

TEST_CASE("cli sigma outputs are byte-identical across runs") {
  const fs::path a = fresh_dir("sigma_a");
  const fs::path b = fresh_dir("sigma_b");
  CHECK(run_tool("sigma --r 1.3 --grid 31 --out " + a.string()).exit_code == 0);
  CHECK(run_tool("sigma --r 1.3 --grid 31 --out " + b.string()).exit_code == 0);
  CHECK(slurp(a / "sigma_field.csv") == slurp(b / "sigma_field.csv"));
  CHECK(slurp(a / "origin_fiber.json") == slurp(b / "origin_fiber.json"));
}

TEST_CASE("cli energy verdicts and exit codes") {
  const fs::path dir = fresh_dir("energy");
  const RunResult ok = run_tool("energy --r 1 --grid 41 --out " + dir.string());
  CHECK(ok.exit_code == 0);
  const std::string report = slurp(dir / "energy_report.json");
  CHECK(report.find("\"origin_value\":1.5707963267") != std::string::npos);

  const RunResult half = run_tool("energy --r 0.5 --grid 41 --out " + dir.string());
  CHECK(half.exit_code == 0);
  CHECK(slurp(dir / "energy_report.json").find("0.3926990816987") != std::string::npos);

  // a zero tolerance is unattainable against the independently associated
  // reference product (r = 1.7 differs by one ulp between the two routes)
  const RunResult strict =
      run_tool("energy --r 1.7 --grid 41 --tol.energy 0 --out " + dir.string());
  CHECK(strict.exit_code == 1);
}

TEST_CASE("cli capacity passes and the injected violation fails") {
  const fs::path dir = fresh_dir("capacity");
  const RunResult ok = run_tool("capacity --r 1 --grid 41 --kappa 1.1 --budget 1 --out " +
                                dir.string());
  CHECK(ok.exit_code == 0);
  const std::string report = slurp(dir / "capacity_report.json");
  CHECK(report.find("\"verdict\":\"pass\"") != std::string::npos);

  const RunResult vacuous = run_tool(
      "capacity --r 1 --grid 41 --kappa 0.5 --kappa 0.8 --budget 2 --out " + dir.string());
  CHECK(vacuous.exit_code == 0);
  CHECK(slurp(dir / "capacity_report.json").find("\"verdict\":\"vacuous-pass\"") !=
        std::string::npos);
  CHECK(vacuous.output.find("warning") != std::string::npos);

  const RunResult injected =
      run_tool("capacity --r 1 --grid 41 --kappa 1.1 --budget 1 --inject-violation --out " +
               dir.string());
  CHECK(injected.exit_code == 1);

  const RunResult dumped = run_tool(
      "capacity --r 1 --grid 41 --kappa 1.1 --budget 1 --trajectories --out " + dir.string());
  CHECK(dumped.exit_code == 0);
  const std::string traj = slurp(dir / "trajectories.csv");
  CHECK(traj.rfind("sample,step,t,q1,p1\n", 0) == 0);
  CHECK(traj.find("\n0,0,0,-1.5,0\n") != std::string::npos);
}

TEST_CASE("cli reads a flat key=value config file with command-line overrides") {
  const fs::path dir = fresh_dir("config");
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "r=2\n"
        << "grid=21\n"
        << "out=" << (dir / "from_config").string() << "\n";
  }
  const RunResult r = run_tool("--config " + (dir / "run.cfg").string() + " sigma");
  CHECK(r.exit_code == 0);
  CHECK(slurp(dir / "from_config" / "sigma_field.csv").find("0,0,0,-6.2831853071795862") !=
        std::string::npos);

  // the command line overrides the file
  const RunResult o = run_tool("--config " + (dir / "run.cfg").string() +
                               " --r 1 --out " + (dir / "override").string() + " sigma");
  CHECK(o.exit_code == 0);
  CHECK(slurp(dir / "override" / "sigma_field.csv").find("0,0,0,-1.5707963267948966") !=
        std::string::npos);
}

TEST_CASE("cli oracle golden files verify and detect perturbation") {
  const fs::path dir = fresh_dir("golden");
  CHECK(run_tool("oracle --mode regenerate --golden " + dir.string()).exit_code == 0);
  CHECK(run_tool("oracle --mode verify --golden " + dir.string()).exit_code == 0);

  // regenerated bytes match the committed golden data
  for (const char* name : {"hom_rules.json", "tau_ranks.json", "convolution_pairs.json",
                           "hofer_vertical_shift.json"}) {
    const fs::path committed = fs::path(SHEAFENERGY_GOLDEN_DIR) / name;
    REQUIRE_MESSAGE(fs::exists(committed), "missing committed golden file ", name);
    CHECK_MESSAGE(slurp(dir / name) == slurp(committed), "regenerated ", name,
                  " differs from the committed golden file");
  }

  // perturbation must be detected
  {
    std::ofstream out(dir / "tau_ranks.json", std::ios::app);
    out << " ";
  }
  CHECK(run_tool("oracle --mode verify --golden " + dir.string()).exit_code == 1);
  CHECK(run_tool("oracle --mode nonsense --golden " + dir.string()).exit_code == 2);
}

TEST_CASE("cli stability and verify-genfun") {
  const fs::path dir = fresh_dir("stability");
  const RunResult sine = run_tool("stability --out " + dir.string());
  CHECK(sine.exit_code == 0);
  const std::string report = slurp(dir / "stability_report.json");
  CHECK(report.find("\"distance\":2.0") != std::string::npos);
  CHECK(report.find("\"bound_holds\":true") != std::string::npos);

  const RunResult zero = run_tool("stability --fn zero --out " + dir.string());
  CHECK(zero.exit_code == 0);

  const RunResult bad = run_tool("stability --fn unknown --out " + dir.string());
  CHECK(bad.exit_code == 2);

  const RunResult gen =
      run_tool("verify-genfun --samples 200 --steps 2000 --out " + dir.string());
  CHECK(gen.exit_code == 0);
  CHECK(slurp(dir / "genfun_report.json").find("\"samples\":200") != std::string::npos);

  // an unachievable tolerance trips the verification exit code
  const RunResult strict = run_tool(
      "verify-genfun --samples 50 --steps 2000 --tol.genfun 1e-18 --out " + dir.string());
  CHECK(strict.exit_code == 1);
}

TEST_CASE("cli rejects unknown commands and flags") {
  CHECK(run_tool("frobnicate").exit_code == 2);
  CHECK(run_tool("sigma --no-such-flag 1").exit_code == 2);
  CHECK(run_tool("").exit_code == 2);
}

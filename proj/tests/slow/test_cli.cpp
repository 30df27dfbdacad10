#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(QBM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::path("/tmp") / name) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void check_run_artifacts(const fs::path& dir) {
  CHECK(fs::exists(dir / "config.json"));
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "plot.gp"));
  const std::string manifest = slurp(dir / "manifest.json");
  CHECK(manifest.find("software") != std::string::npos);
  CHECK(manifest.find("wall_clock_seconds") != std::string::npos);
}

}  // namespace

TEST_CASE("cli: usage errors exit with code 2") {
  CHECK(run("frobnicate") == 2);
  CHECK(run("twobody --no-such-flag") == 2);
  CHECK(run("twobody --d 7") == 2);
  CHECK(run("scan") == 2);  // --config is required
}

TEST_CASE("cli: numerical failures exit with code 3") {
  TempDir out("qbm_cli_fail");
  // N = 1 has no corrected moments / no interacting pair.
  CHECK(run("twobody --d 1 --alpha 1 --lambda -1.0 --output " + out.path.string()) == 3);
}

TEST_CASE("cli: twobody run is complete and reproducible") {
  TempDir a("qbm_cli_tb_a");
  TempDir b("qbm_cli_tb_b");
  const std::string args = "twobody --d 1 --alpha 1 --lambda log:0.5:2:3 --output ";
  REQUIRE(run(args + a.path.string()) == 0);
  REQUIRE(run(args + b.path.string()) == 0);
  check_run_artifacts(a.path);
  CHECK(fs::exists(a.path / "twobody.csv"));
  CHECK(slurp(a.path / "twobody.csv") == slurp(b.path / "twobody.csv"));
}

TEST_CASE("cli: hf cold runs are bit-exact") {
  TempDir a("qbm_cli_hf_a");
  TempDir b("qbm_cli_hf_b");
  const std::string args = "hf --d 2 --n 2 --lambda 0.5 --shells 6 --output ";
  REQUIRE(run(args + a.path.string()) == 0);
  REQUIRE(run(args + b.path.string()) == 0);
  CHECK(slurp(a.path / "hf.csv") == slurp(b.path / "hf.csv"));
}

TEST_CASE("cli: hf with a checkpoint store") {
  TempDir out("qbm_cli_hf");
  const fs::path ckpt = out.path.string() + "_store.json";
  fs::remove(ckpt);
  const std::string args = "hf --d 2 --n 2 --lambda 0.5 --shells 6 --checkpoint " +
                           ckpt.string() + " --output " + out.path.string();
  REQUIRE(run(args) == 0);
  check_run_artifacts(out.path);
  CHECK(fs::exists(out.path / "hf.csv"));
  CHECK(fs::exists(ckpt));
  // A warm-started rerun converges to the same state within the SCF
  // tolerance; the energy column must agree to high accuracy.
  std::istringstream first(slurp(out.path / "hf.csv"));
  REQUIRE(run(args) == 0);
  std::istringstream second(slurp(out.path / "hf.csv"));
  std::string l1, l2;
  std::getline(first, l1);  // header
  std::getline(second, l2);
  CHECK(l1 == l2);
  std::getline(first, l1);
  std::getline(second, l2);
  double lam1, e1, lam2, e2;
  char c;
  int n1, n2;
  std::istringstream(l1) >> lam1 >> c >> n1 >> c >> e1;
  std::istringstream(l2) >> lam2 >> c >> n2 >> c >> e2;
  CHECK(e1 == doctest::Approx(e2).epsilon(1e-9));
  fs::remove(ckpt);
}

TEST_CASE("cli: tf and classical runs") {
  TempDir tf("qbm_cli_tf");
  REQUIRE(run("tf --d 2 --n 1000 --lambda log:0.5:5:3 --output " + tf.path.string()) == 0);
  check_run_artifacts(tf.path);
  CHECK(fs::exists(tf.path / "tf.csv"));

  TempDir cl("qbm_cli_classical");
  REQUIRE(run("classical --n 5 --lambda 1:2:2 --output " + cl.path.string()) == 0);
  check_run_artifacts(cl.path);
  CHECK(fs::exists(cl.path / "classical.csv"));
  CHECK(fs::exists(cl.path / "configuration_0.csv"));
  CHECK(fs::exists(cl.path / "configuration_1.csv"));
}

TEST_CASE("cli: scan from a JSON config") {
  TempDir out("qbm_cli_scan");
  const fs::path cfg = out.path.string() + "_cfg.json";
  {
    std::ofstream c(cfg);
    c << R"({
      "mode": "scan",
      "dimension": 2,
      "lambda": {"min": 0.5, "max": 2.0, "points": 3, "scale": "log"},
      "particles": [200, 400],
      "policy": "tf",
      "sr1m1": false,
      "output": "unused"
    })";
  }
  REQUIRE(run("scan --config " + cfg.string() + " --output " + out.path.string()) == 0);
  check_run_artifacts(out.path);
  CHECK(fs::exists(out.path / "scan.csv"));
  CHECK(fs::exists(out.path / "scan.json"));
  fs::remove(cfg);
}

TEST_CASE("cli: lambda_tilde mode") {
  TempDir out("qbm_cli_lt");
  const fs::path cfg = out.path.string() + "_cfg.json";
  {
    std::ofstream c(cfg);
    c << R"({"mode": "lambda_tilde", "dimensions": [1, 2], "n_min": 2, "n_max": 20,
             "output": "unused"})";
  }
  REQUIRE(run("scan --config " + cfg.string() + " --output " + out.path.string()) == 0);
  CHECK(fs::exists(out.path / "lambda_tilde.csv"));
  fs::remove(cfg);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
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
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Runs the installed CLI binary through the shell with captured streams.
RunResult run_cli(const std::string& args, const fs::path& dir) {
  fs::path out = dir / "stdout.txt";
  fs::path err = dir / "stderr.txt";
  std::string cmd = std::string(L1NET_CLI_PATH) + " " + args + " > " +
                    out.string() + " 2> " + err.string();
  int status = std::system(cmd.c_str());
  RunResult result;
  result.exit_code = WEXITSTATUS(status);
  result.out = slurp(out);
  result.err = slurp(err);
  return result;
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("l1net_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

double parse_kv(const std::string& text, const std::string& key) {
  std::size_t pos = text.find(key + "=");
  REQUIRE(pos != std::string::npos);
  return std::stod(text.substr(pos + key.size() + 1));
}

}  // namespace

TEST_CASE("version and help") {
  fs::path dir = fresh_dir("version");
  RunResult v = run_cli("--version", dir);
  CHECK(v.exit_code == 0);
  CHECK(v.out.find("l1net") != std::string::npos);

  RunResult h = run_cli("--help", dir);
  CHECK(h.exit_code == 0);
  for (const char* cmd : {"train", "eval-risk", "bounds", "rademacher",
                          "delta-eta", "rate-study", "sparsity-study",
                          "overfit-study"})
    CHECK(h.out.find(cmd) != std::string::npos);
}

TEST_CASE("bounds command prints the hand-computed values") {
  fs::path dir = fresh_dir("bounds");
  RunResult r = run_cli(
      "bounds --set bounds.C=1 --set bounds.V=3 --set bounds.d=4 "
      "--set bounds.n=10000 --set bounds.tau=1 --set bounds.r=1000000 "
      "--delta 0",
      dir);
  REQUIRE(r.exit_code == 0);
  CHECK(parse_kv(r.out, "thm3") == doctest::Approx(0.1931).epsilon(1e-3));
  CHECK(parse_kv(r.out, "thm4") == doctest::Approx(0.06).epsilon(1e-9));
}

TEST_CASE("delta-eta command") {
  fs::path dir = fresh_dir("delta_eta");
  RunResult r = run_cli("delta-eta --eta 10", dir);
  REQUIRE(r.exit_code == 0);
  CHECK(parse_kv(r.out, "delta") == doctest::Approx(0.469).epsilon(2e-2));
}

TEST_CASE("config errors exit with code 2") {
  fs::path dir = fresh_dir("config_err");

  SUBCASE("missing config file") {
    RunResult r = run_cli("rate-study --config /nonexistent.cfg", dir);
    CHECK(r.exit_code == 2);
    CHECK(!r.err.empty());
  }

  SUBCASE("invariant violation names the key") {
    RunResult r = run_cli("bounds --set bounds.V=-1", dir);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("V") != std::string::npos);
  }

  SUBCASE("unknown key is rejected") {
    RunResult r = run_cli("delta-eta --set no.such.key=1", dir);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("no.such.key") != std::string::npos);
  }

  SUBCASE("bad flag") {
    RunResult r = run_cli("delta-eta --bogus-flag", dir);
    CHECK(r.exit_code == 2);
  }
}

TEST_CASE("train writes params under the out dir and eval-risk reads them") {
  fs::path dir = fresh_dir("train");
  std::string common =
      "--set target.atoms=1\\|1\\|0 --set noise.kind=gaussian "
      "--set noise.tau=0.3 --set plan.eval_samples=10000";
  RunResult t = run_cli("train " + common +
                            " --set class.V=3 --set class.r=8 "
                            "--set data.n=200 --set train.max_iters=100 "
                            "--set train.restarts=2 --out " +
                            dir.string(),
                        dir);
  REQUIRE(t.exit_code == 0);
  CHECK(fs::exists(dir / "params.txt"));
  CHECK(t.out.find("train_loss=") != std::string::npos);

  RunResult e = run_cli("eval-risk " + common + " --params " +
                            (dir / "params.txt").string(),
                        dir);
  REQUIRE(e.exit_code == 0);
  CHECK(e.out.find("pop_risk=") != std::string::npos);
}

TEST_CASE("rate-study determinism: identical serial runs give identical bytes") {
  fs::path dir_a = fresh_dir("det_a");
  fs::path dir_b = fresh_dir("det_b");
  std::string args =
      "rate-study --set target.atoms=1\\|1\\|0 --set noise.kind=gaussian "
      "--set noise.tau=0.3 --set plan.n=64,128,256 --set plan.d=2 "
      "--set plan.replicates=3 --set plan.eval_samples=10000 "
      "--set train.max_iters=60 --set train.restarts=2 --seed 7 --out ";
  RunResult a = run_cli(args + dir_a.string(), dir_a);
  RunResult b = run_cli(args + dir_b.string(), dir_b);
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  std::string csv_a = slurp(dir_a / "rate_study.csv");
  std::string csv_b = slurp(dir_b / "rate_study.csv");
  CHECK(!csv_a.empty());
  CHECK(csv_a == csv_b);
  CHECK(a.out.find("slope=") != std::string::npos);
  CHECK_FALSE(fs::exists(dir_a / "rate_study.csv.partial"));
}

TEST_CASE("commands write only inside the out dir") {
  fs::path dir = fresh_dir("outdir");
  fs::path cwd_probe = fs::current_path() / "rate_study.csv";
  bool existed_before = fs::exists(cwd_probe);
  std::string args =
      "rate-study --set target.atoms=1\\|1\\|0 --set plan.n=64,128,256 "
      "--set plan.d=2 --set plan.replicates=3 --set plan.eval_samples=10000 "
      "--set train.max_iters=30 --set train.restarts=1 --out " + dir.string();
  RunResult r = run_cli(args, dir);
  REQUIRE(r.exit_code == 0);
  CHECK(fs::exists(dir / "rate_study.csv"));
  CHECK(fs::exists(cwd_probe) == existed_before);
}

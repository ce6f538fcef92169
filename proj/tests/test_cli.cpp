#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "warpharm/cli.hpp"
#include "warpharm/io.hpp"

namespace fs = std::filesystem;
using namespace warpharm;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("warpharm_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(WARPHARM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

int run_inproc(std::vector<std::string> args, std::string* err_out = nullptr) {
  args.insert(args.begin(), "warpharm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (err_out) *err_out = err.str();
  return code;
}

io::Json load(const fs::path& p) { return io::Json::parse(io::read_file(p)); }

bool has_tmp_files(const fs::path& dir) {
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.path().extension() == ".tmp") return true;
  return false;
}

}  // namespace

TEST(Cli, ClassifyExitCodes) {
  const fs::path d = scratch("classify");
  EXPECT_EQ(run_binary("classify --family hyperbolic --a 1 --n 2 --out " + (d / "h").string()), 0);
  EXPECT_EQ(run_binary("classify --family euclidean --n 3 --out " + (d / "e").string()), 2);
  const int threshold = run_binary("classify --family powerlog --c 0.5 --n 3 --out " + (d / "t").string());
  EXPECT_TRUE(threshold == 2 || threshold == 3);
  const io::Json j = load(d / "h" / "criterion.json");
  EXPECT_EQ(j["march"]["verdict"], "Convergent");
  EXPECT_EQ(j["transience"]["verdict"], "Convergent");
  for (const char* key : {"verdict", "value", "error_bound", "r_max", "tail_evidence"})
    EXPECT_TRUE(j["march"].contains(key)) << key;
}

TEST(Cli, ThresholdWarning) {
  const fs::path d = scratch("threshold");
  std::vector<std::string> args{"classify", "--family", "powerlog", "--c", "0.5", "--n", "3", "--out", d.string()};
  args.insert(args.begin(), "warpharm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, e;
  cli::run(static_cast<int>(argv.size()), argv.data(), out, e);
  EXPECT_NE(out.str().find("threshold"), std::string::npos) << out.str();
}

TEST(Cli, InconclusiveExitCode) {
  const fs::path d = scratch("inconclusive");
  {
    std::ofstream t(d / "flat.csv");
    t << "r,phi,dphi,ddphi\n";
    for (double r = 1e-4; r < 1.0; r *= 1.1) t << r << "," << r << ",1,0\n";
    for (double r = 1.0; r <= 120.0; r += 0.5) t << r << "," << r << ",1,0\n";
  }
  EXPECT_EQ(run_inproc({"classify", "--family", "tabulated", "--table", (d / "flat.csv").string(), "--n", "3", "--out",
                        (d / "o").string()}),
            3);
}

TEST(Cli, BadInputIsAnError) {
  std::string err;
  EXPECT_EQ(run_inproc({"classify", "--family", "nosuch", "--out", scratch("bad").string()}, &err), 1);
  EXPECT_FALSE(err.empty());
  EXPECT_EQ(run_inproc({"classify", "--family", "hyperbolic", "--a", "-1", "--out", scratch("bad2").string()}), 1);
  EXPECT_EQ(run_binary("classify --tol -1"), 1);
  EXPECT_EQ(run_inproc({"solve", "--boundary", "/nonexistent.csv", "--out", scratch("bad3").string()}), 1);
}

TEST(Cli, SolveWritesArtifacts) {
  const fs::path d = scratch("solve");
  ASSERT_EQ(run_binary("solve --family hyperbolic --a 1 --n 2 --modes 3 --preset cos --at-infinity --out " + d.string()),
            0);
  for (const char* f : {"profile_m0.csv", "profile_m3.json", "coefficients.json", "evaluation.csv",
                        "evaluation_infinity.csv", "summary.json"})
    EXPECT_TRUE(fs::exists(d / f)) << f;
  const auto rows = io::read_csv(d / "evaluation.csv", {"r", "theta", "u"});
  bool found = false;
  for (const auto& r : rows)
    if (r[0] == 1.0 && r[1] == 0.0) {
      EXPECT_NEAR(r[2], 0.4621, 1e-4);
      found = true;
    }
  EXPECT_TRUE(found);
  const io::Json s = load(d / "summary.json");
  EXPECT_EQ(s["M"], 3);
  EXPECT_TRUE(s["l2_curve"].is_array());
  EXPECT_FALSE(has_tmp_files(d));
  const io::Json meta = load(d / "profile_m1.json");
  EXPECT_EQ(meta["limit_estimate"], 1.0);
  EXPECT_EQ(meta["normalized"], true);
}

TEST(Cli, ConstantPreset) {
  const fs::path d = scratch("constant");
  ASSERT_EQ(run_inproc({"solve", "--preset", "constant", "--modes", "2", "--out", d.string()}), 0);
  for (const auto& r : io::read_csv(d / "evaluation.csv", {"r", "theta", "u"})) EXPECT_NEAR(r[2], 1.0, 1e-12);
}

TEST(Cli, SphereSolve) {
  const fs::path d = scratch("sphere");
  ASSERT_EQ(run_inproc({"solve", "--n", "3", "--modes", "3", "--preset", "smooth", "--out", d.string()}), 0);
  EXPECT_FALSE(io::read_csv(d / "evaluation.csv", {"r", "theta", "lon", "u"}).empty());
}

TEST(Cli, DivergentSolveWritesNothing) {
  const fs::path d = scratch("divergent");
  const fs::path out = d / "o";
  EXPECT_EQ(run_binary("solve --family euclidean --n 2 --out " + out.string()), 2);
  EXPECT_FALSE(fs::exists(out) && !fs::is_empty(out));
}

TEST(Cli, VerifySuitePasses) {
  const fs::path d = scratch("verify");
  ASSERT_EQ(run_inproc({"verify", "--family", "hyperbolic", "--a", "1", "--n", "2", "--modes", "3", "--out", d.string()}),
            0);
  const io::Json v = load(d / "verify.json");
  EXPECT_EQ(v["passed"], true);
  std::set<std::string> names;
  for (const auto& c : v["checks"]) {
    const std::string name = c["name"];
    names.insert(name.substr(0, name.find(' ')));
    EXPECT_NE(c["status"], "fail") << c["name"] << ": " << c["detail"];
  }
  for (const char* n : {"riccati", "riccati_cross_check", "lemma_bound", "monotonicity", "normalization",
                        "maximum_principle", "fd_residual", "annulus_cross_check"})
    EXPECT_EQ(names.count(n), 1u) << n;
}

TEST(Cli, TamperedProfileFailsLemmaCheck) {
  const fs::path d = scratch("tamper");
  ASSERT_EQ(run_inproc({"solve", "--modes", "3", "--out", (d / "s").string()}), 0);
  ASSERT_EQ(run_inproc({"verify", "--from", (d / "s").string(), "--out", (d / "ok").string()}), 0);
  const fs::path csv = d / "s" / "profile_m2.csv";
  const auto rows = io::read_csv(csv, {"r", "phi_m", "dphi_m"});
  std::string text = "r,phi_m,dphi_m\n";
  for (const auto& r : rows)
    text += io::format_number(r[0]) + "," + io::format_number(r[1] * 1.1) + "," + io::format_number(r[2] * 1.1) + "\n";
  io::write_file_atomic(csv, text);
  EXPECT_EQ(run_inproc({"verify", "--from", (d / "s").string(), "--out", (d / "bad").string()}), 1);
  const io::Json v = load(d / "bad" / "verify.json");
  EXPECT_EQ(v["passed"], false);
  bool lemma_failed = false;
  for (const auto& c : v["checks"])
    if (c["name"].get<std::string>().find("lemma_bound") == 0 && c["status"] == "fail") lemma_failed = true;
  EXPECT_TRUE(lemma_failed);
}

TEST(Cli, EuclideanVerifySkipsNormalization) {
  const fs::path d = scratch("verify_euclid");
  EXPECT_EQ(run_inproc({"verify", "--family", "euclidean", "--n", "2", "--modes", "3", "--out", d.string()}), 0);
  const io::Json v = load(d / "verify.json");
  int skipped = 0;
  for (const auto& c : v["checks"]) {
    const std::string name = c["name"];
    if (name.find("monotonicity") == 0 || name.find("riccati ") == 0) EXPECT_EQ(c["status"], "pass") << name;
    if (name.find("normalization") == 0) {
      EXPECT_EQ(c["status"], "skipped");
      EXPECT_FALSE(c["detail"].get<std::string>().empty());
      ++skipped;
    }
  }
  EXPECT_GT(skipped, 0);
}

TEST(Cli, SweepIsDeterministic) {
  const fs::path a = scratch("sweep_a"), b = scratch("sweep_b");
  ASSERT_EQ(run_inproc({"sweep", "--set", "acceptance", "--out", a.string()}), 0);
  ASSERT_EQ(run_inproc({"sweep", "--set", "acceptance", "--out", b.string()}), 0);
  EXPECT_EQ(io::read_file(a / "sweep.json"), io::read_file(b / "sweep.json"));
}

TEST(Cli, ConfigFileWithOverrides) {
  const fs::path d = scratch("config");
  io::write_file_atomic(d / "job.json", R"({"family": "euclidean", "n": 3})");
  EXPECT_EQ(run_inproc({"classify", "--config", (d / "job.json").string(), "--out", (d / "a").string()}), 2);
  EXPECT_EQ(run_inproc({"classify", "--config", (d / "job.json").string(), "--family", "hyperbolic", "--out",
                        (d / "b").string()}),
            0);
  EXPECT_EQ(load(d / "b" / "criterion.json")["n"], 3);
}

TEST(Cli, ConfigRoundTrip) {
  cli::JobConfig c;
  c.command = "solve";
  c.family = "powerlog";
  c.c = 0.75;
  c.n = 3;
  c.modes = 6;
  const cli::JobConfig back = cli::config_from_json(cli::config_json(c));
  EXPECT_EQ(back.family, "powerlog");
  EXPECT_EQ(back.c, 0.75);
  EXPECT_EQ(back.n, 3);
  EXPECT_EQ(back.modes, 6);
}

TEST(Cli, CoefficientInput) {
  const fs::path d = scratch("coeffs");
  io::write_file_atomic(d / "c.json", R"([{"m": 1, "k": 0, "c": 1.0}])");
  ASSERT_EQ(run_inproc({"solve", "--coeffs", (d / "c.json").string(), "--modes", "2", "--out", (d / "o").string()}), 0);
  for (const auto& r : io::read_csv(d / "o" / "evaluation.csv", {"r", "theta", "u"}))
    EXPECT_NEAR(r[2], std::tanh(0.5 * r[0]) * std::cos(r[1]) / std::sqrt(M_PI), 1e-6);
}

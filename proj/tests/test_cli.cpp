#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "entroof/measures.hpp"
#include "entroof/state_io.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int status = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("entroof_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Outcome run(const std::string& args) {
    const fs::path out = dir_ / "stdout", err = dir_ / "stderr";
    const std::string cmd = "cd '" + dir_.string() + "' && '" + std::string(ENTROOF_CLI) + "' " + args + " >'" +
                            out.string() + "' 2>'" + err.string() + "'";
    const int raw = std::system(cmd.c_str());
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out), slurp(err)};
  }

  static std::string data(const std::string& name) { return std::string(ENTROOF_DATA) + "/" + name; }

  fs::path dir_;
};

std::string field(const std::string& report, const std::string& key) {
  std::istringstream is(report);
  std::string line;
  while (std::getline(is, line))
    if (line.rfind(key + ": ", 0) == 0) return line.substr(key.size() + 2);
  return {};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) out.push_back(line);
  return out;
}

}  // namespace

TEST_F(Cli, MeasureBellState) {
  const Outcome r = run("measure " + data("bell.state"));
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(field(r.out, "e_g"), "0.5");
  EXPECT_EQ(field(r.out, "concurrence"), "1");
  EXPECT_NEAR(std::stod(field(r.out, "e_bures")), 2 - std::sqrt(2.0), 1e-12);
}

TEST_F(Cli, MeasureProductStateIsAllZero) {
  const Outcome r = run("measure " + data("product.state"));
  ASSERT_EQ(r.status, 0) << r.err;
  for (const char* key : {"concurrence", "e_formation", "e_g", "e_bures", "e_groverian", "er_lower_bound"}) {
    EXPECT_EQ(field(r.out, key), "0") << key;
  }
}

TEST_F(Cli, TwoQubitExtrasOnlyForTwoQubits) {
  const Outcome r = run("measure " + data("ghz3.state"));
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(field(r.out, "concurrence"), "");
  EXPECT_EQ(field(r.out, "e_formation"), "");
  EXPECT_NEAR(std::stod(field(r.out, "e_g")), 0.5, 1e-9);
}

TEST_F(Cli, MalformedStateExitsWithTwoNamingInvariant) {
  const Outcome r = run("measure " + data("malformed.state"));
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("trace"), std::string::npos) << r.err;
  EXPECT_EQ(run("measure " + (dir_ / "missing.state").string()).status, 2);
}

TEST_F(Cli, UsageErrorsExitWithTwo) {
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("figure nosuch").status, 2);
  EXPECT_EQ(run("verify two-qubit-roof --n 0").status, 2);
  EXPECT_EQ(run("figure gvp --p 0").status, 2);
  EXPECT_EQ(run("--help").status, 0);
}

TEST_F(Cli, RoofMatchesMeasureAndWritesParsableStates) {
  const Outcome m = run("measure " + data("werner.state"));
  const Outcome r = run("roof " + data("werner.state") + " --out roof.txt");
  ASSERT_EQ(r.status, 0) << r.err;
  const std::string text = slurp(dir_ / "roof.txt");
  const double fs_roof = std::stod(field(text, "# f_s"));
  EXPECT_NEAR(fs_roof, std::stod(field(m.out, "f_s")), 1e-6);

  // the block after the last comment is the closest separable state
  const auto pos = text.rfind("# closest separable state\n");
  ASSERT_NE(pos, std::string::npos);
  const auto sigma = entroof::as_density(entroof::parse_state(text.substr(pos)));
  const auto rho = entroof::as_density(entroof::load_state(data("werner.state")));
  EXPECT_NEAR(entroof::fidelity(rho, sigma), fs_roof, 1e-6);
}

TEST_F(Cli, RoofOnSeparableAndGhzInputs) {
  const Outcome sep = run("roof " + data("product.state"));
  ASSERT_EQ(sep.status, 0) << sep.err;
  EXPECT_GE(std::stod(field(sep.out, "# f_s")), 1 - 1e-6);
  const Outcome ghz = run("roof " + data("ghz3.state") + " --restarts 2");
  ASSERT_EQ(ghz.status, 0) << ghz.err;
  EXPECT_NEAR(std::stod(field(ghz.out, "# f_s")), 0.5, 1e-6);
}

TEST_F(Cli, BuresCurveRowsAndHeader) {
  const Outcome r = run("figure bures-curve");
  ASSERT_EQ(r.status, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 1002u);
  EXPECT_EQ(rows[0], "C,E_G/(1/2),E_B/(2−√2),E_Gr/(1/√2)");
  EXPECT_EQ(rows[1], "0,0,0,0");
  EXPECT_EQ(rows[1001], "1,1,1,1");
  EXPECT_EQ(r.out.find('\r'), std::string::npos);
}

TEST_F(Cli, GvpCsvOrderingAndEndpoints) {
  for (const char* p : {"0.99", "0.9"}) {
    const Outcome r = run(std::string("figure gvp --p ") + p);
    ASSERT_EQ(r.status, 0) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 1003u);
    EXPECT_EQ(rows[0].rfind("# E_R := S(rho||sigma*)", 0), 0u);
    EXPECT_EQ(rows[1], "a,E_F,E_R,ℰ");
    EXPECT_EQ(rows[2], "0,0,0,0");
    EXPECT_EQ(rows[1002], "1,0,0,0");
    for (std::size_t i = 2; i < rows.size(); ++i) {
      double a, ef, er, lb;
      char c1, c2, c3;
      std::istringstream is(rows[i]);
      is >> a >> c1 >> ef >> c2 >> er >> c3 >> lb;
      EXPECT_GE(ef, er - 1e-12) << rows[i];
      EXPECT_GE(er, lb - 1e-12) << rows[i];
      EXPECT_GE(lb, 0.0);
    }
  }
}

TEST_F(Cli, OutputIsDeterministic) {
  EXPECT_EQ(run("verify stationarity --n 6 --seed 4").out, run("verify stationarity --n 6 --seed 4").out);
  EXPECT_EQ(run("verify appendix-a --n 6 --seed 4 --threads 1").out,
            run("verify appendix-a --n 6 --seed 4 --threads 3").out);
  EXPECT_EQ(run("roof " + data("werner.state") + " --seed 9").out, run("roof " + data("werner.state") + " --seed 9").out);
}

TEST_F(Cli, VerifySuitesPass) {
  for (const char* suite : {"two-qubit-roof", "inequalities", "stationarity", "appendix-a"}) {
    const Outcome r = run(std::string("verify ") + suite + " --n 12 --seed 1");
    EXPECT_EQ(r.status, 0) << suite << "\n" << r.err;
    const auto rows = lines(r.out);
    ASSERT_FALSE(rows.empty());
    EXPECT_EQ(rows[0].rfind("sample,case,seed,", 0), 0u);
    EXPECT_NE(r.err.find("PASS"), std::string::npos);
  }
}

TEST_F(Cli, StationarityReportsBellWitness) {
  const Outcome r = run("verify stationarity --n 2");
  ASSERT_EQ(r.status, 0) << r.err;
  const auto rows = lines(r.out);
  EXPECT_EQ(rows[1].rfind("0,bell-witness,", 0), 0u);
}

TEST_F(Cli, FailingCampaignExitsOneAndDumpsReproduction) {
  // one iteration of one restart is far from converged
  const Outcome r = run("verify two-qubit-roof --n 4 --restarts 1 --max-iterations 1 --out report.csv");
  EXPECT_EQ(r.status, 1) << r.err;
  bool found = false;
  for (const auto& e : fs::directory_iterator(dir_)) {
    if (e.path().filename().string().rfind("repro-two-qubit-roof-", 0) != 0) continue;
    found = true;
    EXPECT_NO_THROW(entroof::load_state(e.path().string()));
  }
  EXPECT_TRUE(found);
  EXPECT_NE(slurp(dir_ / "report.csv").find(",0\n"), std::string::npos);
}

TEST_F(Cli, ConfigFileAndFlagPrecedence) {
  std::ofstream(dir_ / "run.conf") << "seed = 5\nn = 3\n";
  const Outcome from_config = run("verify appendix-a --config run.conf");
  ASSERT_EQ(from_config.status, 0) << from_config.err;
  EXPECT_EQ(lines(from_config.out).size(), 4u);
  EXPECT_EQ(from_config.out, run("verify appendix-a --seed 5 --n 3").out);
  const Outcome flag_wins = run("verify appendix-a --config run.conf --n 2");
  EXPECT_EQ(lines(flag_wins.out).size(), 3u);
  std::ofstream(dir_ / "bad.conf") << "unknown = 1\n";
  EXPECT_EQ(run("verify appendix-a --config bad.conf").status, 2);
}

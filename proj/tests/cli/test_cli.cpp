#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
};

// stderr is discarded; only stdout is captured.
CliRun wovl(const std::string& args) {
  const std::string cmd = std::string(WOVL_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, {}};
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("wovl_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& content) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << content;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

const char* kSmallConfig = R"([
  {"scale1":1,"shape1":3,"scale2":1,"shape2":4,"n1":20,"n2":30,"seed":1,"replications":40},
  {"scale1":1,"shape1":3,"scale2":1.5,"shape2":3,"n1":20,"n2":30,"seed":2,"replications":40}
])";

}  // namespace

TEST_F(Cli, ExactPrintsRequestedCoefficients) {
  const CliRun r = wovl("exact --scale1 1 --shape1 3 --scale2 1 --shape2 4 --coefficients delta,rho");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("delta,0.8678", 0), 0u) << r.out;
  EXPECT_NE(r.out.find("\nrho,"), std::string::npos);
  EXPECT_EQ(r.out.find("kl,"), std::string::npos);
}

TEST_F(Cli, ExactAllCoefficientsByDefault) {
  const CliRun r = wovl("exact --scale1 1 --shape1 6 --scale2 3 --shape2 2");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("delta,0.1646"), std::string::npos) << r.out;
  for (const char* k : {"rho,", "lambda,", "pianka,", "kl,"}) {
    EXPECT_NE(r.out.find(k), std::string::npos) << k;
  }
}

TEST_F(Cli, ExactInputErrors) {
  EXPECT_EQ(wovl("exact --scale1 1 --shape1 -3 --scale2 1 --shape2 4").code, 2);
  EXPECT_EQ(wovl("exact --scale1 1 --shape1 3 --scale2 1").code, 2);
  EXPECT_EQ(wovl("exact --scale1 1 --shape1 3 --scale2 1 --shape2 4 --coefficients bogus").code, 2);
  EXPECT_EQ(wovl("exact --scale1 1 --shape1 3 --scale2 1 --shape2 4 --abs-tol 0").code, 2);
  EXPECT_EQ(wovl("frobnicate").code, 2);
}

TEST_F(Cli, ExactDivergentIntegral) {
  EXPECT_EQ(wovl("exact --scale1 1 --shape1 0.4 --scale2 1 --shape2 1 --coefficients lambda").code, 3);
}

TEST_F(Cli, FitRecoversSamplerShape) {
  ASSERT_EQ(wovl("sample --scale 2 --shape 3 -n 5000 --seed 17 --out " + path("x.csv")).code, 0);
  const CliRun r = wovl("fit " + path("x.csv"));
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  EXPECT_EQ(header, "sample,scale,shape,log_likelihood,iterations,converged");
  std::istringstream fields(line);
  std::string name, scale, shape;
  std::getline(fields, name, ',');
  std::getline(fields, scale, ',');
  std::getline(fields, shape, ',');
  EXPECT_GT(std::stod(shape), 2.90);
  EXPECT_LT(std::stod(shape), 3.10);
  EXPECT_GT(std::stod(scale), 1.95);
  EXPECT_LT(std::stod(scale), 2.05);
}

TEST_F(Cli, FitDegenerateAndMalformedInput) {
  EXPECT_EQ(wovl("fit " + file("c.csv", "x\n2\n2\n2\n")).code, 4);
  EXPECT_EQ(wovl("fit " + file("bad.csv", "x\n1\nabc\n")).code, 2);
  EXPECT_EQ(wovl("fit " + file("neg.csv", "1\n-2\n")).code, 2);
  EXPECT_EQ(wovl("fit " + path("missing.csv")).code, 2);
}

TEST_F(Cli, FitEqualShapeOnIdenticalFiles) {
  ASSERT_EQ(wovl("sample --scale 1 --shape 2 -n 200 --seed 3 --out " + path("x.csv")).code, 0);
  const CliRun r = wovl("fit --equal-shape " + path("x.csv") + " " + path("x.csv"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("scale1,scale2,shape,log_likelihood,iterations,converged\n", 0), 0u);
  const auto line = r.out.substr(r.out.find('\n') + 1);
  const auto c1 = line.find(',');
  const auto c2 = line.find(',', c1 + 1);
  EXPECT_EQ(line.substr(0, c1), line.substr(c1 + 1, c2 - c1 - 1));
}

TEST_F(Cli, EstimateOnIdenticalFilesIsOne) {
  ASSERT_EQ(wovl("sample --scale 1 --shape 2 -n 60 --seed 4 --out " + path("x.csv")).code, 0);
  const std::string both = path("x.csv") + " " + path("x.csv");
  const CliRun p = wovl("estimate " + both);
  EXPECT_EQ(p.code, 0);
  EXPECT_EQ(p.out, "parametric,avg,unrestricted,1.000000\n");
  const CliRun k = wovl("estimate --method kernel " + both);
  EXPECT_EQ(k.code, 0);
  EXPECT_EQ(k.out, "kernel,avg,not_applicable,1.000000\n");
  EXPECT_EQ(wovl("estimate --variant z " + both).code, 2);
}

TEST_F(Cli, SimulateIsWorkerIndependent) {
  const std::string cfg = file("cfg.json", kSmallConfig);
  const CliRun one = wovl("simulate --workers 1 " + cfg);
  const CliRun eight = wovl("simulate --workers 8 " + cfg);
  ASSERT_EQ(one.code, 0);
  ASSERT_EQ(eight.code, 0);
  EXPECT_EQ(one.out, eight.out);
  EXPECT_EQ(one.out.rfind("scenario_id,estimator,delta_exact,mean,rb,rrmse,eff,failures\n", 0), 0u);
  EXPECT_NE(one.out.find("a1=1;b1=3;a2=1.5;b2=3;n1=20;n2=30,kernel,"), std::string::npos);
}

TEST_F(Cli, SimulateThenReport) {
  const std::string cfg = file("cfg.json", kSmallConfig);
  ASSERT_EQ(wovl("simulate " + cfg + " --out " + path("r.csv")).code, 0);
  const CliRun md = wovl("report " + path("r.csv"));
  EXPECT_EQ(md.code, 0);
  EXPECT_NE(md.out.find("## Equal scale parameters"), std::string::npos);
  EXPECT_NE(md.out.find("## Equal shape parameters"), std::string::npos);
}

TEST_F(Cli, SimulateSingleReplication) {
  const std::string cfg = file("cfg.json",
      R"([{"scale1":1,"shape1":3,"scale2":1,"shape2":4,"n1":20,"n2":30,"seed":1,"replications":1}])");
  const CliRun r = wovl("simulate " + cfg);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find(",1.000000,0\n"), std::string::npos) << r.out;
}

TEST_F(Cli, SimulateConfigErrors) {
  EXPECT_EQ(wovl("simulate " + file("bad.json", "[{")).code, 2);
  EXPECT_EQ(wovl("simulate " + file("neg.json",
      R"([{"scale1":1,"shape1":3,"scale2":1,"shape2":-4,"n1":20,"n2":30,"seed":1}])")).code, 2);
  EXPECT_EQ(wovl("simulate " + path("none.json")).code, 2);
}

TEST_F(Cli, ReportEdgeCases) {
  const CliRun empty = wovl("report " + file("e.csv",
      "scenario_id,estimator,delta_exact,mean,rb,rrmse,eff,failures\n"));
  EXPECT_EQ(empty.code, 0);
  EXPECT_EQ(empty.out, "");
  EXPECT_EQ(wovl("report " + file("w.csv", "id,value\n")).code, 2);
}

TEST_F(Cli, SampleIsSeeded) {
  const CliRun a = wovl("sample --scale 1 --shape 2 -n 5 --seed 9");
  const CliRun b = wovl("sample --scale 1 --shape 2 -n 5 --seed 9");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind("x\n", 0), 0u);
}

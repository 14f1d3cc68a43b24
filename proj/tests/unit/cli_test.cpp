#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "commands.hpp"

namespace fs = std::filesystem;
using banachrep::io::read_text;

namespace {

const std::string kFixtures = BANACHREP_FIXTURE_DIR;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("banachrep_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliRun run(std::vector<std::string> args, const fs::path& out_dir = {}) {
    args.insert(args.begin(), {"--out", (out_dir.empty() ? dir_ : out_dir).string()});
    std::ostringstream out, err;
    const int code = banachrep::cli::run_cli(args, out, err);
    return {code, out.str(), err.str()};
  }

  std::vector<std::vector<double>> csv_numbers(const std::string& name, std::size_t skip_cols = 0) {
    std::istringstream in(read_text(dir_ / name));
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
      std::vector<double> row;
      std::istringstream ls(line);
      std::string cell;
      std::size_t col = 0;
      while (std::getline(ls, cell, ','))
        if (col++ >= skip_cols) row.push_back(std::stod(cell));
      rows.push_back(row);
    }
    return rows;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, SolveWritesCertificateAndVerifies) {
  const CliRun r = run({"solve", kFixtures + "/p4_single.json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto cert = nlohmann::json::parse(read_text(dir_ / "certificate.json"));
  EXPECT_LE(cert["residuals"]["feasibility"].get<double>(), 1e-9);
  EXPECT_LE(std::abs(cert["residuals"]["peaking"].get<double>()), 1e-9);
  EXPECT_LE(cert["residuals"]["norm_match"].get<double>(), 1e-9);
  EXPECT_EQ(cert["meta"]["seed"], 0);
  EXPECT_EQ(cert["meta"]["max_iter"], 500);

  const CliRun v = run({"solve", kFixtures + "/p4_single.json", "--verify-only"});
  EXPECT_EQ(v.code, 0) << v.out << v.err;
  EXPECT_NE(v.out.find("certificate verified"), std::string::npos);
}

TEST_F(Cli, TamperedCertificateIsRejected) {
  ASSERT_EQ(run({"solve", kFixtures + "/p2_single.json"}).code, 0);
  auto cert = nlohmann::json::parse(read_text(dir_ / "certificate.json"));
  cert["f0"][0] = cert["f0"][0].get<double>() + 2e-3;
  cert["f0"][1] = cert["f0"][1].get<double>() - 1e-3;
  banachrep::io::write_atomic(dir_ / "certificate.json", cert.dump());
  EXPECT_NE(run({"solve", kFixtures + "/p2_single.json", "--verify-only"}).code, 0);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run({"solve", kFixtures + "/inconsistent.json"}).code, 2);
  const CliRun bad = run({"solve", kFixtures + "/malformed.json"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("at byte"), std::string::npos);
  const CliRun schema = run({"solve", kFixtures + "/bad_dim.json"});
  EXPECT_EQ(schema.code, 1);
  EXPECT_NE(schema.err.find("functionals[0]"), std::string::npos);
  EXPECT_EQ(run({"solve", kFixtures + "/missing.json"}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"--max-iter", "0", "solve", kFixtures + "/p4_single.json"}).code, 3);
}

TEST_F(Cli, HelpDocumentsCsvColumns) {
  const CliRun h = run({"kernel", "--help"});
  EXPECT_EQ(h.code, 0);
  EXPECT_NE(h.out.find("x, y, K, sinc, abs_error"), std::string::npos);
  EXPECT_NE(run({"--help"}).out.find("counterexample"), std::string::npos);
}

TEST_F(Cli, Admissibility) {
  EXPECT_EQ(run({"admissibility", "norm^2", "--dim", "3", "--p", "3"}).code, 0);
  const CliRun cx = run({"--seed", "42", "admissibility", "coord(0)", "--dim", "2", "--p", "2"});
  EXPECT_EQ(cx.code, 4);
  const auto j = nlohmann::json::parse(read_text(dir_ / "admissibility.json"));
  EXPECT_EQ(j["tangential"]["verdict"], "counterexample");
  EXPECT_FALSE(j["tangential"]["counterexamples"].empty());
  EXPECT_EQ(j["seed"], 42);
  const CliRun pe = run({"admissibility", "norm +"});
  EXPECT_EQ(pe.code, 1);
  EXPECT_NE(pe.err.find("position"), std::string::npos);
}

TEST_F(Cli, Independence) {
  const CliRun ok = run({"independence", kFixtures + "/p3_three.json", "--defaults"});
  EXPECT_EQ(ok.code, 0) << ok.err;
  const auto rows = csv_numbers("independence.csv", 1);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) EXPECT_LE(r[0], 1e-5);
  EXPECT_EQ(run({"independence", kFixtures + "/p3_three.json", "--reg", "square", "--reg", "coord(0)"}).code, 1);
  EXPECT_EQ(run({"independence", kFixtures + "/p3_three.json"}).code, 1);
}

TEST_F(Cli, KernelTableIsAccurateAndDeterministic) {
  ASSERT_EQ(run({"--seed", "3", "kernel", "--N", "512"}).code, 0);
  const auto rows = csv_numbers("kernel.csv");
  ASSERT_EQ(rows.size(), 100u);
  for (const auto& r : rows) EXPECT_LE(r[4], 1e-8);
  const std::string first = read_text(dir_ / "kernel.csv");
  const fs::path other = dir_ / "again";
  ASSERT_EQ(run({"--seed", "3", "kernel", "--N", "512"}, other).code, 0);
  EXPECT_EQ(read_text(other / "kernel.csv"), first);
}

TEST_F(Cli, SolveIsByteStable) {
  ASSERT_EQ(run({"solve", kFixtures + "/p3_three.json"}).code, 0);
  const fs::path other = dir_ / "again";
  ASSERT_EQ(run({"solve", kFixtures + "/p3_three.json"}, other).code, 0);
  EXPECT_EQ(read_text(dir_ / "certificate.json"), read_text(other / "certificate.json"));
}

TEST_F(Cli, Counterexample) {
  ASSERT_EQ(run({"counterexample", "--n", "4,10,100"}).code, 0);
  const auto rows = csv_numbers("counterexample.csv");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1][0], 10);
  EXPECT_EQ(rows[1][3], 0.9);
  EXPECT_EQ(rows[1][4], 9);
  EXPECT_EQ(run({"counterexample", "--c1", "0", "--c2", "0"}).code, 1);
}

TEST_F(Cli, PathDistanceIsMonotone) {
  ASSERT_EQ(run({"path", kFixtures + "/p2_single.json"}).code, 0);
  const auto rows = csv_numbers("path.csv");
  ASSERT_EQ(rows.size(), 6u);
  for (std::size_t k = 1; k < rows.size(); ++k) EXPECT_LE(rows[k][1], rows[k - 1][1] + 1e-9);
  EXPECT_LE(rows.back()[1], 1e-3);
  EXPECT_EQ(run({"path", kFixtures + "/p2_single.json", "--lambdas", "1e-3,1e-2"}).code, 1);
}

TEST_F(Cli, BlwAndInterpolation) {
  ASSERT_EQ(run({"blw", "--instances", "10", "--p", "1.5"}).code, 0);
  for (const auto& r : csv_numbers("blw.csv")) {
    EXPECT_LE(r[4], 1e-6);
    EXPECT_LE(r[5], 1e-6);
  }
  const CliRun ip = run({"rkbs-interp", "--p", "3", "--N", "64", "--points", "-1,0,1.5", "--values", "1,2,-1", "--grid",
                      "-2,2,41"});
  ASSERT_EQ(ip.code, 0) << ip.err;
  const auto rows = csv_numbers("interpolant.csv");
  ASSERT_EQ(rows.size(), 41u);
  // Grid step 0.1 from -2: indices 10, 20, 35 are the interpolation points.
  EXPECT_NEAR(rows[10][1], 1.0, 1e-7);
  EXPECT_NEAR(rows[20][1], 2.0, 1e-7);
  EXPECT_NEAR(rows[35][1], -1.0, 1e-7);
  EXPECT_EQ(run({"rkbs-interp", "--points", "0,x", "--values", "1,2"}).code, 1);
}

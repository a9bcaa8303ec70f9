#include "cli/run.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qsafe/io.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = qsafe::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

qsafe::io::Json json_of(const Result& r) { return qsafe::io::parse(r.out); }

}  // namespace

TEST(Cli, GiniOfVector) {
  const auto r = call({"gini", "--vector", "[0.1667,0.5,0.3333]"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json_of(r);
  EXPECT_EQ(j.at("command"), "gini");
  EXPECT_EQ(j.at("seed"), 0);
  EXPECT_NEAR(j.at("gini").get<double>(), 1.0 / 6.0, 1e-4);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(call({"gini", "--vector", "[0.5,0.6]"}).code, 1);
  EXPECT_NE(call({"gini", "--vector", "[0.5,0.6]"}).err.find("NotNormalized"), std::string::npos);
  EXPECT_EQ(call({"gini", "--vector", "[0.5,-0.5,1.0]"}).code, 1);
  const auto missing = call({"gini"});
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("Usage"), std::string::npos);
  EXPECT_EQ(call({"frobnicate"}).code, 2);
  EXPECT_EQ(call({"gini", "--vector", "[1]", "--bogus"}).code, 2);
  EXPECT_EQ(call({"report", "table9"}).code, 2);
  EXPECT_EQ(call({"gini", "--vector", "[1]", "--format", "xml"}).code, 2);
  EXPECT_EQ(call({"gini", "--vector", "[0.5,"}).code, 1);
  EXPECT_EQ(call({"--help"}).code, 0);
}

TEST(Cli, DeterministicAndSeedEcho) {
  const std::vector<std::string> args{"simulate", "--matrix", "[[0.5,0.5],[0.2,0.8]]", "--n", "5000", "--seed", "42"};
  const auto a = call(args);
  const auto b = call(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(json_of(a).at("seed"), 42);
  const auto c = call({"collision", "--matrix", "[[1,0],[0,1]]", "--matrix", "[[1,0],[0,1]]", "--n", "1000"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(json_of(c).at("value"), 1.0);
  EXPECT_EQ(json_of(c).at("stderr"), 0.0);
}

TEST(Cli, CsvFormat) {
  const auto r = call({"lorenz", "--vector", "[0.1,0.2,0.7]", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("key,value\n", 0), 0u);
  EXPECT_NE(r.out.find("\nseed,0\n"), std::string::npos);
  EXPECT_NE(r.out.find("lorenz.2,1\n"), std::string::npos);
  EXPECT_NE(r.out.find("lorenz.0,0.10000000000000001\n"), std::string::npos);
  EXPECT_EQ(r.out.find('\r'), std::string::npos);
  const auto m = call({"majorize", "--vector", "[0.5,0.5,0]", "--vector", "[0.6,0.2,0.2]", "--format", "csv"});
  EXPECT_NE(m.out.find("relation,"), std::string::npos);
}

TEST(Cli, OutputFileAndInputFile) {
  const std::string in_path = ::testing::TempDir() + "qsafe_cli_in.json";
  const std::string out_path = ::testing::TempDir() + "qsafe_cli_out.json";
  {
    std::ofstream f(in_path);
    f << R"({"vectors": [[0.25, 0.25, 0.5], [0.1, 0.1, 0.8]]})";
  }
  const auto r = call({"majorize", "--input", in_path, "--out", out_path});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = qsafe::io::read_file(out_path);
  EXPECT_EQ(j.at("relation"), "Y_MAJORIZES_X");
  std::remove(in_path.c_str());
  std::remove(out_path.c_str());
}

TEST(Cli, EmittedJsonReadsBack) {
  const auto v = call({"validate", "--vector", "[0.3,0.3,0.4]"});
  ASSERT_EQ(v.code, 0) << v.err;
  const auto obj = json_of(v).at("objects").at(0).at("value");
  const auto again = call({"validate", "--vector", obj.dump()});
  EXPECT_EQ(json_of(again).at("objects").at(0).at("value"), obj);

  const auto e = call({"eta", "--d", "2", "--mode", "single", "--budget", "300", "--seed", "3"});
  ASSERT_EQ(e.code, 0) << e.err;
  const auto state = json_of(e).at("best_state");
  const auto st = call({"quantum-stats", "--state", state.dump()});
  EXPECT_EQ(st.code, 1);  // dimension 2 is not of the form d^d
  const auto dual = call({"dual", "--state", state.dump(), "--mode", "single"});
  ASSERT_EQ(dual.code, 0) << dual.err;
  const auto back = call({"validate", "--state", json_of(dual).at("state").dump()});
  EXPECT_EQ(back.code, 0) << back.err;
  EXPECT_EQ(json_of(back).at("objects").at(0).at("value"), json_of(dual).at("state"));
}

TEST(Cli, ReportTable1Degenerate) {
  const auto r = call({"report", "table1", "--a", "0", "--b", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json_of(r);
  ASSERT_EQ(j.at("nonzero_rows").size(), 1u);
  EXPECT_EQ(j.at("nonzero_rows").at(0).at("f"), "(1,2,1)");
  EXPECT_EQ(j.at("nonzero_rows").at(0).at("product"), 1.0);
  EXPECT_EQ(j.at("pass"), true);
  const auto r8 = json_of(call({"report", "table1", "--a", "0.2", "--b", "0.45"}));
  EXPECT_EQ(r8.at("nonzero_rows").size(), 8u);
  EXPECT_EQ(r8.at("zero_codes"), 19);
  EXPECT_EQ(r8.at("pass"), true);
}

TEST(Cli, ReportTable2) {
  const auto r = call({"report", "table2", "--a2", "0.3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto row = json_of(r).at("rows").at(0);
  EXPECT_EQ(row.at("f"), "(0,0)");
  EXPECT_NEAR(row.at("q_rho").get<double>(), 0.3, 1e-15);
  EXPECT_NEAR(row.at("m_rho").get<double>(), 0.09, 1e-15);
  EXPECT_NEAR(row.at("c_rho").get<double>(), 0.21, 1e-15);
}

TEST(Cli, ReportSection9) {
  const auto r = call({"report", "section9"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json_of(r);
  EXPECT_TRUE(j.contains("checks"));
  EXPECT_TRUE(j.contains("pass"));
}

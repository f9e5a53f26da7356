#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "trimpcr/cli.hpp"
#include "trimpcr/matrix_io.hpp"

using namespace trimpcr;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "trimpcr");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("trimpcr_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, GenRecoverFitPipeline) {
  auto gen = invoke({"--seed", "3", "gen", "--out", path("ds"), "--n", "80", "--n1", "20", "--m",
                     "40", "--k", "4", "--feature-noise", "0"});
  ASSERT_EQ(gen.code, 0) << gen.err;
  EXPECT_EQ(json::parse(gen.out)["rows"], 100);

  auto rec = invoke({"recover", "--input", path("ds/X.csv"), "--keep", "80", "--rank", "4",
                     "--truth", path("ds/truth.json"), "--out", path("rec")});
  ASSERT_EQ(rec.code, 0) << rec.err;
  const json r = json::parse(rec.out);
  EXPECT_DOUBLE_EQ(r["ident_rate"].get<double>(), 1.0);
  EXPECT_EQ(r["kept_count"], 80);
  EXPECT_EQ(read_matrix_file(path("rec/basis.csv")).rows(), 4);
  std::ifstream kept(path("rec/kept.json"));
  EXPECT_EQ(json::parse(kept)["kept"].size(), 80u);

  auto fit = invoke({"fit", "--x", path("ds/X.csv"), "--y", path("ds/y.csv"), "--keep", "80",
                     "--rank", "4", "--predictions", path("pred.csv"), "--json", path("fit.json")});
  ASSERT_EQ(fit.code, 0) << fit.err;
  const json f = json::parse(fit.out);
  EXPECT_EQ(f["beta_hat"].size(), 40u);
  EXPECT_EQ(f["kept"].size(), 80u);
  EXPECT_TRUE(f.contains("train_loss"));
  EXPECT_EQ(read_vector_file(path("pred.csv")).size(), 100);

  auto base = invoke({"baseline", "--x", path("ds/X.csv"), "--y", path("ds/y.csv"), "--method",
                      "ridge", "--lambda", "0.5"});
  ASSERT_EQ(base.code, 0) << base.err;
  EXPECT_EQ(json::parse(base.out)["beta_hat"].size(), 40u);
}

TEST_F(CliTest, OracleReportsAllFields) {
  DenseMatrix Xs(6, 3);
  Xs << 1, 0, 0, 0, 1, 0, 1, 1, 0, 2, 1, 0, 1, 3, 0, 0, 2, 0;
  write_matrix_file(path("xs.csv"), Xs);
  auto o = invoke({"oracle", "--x0", path("xs.csv"), "--x-star", path("xs.csv"), "--rank", "2",
                   "--n1", "2"});
  ASSERT_EQ(o.code, 0) << o.err;
  const json j = json::parse(o.out);
  for (const char* key : {"ms", "nr", "sr", "solvable"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["ms"], 2);
  EXPECT_TRUE(j["solvable"].get<bool>());
}

TEST_F(CliTest, ExitCodes) {
  auto missing = invoke({"recover", "--input", path("nope.csv"), "--keep", "3", "--rank", "1"});
  EXPECT_EQ(missing.code, cli::kInputError);
  EXPECT_NE(missing.err.find("nope.csv"), std::string::npos);

  std::ofstream(path("bad.csv")) << "# rows=2 cols=2\n1,2\n3,oops\n";
  EXPECT_EQ(invoke({"recover", "--input", path("bad.csv"), "--keep", "1", "--rank", "1"}).code,
            cli::kInputError);

  write_matrix_file(path("x.csv"), DenseMatrix::Ones(4, 2));
  write_vector_file(path("y.csv"), Vector::Ones(3));
  EXPECT_EQ(invoke({"fit", "--x", path("x.csv"), "--y", path("y.csv"), "--keep", "3", "--rank",
                    "1"})
                .code,
            cli::kDimensionError);
  write_matrix_file(path("x3.csv"), DenseMatrix::Ones(4, 3));
  EXPECT_EQ(invoke({"oracle", "--x0", path("x.csv"), "--x-star", path("x3.csv"), "--rank", "1",
                    "--n1", "1"})
                .code,
            cli::kDimensionError);

  write_matrix_file(path("big.csv"), DenseMatrix::Ones(17, 2));
  EXPECT_EQ(invoke({"oracle", "--x0", path("big.csv"), "--x-star", path("big.csv"), "--rank", "1",
                    "--n1", "1"})
                .code,
            cli::kCapExceeded);
  EXPECT_EQ(invoke({"recover", "--input", path("big.csv"), "--keep", "10", "--rank", "1",
                    "--mode", "exact"})
                .code,
            cli::kCapExceeded);

  EXPECT_NE(invoke({"recover"}).code, 0);
  EXPECT_NE(invoke({"frobnicate"}).code, 0);
}

TEST_F(CliTest, GridAndBenchCsvRoundTrip) {
  auto g = invoke({"--jobs", "2", "grid", "--k-values", "2,4", "--n1-values", "5,10", "--trials",
                   "1", "--rows", "60", "--m", "20", "--restarts", "2", "--eval-rows", "30",
                   "--out", path("grid.csv")});
  ASSERT_EQ(g.code, 0) << g.err;
  const Table detail = read_table_file(path("grid.csv"));
  EXPECT_EQ(detail.rows.size(), 16u);
  const Table agg = read_table_file(path("grid_aggregate.csv"));
  EXPECT_EQ(agg.rows.size(), 16u);

  auto b = invoke({"bench", "--sizes", "100,150", "--rank", "2", "--n1", "5", "--m", "20",
                   "--restarts", "1", "--out", path("bench.csv")});
  ASSERT_EQ(b.code, 0) << b.err;
  const Table bench = read_table_file(path("bench.csv"));
  EXPECT_EQ(bench.rows.size(), 2u);
  std::ostringstream again;
  write_table(again, bench);
  std::ifstream raw(path("bench.csv"));
  std::stringstream original;
  original << raw.rdbuf();
  EXPECT_EQ(again.str(), original.str());
}

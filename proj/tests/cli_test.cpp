#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "support.hpp"
#include "thermovalue/cli.hpp"

namespace tv = thermovalue;
using tv::testing::TempDir;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Outcome o;
  o.code = tv::cli::run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string ref() { return tv::testing::reference_dir().string(); }

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

std::string field(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + ": ");
  if (pos == std::string::npos) return {};
  const auto start = pos + key.size() + 2;
  return text.substr(start, text.find('\n', start) - start);
}

}  // namespace

TEST(Cli, ValidateReference) {
  const auto o = run({"validate", "--dataset", ref()});
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("65 elements"), std::string::npos) << o.out;
  EXPECT_NE(o.out.find("ok\n"), std::string::npos);
}

TEST(Cli, DatasetFromEnvironment) {
  ::setenv(tv::cli::kDatasetEnv, ref().c_str(), 1);
  const auto o = run({"validate"});
  ::unsetenv(tv::cli::kDatasetEnv);
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(run({"validate"}).code, 4);
}

TEST(Cli, ValidateMissingFileIsParseError) {
  TempDir dir;
  tv::testing::write_dataset(dir.path(), tv::testing::reference_dataset());
  std::filesystem::remove(dir / "deflator.csv");
  const auto o = run({"validate", "--dataset", dir.path().string()});
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.err.find("missing"), std::string::npos);
  EXPECT_EQ(run({"compute", "--dataset", dir.path().string()}).code, 1);
}

TEST(Cli, ValidateMalformedRowsIsParseError) {
  TempDir dir;
  tv::testing::write_dataset(dir.path(), tv::testing::reference_dataset());
  tv::testing::write_file(dir / "elements.csv",
                          tv::testing::slurp(dir / "elements.csv") + "Zz,Zed,abc,1,solid,1,1,1,mid\n");
  const auto o = run({"validate", "--dataset", dir.path().string()});
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.err.find("line 67"), std::string::npos) << o.err;
}

TEST(Cli, ValidateOrphanPriceIsIntegrityError) {
  TempDir dir;
  tv::testing::write_dataset(dir.path(), tv::testing::reference_dataset());
  tv::testing::write_file(dir / "prices.csv", tv::testing::slurp(dir / "prices.csv") + "Xx,1998,1,USD_per_kg,\n");
  const auto o = run({"validate", "--dataset", dir.path().string()});
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find("orphan price symbol Xx"), std::string::npos) << o.err;
  EXPECT_EQ(run({"fit", "--dataset", dir.path().string()}).code, 2);
}

TEST(Cli, InsufficientDataYear) {
  const auto o = run({"fit", "--dataset", ref(), "--year", "1800"});
  EXPECT_EQ(o.code, 3);
  EXPECT_EQ(run({"plot", "--dataset", ref(), "--year", "1800"}).code, 3);
}

TEST(Cli, BadArguments) {
  EXPECT_EQ(run({}).code, 4);
  EXPECT_EQ(run({"frobnicate"}).code, 4);
  EXPECT_EQ(run({"compute", "--dataset", ref(), "--ratio", "-2"}).code, 4);
  EXPECT_EQ(run({"compute", "--dataset", ref(), "--ratio", "abc"}).code, 4);
  EXPECT_EQ(run({"compute", "--dataset", ref(), "--temp", "0"}).code, 4);
  EXPECT_EQ(run({"compute", "--dataset", ref(), "--crust-density", "0"}).code, 4);
  EXPECT_EQ(run({"compute", "--dataset", ref(), "--exclude", "Qq"}).code, 4);
  EXPECT_EQ(run({"compute", "--dataset", ref(), "--format", "svg"}).code, 4);
  EXPECT_EQ(run({"plot", "--dataset", ref(), "--fig", "5"}).code, 4);
  EXPECT_EQ(run({"correlate", "--dataset", ref(), "--years", "1998:1959"}).code, 4);
  EXPECT_EQ(run({"correlate", "--dataset", ref(), "--years", "x:y"}).code, 4);
  EXPECT_EQ(run({"fit", "--dataset", ref(), "--dg0-map", "nope"}).code, 4);
  EXPECT_EQ(run({"compute", "--dataset", ref(), "--unknown-flag"}).code, 4);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(run({"--help"}).code, 0); }

TEST(Cli, ComputeRowsAndExclusion) {
  const auto all = run({"compute", "--dataset", ref()});
  ASSERT_EQ(all.code, 0) << all.err;
  EXPECT_EQ(lines(all.out), 66u);
  EXPECT_EQ(all.out.rfind("symbol,c_pure_mol_L,c_env_mol_L,delta_g_kJ_mol,delta_g0_kJ_mol,sigma_e_kJ_mol\n", 0), 0u);
  const auto some = run({"compute", "--dataset", ref(), "--exclude", "Au"});
  EXPECT_EQ(lines(some.out), 65u);
  EXPECT_EQ(some.out.find("\nAu,"), std::string::npos);
  const auto crustal = run({"compute", "--dataset", ref(), "--crustal-only"});
  EXPECT_EQ(lines(crustal.out), 65u);
  EXPECT_EQ(crustal.out.find("\nHe,"), std::string::npos);
}

TEST(Cli, ComputeWritesFile) {
  TempDir dir;
  const auto path = (dir / "energies.csv").string();
  const auto o = run({"compute", "--dataset", ref(), "--out", path});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_TRUE(o.out.empty());
  EXPECT_EQ(tv::testing::slurp(path), run({"compute", "--dataset", ref()}).out);
}

TEST(Cli, FitTextAndModelFile) {
  TempDir dir;
  const auto path = (dir / "model.json").string();
  const auto o = run({"fit", "--dataset", ref(), "--out", path});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(field(o.out, "year"), "1998");
  EXPECT_EQ(field(o.out, "elements"), "65");
  const auto model = tv::read_model(tv::testing::slurp(path));
  EXPECT_EQ(model.n, 65u);
  EXPECT_EQ(tv::cli::detail::format_r(model.pearson_r), field(o.out, "pearson_r"));
  EXPECT_TRUE(std::filesystem::exists(dir / "model_grid.csv"));
  EXPECT_EQ(lines(tv::testing::slurp(dir / "model_grid.csv")), 201u);
}

TEST(Cli, FitGridCsv) {
  const auto o = run({"fit", "--dataset", ref(), "--format", "csv"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(o.out.rfind("ratio,pearson_r\n0.1,", 0), 0u);
  EXPECT_EQ(run({"fit", "--dataset", ref(), "--ratio", "13", "--format", "csv"}).code, 4);
}

TEST(Cli, CorrelateSeries) {
  const auto o = run({"correlate", "--dataset", ref()});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(lines(o.out), 41u);
  const auto early = run({"correlate", "--dataset", ref(), "--years", "1950:1960"});
  EXPECT_NE(early.out.find("# omitted years"), std::string::npos);
}

TEST(Cli, SingleYearCorrelationMatchesFit) {
  const auto c = run({"correlate", "--dataset", ref(), "--years", "1998:1998", "--ratio", "13"});
  const auto f = run({"fit", "--dataset", ref(), "--year", "1998", "--ratio", "13"});
  ASSERT_EQ(c.code, 0);
  ASSERT_EQ(f.code, 0);
  const auto row = c.out.substr(c.out.find('\n') + 1);
  const auto r = tv::csv::to_double(row.substr(row.rfind(',') + 1, row.find('\n') - row.rfind(',') - 1));
  ASSERT_TRUE(r);
  EXPECT_EQ(tv::cli::detail::format_r(*r), field(f.out, "pearson_r"));
}

TEST(Cli, PlotFigures) {
  TempDir dir;
  const auto fig3 = (dir / "fig3.svg").string();
  const auto o3 = run({"plot", "--dataset", ref(), "--fig", "3", "--out", fig3});
  ASSERT_EQ(o3.code, 0) << o3.err;
  const auto svg3 = tv::testing::slurp(fig3);
  std::size_t circles = 0;
  for (auto pos = svg3.find("<circle cx"); pos != std::string::npos; pos = svg3.find("<circle cx", pos + 1)) ++circles;
  EXPECT_EQ(circles, 65u + 3u);  // points plus legend markers
  for (const char* c : {"#d62728", "#2ca02c", "#1f77b4"}) EXPECT_NE(svg3.find(c), std::string::npos);
  EXPECT_EQ(lines(tv::testing::slurp(dir / "fig3.csv")), 66u);

  const auto fig4 = (dir / "fig4.svg").string();
  const auto o4 = run({"plot", "--dataset", ref(), "--fig", "4", "--out", fig4});
  ASSERT_EQ(o4.code, 0) << o4.err;
  const auto f = run({"fit", "--dataset", ref(), "--ratio", "13"});
  EXPECT_NE(tv::testing::slurp(fig4).find("r = " + field(f.out, "pearson_r") + " (n = 65)"), std::string::npos);
}

TEST(Cli, ExcludingUnpricedElementChangesNothing) {
  TempDir dir;
  const auto a = run({"fit", "--dataset", ref(), "--year", "1997"});
  const auto b = run({"fit", "--dataset", ref(), "--year", "1997", "--exclude", "Co"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto pa = (dir / "a.svg").string(), pb = (dir / "b.svg").string();
  ASSERT_EQ(run({"plot", "--dataset", ref(), "--year", "1997", "--out", pa}).code, 0);
  ASSERT_EQ(run({"plot", "--dataset", ref(), "--year", "1997", "--exclude", "Co", "--out", pb}).code, 0);
  EXPECT_EQ(tv::testing::slurp(pa), tv::testing::slurp(pb));
}

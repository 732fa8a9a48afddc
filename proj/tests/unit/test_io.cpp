#include "hcr/csv_input.hpp"
#include "hcr/error.hpp"
#include "hcr/model_io.hpp"
#include "hcr/yield_curve.hpp"

#include "support/oracles.hpp"
#include "support/synthetic.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace hcr;

namespace {

std::string
error_of(const std::function<void()>& f)
{
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

Model
round_trip(const Model& m)
{
  std::stringstream buffer;
  write_model(buffer, m);
  return read_model(buffer);
}

} // namespace

TEST(ModelFile, DenseRoundTripEvaluatesIdentically)
{
  const RawSeries raw = hcr::oracle::dependent_pair_series(800, 21);
  const Model m = fit({ { "b1", "b2" }, 1, 6, Distribution::gaussian }, raw);
  const Model back = round_trip(m);
  EXPECT_EQ(back.config, m.config);
  ASSERT_EQ(back.normalizers.size(), 2u);
  EXPECT_EQ(back.normalizers[1].location, m.normalizers[1].location);
  EXPECT_EQ(back.normalizers[1].scale, m.normalizers[1].scale);
  EXPECT_EQ(back.normalizers[1].kind, Distribution::gaussian);
  EXPECT_EQ(back.coeffs.sample_size(), m.coeffs.sample_size());
  EXPECT_TRUE(back.coeffs.is_dense());
  const Matrix pts = hcr::oracle::uniform_sample(4, 100, 22);
  const auto a = evaluate_many(m.coeffs, pts);
  const auto b = evaluate_many(back.coeffs, pts);
  for (std::size_t i = 0; i < a.size(); ++i)
    EXPECT_NEAR(a[i], b[i], 1e-12);
  EXPECT_TRUE(std::equal(m.coeffs.values().begin(), m.coeffs.values().end(),
                         back.coeffs.values().begin()));
}

TEST(ModelFile, PrunedModelKeepsSparsity)
{
  const RawSeries raw = hcr::oracle::dependent_pair_series(3000, 23);
  ModelConfig config{ { "b1", "b2" }, 0, 5 };
  config.prune_sigmas = 3.0;
  const Model m = fit(config, raw);
  ASSERT_FALSE(m.coeffs.is_dense());
  const Model back = round_trip(m);
  EXPECT_EQ(back.config.prune_sigmas, 3.0);
  ASSERT_EQ(back.coeffs.entry_count(), m.coeffs.entry_count());
  for (std::size_t e = 0; e < m.coeffs.entry_count(); ++e) {
    EXPECT_EQ(back.coeffs.keys()[e], m.coeffs.keys()[e]);
    EXPECT_EQ(back.coeffs.values()[e], m.coeffs.values()[e]);
  }
}

TEST(ModelFile, FileRoundTrip)
{
  const RawSeries raw = hcr::oracle::dependent_pair_series(300, 24);
  const Model m = fit({ { "b2" }, 2, 3 }, raw);
  const auto path = std::filesystem::temp_directory_path() / "hcr_test_model.txt";
  save_model(path, m);
  const Model back = load_model(path);
  std::filesystem::remove(path);
  EXPECT_EQ(back.coeffs.entry_count(), 64u);
  EXPECT_THROW(load_model(path), IoError);
}

TEST(ModelFile, RejectsMalformedInput)
{
  std::istringstream empty("");
  EXPECT_THROW(read_model(empty), InvalidInput);
  std::istringstream wrong_tag("hcr-model 2\n");
  EXPECT_THROW(read_model(wrong_tag), InvalidInput);

  const RawSeries raw = hcr::oracle::dependent_pair_series(100, 25);
  std::stringstream buffer;
  write_model(buffer, fit({ { "b1" }, 0, 2 }, raw));
  const std::string text = buffer.str();
  EXPECT_TRUE(text.starts_with(std::string(kModelFormatTag) + "\n"));

  std::istringstream truncated(text.substr(0, text.rfind('\n', text.size() - 2) + 1));
  EXPECT_THROW(read_model(truncated), InvalidInput);
  std::string reordered = text;
  const auto pos = reordered.find("\n1 ");
  ASSERT_NE(pos, std::string::npos);
  reordered[pos + 1] = '2'; // duplicate key "2"
  std::istringstream bad(reordered);
  EXPECT_THROW(read_model(bad), InvalidInput);
}

TEST(Csv, ReadsSelectedColumnsInOrder)
{
  const std::string text = "date,b1,b2,b3\n2001-01-02, 1.5,2,3\n2001-01-03,4,5,6e-1\n";
  const RawSeries all = parse_csv(text, { {}, "date" });
  EXPECT_EQ(all.names, (std::vector<std::string>{ "b1", "b2", "b3" }));
  EXPECT_EQ(all.times, (std::vector<std::string>{ "2001-01-02", "2001-01-03" }));
  EXPECT_EQ(all.values(1, 2), 0.6);
  const RawSeries two = parse_csv(text, { { "b2", "b1" }, "date" });
  EXPECT_EQ(two.vars(), 2u);
  EXPECT_EQ(two.values(0, 1), 1.5);
  const RawSeries round = parse_csv(write_csv(all), { {}, "date" });
  EXPECT_EQ(round.values, all.values);
  EXPECT_EQ(round.times, all.times);
}

TEST(Csv, ErrorsNameRowAndColumn)
{
  EXPECT_EQ(error_of([] { parse_csv("b1,b2\n", {}); }),
            "input is empty: header row but no data rows");
  EXPECT_EQ(error_of([] { parse_csv("b1,b2\n1,2\n3,x\n", {}); }),
            "row 3, column 'b2': 'x' is not a number");
  EXPECT_EQ(error_of([] { parse_csv("b1,b2\n1,2\n", { { "b9" }, {} }); }),
            "input has no column 'b9'");
  EXPECT_THROW(parse_csv("b1,b2\n1\n", {}), InvalidInput);
  EXPECT_THROW(parse_csv("", {}), InvalidInput);
  EXPECT_THROW(parse_csv("b1\nnan\n", {}), InvalidInput);
  EXPECT_THROW(load_csv("/nonexistent/file.csv", {}), IoError);
}

TEST(DieboldLi, DefaultDecayAndLoadings)
{
  EXPECT_EQ(kDieboldLiLambda, 0.0609);
  const auto l = diebold_li_loadings(24.0, 0.0609);
  const double x = 0.0609 * 24.0;
  EXPECT_EQ(l[0], 1.0);
  EXPECT_NEAR(l[1], (1 - std::exp(-x)) / x, 1e-15);
  EXPECT_NEAR(l[2], (1 - std::exp(-x)) / x - std::exp(-x), 1e-15);
  const auto tiny = diebold_li_loadings(1e-12, 0.0609);
  EXPECT_NEAR(tiny[1], 1.0, 1e-12);
  EXPECT_NEAR(tiny[2], 0.0, 1e-12);
}

TEST(DieboldLi, FlatCurveIsPureLevel)
{
  YieldTable t;
  t.maturities = { 3, 6, 12, 24, 60, 120, 360 };
  t.yields = Matrix::Constant(2, 7, 4.25);
  const RawSeries b = diebold_li_fit(t);
  EXPECT_EQ(b.names, (std::vector<std::string>{ "b1", "b2", "b3" }));
  for (Eigen::Index r = 0; r < 2; ++r) {
    EXPECT_NEAR(b.values(r, 0), 4.25, 1e-12);
    EXPECT_NEAR(b.values(r, 1), 0.0, 1e-11);
    EXPECT_NEAR(b.values(r, 2), 0.0, 1e-11);
  }
}

TEST(DieboldLi, RecoversGeneratingFactors)
{
  YieldTable t;
  t.maturities = { 3, 6, 12, 24, 36, 60, 84, 120, 240, 360 };
  const double beta[3][3] = { { 5.1, -1.7, 0.8 }, { 2.0, 3.0, -4.0 }, { 0.3, 0.0, 2.2 } };
  t.yields.resize(3, 10);
  for (int r = 0; r < 3; ++r)
    for (int i = 0; i < 10; ++i) {
      const auto l = diebold_li_loadings(t.maturities[static_cast<std::size_t>(i)], 0.0609);
      t.yields(r, i) = beta[r][0] * l[0] + beta[r][1] * l[1] + beta[r][2] * l[2];
    }
  const RawSeries b = diebold_li_fit(t);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      EXPECT_NEAR(b.values(r, c), beta[r][c], 1e-9);
}

TEST(DieboldLi, MaturityLabelsAndErrors)
{
  EXPECT_EQ(parse_maturity("3"), 3.0);
  EXPECT_EQ(parse_maturity("3m"), 3.0);
  EXPECT_EQ(parse_maturity("2y"), 24.0);
  EXPECT_THROW(parse_maturity("long"), InvalidInput);

  const RawSeries s = parse_csv("date,3m,1y,10y\nd1,1,2,3\n", { {}, "date" });
  const YieldTable t = yield_table_from(s);
  EXPECT_EQ(t.maturities, (std::vector<double>{ 3, 12, 120 }));
  EXPECT_EQ(t.dates, (std::vector<std::string>{ "d1" }));

  YieldTable two;
  two.maturities = { 3, 6 };
  two.yields = Matrix::Zero(1, 2);
  EXPECT_THROW(diebold_li_fit(two), InvalidInput);

  YieldTable fast;
  fast.maturities = { 1, 2, 3 };
  fast.yields = Matrix::Zero(1, 3);
  EXPECT_THROW(diebold_li_fit(fast, 1e6), RankDeficient);
  EXPECT_THROW(diebold_li_fit(fast, -1.0), InvalidInput);
}

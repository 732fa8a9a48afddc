#include "hcr/density.hpp"
#include "hcr/error.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace hcr;
using hcr::oracle::integrate_cube;
using hcr::oracle::product_f1_density;
using hcr::oracle::rejection_sample;
using hcr::oracle::uniform_sample;

namespace {

CoefficientTensor
sparse(BasisSpec spec, std::vector<std::pair<MultiIndex, double>> items, std::size_t n = 0)
{
  std::vector<CoefficientTensor::Entry> entries;
  for (auto& [j, v] : items)
    entries.push_back({ spec.encode(j), v });
  return CoefficientTensor(spec, std::move(entries), n);
}

Matrix
columns(const Matrix& m, std::vector<int> cols)
{
  Matrix out(m.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c)
    out.col(static_cast<Eigen::Index>(c)) = m.col(cols[c]);
  return out;
}

const Matrix&
product_sample()
{
  static const Matrix sample = rejection_sample(2, 100000, 2.5, product_f1_density, 20240601);
  return sample;
}

} // namespace

TEST(Estimate, NormalizationCoefficientIsOne)
{
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Matrix s = uniform_sample(3, 257, seed);
    for (auto mode : { Summation::sequential, Summation::pairwise, Summation::blocked }) {
      const auto a = estimate(s, { 3, 4 }, { mode });
      EXPECT_NEAR(a.at({ 0, 0, 0 }), 1.0, 1e-12);
    }
  }
}

TEST(Estimate, SinglePointGivesBasisValues)
{
  Matrix one(1, 1);
  one << 1.0;
  const auto a = estimate(one, { 1, 3 });
  EXPECT_NEAR(a.at({ 1 }), std::sqrt(3.0), 1e-15);
  Matrix pt(1, 2);
  pt << 0.2, 0.9;
  const auto b = estimate(pt, { 2, 4 });
  for (const auto& j : enumerate_indices({ 2, 4 }))
    EXPECT_NEAR(b.at(j), product_eval(j, row_span(pt, 0)), 1e-14);
}

TEST(Estimate, RecoversProductCoefficient)
{
  const auto a = estimate(product_sample(), { 2, 4 });
  EXPECT_NEAR(a.at({ 1, 1 }), 0.5, 0.02);
  EXPECT_EQ(a.sample_size(), 100000u);
  // every coefficient sits within 5 standard errors of the sampled law's
  for (const auto& j : enumerate_indices({ 2, 4 }))
    EXPECT_NEAR(a.at(j), oracle::clipped_product_coefficient(j[0], j[1]), 5.0 / std::sqrt(1e5))
      << j[0] << j[1];
}

TEST(Estimate, Errors)
{
  EXPECT_THROW(estimate(Matrix(0, 2), { 2, 3 }), InvalidInput);
  Matrix bad(1, 2);
  bad << 0.5, 1.5;
  EXPECT_THROW(estimate(bad, { 2, 3 }), InvalidInput);
  EXPECT_THROW(estimate(uniform_sample(3, 4, 1), { 2, 3 }), InvalidInput);
  EXPECT_THROW(estimate(uniform_sample(8, 4, 1), { 8, 9 }), ResourceError);
}

TEST(Estimate, LinearInConcatenatedSamples)
{
  const Matrix a = uniform_sample(2, 300, 1);
  const Matrix b = uniform_sample(2, 500, 2);
  Matrix ab(800, 2);
  ab << a, b;
  const BasisSpec spec{ 2, 6 };
  const auto ca = estimate(a, spec);
  const auto cb = estimate(b, spec);
  const auto cab = estimate(ab, spec);
  for (std::size_t e = 0; e < cab.entry_count(); ++e)
    EXPECT_NEAR(cab.values()[e], (300 * ca.values()[e] + 500 * cb.values()[e]) / 800, 1e-12);
}

TEST(Estimate, SummationModesAgree)
{
  const Matrix s = uniform_sample(4, 3000, 9);
  const BasisSpec spec{ 4, 5 };
  const auto seq = estimate(s, spec, { Summation::sequential });
  const auto pair = estimate(s, spec, { Summation::pairwise });
  const auto blk = estimate(s, spec, { Summation::blocked });
  for (std::size_t e = 0; e < seq.entry_count(); ++e) {
    EXPECT_NEAR(pair.values()[e], seq.values()[e], 1e-12);
    EXPECT_NEAR(blk.values()[e], seq.values()[e], 1e-10);
  }
}

TEST(Estimate, SequentialIsDeterministic)
{
  const Matrix s = uniform_sample(3, 1000, 4);
  const auto a = estimate(s, { 3, 5 });
  const auto b = estimate(s, { 3, 5 });
  EXPECT_TRUE(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
}

TEST(Estimate, ErrorShrinksAsInverseRootN)
{
  // RMS error at n and 4n; 200 seeds keep the ratio's own spread near 7%
  const double truth = oracle::clipped_product_coefficient(1, 1);
  double sq_small = 0.0;
  double sq_large = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto small = rejection_sample(2, 10000, 2.5, product_f1_density, 1000 + seed);
    const auto large = rejection_sample(2, 40000, 2.5, product_f1_density, 5000 + seed);
    const double es = estimate(small, { 2, 1 }).at({ 1, 1 }) - truth;
    const double el = estimate(large, { 2, 1 }).at({ 1, 1 }) - truth;
    sq_small += es * es;
    sq_large += el * el;
  }
  const double ratio = std::sqrt(sq_small / sq_large);
  EXPECT_GT(ratio, 2.0 * 0.65);
  EXPECT_LT(ratio, 2.0 * 1.35);
}

TEST(Evaluate, UniformIsExactlyOne)
{
  const auto u = CoefficientTensor::uniform({ 3, 9 });
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const Matrix pts = uniform_sample(3, 50, seed);
    for (Eigen::Index r = 0; r < pts.rows(); ++r)
      EXPECT_EQ(evaluate(u, row_span(pts, r)), 1.0);
    for (double v : evaluate_many(u, pts))
      EXPECT_EQ(v, 1.0);
  }
}

TEST(Evaluate, NegativeValuesArePreserved)
{
  const auto c = sparse({ 2, 1 }, { { { 0, 0 }, 1.0 }, { { 1, 1 }, -0.82 } });
  EXPECT_NEAR(evaluate(c, std::vector{ 1.0, 1.0 }), -1.46, 1e-14);
}

TEST(Evaluate, DenseAndSparsePathsAgree)
{
  const Matrix s = uniform_sample(3, 400, 12);
  const auto dense = estimate(s, { 3, 4 });
  std::vector<CoefficientTensor::Entry> entries;
  for (std::size_t e = 0; e + 1 < dense.entry_count(); ++e) // drop the last entry
    entries.push_back({ dense.keys()[e], dense.values()[e] });
  const CoefficientTensor sp(dense.spec(), entries, 400);
  const Matrix pts = uniform_sample(3, 40, 13);
  const auto many_dense = evaluate_many(dense, pts);
  const auto many_sparse = evaluate_many(sp, pts);
  const MultiIndex last{ 4, 4, 4 };
  for (Eigen::Index r = 0; r < pts.rows(); ++r) {
    const auto x = row_span(pts, r);
    double direct = 0.0;
    for (const auto& j : enumerate_indices(dense.spec()))
      direct += dense.at(j) * product_eval(j, x);
    EXPECT_NEAR(evaluate(dense, x), direct, 1e-11);
    EXPECT_NEAR(many_dense[static_cast<std::size_t>(r)], direct, 1e-11);
    const double without_last = direct - dense.at(last) * product_eval(last, x);
    EXPECT_NEAR(evaluate(sp, x), without_last, 1e-11);
    EXPECT_NEAR(many_sparse[static_cast<std::size_t>(r)], without_last, 1e-11);
  }
  EXPECT_THROW(evaluate(dense, std::vector{ 0.5 }), InvalidInput);
}

TEST(Evaluate, EstimatedDensityIntegratesToOne)
{
  const Matrix s = uniform_sample(3, 2000, 21);
  const auto a = estimate(s, { 3, 5 });
  const double integral =
    integrate_cube(3, 64, [&](const std::vector<double>& x) { return evaluate(a, x); });
  EXPECT_NEAR(integral, 1.0, 1e-8);
}

TEST(Sigma, BaselineAndConstantIndex)
{
  EXPECT_NEAR(baseline_sigma(6469), 0.012433, 1e-6);
  EXPECT_NEAR(baseline_sigma(6467), 0.012435, 1e-6);
  const Matrix s = uniform_sample(2, 1000, 1);
  const auto a = estimate(s, { 2, 3 });
  const auto noise = sigma(a, s);
  EXPECT_EQ(noise.sigma[0], 0.0);
  EXPECT_DOUBLE_EQ(noise.baseline, 1.0 / std::sqrt(1000.0));
  EXPECT_THROW(sigma(a, uniform_sample(2, 1, 2)), InvalidInput);
}

TEST(Sigma, MatchesDirectStandardDeviation)
{
  const Matrix s = uniform_sample(2, 700, 3);
  const auto a = estimate(s, { 2, 3 });
  const auto noise = sigma(a, s);
  for (std::size_t e = 0; e < a.entry_count(); ++e) {
    const MultiIndex j = a.index_at(e);
    double mean = 0.0;
    for (Eigen::Index r = 0; r < s.rows(); ++r)
      mean += product_eval(j, row_span(s, r));
    mean /= 700.0;
    double var = 0.0;
    for (Eigen::Index r = 0; r < s.rows(); ++r)
      var += std::pow(product_eval(j, row_span(s, r)) - mean, 2);
    var /= 700.0;
    EXPECT_NEAR(noise.sigma[e], std::sqrt(var / 700.0), 1e-12);
  }
}

TEST(TopK, NoiseOnlyDataHasNoLargeScores)
{
  const Matrix s = uniform_sample(2, 10000, 77);
  const auto a = estimate(s, { 2, 9 });
  const auto report = top_k(a, s, 1000);
  ASSERT_EQ(report.rows.size(), 100u);
  EXPECT_TRUE(report.rows[0].index.is_zero());
  EXPECT_EQ(report.rows[0].value, 1.0);
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    EXPECT_LE(std::abs(report.rows[i].z), 6.0);
    if (i > 1)
      EXPECT_GE(std::abs(report.rows[i - 1].value), std::abs(report.rows[i].value));
  }
}

TEST(TopK, ProductDensityLeadsWithCrossTerm)
{
  const auto a = estimate(product_sample(), { 2, 4 });
  const auto report = top_k(a, product_sample(), 5);
  ASSERT_EQ(report.rows.size(), 6u);
  EXPECT_TRUE(report.rows[0].index.is_zero());
  EXPECT_EQ(report.rows[1].index, MultiIndex({ 1, 1 }));
  EXPECT_GT(report.rows[1].z, 40.0);
  EXPECT_THROW(top_k(a, product_sample(), 0), InvalidInput);
}

TEST(Marginalize, OddTermIntegratesOut)
{
  const auto c = sparse({ 2, 1 }, { { { 0, 0 }, 1.0 }, { { 1, 1 }, 0.5 } });
  const int keep[] = { 1 };
  const auto m = marginalize(c, keep);
  EXPECT_EQ(m.dim(), 1);
  EXPECT_EQ(m.entry_count(), 1u);
  EXPECT_EQ(m.at({ 0 }), 1.0);
}

TEST(Marginalize, CommutesWithEstimation)
{
  const Matrix s = uniform_sample(3, 5000, 8);
  const auto full = estimate(s, { 3, 5 });
  for (std::vector<int> keep : { std::vector{ 0, 1 }, std::vector{ 0, 2 }, std::vector{ 1 } }) {
    const auto m = marginalize(full, keep);
    const auto direct = estimate(columns(s, keep), { static_cast<int>(keep.size()), 5 });
    ASSERT_TRUE(m.is_dense());
    for (std::size_t e = 0; e < m.entry_count(); ++e)
      EXPECT_NEAR(m.values()[e], direct.values()[e], 1e-12);
  }
}

TEST(Marginalize, MatchesQuadratureOverDroppedAxis)
{
  const Matrix s = uniform_sample(3, 3000, 18);
  const auto full = estimate(s, { 3, 5 });
  const int keep[] = { 0, 2 };
  const auto m = marginalize(full, keep);
  const auto rule = oracle::gauss_legendre_01(64);
  for (int i = 0; i <= 10; ++i)
    for (int k = 0; k <= 10; ++k) {
      double q = 0.0;
      for (std::size_t p = 0; p < rule.nodes.size(); ++p)
        q += rule.weights[p] * evaluate(full, std::vector{ i / 10.0, rule.nodes[p], k / 10.0 });
      EXPECT_NEAR(evaluate(m, std::vector{ i / 10.0, k / 10.0 }), q, 1e-8);
    }
}

TEST(Marginalize, Errors)
{
  const auto c = CoefficientTensor::uniform({ 3, 2 });
  EXPECT_THROW(marginalize(c, std::span<const int>{}), InvalidInput);
  const int out_of_range[] = { 3 };
  EXPECT_THROW(marginalize(c, out_of_range), InvalidInput);
  const int unsorted[] = { 2, 0 };
  EXPECT_THROW(marginalize(c, unsorted), InvalidInput);
}

TEST(ConditionSlice, UniformStaysUniform)
{
  const auto c = CoefficientTensor::uniform({ 3, 4 });
  const int ctx[] = { 2 };
  const double val[] = { 0.83 };
  const auto s = condition_slice(c, ctx, val, true);
  EXPECT_EQ(s.dim(), 2);
  EXPECT_EQ(s.at({ 0, 0 }), 1.0);
  EXPECT_EQ(s.entry_count(), 1u);
}

TEST(ConditionSlice, CenterContextKillsCrossTerm)
{
  const auto c = sparse({ 2, 1 }, { { { 0, 0 }, 1.0 }, { { 1, 1 }, 0.5 } });
  const int ctx[] = { 0 };
  const double val[] = { 0.5 };
  const auto s = condition_slice(c, ctx, val, true);
  EXPECT_EQ(s.at({ 0 }), 1.0);
  EXPECT_EQ(s.at({ 1 }), 0.0);
}

TEST(ConditionSlice, EqualsJointOverMarginal)
{
  const Matrix s = rejection_sample(3, 4000, 8.0,
                                    [](const std::vector<double>& x) {
                                      return 1.0 + 0.4 * 3.0 * (2 * x[0] - 1) * (2 * x[2] - 1);
                                    },
                                    31);
  const auto joint = estimate(s, { 3, 3 });
  const int ctx[] = { 0, 2 };
  const int ctx_sorted[] = { 0, 2 };
  const auto marginal = marginalize(joint, ctx_sorted);
  const Matrix probes = uniform_sample(3, 30, 32);
  for (Eigen::Index r = 0; r < probes.rows(); ++r) {
    const double cv[] = { probes(r, 0), probes(r, 2) };
    const double m = evaluate(marginal, cv);
    if (m <= 0.0) {
      EXPECT_THROW(condition_slice(joint, ctx, cv, true), NonPositiveDensity);
      continue;
    }
    const auto slice = condition_slice(joint, ctx, cv, true);
    for (double y : { 0.05, 0.5, 0.93 }) {
      const double want = evaluate(joint, std::vector{ cv[0], y, cv[1] }) / m;
      EXPECT_NEAR(evaluate(slice, std::vector{ y }), want, 1e-10);
    }
    const auto raw = condition_slice(joint, ctx, cv, false);
    EXPECT_NEAR(raw.at({ 0 }), m, 1e-12);
  }
}

TEST(ConditionSlice, EmptyContextReproducesJoint)
{
  const Matrix s = uniform_sample(2, 500, 41);
  const auto joint = estimate(s, { 2, 3 });
  const auto slice = condition_slice(joint, {}, {}, true);
  ASSERT_EQ(slice.entry_count(), joint.entry_count());
  for (std::size_t e = 0; e < joint.entry_count(); ++e)
    EXPECT_NEAR(slice.values()[e], joint.values()[e], 1e-15);
}

TEST(ConditionSlice, NonPositiveContextDensity)
{
  // marginal of x0 is 1 - 0.9 f_1(x0), negative near x0 = 1
  const auto c = sparse({ 2, 1 }, { { { 0, 0 }, 1.0 }, { { 1, 0 }, -0.9 }, { { 1, 1 }, 0.2 } });
  const int ctx[] = { 0 };
  const double val[] = { 1.0 };
  EXPECT_THROW(condition_slice(c, ctx, val, true), NonPositiveDensity);
  const auto raw = condition_slice(c, ctx, val, false);
  EXPECT_NEAR(raw.at({ 0 }), 1.0 - 0.9 * std::sqrt(3.0), 1e-14);
  const double bad[] = { 1.2 };
  EXPECT_THROW(condition_slice(c, ctx, bad, false), InvalidInput);
}

TEST(Prune, ThresholdLimits)
{
  const Matrix s = uniform_sample(2, 10000, 5);
  const auto a = estimate(s, { 2, 6 });
  const auto same = prune(a, s, 0.0);
  EXPECT_EQ(same.entry_count(), a.entry_count());
  const auto six = prune(a, s, 6.0);
  EXPECT_EQ(six.entry_count(), 1u);
  EXPECT_EQ(six.at({ 0, 0 }), 1.0);
  const auto inf = prune(a, s, std::numeric_limits<double>::infinity());
  EXPECT_EQ(inf.entry_count(), 1u);
  EXPECT_THROW(prune(a, s, -1.0), InvalidInput);
}

TEST(Prune, KeepsSignal)
{
  const auto a = estimate(product_sample(), { 2, 4 });
  const auto p = prune(a, product_sample(), 6.0);
  EXPECT_TRUE(p.find({ 1, 1 }).has_value());
  EXPECT_LT(p.entry_count(), a.entry_count());
}

TEST(RegionStats, UniformDensity)
{
  const auto u = CoefficientTensor::uniform({ 2, 3 });
  auto above2 = region_stats(u, 2.0, { 50 });
  EXPECT_EQ(above2.volume_fraction, 0.0);
  EXPECT_EQ(above2.mass_fraction, 0.0);
  auto above_half = region_stats(u, 0.5, { 50 });
  EXPECT_EQ(above_half.volume_fraction, 1.0);
  EXPECT_EQ(above_half.mass_fraction, 1.0);
  EXPECT_THROW(region_stats(u, 1.0, { 1 }), InvalidInput);
}

TEST(RegionStats, QuadraticDensityMatchesClosedForm)
{
  const CoefficientTensor c({ 1, 2 }, std::vector<double>{ 1.0, 0.0, 0.5 }, 0);
  // rho > 1 exactly where 6x^2 - 6x + 1 > 0: outside the two roots
  const double r1 = (3.0 - std::sqrt(3.0)) / 6.0;
  const double volume = 2.0 * r1;
  const double mass = 2.0 * r1 + std::sqrt(5.0) * (2 * r1 * r1 * r1 - 3 * r1 * r1 + r1);
  const auto stats = region_stats(c, 1.0, { 20000 });
  EXPECT_NEAR(stats.volume_fraction, volume, 1e-3);
  EXPECT_NEAR(stats.mass_fraction, mass, 1e-3);
  EXPECT_FALSE(stats.monte_carlo);
}

TEST(RegionStats, MonteCarloAboveThreeDimensions)
{
  const auto u = CoefficientTensor::uniform({ 4, 2 });
  RegionOptions opt;
  opt.mc_samples = 1000;
  opt.seed = 3;
  const auto stats = region_stats(u, 0.5, opt);
  EXPECT_TRUE(stats.monte_carlo);
  EXPECT_EQ(stats.evaluations, 1000u);
  EXPECT_EQ(stats.volume_fraction, 1.0);

  // product density: rho > 1 where (2a-1)(2b-1) > 0, half the cube
  const auto c = sparse({ 4, 1 }, { { { 0, 0, 0, 0 }, 1.0 }, { { 1, 1, 0, 0 }, 0.5 } });
  opt.mc_samples = 200000;
  const auto half = region_stats(c, 1.0, opt);
  EXPECT_NEAR(half.volume_fraction, 0.5, 0.01);
  const auto again = region_stats(c, 1.0, opt);
  EXPECT_EQ(half.volume_fraction, again.volume_fraction);
}

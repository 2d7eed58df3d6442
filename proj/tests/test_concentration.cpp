#include <gtest/gtest.h>

#include <cmath>

#include "mimo_lab/concentration.hpp"

using namespace mimo_lab;

namespace {

ConcentrationReport check(ConcentrationKind kind, std::vector<int> dims, int trials, std::uint64_t seed = 1) {
  Rng rng(seed, {stream::kLemma, static_cast<std::uint64_t>(kind)});
  return concentration_check(kind, dims, trials, rng);
}

}  // namespace

TEST(Concentration, KindNamesRoundTrip) {
  for (ConcentrationKind k : {ConcentrationKind::TraceLemma, ConcentrationKind::ConstantModulus,
                              ConcentrationKind::UnboundedNorm, ConcentrationKind::IndependentVectors,
                              ConcentrationKind::HaarProduct, ConcentrationKind::FourierProduct})
    EXPECT_EQ(parse_concentration_kind(to_string(k)), k);
  EXPECT_FALSE(parse_concentration_kind("Nope").has_value());
}

TEST(Concentration, TraceLemmaMean) {
  const ConcentrationReport r = check(ConcentrationKind::TraceLemma, {256}, 2000);
  EXPECT_NEAR(r.points[0].mean, 1.0, 0.02);
  EXPECT_DOUBLE_EQ(r.points[0].target, 1.0);
}

TEST(Concentration, IndependentVectorsSecondMoment) {
  const ConcentrationReport r = check(ConcentrationKind::IndependentVectors, {512}, 4000);
  EXPECT_NEAR(r.points[0].mean_square * 512, 1.0, 0.15);
}

TEST(Concentration, HaarProductMaxDeviationShrinks) {
  const ConcentrationReport r = check(ConcentrationKind::HaarProduct, {64, 256}, 500);
  EXPECT_LT(r.points[1].max_deviation, 2.0 * r.points[0].max_deviation);
  EXPECT_LT(r.points[1].max_deviation, r.points[0].max_deviation);
}

TEST(Concentration, ConstantModulusAndUnboundedTargets) {
  const ConcentrationReport cm = check(ConcentrationKind::ConstantModulus, {256}, 2000);
  EXPECT_NEAR(cm.points[0].mean, 1.0, 0.02);
  const ConcentrationReport un = check(ConcentrationKind::UnboundedNorm, {256}, 2000);
  EXPECT_NEAR(un.points[0].mean / un.points[0].target, 1.0, 0.03);
}

TEST(Concentration, FourierProductDiagonalMean) {
  // Diagonal of U^H V V^H U has mean r/M for independent partial Fourier bases.
  const ConcentrationReport r = check(ConcentrationKind::FourierProduct, {128}, 2000);
  EXPECT_NEAR(r.points[0].mean / (8.0 / 128), 1.0, 0.1);
}

TEST(Concentration, DeviationDecaysForEveryKind) {
  for (ConcentrationKind k : {ConcentrationKind::TraceLemma, ConcentrationKind::ConstantModulus,
                              ConcentrationKind::UnboundedNorm, ConcentrationKind::IndependentVectors,
                              ConcentrationKind::HaarProduct, ConcentrationKind::FourierProduct}) {
    const ConcentrationReport r = check(k, {32, 64, 128, 256}, 400, 2);
    EXPECT_LE(r.slope, -0.35) << to_string(k);
    for (std::size_t i = 1; i < r.points.size(); ++i) EXPECT_LT(r.points[i].deviation, r.points[i - 1].deviation);
  }
}

TEST(Concentration, ExpectedSlopes) {
  EXPECT_DOUBLE_EQ(check(ConcentrationKind::TraceLemma, {8, 16}, 10).expected_slope, -0.5);
  EXPECT_DOUBLE_EQ(check(ConcentrationKind::HaarProduct, {8, 16}, 10).expected_slope, -1.0);
}

TEST(Concentration, RejectsBadDimensions) {
  Rng rng(1);
  EXPECT_THROW(concentration_check(ConcentrationKind::TraceLemma, {64, 32}, 10, rng), std::invalid_argument);
  EXPECT_THROW(concentration_check(ConcentrationKind::TraceLemma, {1, 4}, 10, rng), std::invalid_argument);
  EXPECT_THROW(concentration_check(ConcentrationKind::HaarProduct, {4, 16}, 10, rng), std::invalid_argument);
  EXPECT_THROW(concentration_check(ConcentrationKind::TraceLemma, {}, 10, rng), std::invalid_argument);
}

TEST(Concentration, LogLogSlope) {
  EXPECT_NEAR(loglog_slope({1, 10, 100}, {1, 0.1, 0.01}), -1.0, 1e-12);
  EXPECT_NEAR(loglog_slope({4, 16, 64}, {2, 4, 8}), 0.5, 1e-12);
}

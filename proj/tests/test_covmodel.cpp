#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "mimo_lab/covmodel.hpp"

using namespace mimo_lab;

namespace {

double max_orthonormality_error(const CMatrix& U) {
  return (U.adjoint() * U - CMatrix::Identity(U.cols(), U.cols())).cwiseAbs().maxCoeff();
}

// log C(n, k)
double log_choose(int n, int k) { return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0); }

}  // namespace

TEST(PartialUnitary, ScalarCaseHasUnitModulus) {
  Rng rng(1);
  const CMatrix u = sample_partial_unitary(1, 1, rng);
  EXPECT_NEAR(std::abs(u(0, 0)), 1.0, 1e-14);
}

TEST(PartialUnitary, ColumnsAreOrthonormal) {
  Rng rng(7);
  EXPECT_LT(max_orthonormality_error(sample_partial_unitary(8, 3, rng)), 1e-10);
  EXPECT_LT(max_orthonormality_error(sample_partial_unitary(200, 20, rng)), 1e-10);
}

TEST(PartialUnitary, RejectsRankAboveDimension) {
  Rng rng(1);
  EXPECT_THROW(sample_partial_unitary(4, 5, rng), std::invalid_argument);
  EXPECT_THROW(sample_partial_unitary(4, 0, rng), std::invalid_argument);
}

TEST(PartialUnitary, OverlapOfIndependentColumnsHasBetaMean) {
  // |u^H v|^2 ~ Beta(1, M-1) with mean 1/M.
  Rng rng(11);
  const int M = 64, draws = 2000;
  double acc = 0.0;
  for (int i = 0; i < draws; ++i) {
    const CMatrix u = sample_partial_unitary(M, 4, rng);
    const CMatrix v = sample_partial_unitary(M, 4, rng);
    acc += std::norm(u.col(0).dot(v.col(0)));
  }
  EXPECT_NEAR(acc / draws * M, 1.0, 0.15);
}

TEST(PartialUnitary, FirstEntryFollowsBetaDistribution) {
  // Kolmogorov-Smirnov against the Beta(1, M-1) CDF 1 - (1 - x)^(M-1).
  Rng rng(12);
  const int M = 16, n = 10000;
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = std::norm(sample_partial_unitary(M, 1, rng)(0, 0));
  std::sort(x.begin(), x.end());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    const double cdf = 1.0 - std::pow(1.0 - x[i], M - 1);
    d = std::max({d, std::abs(cdf - double(i) / n), std::abs(cdf - double(i + 1) / n)});
  }
  // 1% critical value of the one-sample KS statistic.
  EXPECT_LT(d, 1.63 / std::sqrt(double(n)));
}

TEST(PartialFourier, FullSelectionIsPermutedDft) {
  Rng rng(5);
  const std::vector<int> idx = sample_fourier_indices(4, 4, rng);
  EXPECT_EQ(std::set<int>(idx.begin(), idx.end()).size(), 4u);
  const CMatrix u = fourier_columns(4, idx);
  EXPECT_LT(max_orthonormality_error(u), 1e-14);
  for (int c = 0; c < 4; ++c)
    for (int j = 0; j < 4; ++j) {
      const double ph = 2.0 * M_PI * j * idx[c] / 4.0;
      EXPECT_NEAR(std::abs(u(j, c) - cplx(std::cos(ph), std::sin(ph)) / 2.0), 0.0, 1e-14);
    }
}

TEST(PartialFourier, ColumnsHaveConstantModulus) {
  Rng rng(3);
  const CMatrix u = sample_partial_fourier(8, 2, rng);
  for (Eigen::Index i = 0; i < u.size(); ++i) EXPECT_NEAR(std::abs(u(i)), 1.0 / std::sqrt(8.0), 1e-14);
}

TEST(PartialFourier, DisjointSupportsAreOrthogonal) {
  const CMatrix a = fourier_columns(32, {0, 3, 9});
  const CMatrix b = fourier_columns(32, {1, 4, 30});
  EXPECT_LT((a.adjoint() * b).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(PartialFourier, SharedColumnProbabilityMatchesHypergeometric) {
  Rng rng(9);
  const int M = 64, r = 8, pairs = 5000;
  int shared = 0;
  for (int i = 0; i < pairs; ++i) {
    const auto a = sample_fourier_indices(M, r, rng);
    const auto b = sample_fourier_indices(M, r, rng);
    const std::set<int> sa(a.begin(), a.end());
    shared += std::any_of(b.begin(), b.end(), [&](int x) { return sa.count(x) > 0; });
  }
  const double expected = 1.0 - std::exp(log_choose(M - r, r) - log_choose(M, r));
  const double se = std::sqrt(expected * (1 - expected) / pairs);
  EXPECT_NEAR(shared / double(pairs), expected, 4 * se);
}

TEST(EigenProfile, UniformSplitsEnergy) {
  EigenProfile p;
  p.total_energy = 100;
  const RVector l = eigen_profile(p, 8);
  for (int i = 0; i < 8; ++i) EXPECT_DOUBLE_EQ(l(i), 12.5);
  p.total_energy = 5;
  EXPECT_DOUBLE_EQ(eigen_profile(p, 1)(0), 5.0);
}

TEST(EigenProfile, ExponentialDecayIsNormalised) {
  EigenProfile p;
  p.shape = EigenProfile::Shape::ExponentialDecay;
  p.rate = 0.5;
  p.total_energy = 1.0;
  const RVector l = eigen_profile(p, 3);
  const double s = 1 + std::exp(-0.5) + std::exp(-1.0);
  EXPECT_NEAR(l(0), 1 / s, 1e-15);
  EXPECT_NEAR(l(1), std::exp(-0.5) / s, 1e-15);
  EXPECT_NEAR(l(2), std::exp(-1.0) / s, 1e-15);
  EXPECT_NEAR(l.sum(), 1.0, 1e-12);
}

TEST(EigenProfile, RejectsBadInput) {
  EigenProfile p;
  EXPECT_THROW(eigen_profile(p, 0), std::invalid_argument);
  p.total_energy = -1;
  EXPECT_THROW(eigen_profile(p, 2), std::invalid_argument);
}

TEST(BuildNetwork, Fig2SettingProfiles) {
  ScenarioConfig c;
  c.L = 4;
  c.K = 5;
  c.M = 100;
  c.r_own = 8;
  c.iota = 0.2;
  c.T_c = 500;
  const NetworkScenario net = build_network(c, 1);
  ASSERT_EQ(net.profiles.size(), 80u);
  for (int l = 0; l < 4; ++l)
    for (int lp = 0; lp < 4; ++lp)
      for (int k = 0; k < 5; ++k) {
        const auto& p = net.profile(l, lp, k);
        EXPECT_NEAR(p.trace(), l == lp ? 100.0 : 20.0, 1e-10);
        EXPECT_EQ(p.r, l == lp ? 8 : 4);
        EXPECT_TRUE((p.lambda.array() > 0).all());
        EXPECT_LT(max_orthonormality_error(p.U()), 1e-10);
      }
}

TEST(BuildNetwork, SingleUserHasOneProfile) {
  ScenarioConfig c;
  c.M = 8;
  c.r_own = 2;
  EXPECT_EQ(build_network(c, 1).profiles.size(), 1u);
}

TEST(BuildNetwork, VeryStrongNormalisation) {
  ScenarioConfig c;
  c.L = 2;
  c.K = 1;
  c.M = 256;
  c.r_own = 16;
  c.regime = Regime::VeryStrong;
  const NetworkScenario net = build_network(c, 2);
  EXPECT_NEAR(net.profile(0, 0, 0).trace(), 16.0, 1e-12);
  EXPECT_NEAR(net.profile(0, 1, 0).trace(), 3.2, 1e-12);
}

TEST(BuildNetwork, PowerMappingAndPilotSnr) {
  ScenarioConfig c;
  c.K = 4;
  c.M = 16;
  c.r_own = 4;
  c.T_c = 10;
  c.snr = 20.0;
  c.pilot_boost = 2.0;
  const NetworkScenario net = build_network(c, 1);
  EXPECT_DOUBLE_EQ(net.P_ul, 5.0);
  EXPECT_DOUBLE_EQ(net.P_dl, 5.0);
  EXPECT_DOUBLE_EQ(net.rho_p(), 10.0);
  EXPECT_DOUBLE_EQ(net.inv_rho(), 0.1);
  c.noiseless_pilot = true;
  EXPECT_EQ(build_network(c, 1).inv_rho(), 0.0);
}

TEST(BuildNetwork, DeterministicAndDrawDependent) {
  ScenarioConfig c;
  c.L = 2;
  c.K = 3;
  c.M = 32;
  c.r_own = 4;
  const NetworkScenario a = build_network(c, 5, 0);
  const NetworkScenario b = build_network(c, 5, 0);
  const NetworkScenario d = build_network(c, 5, 1);
  int differ = 0;
  for (std::size_t i = 0; i < a.profiles.size(); ++i) {
    EXPECT_EQ(a.profiles[i].fourier_indices, b.profiles[i].fourier_indices);
    differ += a.profiles[i].fourier_indices != d.profiles[i].fourier_indices;
  }
  EXPECT_GT(differ, 0);
}

TEST(BuildNetwork, PartialUnitaryWorkingCoordinatesAreAntenna) {
  ScenarioConfig c;
  c.M = 16;
  c.r_own = 3;
  c.model = CorrelationModel::PartialUnitary;
  const NetworkScenario net = build_network(c, 3);
  const auto& p = net.profile(0, 0, 0);
  const CMatrix R = p.R();
  EXPECT_LT((R - R.adjoint()).norm(), 1e-12);
  EXPECT_NEAR(R.trace().real(), 16.0, 1e-10);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(R);
  int positive = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    EXPECT_GT(es.eigenvalues()(i), -1e-10);
    positive += es.eigenvalues()(i) > 1e-8;
  }
  EXPECT_EQ(positive, 3);
}

TEST(BuildNetwork, FourierWorkingCoordinatesMapToAntenna) {
  ScenarioConfig c;
  c.M = 16;
  c.r_own = 3;
  const NetworkScenario net = build_network(c, 3);
  const auto& p = net.profile(0, 0, 0);
  Rng rng(1);
  const CVector w = rng.complex_normal(3);
  EXPECT_LT((net.to_antenna(p.basis.times(w)) - p.U() * w).norm(), 1e-12);
}

TEST(ScenarioConfig, ValidationNamesField) {
  ScenarioConfig c;
  c.M = 4;
  c.r_own = 5;
  try {
    c.validate();
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("'r'"), std::string::npos);
  }
  c.r_own = 2;
  c.iota = 1.5;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(ScenarioConfig, CrossRankDefault) {
  ScenarioConfig c;
  c.r_own = 8;
  EXPECT_EQ(c.cross_rank(), 4);
  c.r_own = 3;
  EXPECT_EQ(c.cross_rank(), 1);
  c.r_own = 1;
  EXPECT_EQ(c.cross_rank(), 1);
  c.r_cross = 5;
  EXPECT_EQ(c.cross_rank(), 5);
}

#include <gtest/gtest.h>

#include <cmath>

#include "mimo_lab/errors.hpp"
#include "mimo_lab/linalg.hpp"
#include "mimo_lab/training.hpp"

using namespace mimo_lab;

namespace {

ScenarioConfig small_config(int L, int K, int M, int r) {
  ScenarioConfig c;
  c.L = L;
  c.K = K;
  c.M = M;
  c.r_own = r;
  c.T_c = 100;
  c.snr = 10.0;
  return c;
}

}  // namespace

TEST(PilotScheme, ChannelUses) {
  PilotScheme p;
  EXPECT_EQ(p.channel_uses(7), 7);
  p.kind = PilotKind::NonOrthogonal;
  EXPECT_EQ(p.channel_uses(7), 1);
}

TEST(MmseFilter, ScalarWienerFilter) {
  // lambda = 2, rho_p = 1: gain 2/3, Phi 4/3, error 2/3.
  const MmseFilter f = make_mmse_filter(CMatrix::Constant(1, 1, 2.0), CMatrix::Zero(1, 1), 1.0);
  EXPECT_NEAR(f.gain(0, 0).real(), 2.0 / 3.0, 1e-14);
  EXPECT_NEAR(f.phi(0, 0).real(), 4.0 / 3.0, 1e-14);
  EXPECT_NEAR(f.err_cov(0, 0).real(), 2.0 / 3.0, 1e-14);
  EXPECT_NEAR(f.xi(0, 0).real(), 1.0 / 3.0, 1e-14);
}

TEST(MmseFilter, DecompositionAndDominance) {
  Rng rng(1);
  const CMatrix g = rng.complex_normal(6, 6);
  const CMatrix c = g * g.adjoint();
  RVector lam(6);
  lam << 5, 4, 3, 2, 1, 0.5;
  const CMatrix prior = lam.cast<cplx>().asDiagonal();
  const MmseFilter f = make_mmse_filter(prior, c, 0.3);
  EXPECT_LT((f.phi + f.err_cov - prior).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_GT(min_eigenvalue(f.err_cov), -1e-9);
  EXPECT_GT(min_eigenvalue(f.phi), -1e-9);
  EXPECT_LE(f.err_cov.trace().real(), lam.sum());
}

TEST(MmseFilter, NoiselessUncontaminatedIsIdentity) {
  const CMatrix prior = CMatrix::Identity(3, 3) * 2.0;
  const MmseFilter f = make_mmse_filter(prior, CMatrix::Zero(3, 3), 0.0);
  EXPECT_LT((f.gain - CMatrix::Identity(3, 3)).norm(), 1e-12);
  EXPECT_LT(f.err_cov.norm(), 1e-12);
}

TEST(MmseFilter, ErrorApproachesPriorAtVanishingPilotPower) {
  const CMatrix prior = CMatrix::Identity(2, 2);
  const MmseFilter f = make_mmse_filter(prior, CMatrix::Zero(2, 2), 1e12);
  EXPECT_NEAR(f.err_cov.trace().real(), 2.0, 1e-9);
}

TEST(ObserveOrthogonal, NoiselessSingleCellGivesChannel) {
  ScenarioConfig c = small_config(1, 3, 32, 4);
  c.noiseless_pilot = true;
  const NetworkScenario net = build_network(c, 1);
  Rng rng(1);
  const ChannelBlock b = realize_block(net, rng);
  const auto s = observe_orthogonal(b, net, rng);
  for (int k = 0; k < 3; ++k) EXPECT_LT((s[k] - b.at(net, 0, 0, k)).norm(), 1e-12);
}

TEST(ObserveOrthogonal, HugeBoostApproachesChannel) {
  ScenarioConfig c = small_config(1, 1, 16, 4);
  c.pilot_boost = 1e12;
  const NetworkScenario net = build_network(c, 1);
  Rng rng(2);
  const ChannelBlock b = realize_block(net, rng);
  const auto s = observe_orthogonal(b, net, rng);
  EXPECT_LT((s[0] - b.w[0]).norm() / b.w[0].norm(), 1e-5);
}

TEST(ObserveOrthogonal, DisjointSupportsRemoveContamination) {
  ScenarioConfig c = small_config(2, 1, 16, 4);
  c.noiseless_pilot = true;
  NetworkScenario net = build_network(c, 1);
  // Own supports {0..3} and {8..11}; cross links live on disjoint columns.
  auto set = [&](int l, int lp, std::vector<int> idx) {
    auto& p = net.profiles[net.link(l, lp, 0)];
    p.fourier_indices = idx;
    p.basis = Subspace::selection(16, idx);
    p.r = static_cast<int>(idx.size());
    p.lambda = RVector::Constant(p.r, 16.0 / p.r);
  };
  set(0, 0, {0, 1, 2, 3});
  set(1, 1, {8, 9, 10, 11});
  set(0, 1, {4, 5});
  set(1, 0, {12, 13});
  Rng rng(3);
  const ChannelBlock b = realize_block(net, rng);
  const auto s = observe_orthogonal(b, net, rng);
  EXPECT_LT((s[0] - b.at(net, 0, 0, 0)).norm(), 1e-12);
  EXPECT_LT((s[1] - b.at(net, 1, 1, 0)).norm(), 1e-12);
}

TEST(ObserveOrthogonal, ErrorEnergyMatchesModel) {
  const NetworkScenario net = build_network(small_config(3, 1, 64, 8), 4);
  Rng rng(4);
  const int n = 1000;
  double acc = 0.0;
  for (int t = 0; t < n; ++t) {
    const ChannelBlock b = realize_block(net, rng, t);
    acc += (observe_orthogonal(b, net, rng)[0] - b.at(net, 0, 0, 0)).squaredNorm();
  }
  const auto& own = net.profile(0, 0, 0);
  double expected = own.r * net.inv_rho();
  for (int lp = 1; lp < 3; ++lp) expected += projected_covariance(own.basis, net.profile(0, lp, 0)).trace().real();
  EXPECT_NEAR(acc / n, expected, 0.1 * expected);
}

TEST(ObserveOrthogonal, PilotBudgetEnforced) {
  ScenarioConfig c = small_config(1, 5, 16, 2);
  c.T_c = 4;
  const NetworkScenario net = build_network(c, 1);
  Rng rng(5);
  const ChannelBlock b = realize_block(net, rng);
  EXPECT_THROW(observe_orthogonal(b, net, rng), PilotBudgetError);
  EXPECT_NO_THROW(observe_nonorthogonal(b, net, rng));
}

TEST(ObserveNonOrthogonal, SingleUserMatchesOrthogonalInLaw) {
  const NetworkScenario net = build_network(small_config(1, 1, 32, 4), 6);
  Rng ra(6), rb(6);
  const int n = 4000;
  double ea = 0.0, eb = 0.0;
  for (int t = 0; t < n; ++t) {
    const ChannelBlock ba = realize_block(net, ra, t);
    ea += (observe_orthogonal(ba, net, ra)[0] - ba.w[0]).squaredNorm();
    const ChannelBlock bb = realize_block(net, rb, t);
    eb += (observe_nonorthogonal(bb, net, rb)[0] - bb.w[0]).squaredNorm();
  }
  const double expected = 4 * net.inv_rho();
  EXPECT_NEAR(ea / n, expected, 0.05 * expected);
  EXPECT_NEAR(eb / n, expected, 0.05 * expected);
}

TEST(ObserveNonOrthogonal, ContaminationCountsAllOtherLinks) {
  const NetworkScenario net = build_network(small_config(2, 3, 16, 4), 7);
  const auto& own = net.profile(0, 0, 0);
  CMatrix manual = CMatrix::Zero(4, 4);
  int links = 0;
  for (int lp = 0; lp < 2; ++lp)
    for (int kp = 0; kp < 3; ++kp) {
      if (lp == 0 && kp == 0) continue;
      manual += projected_covariance(own.basis, net.profile(0, lp, kp));
      ++links;
    }
  EXPECT_EQ(links, 2 * 3 - 1);
  EXPECT_LT((contamination_covariance(net, 0, 0, PilotKind::NonOrthogonal) - manual).norm(), 1e-12);
}

TEST(ObserveNonOrthogonal, ContaminationRatioInSymmetricNetwork) {
  // Per-entry contamination variance ratio ~ (LK-1)/(L-1) when every link has the same energy.
  ScenarioConfig c = small_config(7, 20, 100, 8);
  c.iota = 1.0;
  c.r_cross = 8;
  c.T_c = 50;
  const NetworkScenario net = build_network(c, 8);
  double orth = 0.0, non = 0.0;
  for (int l = 0; l < 7; ++l)
    for (int k = 0; k < 20; ++k) {
      orth += contamination_covariance(net, l, k, PilotKind::Orthogonal).trace().real();
      non += contamination_covariance(net, l, k, PilotKind::NonOrthogonal).trace().real();
    }
  EXPECT_NEAR((non / orth) / (139.0 / 6.0), 1.0, 0.2);
}

TEST(MmseEstimate, ScalarExample) {
  ScenarioConfig c = small_config(1, 1, 4, 1);
  c.regime = Regime::VeryStrong;
  c.snr = 0.5;  // rho_p = boost * P = 1
  NetworkScenario net = build_network(c, 1);
  net.profiles[0].lambda(0) = 2.0;
  CVector s(1);
  s(0) = cplx(3.0, -1.5);
  const ChannelEstimate e = mmse_estimate(s, net, 0, 0, PilotKind::Orthogonal);
  EXPECT_NEAR(std::abs(e.w_hat(0) - s(0) * (2.0 / 3.0)), 0.0, 1e-14);
  EXPECT_NEAR(e.phi(0, 0).real(), 4.0 / 3.0, 1e-14);
  EXPECT_NEAR(e.err_cov(0, 0).real(), 2.0 / 3.0, 1e-14);
}

TEST(MmseEstimate, RejectsWrongLength) {
  const NetworkScenario net = build_network(small_config(1, 1, 8, 2), 1);
  EXPECT_THROW(mmse_estimate(CVector::Zero(3), net, 0, 0, PilotKind::Orthogonal), std::invalid_argument);
}

TEST(MmseEstimate, OrthogonalityAndCovarianceConsistency) {
  const NetworkScenario net = build_network(small_config(3, 2, 32, 4), 9);
  Rng rng(9);
  const int n = 10000;
  cplx cross = 0.0;
  double ew = 0.0, ee = 0.0;
  CMatrix cov = CMatrix::Zero(4, 4);
  for (int t = 0; t < n; ++t) {
    const ChannelBlock b = realize_block(net, rng, t);
    const auto s = observe_orthogonal(b, net, rng);
    const ChannelEstimate e = mmse_estimate(s[0], net, 0, 0, PilotKind::Orthogonal);
    const CVector err = b.at(net, 0, 0, 0) - e.w_hat;
    cross += e.w_hat.dot(err);
    ew += e.w_hat.squaredNorm();
    ee += err.squaredNorm();
    cov += e.w_hat * e.w_hat.adjoint();
  }
  EXPECT_LT(std::abs(cross) / std::sqrt(ew * ee), 0.02);
  cov /= n;
  const ChannelEstimate ref = mmse_estimate(CVector::Zero(4), net, 0, 0, PilotKind::Orthogonal);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(cov(i, i).real() / ref.phi(i, i).real(), 1.0, 0.05);
  EXPECT_NEAR(ee / n / ref.err_cov.trace().real(), 1.0, 0.05);
}

TEST(MmseEstimate, NonOrthogonalErrorIsLarger) {
  const NetworkScenario net = build_network(small_config(3, 4, 32, 4), 10);
  for (int l = 0; l < 3; ++l)
    for (int k = 0; k < 4; ++k) {
      const auto& own = net.profile(l, l, k);
      const ChannelEstimate o = mmse_estimate(CVector::Zero(own.r), net, l, k, PilotKind::Orthogonal);
      const ChannelEstimate n = mmse_estimate(CVector::Zero(own.r), net, l, k, PilotKind::NonOrthogonal);
      for (int i = 0; i < own.r; ++i) EXPECT_GE(n.err_cov(i, i).real(), o.err_cov(i, i).real() - 1e-12);
    }
}

TEST(FulldimEstimate, NoiselessSingleCellRecoversChannel) {
  ScenarioConfig c = small_config(1, 1, 32, 4);
  c.noiseless_pilot = true;
  c.model = CorrelationModel::PartialUnitary;
  const NetworkScenario net = build_network(c, 11);
  Rng rng(11);
  const ChannelBlock b = realize_block(net, rng);
  const CVector s_bar = observe_full(b, net, 0, 0, rng);
  const ChannelEstimate e = fulldim_mmse_estimate(s_bar, net, 0, 0);
  EXPECT_LT((e.w_hat - b.w[0]).norm() / b.w[0].norm(), 1e-6);
}

TEST(FulldimEstimate, CapacityCap) {
  const NetworkScenario net = build_network(small_config(1, 1, 64, 4), 12);
  EXPECT_THROW(fulldim_mmse_estimate(CVector::Zero(64), net, 0, 0, 32), CapacityError);
  EXPECT_THROW(fulldim_mmse_estimate(CVector::Zero(10), net, 0, 0), std::invalid_argument);
}

TEST(FulldimEstimate, NeverWorseThanLowDim) {
  // The full-dimensional estimator uses all of s_bar, so its MSE is not larger.
  ScenarioConfig c = small_config(2, 1, 64, 8);
  c.model = CorrelationModel::PartialUnitary;
  const NetworkScenario net = build_network(c, 13);
  const ChannelEstimate full = fulldim_mmse_estimate(CVector::Zero(64), net, 0, 0);
  const ChannelEstimate low = mmse_estimate(CVector::Zero(8), net, 0, 0, PilotKind::Orthogonal);
  EXPECT_LE(full.err_cov.trace().real(), low.err_cov.trace().real() + 1e-9);
}

#include <gtest/gtest.h>

#include <cmath>

#include "mimo_lab/beamform.hpp"
#include "mimo_lab/engine.hpp"
#include "mimo_lab/errors.hpp"

using namespace mimo_lab;

namespace {

double cosine(const CVector& a, const CVector& b) { return std::abs(a.dot(b)) / (a.norm() * b.norm()); }

ScenarioConfig fig2_config(double snr_db) {
  ScenarioConfig c;
  c.L = 4;
  c.K = 5;
  c.M = 100;
  c.r_own = 8;
  c.T_c = 500;
  c.snr = std::pow(10.0, snr_db / 10.0);
  return c;
}

double dl_rate(const NetworkScenario& net, Processing proc, int d, int trials = 300) {
  EvaluationOptions opt;
  opt.uplink = false;
  opt.downlink = true;
  opt.trials = trials;
  opt.seed = 2;
  opt.processing.processing = proc;
  opt.processing.dims_used = d;
  return evaluate(net, opt).get(BoundId::NonCoherent, Direction::DL).sum_total;
}

}  // namespace

TEST(MatchedFilter, IsLinearInEstimate) {
  CVector e1 = CVector::Zero(4);
  e1(0) = 1.0;
  EXPECT_EQ(matched_filter(e1), e1);
  Rng rng(1);
  const CVector w = rng.complex_normal(4);
  const cplx c(2.0, -0.5);
  EXPECT_LT((matched_filter(c * w) - c * matched_filter(w)).norm(), 1e-14);
}

TEST(MmseCombiner, MatchesDirectSolve) {
  Rng rng(2);
  const CMatrix E = rng.complex_normal(6, 3);
  const CMatrix G = rng.complex_normal(6, 6);
  const CMatrix Z = G * G.adjoint();
  const CVector v = mmse_combiner(E.col(1), E, Z, 4.0);
  const CMatrix A = E * E.adjoint() + Z + 0.25 * CMatrix::Identity(6, 6);
  EXPECT_LT((A * v - E.col(1)).norm(), 1e-10);
}

TEST(MmseCombiner, SingleUserHighPowerIsMatchedFilter) {
  Rng rng(3);
  const CVector w = rng.complex_normal(5);
  const CVector v = mmse_combiner(w, w, CMatrix::Zero(5, 5), 1e6);
  EXPECT_GT(cosine(v, w), 1.0 - 1e-9);
}

TEST(MmseCombiner, OrthogonalEstimatesDecouple) {
  CMatrix E = CMatrix::Zero(4, 2);
  E(0, 0) = cplx(1.0, 1.0);
  E(2, 1) = 2.0;
  const CVector v1 = mmse_combiner(E.col(0), E, CMatrix::Zero(4, 4), 10.0);
  EXPECT_LT(std::abs(v1.dot(E.col(1))), 1e-9);
}

TEST(MmseCombiner, RejectsBadInput) {
  EXPECT_THROW(mmse_combiner(CVector::Zero(3), CMatrix::Zero(3, 1), CMatrix::Zero(2, 2), 1.0),
               std::invalid_argument);
  EXPECT_THROW(mmse_combiner(CVector::Zero(2), CMatrix::Zero(2, 1), CMatrix::Zero(2, 2), 0.0),
               std::invalid_argument);
}

TEST(Precoder, PowerConstraintIsExact) {
  Rng rng(4);
  const CMatrix E = rng.complex_normal(6, 3);
  const Precoder p = mmse_precoder(E.col(0), E, CMatrix::Zero(6, 6), 2.5);
  EXPECT_NEAR(p.g.squaredNorm(), 2.5, 1e-12);
  EXPECT_DOUBLE_EQ(p.power, 2.5);
  // A unitary spread keeps the transmitted power.
  const CMatrix U = sample_partial_unitary(20, 6, rng);
  EXPECT_NEAR((U * p.g).squaredNorm(), 2.5, 1e-12);
  EXPECT_THROW(normalize_precoder(CVector::Zero(3), 1.0), NumericalError);
}

TEST(Precoder, SingleUserHighPowerIsTransmitMatchedFilter) {
  Rng rng(5);
  const CVector w = rng.complex_normal(5);
  EXPECT_GT(cosine(mmse_precoder(w, w, CMatrix::Zero(5, 5), 1e6).g, w), 1.0 - 1e-9);
}

TEST(RestrictSupport, KeepsDistinctBasisColumns) {
  const Subspace b = Subspace::selection(32, {3, 7, 11, 19, 23, 29});
  Rng rng(6);
  const Subspace s = restrict_support(b, 4, rng);
  EXPECT_EQ(s.rank(), 4);
  for (int i : s.indices()) EXPECT_NE(std::find(b.indices().begin(), b.indices().end(), i), b.indices().end());
  EXPECT_THROW(restrict_support(b, 7, rng), std::invalid_argument);
  EXPECT_THROW(restrict_support(b, 0, rng), std::invalid_argument);
}

TEST(DesignMatrix, SumsInterCellAndOwnCellErrors) {
  ScenarioConfig c;
  c.L = 2;
  c.K = 2;
  c.M = 16;
  c.r_own = 4;
  c.T_c = 10;
  const NetworkScenario net = build_network(c, 7);
  const std::vector<CMatrix> zero(2, CMatrix::Zero(4, 4));
  const CMatrix z0 = default_design_matrix(net, 0, 0, zero);
  CMatrix expect = CMatrix::Zero(4, 4);
  for (int kp = 0; kp < 2; ++kp) expect += projected_covariance(net.profile(0, 0, 0).basis, net.profile(0, 1, kp));
  EXPECT_LT((z0 - expect).norm(), 1e-12);
  const std::vector<CMatrix> eye(2, CMatrix::Identity(4, 4));
  const CMatrix z1 = default_design_matrix(net, 0, 0, eye);
  EXPECT_GT((z1 - z0).trace().real(), 4.0 - 1e-9);  // own error alone contributes tr I = 4
  EXPECT_THROW(default_design_matrix(net, 0, 0, {}), std::invalid_argument);
}

TEST(BeamformProperties, MmseBeatsMatchedFilter) {
  ScenarioConfig c;
  c.L = 3;
  c.K = 6;
  c.M = 64;
  c.r_own = 8;
  c.T_c = 100;
  c.snr = 100.0;
  const NetworkScenario net = build_network(c, 8);
  EvaluationOptions opt;
  opt.trials = 200;
  opt.seed = 8;
  const Evaluation mmse = evaluate(net, opt);
  opt.processing.beamformer = Beamformer::MatchedFilter;
  const Evaluation mf = evaluate(net, opt);
  for (Eigen::Index i = 0; i < mmse.mean_coherent_sinr.size(); ++i)
    EXPECT_GE(mmse.mean_coherent_sinr[i], mf.mean_coherent_sinr[i]);
}

TEST(BeamformProperties, LowDimCloseToFullDim) {
  const NetworkScenario net = build_network(fig2_config(10.0), 9);
  const double full = dl_rate(net, Processing::FullDim, 0);
  const double low = dl_rate(net, Processing::LowDim, 0);
  EXPECT_GE(full, low * 0.98);
  EXPECT_LT(std::abs(low / full - 1.0), 0.15);
}

TEST(BeamformProperties, FewerSpreadingDimensionsLoseRate) {
  const NetworkScenario net = build_network(fig2_config(20.0), 10);
  EXPECT_LT(dl_rate(net, Processing::LowDim, 4), dl_rate(net, Processing::LowDim, 8));
}

TEST(BeamformProperties, SingleUserNoiselessFullEqualsLow) {
  ScenarioConfig c;
  c.M = 32;
  c.r_own = 4;
  c.T_c = 100;
  c.snr = 10.0;
  c.noiseless_pilot = true;
  const NetworkScenario net = build_network(c, 11);
  const double full = dl_rate(net, Processing::FullDim, 0, 400);
  const double low = dl_rate(net, Processing::LowDim, 0, 400);
  EXPECT_NEAR(full, low, 1e-6 * low);
}

#include "mimo_lab/beamform.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mimo_lab/errors.hpp"
#include "mimo_lab/linalg.hpp"
#include "mimo_lab/training.hpp"

namespace mimo_lab {

CVector matched_filter(const CVector& w_hat) { return w_hat; }

CVector mmse_combiner(const CVector& w_hat, const CMatrix& cell_estimates, const CMatrix& Z, double power) {
  const auto r = w_hat.size();
  if (Z.rows() != r || Z.cols() != r || (cell_estimates.size() > 0 && cell_estimates.rows() != r))
    throw std::invalid_argument("mmse_combiner: dimension mismatch");
  if (!(power > 0.0)) throw std::invalid_argument("mmse_combiner: power must be positive");
  CMatrix c = Z;
  if (cell_estimates.cols() > 0) c.noalias() += cell_estimates * cell_estimates.adjoint();
  c.diagonal().array() += 1.0 / power;
  return factor_hermitian_fast(c).solve(w_hat);
}

Precoder normalize_precoder(const CVector& g, double power) {
  const double n = g.norm();
  if (!(n > 0.0)) throw NumericalError("normalize_precoder: zero precoder");
  return {g * (std::sqrt(power) / n), power};
}

Precoder mmse_precoder(const CVector& w_hat, const CMatrix& cell_estimates, const CMatrix& Z, double power) {
  return normalize_precoder(mmse_combiner(w_hat, cell_estimates, Z, power), power);
}

Subspace restrict_support(const Subspace& basis, int d, Rng& rng) {
  if (d < 1 || d > basis.rank())
    throw std::invalid_argument("restrict_support: d=" + std::to_string(d) + " outside [1, r]");
  auto cols = rng.sample_without_replacement(basis.rank(), d);
  return basis.columns(cols);
}

CMatrix default_design_matrix(const NetworkScenario& net, int l, int k, const std::vector<CMatrix>& err_cov) {
  const auto& own = net.profile(l, l, k);
  CMatrix z = CMatrix::Zero(own.r, own.r);
  for (int lp = 0; lp < net.L(); ++lp) {
    if (lp == l) continue;
    for (int kp = 0; kp < net.K(); ++kp) z += projected_covariance(own.basis, net.profile(l, lp, kp));
  }
  if (static_cast<int>(err_cov.size()) != net.K())
    throw std::invalid_argument("default_design_matrix: one error covariance per own-cell user expected");
  for (int j = 0; j < net.K(); ++j) {
    const CMatrix g = own.basis.cross(net.profile(l, l, j).basis);
    z += g * err_cov[static_cast<std::size_t>(j)] * g.adjoint();
  }
  return hermitian_part(z);
}

std::vector<CVector> fulldim_mmse_baseline(const ChannelBlock& block, const NetworkScenario& net, int l, Rng& rng,
                                           int max_dimension) {
  const int M = net.M();
  if (M > max_dimension)
    throw CapacityError("full-dimensional baseline needs M <= " + std::to_string(max_dimension));
  const int K = net.K();
  CMatrix z = CMatrix::Zero(M, M);
  for (int lp = 0; lp < net.L(); ++lp) {
    if (lp == l) continue;
    for (int kp = 0; kp < K; ++kp) {
      const auto& p = net.profile(l, lp, kp);
      p.basis.add_outer(p.lambda.cast<cplx>().asDiagonal(), z);
    }
  }
  CMatrix estimates(M, K);
  for (int k = 0; k < K; ++k) {
    const CVector s_bar = observe_full(block, net, l, k, rng);
    CMatrix r_own = CMatrix::Zero(M, M);
    CMatrix sigma = CMatrix::Zero(M, M);
    for (int lp = 0; lp < net.L(); ++lp) {
      const auto& p = net.profile(l, lp, k);
      p.basis.add_outer(p.lambda.cast<cplx>().asDiagonal(), lp == l ? r_own : sigma);
    }
    sigma += r_own;
    sigma.diagonal().array() += net.inv_rho();
    const HermitianFactor fac = factor_hermitian(sigma);
    const CMatrix gain = r_own * fac.inverse();
    estimates.col(k) = gain * s_bar;
    z += hermitian_part(r_own - gain * r_own);
  }
  std::vector<CVector> out;
  out.reserve(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) out.push_back(mmse_combiner(estimates.col(k), estimates, z, net.P_ul));
  return out;
}

}  // namespace mimo_lab

#include "mimo_lab/training.hpp"

#include <cmath>
#include <string>

#include "mimo_lab/errors.hpp"
#include "mimo_lab/linalg.hpp"

namespace mimo_lab {

namespace {

void check_budget(const NetworkScenario& net) {
  if (net.K() > net.config.T_c)
    throw PilotBudgetError("orthogonal pilots need K <= T_c (K=" + std::to_string(net.K()) +
                           ", T_c=" + std::to_string(net.config.T_c) + ")");
}

CMatrix diag_matrix(const RVector& d) { return d.cast<cplx>().asDiagonal(); }

}  // namespace

PilotScheme pilot_scheme(const NetworkScenario& net) {
  PilotScheme p;
  p.kind = net.config.pilot;
  p.boost = net.config.pilot_boost;
  p.rho_p = net.rho_p();
  return p;
}

MmseFilter make_mmse_filter(const CMatrix& prior, const CMatrix& contamination, double inv_rho) {
  MmseFilter f;
  const auto n = prior.rows();
  f.prior = prior;
  CMatrix sigma = prior + contamination;
  sigma.diagonal().array() += inv_rho;
  const HermitianFactor fac = factor_hermitian(sigma);
  f.jittered = fac.jittered;
  f.xi = hermitian_part(fac.inverse());
  f.gain = prior * f.xi;
  f.phi = hermitian_part(f.gain * prior);
  f.err_cov = hermitian_part(prior - f.phi);
  (void)n;
  return f;
}

CMatrix projected_covariance(const Subspace& rx, const CovarianceProfile& src) {
  const CMatrix g = rx.cross(src.basis);
  return hermitian_part(g * src.lambda.cast<cplx>().asDiagonal() * g.adjoint());
}

CMatrix contamination_covariance(const NetworkScenario& net, int l, int k, PilotKind kind) {
  const auto& own = net.profile(l, l, k);
  CMatrix s = CMatrix::Zero(own.r, own.r);
  for (int lp = 0; lp < net.L(); ++lp) {
    for (int kp = 0; kp < net.K(); ++kp) {
      if (lp == l && kp == k) continue;
      if (kind == PilotKind::Orthogonal && kp != k) continue;
      s += projected_covariance(own.basis, net.profile(l, lp, kp));
    }
  }
  return s;
}

std::vector<CVector> observe_orthogonal(const ChannelBlock& block, const NetworkScenario& net, Rng& rng) {
  check_budget(net);
  const double noise = std::sqrt(net.inv_rho());
  std::vector<CVector> out(static_cast<std::size_t>(net.users()));
  for (int l = 0; l < net.L(); ++l) {
    for (int k = 0; k < net.K(); ++k) {
      const auto& own = net.profile(l, l, k);
      CVector s = block.at(net, l, l, k);
      for (int lp = 0; lp < net.L(); ++lp) {
        if (lp == l) continue;
        s += cross_channel(own, net.profile(l, lp, k), block.at(net, l, lp, k));
      }
      s += noise * rng.complex_normal(own.r);
      out[static_cast<std::size_t>(l * net.K() + k)] = std::move(s);
    }
  }
  return out;
}

std::vector<CVector> observe_nonorthogonal(const ChannelBlock& block, const NetworkScenario& net, Rng& rng) {
  const double noise = std::sqrt(net.inv_rho());
  std::vector<CVector> out(static_cast<std::size_t>(net.users()));
  for (int l = 0; l < net.L(); ++l) {
    // All users share one channel use, so the BS sees a single M-dimensional sum.
    CVector y = noise * rng.complex_normal(net.M());
    for (int lp = 0; lp < net.L(); ++lp)
      for (int kp = 0; kp < net.K(); ++kp) net.profile(l, lp, kp).basis.add_times(block.at(net, l, lp, kp), y);
    for (int k = 0; k < net.K(); ++k)
      out[static_cast<std::size_t>(l * net.K() + k)] = net.profile(l, l, k).basis.adjoint_times(y);
  }
  return out;
}

ChannelEstimate mmse_estimate(const CVector& s, const NetworkScenario& net, int l, int k, PilotKind kind) {
  if (kind == PilotKind::Orthogonal) check_budget(net);
  const auto& own = net.profile(l, l, k);
  if (s.size() != own.r) throw std::invalid_argument("mmse_estimate: observation length differs from rank");
  const MmseFilter f = make_mmse_filter(diag_matrix(own.lambda), contamination_covariance(net, l, k, kind),
                                        net.inv_rho());
  ChannelEstimate e;
  e.w_hat = f.apply(s);
  e.phi = f.phi;
  e.err_cov = f.err_cov;
  e.xi = f.xi;
  e.jittered = f.jittered;
  return e;
}

CVector observe_full(const ChannelBlock& block, const NetworkScenario& net, int l, int k, Rng& rng) {
  check_budget(net);
  CVector y = std::sqrt(net.inv_rho()) * rng.complex_normal(net.M());
  for (int lp = 0; lp < net.L(); ++lp) net.profile(l, lp, k).basis.add_times(block.at(net, l, lp, k), y);
  return y;
}

ChannelEstimate fulldim_mmse_estimate(const CVector& s_bar, const NetworkScenario& net, int l, int k,
                                      int max_dimension) {
  const int M = net.M();
  if (M > max_dimension)
    throw CapacityError("full-dimensional estimate needs M <= " + std::to_string(max_dimension) +
                        " (M=" + std::to_string(M) + ")");
  if (s_bar.size() != M) throw std::invalid_argument("fulldim_mmse_estimate: observation must have length M");
  const auto& own = net.profile(l, l, k);
  CMatrix sigma = CMatrix::Zero(M, M);
  for (int lp = 0; lp < net.L(); ++lp) {
    const auto& p = net.profile(l, lp, k);
    p.basis.add_outer(p.lambda.cast<cplx>().asDiagonal(), sigma);
  }
  sigma.diagonal().array() += net.inv_rho();
  const HermitianFactor fac = factor_hermitian(sigma);
  const CMatrix lam = diag_matrix(own.lambda);
  const CMatrix u = own.basis.matrix();
  const CMatrix solved = fac.solve(u);  // Sigma^{-1} U
  ChannelEstimate e;
  e.w_hat = lam * (solved.adjoint() * s_bar);
  e.xi = hermitian_part(u.adjoint() * solved);
  e.phi = hermitian_part(lam * e.xi * lam);
  e.err_cov = hermitian_part(lam - e.phi);
  e.jittered = fac.jittered;
  return e;
}

}  // namespace mimo_lab

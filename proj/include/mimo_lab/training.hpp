#pragma once

#include <vector>

#include "mimo_lab/channel.hpp"
#include "mimo_lab/covmodel.hpp"

namespace mimo_lab {

struct PilotScheme {
  PilotKind kind = PilotKind::Orthogonal;
  double boost = 2.0;
  double rho_p = 0.0;

  // Channel uses spent on pilots per block.
  int channel_uses(int K) const { return kind == PilotKind::Orthogonal ? K : 1; }
};

PilotScheme pilot_scheme(const NetworkScenario& net);

// Linear MMSE estimator for s = w + c + n with w ~ CN(0, prior), c ~ CN(0, contamination)
// and n ~ CN(0, inv_rho I).
struct MmseFilter {
  CMatrix prior;
  CMatrix xi;       // (prior + contamination + inv_rho I)^{-1}
  CMatrix gain;     // prior * xi
  CMatrix phi;      // prior * xi * prior, covariance of the estimate
  CMatrix err_cov;  // prior - phi
  bool jittered = false;

  CVector apply(const CVector& s) const { return gain * s; }
};

MmseFilter make_mmse_filter(const CMatrix& prior, const CMatrix& contamination, double inv_rho);

struct ChannelEstimate {
  CVector w_hat;
  CMatrix phi;
  CMatrix err_cov;
  CMatrix xi;
  bool jittered = false;
};

// B^H R_src B for an arbitrary receive basis B.
CMatrix projected_covariance(const Subspace& rx, const CovarianceProfile& src);

// Sum of projected covariances of the links contaminating the estimate of user k in cell l.
CMatrix contamination_covariance(const NetworkScenario& net, int l, int k, PilotKind kind);

// Despread pilot observations s_{lk}, indexed l * K + k.
std::vector<CVector> observe_orthogonal(const ChannelBlock& block, const NetworkScenario& net, Rng& rng);
std::vector<CVector> observe_nonorthogonal(const ChannelBlock& block, const NetworkScenario& net, Rng& rng);

ChannelEstimate mmse_estimate(const CVector& s, const NetworkScenario& net, int l, int k, PilotKind kind);

// Orthogonal-pilot observation before despreading, in working coordinates (length M).
CVector observe_full(const ChannelBlock& block, const NetworkScenario& net, int l, int k, Rng& rng);

// M-dimensional MMSE filter applied to s_bar and expressed in the own eigenbasis.
ChannelEstimate fulldim_mmse_estimate(const CVector& s_bar, const NetworkScenario& net, int l, int k,
                                      int max_dimension = 1024);

}  // namespace mimo_lab

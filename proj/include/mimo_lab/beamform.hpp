#pragma once

#include <vector>

#include "mimo_lab/channel.hpp"
#include "mimo_lab/covmodel.hpp"

namespace mimo_lab {

enum class Beamformer { MMSE, MatchedFilter };

CVector matched_filter(const CVector& w_hat);

// (sum_j c_j c_j^H + Z + I / power)^{-1} w_hat, where the columns c_j of `cell_estimates`
// are the cell's estimates projected onto the serving basis. Including the served
// user's own estimate among the columns only rescales the result.
CVector mmse_combiner(const CVector& w_hat, const CMatrix& cell_estimates, const CMatrix& Z, double power);

struct Precoder {
  CVector g;
  double power = 0.0;  // ||U g||^2 with unit-power symbols
};

// Same system with the downlink power, scaled so that ||g||^2 = power.
Precoder mmse_precoder(const CVector& w_hat, const CMatrix& cell_estimates, const CMatrix& Z, double power);
Precoder normalize_precoder(const CVector& g, double power);

// Keeps d of the basis columns, chosen uniformly at random.
Subspace restrict_support(const Subspace& basis, int d, Rng& rng);

// Z_{lk}: inter-cell covariances plus own-cell error covariances, all projected onto
// the basis of user (l, k). `err_cov[j]` is the error covariance of user j of cell l
// in its own basis. The downlink design matrix uses the same construction.
CMatrix default_design_matrix(const NetworkScenario& net, int l, int k, const std::vector<CMatrix>& err_cov);

// Conventional M-dimensional MMSE combiners for the users of cell l (working coordinates),
// built from fresh orthogonal pilots and full-dimensional estimates.
std::vector<CVector> fulldim_mmse_baseline(const ChannelBlock& block, const NetworkScenario& net, int l, Rng& rng,
                                           int max_dimension = 1024);

}  // namespace mimo_lab

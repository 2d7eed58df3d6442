#pragma once

#include <vector>

#include "mimo_lab/covmodel.hpp"
#include "mimo_lab/rng.hpp"

namespace mimo_lab {

// Effective channels w = Lambda^{1/2} h~ of every link for one coherence block,
// indexed like NetworkScenario::profiles.
struct ChannelBlock {
  std::vector<CVector> w;
  long trial_id = 0;

  const CVector& at(const NetworkScenario& net, int l, int lp, int k) const { return w[net.link(l, lp, k)]; }
};

// Draws links in profile order, r complex normals each.
ChannelBlock realize_block(const NetworkScenario& net, Rng& rng, long trial_id = 0);

CVector despread(const CMatrix& U, const CVector& y);
CVector spread(const CMatrix& U, const CVector& g);

// (U_rx^H U_src) w_src.
CVector cross_channel(const CMatrix& U_rx, const CMatrix& U_src, const CVector& w_src);

// Same projection in working coordinates, without forming antenna-domain bases.
CVector cross_channel(const CovarianceProfile& rx, const CovarianceProfile& src, const CVector& w_src);

// Number of DFT columns shared by two partial Fourier profiles.
int angular_overlap(const CovarianceProfile& a, const CovarianceProfile& b);

// Antenna-domain channel h = U w.
CVector full_channel(const CovarianceProfile& profile, const CVector& w);

}  // namespace mimo_lab

#include "mimo_lab/channel.hpp"

#include <algorithm>
#include <stdexcept>

#include "mimo_lab/errors.hpp"

namespace mimo_lab {

ChannelBlock realize_block(const NetworkScenario& net, Rng& rng, long trial_id) {
  ChannelBlock block;
  block.trial_id = trial_id;
  block.w.reserve(net.profiles.size());
  for (const auto& p : net.profiles) {
    CVector h = rng.complex_normal(p.r);
    block.w.push_back(p.lambda.cwiseSqrt().cast<cplx>().cwiseProduct(h));
  }
  return block;
}

CVector despread(const CMatrix& U, const CVector& y) {
  if (U.rows() != y.size()) throw std::invalid_argument("despread: dimension mismatch");
  return U.adjoint() * y;
}

CVector spread(const CMatrix& U, const CVector& g) {
  if (U.cols() != g.size()) throw std::invalid_argument("spread: dimension mismatch");
  return U * g;
}

CVector cross_channel(const CMatrix& U_rx, const CMatrix& U_src, const CVector& w_src) {
  if (U_rx.rows() != U_src.rows()) throw std::invalid_argument("cross_channel: antenna count mismatch");
  if (U_src.cols() != w_src.size()) throw std::invalid_argument("cross_channel: source rank mismatch");
  return U_rx.adjoint() * (U_src * w_src);
}

CVector cross_channel(const CovarianceProfile& rx, const CovarianceProfile& src, const CVector& w_src) {
  if (rx.M != src.M) throw std::invalid_argument("cross_channel: antenna count mismatch");
  return rx.basis.adjoint_times(src.basis.times(w_src));
}

int angular_overlap(const CovarianceProfile& a, const CovarianceProfile& b) {
  if (a.model != CorrelationModel::PartialFourier || b.model != CorrelationModel::PartialFourier)
    throw UnsupportedModelError("angular_overlap is defined for partial Fourier profiles only");
  std::vector<int> x = a.fourier_indices;
  std::vector<int> y = b.fourier_indices;
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  std::vector<int> common;
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(common));
  return static_cast<int>(common.size());
}

CVector full_channel(const CovarianceProfile& profile, const CVector& w) { return spread(profile.U(), w); }

}  // namespace mimo_lab

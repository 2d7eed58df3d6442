#include "mimo_lab/covmodel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/QR>

namespace mimo_lab {

namespace {

void check_rank(int M, int r) {
  if (M < 1) throw std::invalid_argument("antenna count must be positive");
  if (r < 1) throw std::invalid_argument("rank must be positive");
  if (r > M)
    throw std::invalid_argument("rank " + std::to_string(r) + " exceeds dimension " + std::to_string(M));
}

}  // namespace

CMatrix sample_partial_unitary(int M, int r, Rng& rng) {
  check_rank(M, r);
  CMatrix g = rng.complex_normal(M, r);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(M, r);
  const CMatrix& packed = qr.matrixQR();
  for (int j = 0; j < r; ++j) {
    const cplx d = packed(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return q;
}

std::vector<int> sample_fourier_indices(int M, int r, Rng& rng) {
  check_rank(M, r);
  return rng.sample_without_replacement(M, r);
}

CMatrix fourier_columns(int M, const std::vector<int>& indices) {
  CMatrix f(M, static_cast<Eigen::Index>(indices.size()));
  const double norm = 1.0 / std::sqrt(static_cast<double>(M));
  for (std::size_t c = 0; c < indices.size(); ++c) {
    const long k = indices[c];
    for (int j = 0; j < M; ++j) {
      // Reduce j*k mod M first so the phase stays exact for large products.
      const double phase = 2.0 * std::numbers::pi * static_cast<double>((j * k) % M) / M;
      f(j, static_cast<Eigen::Index>(c)) = norm * cplx(std::cos(phase), std::sin(phase));
    }
  }
  return f;
}

CMatrix sample_partial_fourier(int M, int r, Rng& rng) {
  return fourier_columns(M, sample_fourier_indices(M, r, rng));
}

RVector eigen_profile(const EigenProfile& profile, int r) {
  if (r < 1) throw std::invalid_argument("eigen_profile: rank must be positive");
  if (!(profile.total_energy > 0.0) || !std::isfinite(profile.total_energy))
    throw std::invalid_argument("eigen_profile: total energy must be positive");
  RVector lambda(r);
  if (profile.shape == EigenProfile::Shape::Uniform) {
    lambda.setConstant(profile.total_energy / r);
    return lambda;
  }
  if (!(profile.rate > 0.0) || !std::isfinite(profile.rate))
    throw std::invalid_argument("eigen_profile: decay rate must be positive");
  for (int i = 0; i < r; ++i) lambda(i) = std::exp(-profile.rate * i);
  lambda *= profile.total_energy / lambda.sum();
  return lambda;
}

CMatrix CovarianceProfile::U() const {
  if (model == CorrelationModel::PartialFourier) return fourier_columns(M, fourier_indices);
  return basis.matrix();
}

CMatrix CovarianceProfile::R() const {
  const CMatrix u = U();
  return u * lambda.cast<cplx>().asDiagonal() * u.adjoint();
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw std::invalid_argument("invalid scenario field '" + field + "': " + why);
  };
  if (L < 1) fail("L", "must be at least 1");
  if (K < 1) fail("K", "must be at least 1");
  if (M < 1) fail("M", "must be at least 1");
  if (T_c < 1) fail("T_c", "must be at least 1");
  if (r_own < 1 || r_own > M) fail("r", "must lie in [1, M]");
  if (cross_rank() > M) fail("r_cross", "must not exceed M");
  if (!(snr > 0.0) || !std::isfinite(snr)) fail("snr", "must be positive");
  if (!(iota >= 0.0 && iota <= 1.0)) fail("iota", "must lie in [0, 1]");
  if (!(pilot_boost >= 1.0)) fail("pilot_boost", "must be at least 1");
  if (shape == EigenProfile::Shape::ExponentialDecay && !(decay_rate > 0.0))
    fail("decay_rate", "must be positive for exponential profiles");
}

double NetworkScenario::rho_p() const {
  if (config.noiseless_pilot) return std::numeric_limits<double>::infinity();
  return config.pilot_boost * P_ul;
}

double NetworkScenario::inv_rho() const {
  if (config.noiseless_pilot) return 0.0;
  return 1.0 / (config.pilot_boost * P_ul);
}

CVector NetworkScenario::to_antenna(const CVector& working) const {
  if (config.model == CorrelationModel::PartialUnitary) return working;
  std::vector<int> all(config.M);
  for (int i = 0; i < config.M; ++i) all[i] = i;
  return fourier_columns(config.M, all) * working;
}

NetworkScenario build_network(const ScenarioConfig& config, std::uint64_t seed, int draw) {
  config.validate();
  NetworkScenario net;
  net.config = config;
  net.P_ul = config.snr / config.K;
  net.P_dl = config.snr / config.K;
  const int L = config.L;
  const int K = config.K;
  const int M = config.M;
  const double own_scale = config.regime == Regime::Strong ? M : config.r_own;
  net.profiles.resize(static_cast<std::size_t>(L) * L * K);
  for (int l = 0; l < L; ++l) {
    for (int lp = 0; lp < L; ++lp) {
      for (int k = 0; k < K; ++k) {
        const int id = net.link(l, lp, k);
        Rng rng(seed, {stream::kCovariance, static_cast<std::uint64_t>(draw), static_cast<std::uint64_t>(id)});
        CovarianceProfile& p = net.profiles[id];
        p.M = M;
        p.model = config.model;
        p.r = l == lp ? config.r_own : config.cross_rank();
        EigenProfile ep;
        ep.shape = config.shape;
        ep.rate = config.decay_rate;
        ep.total_energy = l == lp ? own_scale : config.iota * own_scale;
        if (ep.total_energy <= 0.0) ep.total_energy = 1e-300;
        if (config.model == CorrelationModel::PartialFourier) {
          p.fourier_indices = sample_fourier_indices(M, p.r, rng);
          p.basis = Subspace::selection(M, p.fourier_indices);
        } else {
          p.basis = Subspace::dense(sample_partial_unitary(M, p.r, rng));
        }
        p.lambda = eigen_profile(ep, p.r);
      }
    }
  }
  return net;
}

}  // namespace mimo_lab

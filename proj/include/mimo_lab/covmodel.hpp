#pragma once

#include <cstdint>
#include <vector>

#include "mimo_lab/rng.hpp"
#include "mimo_lab/subspace.hpp"
#include "mimo_lab/types.hpp"

namespace mimo_lab {

enum class CorrelationModel { PartialUnitary, PartialFourier };
enum class Regime { Strong, VeryStrong };
enum class PilotKind { Orthogonal, NonOrthogonal };

struct EigenProfile {
  enum class Shape { Uniform, ExponentialDecay };
  Shape shape = Shape::Uniform;
  double rate = 0.0;  // decay rate for ExponentialDecay
  double total_energy = 1.0;
};

// M x r with Haar distributed column span.
CMatrix sample_partial_unitary(int M, int r, Rng& rng);

// r distinct DFT indices drawn uniformly without replacement.
std::vector<int> sample_fourier_indices(int M, int r, Rng& rng);

// Columns F_{:,k} for the listed k, with F_{jk} = exp(i 2 pi j k / M) / sqrt(M).
CMatrix fourier_columns(int M, const std::vector<int>& indices);

CMatrix sample_partial_fourier(int M, int r, Rng& rng);

RVector eigen_profile(const EigenProfile& profile, int r);

// Second-order statistics of one user-to-BS link. `basis` is the eigenbasis in the
// network's working coordinates (DFT coefficients for partial Fourier, antenna
// samples for partial unitary).
struct CovarianceProfile {
  int M = 0;
  int r = 0;
  CorrelationModel model = CorrelationModel::PartialFourier;
  Subspace basis;
  RVector lambda;
  std::vector<int> fourier_indices;

  // Antenna-domain eigenbasis U.
  CMatrix U() const;
  // Antenna-domain covariance U diag(lambda) U^H. Materialized on request only.
  CMatrix R() const;
  double trace() const { return lambda.sum(); }
};

struct ScenarioConfig {
  int L = 1;
  int K = 1;
  int M = 1;
  int T_c = 1;
  double snr = 1.0;  // linear sum power per cell
  double iota = 0.2;
  double pilot_boost = 2.0;
  bool noiseless_pilot = false;
  Regime regime = Regime::Strong;
  int r_own = 1;
  int r_cross = 0;  // 0 selects max(1, r_own / 2)
  CorrelationModel model = CorrelationModel::PartialFourier;
  EigenProfile::Shape shape = EigenProfile::Shape::Uniform;
  double decay_rate = 0.0;
  PilotKind pilot = PilotKind::Orthogonal;

  int cross_rank() const { return r_cross > 0 ? r_cross : (r_own / 2 > 1 ? r_own / 2 : 1); }
  void validate() const;
};

struct NetworkScenario {
  ScenarioConfig config;
  double P_ul = 0.0;  // per user
  double P_dl = 0.0;  // per user
  std::vector<CovarianceProfile> profiles;

  int L() const { return config.L; }
  int K() const { return config.K; }
  int M() const { return config.M; }
  int users() const { return config.L * config.K; }

  // Link from user k of cell lp to the BS of cell l.
  int link(int l, int lp, int k) const { return (l * config.L + lp) * config.K + k; }
  const CovarianceProfile& profile(int l, int lp, int k) const { return profiles[link(l, lp, k)]; }

  // Pilot SNR rho_p = boost * P_ul and its inverse (0 for a noiseless pilot).
  double rho_p() const;
  double inv_rho() const;

  // Maps a working-coordinate vector to the antenna domain.
  CVector to_antenna(const CVector& working) const;
};

// Draws every (l, l', k) profile independently. The stream of each link is keyed by
// (seed, draw, link), so profiles do not depend on evaluation order.
NetworkScenario build_network(const ScenarioConfig& config, std::uint64_t seed, int draw = 0);

}  // namespace mimo_lab

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mimo_lab/covmodel.hpp"
#include "mimo_lab/plan.hpp"

namespace mimo_lab {

enum class BoundId {
  CoherentUL,
  NonCoherent,
  AltNonCoherent,
  MaxMinUB,
  LegacyContaminated,
  LegacyGlobalOrth,
  AsymptoticLB_Orth,
  AsymptoticScaling,
  CutsetPerUser,
  DetEquiv,  // log2(1 + deterministic-equivalent SINR) with the scheme's prelog
};

enum class Direction { UL, DL };

std::string to_string(BoundId id);
std::string to_string(Direction d);
std::optional<BoundId> parse_bound_id(std::string_view s);
std::optional<Direction> parse_direction(std::string_view s);

// Rates in bits/s/Hz. Monte Carlo bounds carry the scheme prelog.
struct RateReport {
  BoundId bound_id = BoundId::CoherentUL;
  Direction direction = Direction::UL;
  std::vector<double> per_user;
  double sum_per_cell = 0.0;
  double sum_total = 0.0;
  double stderr = 0.0;  // of sum_total
  long trials = 0;
  double prelog = 1.0;
  // AltNonCoherent may be negative; the floored companion clips each user at zero.
  std::vector<double> per_user_floored;
  double sum_total_floored = 0.0;
};

// Parameters of the closed-form laws. tr_lambda = 0 derives it from the regime
// (M when strong, r when very strong).
struct ScalingParams {
  int M = 1;
  int K = 1;
  int L = 1;
  int T_c = 1;
  int r = 1;
  double snr = 1.0;  // linear
  double iota = 0.2;
  double tr_lambda = 0.0;
  Regime regime = Regime::Strong;
};

enum class LegacyKind { Contaminated, GlobalOrth };

enum class AsymptoticLaw {
  OrthogonalPilot,  // kappa3 users per cell, prelog (1 - kappa3 / T_c)
  NonOrthogonal,    // K users per cell, prelog (1 - 1 / T_c), same law up- and downlink
  CorrelationRegime // strong: min(M, K) log(SNR M / K); very strong: K log(SNR r / K)
};

int kappa1(const ScalingParams& p);  // min(M, K, floor(T_c / 2))
int kappa2(const ScalingParams& p);  // min(M, K L, floor(T_c / 2))
int kappa3(const ScalingParams& p);  // min(K, floor(T_c / 2))

// Network sum rate. Contaminated with L = 1 returns +infinity.
double legacy_scaling(LegacyKind kind, const ScalingParams& p);
double asymptotic_capacity(AsymptoticLaw law, const ScalingParams& p);

// Leading term (1 - 1/T_c) log2(P tr Lambda) of the per-user cut-set bound.
double cutset_leading(double P, double tr_lambda, int T_c);

// Monte Carlo bounds conditioned on the covariance draw of `net`.
RateReport coherent_rate_ul(const NetworkScenario& net, const ProcessingOptions& options, int trials,
                            std::uint64_t seed);
RateReport noncoherent_rate(const NetworkScenario& net, const ProcessingOptions& options, Direction direction,
                            int trials, std::uint64_t seed);

struct AltRates {
  RateReport upper;  // MaxMinUB
  RateReport alt;    // AltNonCoherent
};
AltRates alt_rate(const NetworkScenario& net, const ProcessingOptions& options, Direction direction, int trials,
                  std::uint64_t seed);

RateReport cutset_upper(const NetworkScenario& net, int trials, std::uint64_t seed);

}  // namespace mimo_lab

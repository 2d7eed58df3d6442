#include "mimo_lab/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mimo_lab/engine.hpp"

namespace mimo_lab {

namespace {

constexpr std::array<std::pair<BoundId, const char*>, 10> kBoundNames{{
    {BoundId::CoherentUL, "CoherentUL"},
    {BoundId::NonCoherent, "NonCoherent"},
    {BoundId::AltNonCoherent, "AltNonCoherent"},
    {BoundId::MaxMinUB, "MaxMinUB"},
    {BoundId::LegacyContaminated, "LegacyContaminated"},
    {BoundId::LegacyGlobalOrth, "LegacyGlobalOrth"},
    {BoundId::AsymptoticLB_Orth, "AsymptoticLB_Orth"},
    {BoundId::AsymptoticScaling, "AsymptoticScaling"},
    {BoundId::CutsetPerUser, "CutsetPerUser"},
    {BoundId::DetEquiv, "DetEquiv"},
}};

int half_block(const ScalingParams& p) { return p.T_c / 2; }

double trace_lambda(const ScalingParams& p) {
  if (p.tr_lambda > 0.0) return p.tr_lambda;
  return p.regime == Regime::Strong ? static_cast<double>(p.M) : static_cast<double>(p.r);
}

void check(const ScalingParams& p) {
  if (p.M < 1 || p.K < 1 || p.L < 1 || p.T_c < 1 || p.r < 1)
    throw std::invalid_argument("scaling parameters must be positive");
  if (!(p.snr > 0.0)) throw std::invalid_argument("scaling law needs snr > 0");
}

double prelog(int kappa, int T_c) { return 1.0 - static_cast<double>(kappa) / T_c; }

EvaluationOptions options_for(const ProcessingOptions& processing, int trials, std::uint64_t seed, bool ul, bool dl) {
  EvaluationOptions o;
  o.processing = processing;
  o.trials = trials;
  o.seed = seed;
  o.uplink = ul;
  o.downlink = dl;
  return o;
}

}  // namespace

std::string to_string(BoundId id) {
  for (const auto& [k, name] : kBoundNames)
    if (k == id) return name;
  return "Unknown";
}

std::string to_string(Direction d) { return d == Direction::UL ? "UL" : "DL"; }

std::optional<BoundId> parse_bound_id(std::string_view s) {
  for (const auto& [k, name] : kBoundNames)
    if (s == name) return k;
  return std::nullopt;
}

std::optional<Direction> parse_direction(std::string_view s) {
  if (s == "UL" || s == "ul") return Direction::UL;
  if (s == "DL" || s == "dl") return Direction::DL;
  return std::nullopt;
}

int kappa1(const ScalingParams& p) { return std::min({p.M, p.K, half_block(p)}); }
int kappa2(const ScalingParams& p) { return std::min({p.M, p.K * p.L, half_block(p)}); }
int kappa3(const ScalingParams& p) { return std::min(p.K, half_block(p)); }

double legacy_scaling(LegacyKind kind, const ScalingParams& p) {
  check(p);
  if (kind == LegacyKind::Contaminated) {
    const int k1 = kappa1(p);
    if (p.L == 1) return std::numeric_limits<double>::infinity();
    if (!(p.iota > 0.0)) return std::numeric_limits<double>::infinity();
    return prelog(k1, p.T_c) * k1 * p.L * std::log2(1.0 + 1.0 / (p.iota * (p.L - 1)));
  }
  const int k2 = kappa2(p);
  return prelog(k2, p.T_c) * k2 * std::log2(p.snr * p.M / p.K);
}

double asymptotic_capacity(AsymptoticLaw law, const ScalingParams& p) {
  check(p);
  const double P = p.snr / p.K;
  switch (law) {
    case AsymptoticLaw::OrthogonalPilot: {
      const int k3 = kappa3(p);
      return prelog(k3, p.T_c) * k3 * p.L * std::log2(P * trace_lambda(p));
    }
    case AsymptoticLaw::NonOrthogonal:
      return prelog(1, p.T_c) * p.K * p.L * std::log2(P * trace_lambda(p));
    case AsymptoticLaw::CorrelationRegime:
      if (p.regime == Regime::Strong)
        return prelog(1, p.T_c) * std::min(p.M, p.K) * p.L * std::log2(p.snr * p.M / p.K);
      return prelog(1, p.T_c) * p.K * p.L * std::log2(p.snr * p.r / p.K);
  }
  return 0.0;
}

double cutset_leading(double P, double tr_lambda, int T_c) {
  if (T_c < 1) throw std::invalid_argument("cutset_leading: T_c must be positive");
  return prelog(1, T_c) * std::log2(P * tr_lambda);
}

RateReport coherent_rate_ul(const NetworkScenario& net, const ProcessingOptions& options, int trials,
                            std::uint64_t seed) {
  return evaluate(net, options_for(options, trials, seed, true, false)).report(BoundId::CoherentUL, Direction::UL);
}

RateReport noncoherent_rate(const NetworkScenario& net, const ProcessingOptions& options, Direction direction,
                            int trials, std::uint64_t seed) {
  const bool ul = direction == Direction::UL;
  return evaluate(net, options_for(options, trials, seed, ul, !ul)).report(BoundId::NonCoherent, direction);
}

AltRates alt_rate(const NetworkScenario& net, const ProcessingOptions& options, Direction direction, int trials,
                  std::uint64_t seed) {
  const bool ul = direction == Direction::UL;
  const Evaluation ev = evaluate(net, options_for(options, trials, seed, ul, !ul));
  return {ev.report(BoundId::MaxMinUB, direction), ev.report(BoundId::AltNonCoherent, direction)};
}

RateReport cutset_upper(const NetworkScenario& net, int trials, std::uint64_t seed) {
  ProcessingOptions p;
  p.beamformer = Beamformer::MatchedFilter;
  return evaluate(net, options_for(p, trials, seed, true, false)).report(BoundId::CutsetPerUser, Direction::UL);
}

}  // namespace mimo_lab

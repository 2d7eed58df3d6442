#pragma once

#include <cstdint>
#include <map>
#include <utility>

#include "mimo_lab/bounds.hpp"
#include "mimo_lab/plan.hpp"

namespace mimo_lab {

struct EvaluationOptions {
  ProcessingOptions processing;
  bool uplink = true;
  bool downlink = false;
  bool detequiv = false;
  int trials = 500;
  std::uint64_t seed = 1;
  int draw = 0;
  int jackknife_groups = 20;
  int threads = 0;  // 0 reads MIMO_LAB_THREADS, then the hardware concurrency
};

struct BoundEstimate {
  RVector per_user;  // prelog applied
  double sum_total = 0.0;
  double stderr = 0.0;
};

struct Evaluation {
  int users = 0;
  int cells = 0;
  long trials = 0;
  double prelog = 1.0;
  int kappa = 1;
  bool jittered = false;
  std::map<std::pair<BoundId, Direction>, BoundEstimate> bounds;
  RVector mean_coherent_sinr;  // uplink, per user
  double mean_coherent_sinr_stderr = 0.0;  // of the network average
  RVector detequiv_sinr;       // per user when requested and defined

  bool has(BoundId id, Direction d) const { return bounds.count({id, d}) > 0; }
  const BoundEstimate& get(BoundId id, Direction d) const;
  RateReport report(BoundId id, Direction d) const;
};

int worker_count(int requested = 0);

Evaluation evaluate(const NetworkScenario& net, const EvaluationOptions& options);
Evaluation evaluate(const NetworkScenario& net, const NetworkPlan& plan, const EvaluationOptions& options);

}  // namespace mimo_lab

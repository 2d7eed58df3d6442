#pragma once

#include <cstdint>
#include <vector>

#include "mimo_lab/beamform.hpp"
#include "mimo_lab/covmodel.hpp"
#include "mimo_lab/linalg.hpp"
#include "mimo_lab/training.hpp"

namespace mimo_lab {

enum class Processing { LowDim, FullDim };

struct ProcessingOptions {
  Processing processing = Processing::LowDim;
  int dims_used = 0;  // d-restricted spreading; 0 keeps all r columns
  Beamformer beamformer = Beamformer::MMSE;
};

// Users whose pilots share channel uses at one BS. The BS observes
// o = Q^H (sum_{c in members} h_c + n / sqrt(rho_p)) with Q orthonormal.
struct PilotGroup {
  Subspace obs_basis;
  std::vector<int> members;  // global user index lp * K + kp
  HermitianFactor sigma;     // Q^H (sum R_c + inv_rho I) Q
  // Per member: Lambda_c U_c^H Q Sigma^{-1}, so E[w_c | o] = cond_gain * o.
  std::vector<CMatrix> cond_gain;
};

struct UserPlan {
  int group = 0;
  Subspace basis;       // processing basis B of the user
  MmseFilter filter;    // own estimate from the own despread observation
  CMatrix estimator;    // maps the group observation to w_hat
  CMatrix design;       // Z, shared by combiner and precoder
  // Sum over every link into this BS of B^H Cov(h_c | pilots) B.
  CMatrix cond_cov;
};

struct CellPlan {
  std::vector<PilotGroup> groups;
  std::vector<UserPlan> users;
};

// Everything that depends on the covariance draw and powers but not on fading.
struct NetworkPlan {
  PilotKind pilot = PilotKind::Orthogonal;
  ProcessingOptions options;
  double P_ul = 0.0;
  double P_dl = 0.0;
  double inv_rho = 0.0;
  int kappa = 1;       // pilot channel uses per block
  double prelog = 1.0; // 1 - kappa / T_c
  bool jittered = false;
  std::vector<CellPlan> cells;
};

NetworkPlan build_plan(const NetworkScenario& net, const ProcessingOptions& options, std::uint64_t seed = 0,
                       int draw = 0);

// Prelog factor 1 - kappa / T_c with kappa = K (orthogonal) or 1.
double pilot_prelog(PilotKind kind, int K, int T_c);

}  // namespace mimo_lab

#pragma once

#include <vector>

#include "mimo_lab/covmodel.hpp"
#include "mimo_lab/plan.hpp"
#include "mimo_lab/types.hpp"

namespace mimo_lab {

// Resolvent of B = sum_j x_j x_j^H + A with x_j ~ CN(0, Theta_j / N), evaluated at a
// negative real z. beta_i rescales the trace in the update of e_i.
struct DetEquivProblem {
  std::vector<CMatrix> thetas;
  CMatrix A;  // empty means zero
  CMatrix Q;  // empty means identity
  double z = -1.0;
  std::vector<double> beta;  // empty means all ones
  double beta0 = 1.0;

  int N() const;
  // N x N problem with A = 0 and Q = I.
  static DetEquivProblem make(int N, double z);
};

struct DetEquivSolution {
  RVector e;
  CMatrix T;
  double m = 0.0;  // tr(Q T) / (beta0 N)
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> history;  // residual after each iteration
};

// Picard iteration from e = -1/z until max_i |e_i^new - e_i| / (1 + |e_i^new|) < tol.
// Throws std::domain_error for z >= 0 and DivergenceError when max_iter is reached.
DetEquivSolution solve_fixed_point(const DetEquivProblem& problem, double tol = 1e-10, int max_iter = 10000);

struct PrimedSolution {
  RVector e_prime;
  CMatrix T_prime;  // equivalent of (B - zI)^{-1} Omega (B - zI)^{-1}
  RMatrix J;
  RVector v;
};

// With Omega = I the outputs are dT/dz and de/dz.
PrimedSolution solve_primed(const DetEquivProblem& problem, const DetEquivSolution& base, const CMatrix& omega);

// Statistics of one user as seen through its own basis (dimension r).
struct MmseSinrInputs {
  CMatrix lambda;                     // prior covariance of the own channel
  CMatrix xi;                         // inverse covariance of the pilot observation
  CMatrix phi;                        // covariance of the own estimate
  std::vector<CMatrix> intra_phi;     // estimate covariances of the other served users
  CMatrix Z;                          // design matrix
  std::vector<CMatrix> contaminators; // covariances of links sharing the pilot
  double power = 1.0;
  int M = 1;
};

struct SinrEquivalent {
  double gamma = 0.0;
  double delta = 0.0;  // tr(Phi T) / M
  double mu = 0.0;     // tr(Phi T') / M
  std::vector<double> nu;     // |tr(Xi Lambda T R_c)| / (r M)
  double contamination = 0.0; // sum alpha^2 nu^2 with alpha = r / M
  int iterations = 0;
};

// scale <= 0 selects 1 / r. The result does not depend on the scale.
SinrEquivalent mmse_sinr_equivalent(const MmseSinrInputs& in, double scale = 0.0, double tol = 1e-10,
                                    int max_iter = 10000);

struct MfSinrInputs {
  CMatrix lambda;
  CMatrix xi;
  CMatrix phi;
  CMatrix err_cov;
  std::vector<CMatrix> interferers;    // links not sharing the pilot
  std::vector<CMatrix> contaminators;  // links sharing the pilot
  std::vector<double> contaminator_traces;  // tr Lambda_c of each contaminating link
  double power = 1.0;
  int M = 1;
};

struct MfEquivalent {
  double gamma = 0.0;
  double asymptotic_gamma = 0.0;  // (tr Phi)^2 / (tr Phi / P + sum r^2 psi^2)
  std::vector<double> psi;        // tr Lambda_c tr(Xi Lambda) / (r M)
};

MfEquivalent mf_sinr_equivalent(const MfSinrInputs& in);

// Scenario-level equivalents for user k of cell l. The plan must use low-dimensional
// processing with all r dimensions; the MMSE form needs orthogonal pilots.
SinrEquivalent sinr_mmse_detequiv(const NetworkScenario& net, const NetworkPlan& plan, int l, int k,
                                  double scale = 0.0);
SinrEquivalent sinr_mmse_detequiv(const NetworkScenario& net, int l, int k);
MfEquivalent sinr_mf_detequiv(const NetworkScenario& net, const NetworkPlan& plan, int l, int k);
MfEquivalent sinr_mf_detequiv(const NetworkScenario& net, int l, int k);

}  // namespace mimo_lab

#include "mimo_lab/detequiv.hpp"

#include <Eigen/LU>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mimo_lab/errors.hpp"
#include "mimo_lab/linalg.hpp"
#include "mimo_lab/training.hpp"

namespace mimo_lab {

namespace {

// tr(a b) without forming the product.
cplx trace_product(const CMatrix& a, const CMatrix& b) { return a.cwiseProduct(b.transpose()).sum(); }

double beta_of(const DetEquivProblem& p, std::size_t i) { return p.beta.empty() ? 1.0 : p.beta[i]; }

CMatrix resolvent(const DetEquivProblem& p, const RVector& e) {
  const int N = p.N();
  CMatrix S = p.A.size() > 0 ? p.A : CMatrix::Zero(N, N);
  S.diagonal().array() -= p.z;
  for (std::size_t j = 0; j < p.thetas.size(); ++j) S += p.thetas[j] / (N * (1.0 + e(static_cast<Eigen::Index>(j))));
  return hermitian_part(factor_hermitian(hermitian_part(S)).inverse());
}

void check_problem(const DetEquivProblem& p) {
  if (!(p.z < 0.0)) throw std::domain_error("det-equiv: z must be negative (got " + std::to_string(p.z) + ")");
  const int N = p.N();
  if (N < 1) throw std::invalid_argument("det-equiv: empty problem");
  for (const auto& t : p.thetas)
    if (t.rows() != N || t.cols() != N) throw std::invalid_argument("det-equiv: Theta dimension mismatch");
  if (p.A.size() > 0 && (p.A.rows() != N || p.A.cols() != N))
    throw std::invalid_argument("det-equiv: A dimension mismatch");
  if (p.Q.size() > 0 && (p.Q.rows() != N || p.Q.cols() != N))
    throw std::invalid_argument("det-equiv: Q dimension mismatch");
  if (!p.beta.empty() && p.beta.size() != p.thetas.size())
    throw std::invalid_argument("det-equiv: beta needs one entry per Theta");
}

}  // namespace

int DetEquivProblem::N() const {
  if (A.size() > 0) return static_cast<int>(A.rows());
  if (Q.size() > 0) return static_cast<int>(Q.rows());
  if (!thetas.empty()) return static_cast<int>(thetas.front().rows());
  return 0;
}

DetEquivProblem DetEquivProblem::make(int N, double z) {
  DetEquivProblem p;
  p.A = CMatrix::Zero(N, N);
  p.Q = CMatrix::Identity(N, N);
  p.z = z;
  return p;
}

DetEquivSolution solve_fixed_point(const DetEquivProblem& problem, double tol, int max_iter) {
  check_problem(problem);
  const int N = problem.N();
  const auto n = static_cast<Eigen::Index>(problem.thetas.size());
  DetEquivSolution sol;
  sol.e = RVector::Constant(n, -1.0 / problem.z);
  sol.T = resolvent(problem, sol.e);
  if (n > 0) {
    bool converged = false;
    for (int it = 1; it <= max_iter; ++it) {
      RVector next(n);
      for (Eigen::Index i = 0; i < n; ++i)
        next(i) = trace_product(problem.thetas[static_cast<std::size_t>(i)], sol.T).real() /
                  (beta_of(problem, static_cast<std::size_t>(i)) * N);
      double res = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) res = std::max(res, std::abs(next(i) - sol.e(i)) / (1.0 + std::abs(next(i))));
      sol.e = next;
      sol.T = resolvent(problem, sol.e);
      sol.iterations = it;
      sol.residual = res;
      sol.history.push_back(res);
      if (!std::isfinite(res)) break;
      if (res < tol) {
        converged = true;
        break;
      }
    }
    if (!converged) throw DivergenceError("det-equiv fixed point did not converge", sol.iterations, sol.residual);
  }
  const CMatrix Q = problem.Q.size() > 0 ? problem.Q : CMatrix::Identity(N, N);
  sol.m = trace_product(Q, sol.T).real() / (problem.beta0 * N);
  return sol;
}

PrimedSolution solve_primed(const DetEquivProblem& problem, const DetEquivSolution& base, const CMatrix& omega) {
  check_problem(problem);
  const int N = problem.N();
  if (omega.rows() != N || omega.cols() != N) throw std::invalid_argument("det-equiv: Omega dimension mismatch");
  const auto n = static_cast<Eigen::Index>(problem.thetas.size());
  const CMatrix& T = base.T;
  std::vector<CMatrix> P(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) P[static_cast<std::size_t>(j)] = problem.thetas[static_cast<std::size_t>(j)] * T;
  const CMatrix omega_T = omega * T;

  PrimedSolution out;
  out.J = RMatrix::Zero(n, n);
  out.v = RVector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double bi = beta_of(problem, static_cast<std::size_t>(i));
    for (Eigen::Index k = 0; k < n; ++k) {
      const double ek = base.e(k);
      out.J(i, k) = trace_product(P[static_cast<std::size_t>(i)], P[static_cast<std::size_t>(k)]).real() /
                    (bi * N * N * (1.0 + ek) * (1.0 + ek));
    }
    out.v(i) = trace_product(P[static_cast<std::size_t>(i)], omega_T).real() / (bi * N);
  }
  out.e_prime = RVector::Zero(n);
  if (n > 0) {
    const RMatrix system = RMatrix::Identity(n, n) - out.J;
    Eigen::PartialPivLU<RMatrix> lu(system);
    if (!(lu.rcond() > 1e-12)) throw NumericalError("det-equiv: I - J is singular (near a critical point)");
    out.e_prime = lu.solve(out.v);
    if (!out.e_prime.allFinite()) throw NumericalError("det-equiv: non-finite e'");
  }
  CMatrix middle = omega;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double ek = base.e(k);
    middle += problem.thetas[static_cast<std::size_t>(k)] * (out.e_prime(k) / (N * (1.0 + ek) * (1.0 + ek)));
  }
  out.T_prime = hermitian_part(T * middle * T);
  return out;
}

SinrEquivalent mmse_sinr_equivalent(const MmseSinrInputs& in, double scale, double tol, int max_iter) {
  const int r = static_cast<int>(in.phi.rows());
  if (r < 1) throw std::invalid_argument("mmse_sinr_equivalent: empty user");
  if (!(in.power > 0.0)) throw std::invalid_argument("mmse_sinr_equivalent: power must be positive");
  const double s = scale > 0.0 ? scale : 1.0 / r;

  DetEquivProblem p;
  p.A = s * in.Z;
  p.Q = in.phi;
  p.z = -s / in.power;
  for (const auto& phi_j : in.intra_phi) p.thetas.push_back(static_cast<double>(r) * s * phi_j);
  const DetEquivSolution base = solve_fixed_point(p, tol, max_iter);
  const CMatrix T = s * base.T;

  CMatrix omega = CMatrix::Zero(r, r);
  for (const auto& Rc : in.contaminators) omega += Rc * in.xi * Rc;
  omega = hermitian_part(omega);
  const PrimedSolution primed = solve_primed(p, base, omega);
  const CMatrix T_prime = s * s * primed.T_prime;

  const double delta = trace_product(in.phi, T).real();
  const double mu = trace_product(in.phi, T_prime).real();
  const CMatrix xlt = in.xi * in.lambda * T;
  double coherent = 0.0;
  SinrEquivalent out;
  const double M = in.M;
  const double alpha = r / M;
  for (const auto& Rc : in.contaminators) {
    const double nu = std::abs(trace_product(xlt, Rc));
    coherent += nu * nu;
    const double nu_norm = nu / (r * M);
    out.nu.push_back(nu_norm);
    out.contamination += alpha * alpha * nu_norm * nu_norm;
  }
  const double den = delta - mu + coherent;
  if (!(den > 0.0)) throw NumericalError("mmse_sinr_equivalent: non-positive denominator");
  out.gamma = delta * delta / den;
  out.delta = delta / M;
  out.mu = mu / M;
  out.iterations = base.iterations;
  return out;
}

MfEquivalent mf_sinr_equivalent(const MfSinrInputs& in) {
  const int r = static_cast<int>(in.phi.rows());
  if (r < 1) throw std::invalid_argument("mf_sinr_equivalent: empty user");
  if (!(in.power > 0.0)) throw std::invalid_argument("mf_sinr_equivalent: power must be positive");
  if (!in.contaminator_traces.empty() && in.contaminator_traces.size() != in.contaminators.size())
    throw std::invalid_argument("mf_sinr_equivalent: one trace per contaminating link");
  const double tr_phi = in.phi.trace().real();
  double den = trace_product(in.phi, in.err_cov).real() + tr_phi / in.power;
  for (const auto& Rc : in.interferers) den += trace_product(in.phi, Rc).real();
  const CMatrix lx = in.lambda * in.xi;
  const double tr_xl = (in.xi * in.lambda).trace().real();
  MfEquivalent out;
  double asym_den = tr_phi / in.power;
  for (std::size_t c = 0; c < in.contaminators.size(); ++c) {
    const CMatrix& Rc = in.contaminators[c];
    den += trace_product(in.phi, Rc).real() - trace_product(in.phi, CMatrix(Rc * in.xi * Rc)).real() +
           std::norm(trace_product(lx, Rc));
    const double tr_c = in.contaminator_traces.empty() ? Rc.trace().real() : in.contaminator_traces[c];
    const double psi = tr_c * tr_xl / (static_cast<double>(r) * in.M);
    out.psi.push_back(psi);
    asym_den += static_cast<double>(r) * r * psi * psi;
  }
  if (!(den > 0.0)) throw NumericalError("mf_sinr_equivalent: non-positive denominator");
  out.gamma = tr_phi * tr_phi / den;
  out.asymptotic_gamma = tr_phi * tr_phi / asym_den;
  return out;
}

namespace {

void check_full_lowdim(const NetworkPlan& plan) {
  if (plan.options.processing != Processing::LowDim || plan.options.dims_used != 0)
    throw std::invalid_argument("det-equiv needs low-dimensional processing over all r dimensions");
}

ProcessingOptions lowdim(Beamformer b) {
  ProcessingOptions o;
  o.beamformer = b;
  return o;
}

}  // namespace

SinrEquivalent sinr_mmse_detequiv(const NetworkScenario& net, const NetworkPlan& plan, int l, int k, double scale) {
  check_full_lowdim(plan);
  if (plan.pilot != PilotKind::Orthogonal)
    throw std::invalid_argument("MMSE det-equiv is defined for orthogonal pilots");
  const CellPlan& cell = plan.cells.at(static_cast<std::size_t>(l));
  const UserPlan& up = cell.users.at(static_cast<std::size_t>(k));
  MmseSinrInputs in;
  in.lambda = up.filter.prior;
  in.xi = up.filter.xi;
  in.phi = up.filter.phi;
  in.Z = up.design;
  in.power = plan.P_ul;
  in.M = net.M();
  for (int j = 0; j < net.K(); ++j) {
    if (j == k) continue;
    const UserPlan& uj = cell.users[static_cast<std::size_t>(j)];
    const CMatrix G = up.basis.cross(uj.basis);
    in.intra_phi.push_back(hermitian_part(G * uj.filter.phi * G.adjoint()));
  }
  for (int lp = 0; lp < net.L(); ++lp) {
    if (lp == l) continue;
    in.contaminators.push_back(projected_covariance(up.basis, net.profile(l, lp, k)));
  }
  return mmse_sinr_equivalent(in, scale);
}

SinrEquivalent sinr_mmse_detequiv(const NetworkScenario& net, int l, int k) {
  return sinr_mmse_detequiv(net, build_plan(net, lowdim(Beamformer::MMSE)), l, k);
}

MfEquivalent sinr_mf_detequiv(const NetworkScenario& net, const NetworkPlan& plan, int l, int k) {
  check_full_lowdim(plan);
  const UserPlan& up = plan.cells.at(static_cast<std::size_t>(l)).users.at(static_cast<std::size_t>(k));
  const int K = net.K();
  MfSinrInputs in;
  in.lambda = up.filter.prior;
  in.xi = up.filter.xi;
  in.phi = up.filter.phi;
  in.err_cov = up.filter.err_cov;
  in.power = plan.P_ul;
  in.M = net.M();
  for (int c = 0; c < net.users(); ++c) {
    const int lp = c / K;
    const int kp = c % K;
    if (lp == l && kp == k) continue;
    const CovarianceProfile& src = net.profile(l, lp, kp);
    const bool shares = plan.pilot == PilotKind::NonOrthogonal || kp == k;
    if (shares) {
      in.contaminators.push_back(projected_covariance(up.basis, src));
      in.contaminator_traces.push_back(src.trace());
    } else {
      in.interferers.push_back(projected_covariance(up.basis, src));
    }
  }
  return mf_sinr_equivalent(in);
}

MfEquivalent sinr_mf_detequiv(const NetworkScenario& net, int l, int k) {
  return sinr_mf_detequiv(net, build_plan(net, lowdim(Beamformer::MatchedFilter)), l, k);
}

}  // namespace mimo_lab

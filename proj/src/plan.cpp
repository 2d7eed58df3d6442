#include "mimo_lab/plan.hpp"

#include <string>

#include "mimo_lab/errors.hpp"

namespace mimo_lab {

namespace {

CMatrix weighted_gram(const CMatrix& g, const RVector& lambda) {
  return hermitian_part(g * lambda.cast<cplx>().asDiagonal() * g.adjoint());
}

constexpr int kFullDimCap = 1024;

}  // namespace

double pilot_prelog(PilotKind kind, int K, int T_c) {
  const int kappa = kind == PilotKind::Orthogonal ? K : 1;
  return 1.0 - static_cast<double>(kappa) / T_c;
}

NetworkPlan build_plan(const NetworkScenario& net, const ProcessingOptions& options, std::uint64_t seed, int draw) {
  const int L = net.L();
  const int K = net.K();
  const int M = net.M();
  const int U = net.users();
  NetworkPlan plan;
  plan.pilot = net.config.pilot;
  plan.options = options;
  plan.P_ul = net.P_ul;
  plan.P_dl = net.P_dl;
  plan.inv_rho = net.inv_rho();
  if (plan.pilot == PilotKind::Orthogonal && K > net.config.T_c)
    throw PilotBudgetError("orthogonal pilots need K <= T_c (K=" + std::to_string(K) +
                           ", T_c=" + std::to_string(net.config.T_c) + ")");
  plan.kappa = plan.pilot == PilotKind::Orthogonal ? K : 1;
  plan.prelog = pilot_prelog(plan.pilot, K, net.config.T_c);
  if (options.processing == Processing::FullDim && M > kFullDimCap)
    throw CapacityError("full-dimensional processing needs M <= " + std::to_string(kFullDimCap));
  plan.cells.resize(static_cast<std::size_t>(L));

  for (int l = 0; l < L; ++l) {
    CellPlan& cell = plan.cells[static_cast<std::size_t>(l)];
    cell.users.resize(static_cast<std::size_t>(K));
    auto link_of = [&](int c) { return net.link(l, c / K, c % K); };
    auto profile_of = [&](int c) -> const CovarianceProfile& { return net.profiles[link_of(c)]; };

    // Processing bases.
    for (int k = 0; k < K; ++k) {
      const auto& own = net.profile(l, l, k);
      UserPlan& up = cell.users[static_cast<std::size_t>(k)];
      if (options.processing == Processing::FullDim) {
        up.basis = Subspace::identity(M);
      } else if (options.dims_used > 0 && options.dims_used < own.r) {
        Rng rng(seed, {stream::kSubset, static_cast<std::uint64_t>(draw), static_cast<std::uint64_t>(net.link(l, l, k))});
        up.basis = restrict_support(own.basis, options.dims_used, rng);
      } else {
        up.basis = own.basis;
      }
    }

    // Pilot groups.
    if (plan.pilot == PilotKind::Orthogonal) {
      cell.groups.resize(static_cast<std::size_t>(K));
      for (int k = 0; k < K; ++k) {
        PilotGroup& g = cell.groups[static_cast<std::size_t>(k)];
        g.obs_basis = cell.users[static_cast<std::size_t>(k)].basis;
        for (int lp = 0; lp < L; ++lp) g.members.push_back(lp * K + k);
        cell.users[static_cast<std::size_t>(k)].group = k;
      }
    } else {
      cell.groups.resize(1);
      PilotGroup& g = cell.groups[0];
      std::vector<const Subspace*> parts;
      for (const auto& up : cell.users) parts.push_back(&up.basis);
      g.obs_basis = Subspace::span_of(parts);
      for (int c = 0; c < U; ++c) g.members.push_back(c);
      for (auto& up : cell.users) up.group = 0;
    }

    // Observation statistics and conditional-mean gains per group. The conditional
    // covariances of all links are accumulated in ambient coordinates.
    CMatrix cond_ambient = CMatrix::Zero(M, M);
    for (auto& g : cell.groups) {
      const int q = g.obs_basis.rank();
      std::vector<CMatrix> h(g.members.size());
      CMatrix sigma = CMatrix::Zero(q, q);
      for (std::size_t i = 0; i < g.members.size(); ++i) {
        const auto& p = profile_of(g.members[i]);
        h[i] = p.basis.cross(g.obs_basis);  // U_c^H Q
        sigma += h[i].adjoint() * p.lambda.cast<cplx>().asDiagonal() * h[i];
      }
      sigma = hermitian_part(sigma);
      sigma.diagonal().array() += plan.inv_rho;
      g.sigma = factor_hermitian(sigma);
      plan.jittered = plan.jittered || g.sigma.jittered;
      g.cond_gain.resize(g.members.size());
      for (std::size_t i = 0; i < g.members.size(); ++i) {
        const auto& p = profile_of(g.members[i]);
        const CMatrix lam = p.lambda.cast<cplx>().asDiagonal();
        const CMatrix lh = lam * h[i];  // Lambda U^H Q
        g.cond_gain[i] = g.sigma.solve(CMatrix(lh.adjoint())).adjoint();
        const CMatrix e = hermitian_part(lam - g.cond_gain[i] * lh.adjoint());
        p.basis.add_outer(e, cond_ambient);
      }
    }

    // Covariance sums used by the estimators and the design matrices.
    CMatrix inter_ambient = CMatrix::Zero(M, M);
    CMatrix all_ambient;
    for (int c = 0; c < U; ++c) {
      if (c / K == l) continue;
      const auto& p = profile_of(c);
      p.basis.add_outer(p.lambda.cast<cplx>().asDiagonal(), inter_ambient);
    }
    if (plan.pilot == PilotKind::NonOrthogonal) {
      all_ambient = inter_ambient;
      for (int k = 0; k < K; ++k) {
        const auto& p = net.profile(l, l, k);
        p.basis.add_outer(p.lambda.cast<cplx>().asDiagonal(), all_ambient);
      }
    }

    for (int k = 0; k < K; ++k) {
      UserPlan& up = cell.users[static_cast<std::size_t>(k)];
      const auto& own = net.profile(l, l, k);
      const CMatrix prior = weighted_gram(up.basis.cross(own.basis), own.lambda);
      CMatrix contamination;
      if (plan.pilot == PilotKind::Orthogonal) {
        contamination = CMatrix::Zero(prior.rows(), prior.cols());
        for (int lp = 0; lp < L; ++lp) {
          if (lp == l) continue;
          const auto& p = net.profile(l, lp, k);
          contamination += weighted_gram(up.basis.cross(p.basis), p.lambda);
        }
      } else {
        contamination = hermitian_part(up.basis.sandwich(all_ambient) - prior);
      }
      up.filter = make_mmse_filter(prior, contamination, plan.inv_rho);
      plan.jittered = plan.jittered || up.filter.jittered;
      up.estimator = up.filter.gain * up.basis.cross(cell.groups[static_cast<std::size_t>(up.group)].obs_basis);
      up.cond_cov = hermitian_part(up.basis.sandwich(cond_ambient));
    }

    // Design matrix Z: inter-cell covariances plus own-cell estimation errors.
    CMatrix err_ambient = inter_ambient;
    for (int j = 0; j < K; ++j) {
      const UserPlan& uj = cell.users[static_cast<std::size_t>(j)];
      uj.basis.add_outer(uj.filter.err_cov, err_ambient);
    }
    for (auto& up : cell.users) up.design = hermitian_part(up.basis.sandwich(err_ambient));
  }
  return plan;
}

}  // namespace mimo_lab

#include "mimo_lab/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "mimo_lab/channel.hpp"
#include "mimo_lab/detequiv.hpp"
#include "mimo_lab/errors.hpp"

namespace mimo_lab {

namespace {

using RowC = Eigen::RowVectorXcd;

struct Accumulator {
  long n = 0;
  CMatrix ul_first, dl_first;
  RMatrix ul_second, dl_second;
  RVector ul_ub, dl_ub, ul_coh, ul_sinr, ul_cut, dl_cut;

  void init(int U, bool ul, bool dl) {
    if (ul) {
      ul_first = CMatrix::Zero(U, U);
      ul_second = RMatrix::Zero(U, U);
      ul_ub = ul_coh = ul_sinr = ul_cut = RVector::Zero(U);
    }
    if (dl) {
      dl_first = CMatrix::Zero(U, U);
      dl_second = RMatrix::Zero(U, U);
      dl_ub = dl_cut = RVector::Zero(U);
    }
  }

  template <typename Op>
  void combine(const Accumulator& o, Op op) {
    n = op(n, o.n);
    auto apply = [&op](auto& a, const auto& b) {
      if (a.size() > 0) a = op(a, b);
    };
    apply(ul_first, o.ul_first);
    apply(dl_first, o.dl_first);
    apply(ul_second, o.ul_second);
    apply(dl_second, o.dl_second);
    apply(ul_ub, o.ul_ub);
    apply(dl_ub, o.dl_ub);
    apply(ul_coh, o.ul_coh);
    apply(ul_sinr, o.ul_sinr);
    apply(ul_cut, o.ul_cut);
    apply(dl_cut, o.dl_cut);
  }
};

Accumulator sum_of(const std::vector<Accumulator>& parts, int skip = -1) {
  Accumulator total;
  bool first = true;
  for (std::size_t g = 0; g < parts.size(); ++g) {
    if (static_cast<int>(g) == skip) continue;
    if (first) {
      total = parts[g];
      first = false;
    } else {
      total.combine(parts[g], [](const auto& a, const auto& b) { return decltype(a + b)(a + b); });
    }
  }
  return total;
}

double log2p(double x) { return std::log2(1.0 + x); }

// Signal moments of user u and the interference moments around it. Uplink stats sit
// in row u, downlink stats in column u.
template <typename F>
void for_each_link(int U, int u, bool downlink, F f) {
  for (int c = 0; c < U; ++c) {
    if (c == u) continue;
    if (downlink)
      f(c, u);
    else
      f(u, c);
  }
}

RVector noncoherent_rates(const CMatrix& first, const RMatrix& second, double n, double P, bool downlink) {
  const int U = static_cast<int>(first.rows());
  RVector out(U);
  for (int u = 0; u < U; ++u) {
    const cplx mean = first(u, u) / n;
    const double var = std::max(0.0, second(u, u) / n - std::norm(mean));
    double interference = 0.0;
    for_each_link(U, u, downlink, [&](int i, int j) { interference += second(i, j) / n; });
    out(u) = log2p(std::norm(mean) / (1.0 / P + var + interference));
  }
  return out;
}

RVector variance_penalty(const CMatrix& first, const RMatrix& second, double n, double P, int T_c, bool downlink) {
  const int U = static_cast<int>(first.rows());
  RVector out(U);
  for (int u = 0; u < U; ++u) {
    double pen = 0.0;
    for_each_link(U, u, downlink, [&](int i, int j) {
      const double var = std::max(0.0, second(i, j) / n - std::norm(first(i, j) / n));
      pen += log2p(P * var);
    });
    out(u) = pen / T_c;
  }
  return out;
}

using BoundMap = std::map<std::pair<BoundId, Direction>, RVector>;

BoundMap bounds_from(const Accumulator& a, const NetworkPlan& plan, int T_c) {
  BoundMap out;
  if (a.n == 0) return out;
  const double n = static_cast<double>(a.n);
  const double pre = plan.prelog;
  const double cut_pre = 1.0 - 1.0 / T_c;
  if (a.ul_first.size() > 0) {
    const RVector ub = a.ul_ub / n;
    out[{BoundId::CoherentUL, Direction::UL}] = pre * a.ul_coh / n;
    out[{BoundId::MaxMinUB, Direction::UL}] = pre * ub;
    out[{BoundId::NonCoherent, Direction::UL}] = pre * noncoherent_rates(a.ul_first, a.ul_second, n, plan.P_ul, false);
    out[{BoundId::AltNonCoherent, Direction::UL}] =
        pre * (ub - variance_penalty(a.ul_first, a.ul_second, n, plan.P_ul, T_c, false));
    out[{BoundId::CutsetPerUser, Direction::UL}] = cut_pre * a.ul_cut / n;
  }
  if (a.dl_first.size() > 0) {
    const RVector ub = a.dl_ub / n;
    out[{BoundId::MaxMinUB, Direction::DL}] = pre * ub;
    out[{BoundId::NonCoherent, Direction::DL}] = pre * noncoherent_rates(a.dl_first, a.dl_second, n, plan.P_dl, true);
    out[{BoundId::AltNonCoherent, Direction::DL}] =
        pre * (ub - variance_penalty(a.dl_first, a.dl_second, n, plan.P_dl, T_c, true));
    out[{BoundId::CutsetPerUser, Direction::DL}] = cut_pre * a.dl_cut / n;
  }
  return out;
}

void run_trial(const NetworkScenario& net, const NetworkPlan& plan, const EvaluationOptions& opt, long trial,
               Accumulator& acc) {
  const int K = net.K();
  const int U = net.users();
  const int M = net.M();
  Rng rng(opt.seed, {stream::kFading, static_cast<std::uint64_t>(opt.draw), static_cast<std::uint64_t>(trial)});
  const ChannelBlock block = realize_block(net, rng, trial);
  const double noise = std::sqrt(plan.inv_rho);
  const double inv_p = 1.0 / plan.P_ul;
  const double inv_pdl = 1.0 / plan.P_dl;
  const bool mmse = plan.options.beamformer == Beamformer::MMSE;

  CMatrix dl_rows;
  if (opt.downlink) dl_rows.resize(U, U);
  CMatrix H(M, U);
  CMatrix Hhat(M, U);

  for (int l = 0; l < net.L(); ++l) {
    const CellPlan& cell = plan.cells[static_cast<std::size_t>(l)];
    for (int c = 0; c < U; ++c) {
      const int id = net.link(l, c / K, c % K);
      H.col(c) = net.profiles[id].basis.times(block.w[id]);
    }
    Hhat.setZero();
    std::vector<CVector> obs(cell.groups.size());
    for (std::size_t gi = 0; gi < cell.groups.size(); ++gi) {
      const PilotGroup& g = cell.groups[gi];
      CVector sum = CVector::Zero(M);
      for (int c : g.members) sum += H.col(c);
      CVector o = g.obs_basis.adjoint_times(sum);
      // Always consume the noise draw so that pilot power changes keep common random numbers.
      o += noise * rng.complex_normal(o.size());
      for (std::size_t i = 0; i < g.members.size(); ++i) {
        const int c = g.members[i];
        const int id = net.link(l, c / K, c % K);
        Hhat.col(c) = net.profiles[id].basis.times(CVector(g.cond_gain[i] * o));
      }
      obs[gi] = std::move(o);
    }
    std::vector<CVector> what(static_cast<std::size_t>(K));
    CMatrix Wamb(M, K);
    for (int k = 0; k < K; ++k) {
      const UserPlan& up = cell.users[static_cast<std::size_t>(k)];
      what[static_cast<std::size_t>(k)] = up.estimator * obs[static_cast<std::size_t>(up.group)];
      Wamb.col(k) = up.basis.times(what[static_cast<std::size_t>(k)]);
    }
    for (int k = 0; k < K; ++k) {
      const UserPlan& up = cell.users[static_cast<std::size_t>(k)];
      const CVector& wk = what[static_cast<std::size_t>(k)];
      const int u = l * K + k;
      const CMatrix Y = up.basis.adjoint_times(H);
      CMatrix X;
      CVector v;
      if (mmse) {
        X = up.basis.adjoint_times(Wamb);
        v = mmse_combiner(wk, X, up.design, plan.P_ul);
      } else {
        v = matched_filter(wk);
      }
      const double vn = v.norm();
      if (!(vn > 0.0) || !std::isfinite(vn)) throw NumericalError("evaluate: degenerate combining vector");
      v /= vn;
      const double own_energy = block.w[static_cast<std::size_t>(net.link(l, l, k))].squaredNorm();

      if (opt.uplink) {
        const RowC row = v.adjoint() * Y;
        const RVector mag = row.cwiseAbs2().transpose();
        acc.ul_first.row(u) += row;
        acc.ul_second.row(u) += mag.transpose();
        const double signal = mag(u);
        acc.ul_ub(u) += log2p(signal / (inv_p + mag.sum() - signal));

        const RowC rowh = v.adjoint() * up.basis.adjoint_times(Hhat);
        const cplx sig = v.dot(wk);
        const double cond = (v.adjoint() * up.cond_cov * v)(0, 0).real();
        const double den = rowh.cwiseAbs2().sum() - std::norm(rowh(u)) + std::norm(rowh(u) - sig) + cond + inv_p;
        const double sinr = std::norm(sig) / den;
        acc.ul_coh(u) += log2p(sinr);
        acc.ul_sinr(u) += sinr;
        acc.ul_cut(u) += log2p(plan.P_ul * own_energy);
      }
      if (opt.downlink) {
        CVector g = v;
        if (mmse && plan.P_dl != plan.P_ul) g = mmse_combiner(wk, X, up.design, plan.P_dl).normalized();
        dl_rows.row(u) = g.adjoint() * Y;
        acc.dl_cut(u) += log2p(plan.P_dl * own_energy);
      }
    }
  }

  if (opt.downlink) {
    const RMatrix mag = dl_rows.cwiseAbs2();
    acc.dl_first += dl_rows;
    acc.dl_second += mag;
    for (int c = 0; c < U; ++c) {
      const double signal = mag(c, c);
      acc.dl_ub(c) += log2p(signal / (inv_pdl + mag.col(c).sum() - signal));
    }
  }
  ++acc.n;
}

double jackknife(const std::vector<double>& loo) {
  const std::size_t G = loo.size();
  if (G < 2) return 0.0;
  double mean = 0.0;
  for (double x : loo) mean += x;
  mean /= static_cast<double>(G);
  double ss = 0.0;
  for (double x : loo) ss += (x - mean) * (x - mean);
  return std::sqrt(ss * static_cast<double>(G - 1) / static_cast<double>(G));
}

}  // namespace

const BoundEstimate& Evaluation::get(BoundId id, Direction d) const {
  auto it = bounds.find({id, d});
  if (it == bounds.end())
    throw std::out_of_range("bound " + to_string(id) + "/" + to_string(d) + " was not evaluated");
  return it->second;
}

RateReport Evaluation::report(BoundId id, Direction d) const {
  const BoundEstimate& b = get(id, d);
  RateReport r;
  r.bound_id = id;
  r.direction = d;
  r.per_user.assign(b.per_user.data(), b.per_user.data() + b.per_user.size());
  r.sum_total = b.sum_total;
  r.sum_per_cell = cells > 0 ? b.sum_total / cells : 0.0;
  r.stderr = b.stderr;
  r.trials = trials;
  r.prelog = id == BoundId::CutsetPerUser ? 1.0 : prelog;
  r.per_user_floored.resize(r.per_user.size());
  r.sum_total_floored = 0.0;
  for (std::size_t i = 0; i < r.per_user.size(); ++i) {
    r.per_user_floored[i] = std::max(0.0, r.per_user[i]);
    r.sum_total_floored += r.per_user_floored[i];
  }
  return r;
}

int worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MIMO_LAB_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

Evaluation evaluate(const NetworkScenario& net, const EvaluationOptions& options) {
  return evaluate(net, build_plan(net, options.processing, options.seed, options.draw), options);
}

Evaluation evaluate(const NetworkScenario& net, const NetworkPlan& plan, const EvaluationOptions& options) {
  if (options.trials < 1) throw std::invalid_argument("evaluate: trials must be at least 1");
  const int U = net.users();
  const int G = std::max(1, std::min(options.jackknife_groups, options.trials));
  std::vector<Accumulator> parts(static_cast<std::size_t>(G));
  for (auto& p : parts) p.init(U, options.uplink, options.downlink);

  // Each jackknife group is processed by one worker in trial order, so the result
  // does not depend on the number of workers.
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    for (int g = next++; g < G; g = next++) {
      const long begin = static_cast<long>(options.trials) * g / G;
      const long end = static_cast<long>(options.trials) * (g + 1) / G;
      try {
        for (long t = begin; t < end; ++t) run_trial(net, plan, options, t, parts[static_cast<std::size_t>(g)]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = G;
      }
    }
  };
  const int workers = std::min(worker_count(options.threads), G);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  const Accumulator total = sum_of(parts);
  const int T_c = net.config.T_c;
  Evaluation ev;
  ev.users = U;
  ev.cells = net.L();
  ev.trials = total.n;
  ev.prelog = plan.prelog;
  ev.kappa = plan.kappa;
  ev.jittered = plan.jittered;

  const BoundMap full = bounds_from(total, plan, T_c);
  std::vector<BoundMap> loo;
  std::vector<double> loo_sinr;
  if (G >= 2) {
    for (int g = 0; g < G; ++g) {
      const Accumulator part = sum_of(parts, g);
      loo.push_back(bounds_from(part, plan, T_c));
      if (options.uplink) loo_sinr.push_back(part.ul_sinr.sum() / (static_cast<double>(part.n) * U));
    }
  }
  for (const auto& [key, rates] : full) {
    BoundEstimate b;
    b.per_user = rates;
    b.sum_total = rates.sum();
    std::vector<double> sums;
    for (const auto& m : loo) sums.push_back(m.at(key).sum());
    b.stderr = jackknife(sums);
    ev.bounds[key] = std::move(b);
  }
  if (options.uplink) {
    ev.mean_coherent_sinr = total.ul_sinr / static_cast<double>(total.n);
    ev.mean_coherent_sinr_stderr = jackknife(loo_sinr);
  }

  const bool full_rank = plan.options.processing == Processing::LowDim && plan.options.dims_used == 0;
  if (options.detequiv && options.uplink && full_rank) {
    const bool mmse = plan.options.beamformer == Beamformer::MMSE;
    if (!mmse || plan.pilot == PilotKind::Orthogonal) {
      ev.detequiv_sinr.resize(U);
      for (int l = 0; l < net.L(); ++l)
        for (int k = 0; k < net.K(); ++k)
          ev.detequiv_sinr(l * net.K() + k) =
              mmse ? sinr_mmse_detequiv(net, plan, l, k).gamma : sinr_mf_detequiv(net, plan, l, k).gamma;
      BoundEstimate b;
      b.per_user = plan.prelog * ev.detequiv_sinr.unaryExpr([](double g) { return std::log2(1.0 + g); });
      b.sum_total = b.per_user.sum();
      ev.bounds[{BoundId::DetEquiv, Direction::UL}] = std::move(b);
    }
  }
  return ev;
}

}  // namespace mimo_lab

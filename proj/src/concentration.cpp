#include "mimo_lab/concentration.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "mimo_lab/covmodel.hpp"

namespace mimo_lab {

namespace {

constexpr int kProductRank = 8;

constexpr std::array<std::pair<ConcentrationKind, const char*>, 6> kNames{{
    {ConcentrationKind::TraceLemma, "TraceLemma"},
    {ConcentrationKind::ConstantModulus, "ConstantModulus"},
    {ConcentrationKind::UnboundedNorm, "UnboundedNorm"},
    {ConcentrationKind::IndependentVectors, "IndependentVectors"},
    {ConcentrationKind::HaarProduct, "HaarProduct"},
    {ConcentrationKind::FourierProduct, "FourierProduct"},
}};

struct Sample {
  double value = 0.0;
  double sq_dev = 0.0;
  double max_dev = 0.0;
};

CVector normal_vector(int n, Rng& rng) { return rng.complex_normal(n) / std::sqrt(static_cast<double>(n)); }

// x^H A x for the Toeplitz matrix 0.5^|i-j| in O(n) via its first-order recursion.
double toeplitz_form(const CVector& x) {
  const auto n = x.size();
  cplx run = 0.0;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    // run_i = sum_{j<i} 0.5^{i-j} x_j
    sum += std::norm(x(i)) + 2.0 * std::real(std::conj(x(i)) * run);
    run = 0.5 * (run + x(i));
  }
  return sum;
}

Sample product_sample(const CMatrix& U, const CMatrix& V, int M) {
  const CMatrix G = U.adjoint() * V;
  CMatrix S = G * G.adjoint();
  const int r = static_cast<int>(S.rows());
  S.diagonal().array() -= static_cast<double>(r) / M;
  Sample s;
  s.value = S.diagonal().real().mean() + static_cast<double>(r) / M;
  s.sq_dev = S.cwiseAbs2().sum() / (static_cast<double>(r) * r);
  s.max_dev = S.cwiseAbs().maxCoeff();
  return s;
}

Sample draw(ConcentrationKind kind, int n, Rng& rng) {
  Sample s;
  switch (kind) {
    case ConcentrationKind::TraceLemma: {
      s.value = normal_vector(n, rng).squaredNorm();
      s.sq_dev = (s.value - 1.0) * (s.value - 1.0);
      break;
    }
    case ConcentrationKind::ConstantModulus: {
      CVector x(n);
      for (int i = 0; i < n; ++i) x(i) = rng.unit_phase() / std::sqrt(static_cast<double>(n));
      s.value = toeplitz_form(x);
      // tr A / n = 1
      s.sq_dev = (s.value - 1.0) * (s.value - 1.0);
      break;
    }
    case ConcentrationKind::UnboundedNorm: {
      const CVector x = normal_vector(n, rng);
      const double spike = std::sqrt(static_cast<double>(n));
      s.value = x.head(n - 1).squaredNorm() + spike * std::norm(x(n - 1));
      const double target = (n - 1 + spike) / n;
      s.sq_dev = (s.value - target) * (s.value - target);
      break;
    }
    case ConcentrationKind::IndependentVectors: {
      const CVector x = normal_vector(n, rng);
      const CVector y = normal_vector(n, rng);
      s.value = std::abs(x.dot(y));
      s.sq_dev = s.value * s.value;
      break;
    }
    case ConcentrationKind::HaarProduct: {
      const CMatrix U = sample_partial_unitary(n, kProductRank, rng);
      const CMatrix V = sample_partial_unitary(n, kProductRank, rng);
      s = product_sample(U, V, n);
      break;
    }
    case ConcentrationKind::FourierProduct: {
      const CMatrix U = sample_partial_fourier(n, kProductRank, rng);
      const CMatrix V = sample_partial_fourier(n, kProductRank, rng);
      s = product_sample(U, V, n);
      break;
    }
  }
  s.max_dev = std::max(s.max_dev, std::sqrt(s.sq_dev));
  return s;
}

double target_of(ConcentrationKind kind, int n) {
  switch (kind) {
    case ConcentrationKind::UnboundedNorm:
      return (n - 1 + std::sqrt(static_cast<double>(n))) / n;
    case ConcentrationKind::IndependentVectors:
      return 0.0;
    case ConcentrationKind::HaarProduct:
    case ConcentrationKind::FourierProduct:
      return static_cast<double>(kProductRank) / n;
    default:
      return 1.0;
  }
}

}  // namespace

std::string to_string(ConcentrationKind kind) {
  for (const auto& [k, name] : kNames)
    if (k == kind) return name;
  return "Unknown";
}

std::optional<ConcentrationKind> parse_concentration_kind(std::string_view s) {
  for (const auto& [k, name] : kNames)
    if (s == name) return k;
  return std::nullopt;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need two matching points");
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw std::invalid_argument("loglog_slope: degenerate abscissae");
  return (n * sxy - sx * sy) / den;
}

ConcentrationReport concentration_check(ConcentrationKind kind, const std::vector<int>& dims, int trials, Rng& rng) {
  if (trials < 2) throw std::invalid_argument("concentration_check: need at least two trials");
  if (dims.empty()) throw std::invalid_argument("concentration_check: no dimensions given");
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] < 2) throw std::invalid_argument("concentration_check: dimensions must be at least 2");
    if (i > 0 && dims[i] <= dims[i - 1]) throw std::invalid_argument("concentration_check: dims must increase");
    if ((kind == ConcentrationKind::HaarProduct || kind == ConcentrationKind::FourierProduct) && dims[i] < kProductRank)
      throw std::invalid_argument("concentration_check: product kinds need dims >= 8");
  }
  ConcentrationReport rep;
  rep.kind = kind;
  rep.expected_slope = kind == ConcentrationKind::HaarProduct ? -1.0 : -0.5;
  std::vector<double> xs, ys;
  for (int n : dims) {
    ConcentrationPoint p;
    p.dim = n;
    p.target = target_of(kind, n);
    double sum = 0, sum_sq = 0, dev = 0, maxdev = 0;
    for (int t = 0; t < trials; ++t) {
      const Sample s = draw(kind, n, rng);
      sum += s.value;
      sum_sq += s.value * s.value;
      dev += s.sq_dev;
      maxdev += s.max_dev;
    }
    p.mean = sum / trials;
    p.mean_square = sum_sq / trials;
    p.stddev = std::sqrt(std::max(0.0, (sum_sq - trials * p.mean * p.mean) / (trials - 1)));
    p.deviation = std::sqrt(dev / trials);
    p.max_deviation = maxdev / trials;
    rep.points.push_back(p);
    xs.push_back(n);
    ys.push_back(p.deviation);
  }
  if (dims.size() >= 2) rep.slope = loglog_slope(xs, ys);
  return rep;
}

}  // namespace mimo_lab

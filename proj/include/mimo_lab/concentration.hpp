#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mimo_lab/rng.hpp"

namespace mimo_lab {

enum class ConcentrationKind {
  TraceLemma,          // x^H A x with x ~ CN(0, I/n), A = I
  ConstantModulus,     // unit-modulus entries / sqrt(n), Toeplitz A = 0.5^|i-j|
  UnboundedNorm,       // A = diag(1, ..., 1, sqrt(n)), spectral norm grows with n
  IndependentVectors,  // |x^H y| for independent x, y ~ CN(0, I/n)
  HaarProduct,         // U^H V V^H U - (r/M) I, U and V independent Haar M x r
  FourierProduct,      // same for independent partial Fourier bases
};

std::string to_string(ConcentrationKind kind);
std::optional<ConcentrationKind> parse_concentration_kind(std::string_view s);

struct ConcentrationPoint {
  int dim = 0;
  double mean = 0.0;         // mean of the statistic
  double mean_square = 0.0;  // mean of its square
  double target = 0.0;       // deterministic limit
  double stddev = 0.0;
  double deviation = 0.0;      // root mean square distance to the target
  double max_deviation = 0.0;  // mean over trials of the largest entry deviation; mean abs deviation for scalar kinds
};

struct ConcentrationReport {
  ConcentrationKind kind = ConcentrationKind::TraceLemma;
  std::vector<ConcentrationPoint> points;
  double slope = 0.0;           // least squares slope of log deviation against log dim
  double expected_slope = -0.5;
};

// Matrix kinds use r = 8 columns.
ConcentrationReport concentration_check(ConcentrationKind kind, const std::vector<int>& dims, int trials, Rng& rng);

// Least squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mimo_lab

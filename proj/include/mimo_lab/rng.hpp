#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

#include "mimo_lab/types.hpp"

namespace mimo_lab {

// Stream purposes. Mixed into the key so that streams for different uses never coincide.
namespace stream {
inline constexpr std::uint64_t kCovariance = 0x636f76;
inline constexpr std::uint64_t kSubset = 0x737562;
inline constexpr std::uint64_t kFading = 0x666164;
inline constexpr std::uint64_t kPilot = 0x706c74;
inline constexpr std::uint64_t kLemma = 0x6c656d;
inline constexpr std::uint64_t kTest = 0x747374;
}  // namespace stream

// Keyed random stream. Rng(seed, {a, b, c}) always yields the same sequence, and
// distinct keys give statistically independent sequences. All transforms below are
// written out explicitly so that results do not depend on the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> key = {});

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  double normal();

  // Circularly symmetric complex Gaussian with unit variance.
  cplx complex_normal();
  CVector complex_normal(Eigen::Index n);
  CMatrix complex_normal(Eigen::Index rows, Eigen::Index cols);

  // Uniform random phase on the unit circle.
  cplx unit_phase();

  // k distinct values of [0, n), in draw order.
  std::vector<int> sample_without_replacement(int n, int k);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mimo_lab

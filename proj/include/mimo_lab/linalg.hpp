#pragma once

#include <Eigen/Cholesky>

#include "mimo_lab/types.hpp"

namespace mimo_lab {

// Cholesky factor of a Hermitian positive definite matrix. When the matrix is
// numerically singular (smallest eigenvalue below 1e-12 * trace / n) a jitter of
// 1e-10 * trace / n is added to the diagonal and `jittered` is set.
struct HermitianFactor {
  Eigen::LLT<CMatrix> llt;
  bool jittered = false;

  CMatrix solve(const CMatrix& rhs) const { return llt.solve(rhs); }
  CVector solve(const CVector& rhs) const { return llt.solve(rhs); }
  // A^{-1} through a solve against the identity.
  CMatrix inverse() const;
};

// Exact check: uses a Hermitian eigen-decomposition to decide about jitter.
HermitianFactor factor_hermitian(const CMatrix& a);

// Cheap check for per-block systems that carry an explicit ridge: tries Cholesky
// directly and only falls back to the exact path when it fails.
HermitianFactor factor_hermitian_fast(const CMatrix& a);

CMatrix hermitian_part(const CMatrix& a);

double min_eigenvalue(const CMatrix& a);

}  // namespace mimo_lab

#include "mimo_lab/linalg.hpp"

#include <Eigen/Eigenvalues>

#include "mimo_lab/errors.hpp"

namespace mimo_lab {

CMatrix HermitianFactor::inverse() const {
  const auto n = llt.matrixLLT().rows();
  return llt.solve(CMatrix::Identity(n, n));
}

CMatrix hermitian_part(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

double min_eigenvalue(const CMatrix& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

HermitianFactor factor_hermitian(const CMatrix& a) {
  HermitianFactor f;
  const auto n = a.rows();
  if (n == 0) return f;
  CMatrix h = hermitian_part(a);
  const double scale = std::abs(h.trace().real()) / static_cast<double>(n);
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw NumericalError("factor_hermitian: matrix has nonpositive or non-finite trace");
  if (min_eigenvalue(h) < 1e-12 * scale) {
    h.diagonal().array() += 1e-10 * scale;
    f.jittered = true;
  }
  f.llt.compute(h);
  if (f.llt.info() != Eigen::Success)
    throw NumericalError("factor_hermitian: matrix is not positive definite after regularization");
  return f;
}

HermitianFactor factor_hermitian_fast(const CMatrix& a) {
  HermitianFactor f;
  if (a.rows() == 0) return f;
  f.llt.compute(a);
  if (f.llt.info() == Eigen::Success) {
    const auto& d = f.llt.matrixLLT().diagonal();
    const double scale = std::abs(a.trace().real()) / static_cast<double>(a.rows());
    if (d.real().cwiseAbs2().minCoeff() >= 1e-12 * scale) return f;
  }
  return factor_hermitian(a);
}

}  // namespace mimo_lab

#include "mimo_lab/subspace.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include <Eigen/QR>

namespace mimo_lab {

Subspace Subspace::dense(CMatrix basis) {
  Subspace s;
  s.ambient_ = static_cast<int>(basis.rows());
  s.basis_ = std::move(basis);
  return s;
}

Subspace Subspace::selection(int ambient, std::vector<int> indices) {
  for (int i : indices)
    if (i < 0 || i >= ambient) throw std::out_of_range("Subspace::selection: index outside ambient dimension");
  Subspace s;
  s.ambient_ = ambient;
  s.selection_ = true;
  s.indices_ = std::move(indices);
  return s;
}

Subspace Subspace::identity(int ambient) {
  std::vector<int> idx(ambient);
  for (int i = 0; i < ambient; ++i) idx[i] = i;
  return selection(ambient, std::move(idx));
}

CMatrix Subspace::matrix() const {
  if (!selection_) return basis_;
  CMatrix b = CMatrix::Zero(ambient_, rank());
  for (int j = 0; j < rank(); ++j) b(indices_[j], j) = 1.0;
  return b;
}

CMatrix Subspace::adjoint_times(const CMatrix& x) const {
  if (x.rows() != ambient_) throw std::invalid_argument("Subspace::adjoint_times: dimension mismatch");
  if (!selection_) return basis_.adjoint() * x;
  CMatrix out(rank(), x.cols());
  for (int j = 0; j < rank(); ++j) out.row(j) = x.row(indices_[j]);
  return out;
}

CVector Subspace::adjoint_times(const CVector& x) const {
  if (x.size() != ambient_) throw std::invalid_argument("Subspace::adjoint_times: dimension mismatch");
  if (!selection_) return basis_.adjoint() * x;
  CVector out(rank());
  for (int j = 0; j < rank(); ++j) out(j) = x(indices_[j]);
  return out;
}

CMatrix Subspace::times(const CMatrix& y) const {
  if (y.rows() != rank()) throw std::invalid_argument("Subspace::times: dimension mismatch");
  if (!selection_) return basis_ * y;
  CMatrix out = CMatrix::Zero(ambient_, y.cols());
  for (int j = 0; j < rank(); ++j) out.row(indices_[j]) = y.row(j);
  return out;
}

CVector Subspace::times(const CVector& y) const {
  CVector out = CVector::Zero(ambient_);
  add_times(y, out);
  return out;
}

void Subspace::add_times(const CVector& y, CVector& out) const {
  if (y.size() != rank() || out.size() != ambient_)
    throw std::invalid_argument("Subspace::add_times: dimension mismatch");
  if (!selection_) {
    out.noalias() += basis_ * y;
    return;
  }
  for (int j = 0; j < rank(); ++j) out(indices_[j]) += y(j);
}

CMatrix Subspace::cross(const Subspace& other) const {
  if (other.ambient_ != ambient_) throw std::invalid_argument("Subspace::cross: ambient mismatch");
  if (selection_ && other.selection_) {
    std::unordered_map<int, int> pos;
    pos.reserve(other.indices_.size() * 2);
    for (int j = 0; j < other.rank(); ++j) pos.emplace(other.indices_[j], j);
    CMatrix g = CMatrix::Zero(rank(), other.rank());
    for (int i = 0; i < rank(); ++i) {
      auto it = pos.find(indices_[i]);
      if (it != pos.end()) g(i, it->second) = 1.0;
    }
    return g;
  }
  if (selection_) return other.adjoint_times(matrix()).adjoint();
  return adjoint_times(other.matrix());
}

CMatrix Subspace::sandwich(const CMatrix& s) const {
  if (s.rows() != ambient_ || s.cols() != ambient_)
    throw std::invalid_argument("Subspace::sandwich: dimension mismatch");
  if (!selection_) return basis_.adjoint() * s * basis_;
  CMatrix out(rank(), rank());
  for (int j = 0; j < rank(); ++j)
    for (int i = 0; i < rank(); ++i) out(i, j) = s(indices_[i], indices_[j]);
  return out;
}

void Subspace::add_outer(const CMatrix& x, CMatrix& s) const {
  if (x.rows() != rank() || x.cols() != rank() || s.rows() != ambient_)
    throw std::invalid_argument("Subspace::add_outer: dimension mismatch");
  if (!selection_) {
    s.noalias() += basis_ * x * basis_.adjoint();
    return;
  }
  for (int j = 0; j < rank(); ++j)
    for (int i = 0; i < rank(); ++i) s(indices_[i], indices_[j]) += x(i, j);
}

Subspace Subspace::columns(const std::vector<int>& cols) const {
  for (int c : cols)
    if (c < 0 || c >= rank()) throw std::out_of_range("Subspace::columns: column outside rank");
  if (selection_) {
    std::vector<int> idx;
    idx.reserve(cols.size());
    for (int c : cols) idx.push_back(indices_[c]);
    return selection(ambient_, std::move(idx));
  }
  CMatrix b(ambient_, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) b.col(static_cast<Eigen::Index>(j)) = basis_.col(cols[j]);
  return dense(std::move(b));
}

Subspace Subspace::span_of(const std::vector<const Subspace*>& parts) {
  if (parts.empty()) throw std::invalid_argument("Subspace::span_of: no parts");
  const int m = parts.front()->ambient();
  bool all_selection = true;
  int total = 0;
  for (const auto* p : parts) {
    if (p->ambient() != m) throw std::invalid_argument("Subspace::span_of: ambient mismatch");
    all_selection = all_selection && p->is_selection();
    total += p->rank();
  }
  if (all_selection) {
    std::vector<int> idx;
    for (const auto* p : parts) idx.insert(idx.end(), p->indices().begin(), p->indices().end());
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    return selection(m, std::move(idx));
  }
  CMatrix stacked(m, total);
  int col = 0;
  for (const auto* p : parts) {
    stacked.middleCols(col, p->rank()) = p->matrix();
    col += p->rank();
  }
  Eigen::ColPivHouseholderQR<CMatrix> qr(stacked);
  qr.setThreshold(1e-10);
  const auto rank = qr.rank();
  CMatrix q = qr.householderQ() * CMatrix::Identity(m, rank);
  return dense(std::move(q));
}

}  // namespace mimo_lab

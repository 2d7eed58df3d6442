#pragma once

#include <vector>

#include "mimo_lab/types.hpp"

namespace mimo_lab {

// An orthonormal basis B (ambient x rank) expressed in the network's working
// coordinates. Partial Fourier bases become coordinate selections once vectors are
// stored by their DFT coefficients, so the selection form keeps every projection a
// gather or scatter. Partial unitary bases are stored densely.
class Subspace {
 public:
  Subspace() = default;

  static Subspace dense(CMatrix basis);
  static Subspace selection(int ambient, std::vector<int> indices);
  static Subspace identity(int ambient);

  int ambient() const { return ambient_; }
  int rank() const { return selection_ ? static_cast<int>(indices_.size()) : static_cast<int>(basis_.cols()); }
  bool is_selection() const { return selection_; }
  const std::vector<int>& indices() const { return indices_; }

  // Dense ambient x rank matrix.
  CMatrix matrix() const;

  CMatrix adjoint_times(const CMatrix& x) const;  // B^H X
  CVector adjoint_times(const CVector& x) const;
  CMatrix times(const CMatrix& y) const;          // B Y
  CVector times(const CVector& y) const;
  void add_times(const CVector& y, CVector& out) const;  // out += B y

  CMatrix cross(const Subspace& other) const;        // B^H B_other
  CMatrix sandwich(const CMatrix& s) const;          // B^H S B
  void add_outer(const CMatrix& x, CMatrix& s) const;  // S += B X B^H

  // Basis made of the listed columns.
  Subspace columns(const std::vector<int>& cols) const;

  // Orthonormal basis of the span of all parts. Selections stay selections.
  static Subspace span_of(const std::vector<const Subspace*>& parts);

 private:
  int ambient_ = 0;
  bool selection_ = false;
  std::vector<int> indices_;
  CMatrix basis_;
};

}  // namespace mimo_lab

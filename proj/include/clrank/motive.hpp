#pragma once

#include <cstdint>
#include <vector>

#include "clrank/ff.hpp"
#include "clrank/matrix.hpp"
#include "clrank/poly.hpp"

namespace clrank::motive {

using poly::FqPoly;
using poly::LFun;

/// The P-twist of the n-th tensor power of the Carlitz module over F_q(theta):
/// its tau-matrix is the 1x1 value P (T - theta)^n.
class TwistedPower {
 public:
  /// Throws std::invalid_argument for P = 0 or n = 0.
  TwistedPower(ff::FieldCtx field, FqPoly p, unsigned n);

  const ff::FieldCtx& field() const noexcept { return field_; }
  const FqPoly& p() const noexcept { return p_; }
  unsigned n() const noexcept { return n_; }
  unsigned q() const noexcept { return field_.size(); }
  /// deg P.
  unsigned m() const noexcept { return static_cast<unsigned>(p_.degree()); }
  ff::Elem lead() const { return p_.lead(); }
  /// a_i, zero outside [0, m].
  ff::Elem coeff(long i) const noexcept {
    return (i < 0 || i > static_cast<long>(m())) ? 0 : p_.coeffs[static_cast<std::size_t>(i)];
  }
  /// ceil((m + n) / (q - 1)).
  unsigned k_min() const noexcept;
  /// (q - 1) | (m + n): the last row of the minimal matrix carries the
  /// diagonal entry (-1)^n a_m.
  bool boundary_divisible() const noexcept { return (m() + n_) % (q() - 1) == 0; }

 private:
  ff::FieldCtx field_;
  FqPoly p_;
  unsigned n_;
};

using TMatrix = DenseMatrix<FqPoly>;

/// Matrix over F_q[T] for the twisted power, recording its shape data.
struct MMatrix {
  unsigned q = 0, n = 0, k = 0;
  TMatrix entries;  // 0-based storage; 1-based index (i, j) is entries(i-1, j-1)
};

/// Entry (row, col) of the infinite matrix, 0-based:
///   sum_{l=0}^{n} T^{n-l} (-1)^l C(n,l) a_{(row+1) q - (col+1) - l}.
FqPoly matrix_entry(const TwistedPower& tp, std::size_t row, std::size_t col);

/// Rows [0, rows) x columns [0, cols) of the infinite matrix.
TMatrix matrix_window(const TwistedPower& tp, std::size_t rows, std::size_t cols);

/// The k x k matrix; throws std::invalid_argument when k < k_min.
MMatrix build_matrix(const TwistedPower& tp, unsigned k);

/// det(I - A U) for a square matrix over F_q[T].
LFun char_det(const ff::FieldCtx& field, const TMatrix& a);

/// det(I - M(P,n,k) U) for any k (k < k_min allowed; used for the
/// infinity-factor identity and stability checks).
LFun det_at_size(const TwistedPower& tp, unsigned k);

/// L(c^n_P, U) = det(I - M(P,n,k_min) U).
LFun l_function(const TwistedPower& tp);

/// The factor (1 - (-1)^n a_m U) at the boundary frak_n = -(m+n)/(q-1),
/// otherwise 1.  Throws std::invalid_argument when frak_n is too large.
LFun infinity_factor(const TwistedPower& tp, long frak_n);

/// Order of vanishing of L at U = 1.
unsigned analytic_rank(const TwistedPower& tp);

/// Writes L(U) = V^{-k} sum C_i V^i (V = 1/U) and then V = W + 1:
/// returns (D_0, ..., D_k) with sum C_i V^i = sum D_i W^i.
/// Throws std::invalid_argument when deg_U L > k.
std::vector<FqPoly> d_coefficients(const LFun& l, unsigned k);

}  // namespace clrank::motive

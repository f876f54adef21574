#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "clrank/poly.hpp"

namespace clrank {

/// Row-major dense matrix of ring elements.
template <class E>
struct DenseMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<E> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c, const E& fill) : rows(r), cols(c), data(r * c, fill) {}

  E& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const E& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;
};

template <CommutativeRing R>
DenseMatrix<typename R::Elem> mat_mul(const R& ring, const DenseMatrix<typename R::Elem>& a,
                                      const DenseMatrix<typename R::Elem>& b) {
  if (a.cols != b.rows) throw std::invalid_argument("mat_mul: shape mismatch");
  DenseMatrix<typename R::Elem> c(a.rows, b.cols, ring.zero());
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t l = 0; l < a.cols; ++l) {
      const auto& x = a(i, l);
      if (ring.is_zero(x)) continue;
      for (std::size_t j = 0; j < b.cols; ++j) c(i, j) = ring.add(c(i, j), ring.mul(x, b(l, j)));
    }
  return c;
}

/// Characteristic polynomial coefficients (c_0, ..., c_k) with
/// det(lambda I - A) = sum_i c_i lambda^{k-i}, so det(I - A U) = sum_i c_i U^i.
/// Berkowitz' division-free recurrence: O(k^4) ring operations, valid over
/// any commutative ring.
template <CommutativeRing R>
std::vector<typename R::Elem> charpoly_berkowitz(const R& ring, const DenseMatrix<typename R::Elem>& a) {
  using E = typename R::Elem;
  if (a.rows != a.cols) throw std::invalid_argument("charpoly: matrix must be square");
  const std::size_t k = a.rows;
  std::vector<E> p{ring.one()};  // charpoly of the empty leading block
  for (std::size_t r = 0; r < k; ++r) {
    // Leading (r+1)x(r+1) block = [[A_r, col], [row, a_rr]].
    // Toeplitz column: 1, -a_rr, -row*col, -row*A_r*col, ..., -row*A_r^{r-1}*col.
    std::vector<E> toep;
    toep.reserve(r + 2);
    toep.push_back(ring.one());
    toep.push_back(ring.neg(a(r, r)));
    std::vector<E> v(r);
    for (std::size_t i = 0; i < r; ++i) v[i] = a(i, r);
    for (std::size_t step = 0; step < r; ++step) {
      E dot = ring.zero();
      for (std::size_t i = 0; i < r; ++i) dot = ring.add(dot, ring.mul(a(r, i), v[i]));
      toep.push_back(ring.neg(dot));
      if (step + 1 < r) {
        std::vector<E> w(r, ring.zero());
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t j = 0; j < r; ++j) {
            if (ring.is_zero(v[j])) continue;
            w[i] = ring.add(w[i], ring.mul(a(i, j), v[j]));
          }
        v = std::move(w);
      }
    }
    // new_p = T * p, T lower-triangular Toeplitz of size (r+2) x (r+1).
    std::vector<E> next(r + 2, ring.zero());
    for (std::size_t i = 0; i < r + 2; ++i)
      for (std::size_t j = 0; j <= std::min(i, r); ++j)
        next[i] = ring.add(next[i], ring.mul(toep[i - j], p[j]));
    p = std::move(next);
  }
  return p;
}

}  // namespace clrank

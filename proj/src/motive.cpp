#include "clrank/motive.hpp"

#include <string>

namespace clrank::motive {

TwistedPower::TwistedPower(ff::FieldCtx field, FqPoly p, unsigned n)
    : field_(std::move(field)), p_(std::move(p)), n_(n) {
  poly::FqPolyRing(field_).normalize(p_);
  if (p_.is_zero()) throw std::invalid_argument("P must be nonzero");
  if (n_ == 0) throw std::invalid_argument("n must be >= 1");
  for (auto c : p_.coeffs)
    if (!field_.valid(c)) throw std::invalid_argument("P has a coefficient outside the field");
}

unsigned TwistedPower::k_min() const noexcept {
  const unsigned d = q() - 1;
  return (m() + n_ + d - 1) / d;
}

FqPoly matrix_entry(const TwistedPower& tp, std::size_t row, std::size_t col) {
  const auto& f = tp.field();
  const unsigned n = tp.n();
  const long base = static_cast<long>((row + 1) * tp.q()) - static_cast<long>(col + 1);
  std::vector<ff::Elem> c(n + 1, 0);
  for (unsigned l = 0; l <= n; ++l) {
    const ff::Elem a = tp.coeff(base - static_cast<long>(l));
    if (a == 0) continue;
    ff::Elem w = f.from_int(ff::binom_mod_p(n, l, f.characteristic()));
    if (l % 2) w = f.neg(w);
    c[n - l] = f.add(c[n - l], f.mul(w, a));
  }
  return poly::FqPolyRing(f).make(std::move(c));
}

TMatrix matrix_window(const TwistedPower& tp, std::size_t rows, std::size_t cols) {
  TMatrix w(rows, cols, FqPoly{});
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) w(i, j) = matrix_entry(tp, i, j);
  return w;
}

MMatrix build_matrix(const TwistedPower& tp, unsigned k) {
  if (k < tp.k_min())
    throw std::invalid_argument("matrix size " + std::to_string(k) + " is below k_min = " + std::to_string(tp.k_min()));
  return MMatrix{tp.q(), tp.n(), k, matrix_window(tp, k, k)};
}

LFun char_det(const ff::FieldCtx& field, const TMatrix& a) {
  poly::FqPolyRing ring(field);
  return poly::lfun_make(field, charpoly_berkowitz(ring, a));
}

LFun det_at_size(const TwistedPower& tp, unsigned k) {
  return char_det(tp.field(), matrix_window(tp, k, k));
}

LFun l_function(const TwistedPower& tp) { return det_at_size(tp, tp.k_min()); }

LFun infinity_factor(const TwistedPower& tp, long frak_n) {
  // frak_n <= -(m+n)/(q-1)  <=>  (q-1) frak_n + m + n <= 0
  const long slack = static_cast<long>(tp.q() - 1) * frak_n + static_cast<long>(tp.m() + tp.n());
  if (slack > 0) throw std::invalid_argument("infinity_factor: frak_n exceeds -(m+n)/(q-1)");
  const auto& f = tp.field();
  if (slack < 0) return poly::lfun_one(f);
  ff::Elem c = tp.lead();
  if (tp.n() % 2 == 0) c = f.neg(c);  // -(-1)^n a_m
  return poly::lfun_make(f, {FqPoly({1}), poly::FqPolyRing(f).constant(c)});
}

unsigned analytic_rank(const TwistedPower& tp) { return poly::lfun_order_at(l_function(tp), 1); }

std::vector<FqPoly> d_coefficients(const LFun& l, unsigned k) {
  if (l.deg_u() > static_cast<int>(k)) throw std::invalid_argument("d_coefficients: deg_U L exceeds k");
  const auto& f = l.field;
  poly::FqPolyRing ring(f);
  // C_i is the coefficient of U^{k-i}.
  std::vector<FqPoly> c(k + 1);
  for (unsigned i = 0; i <= k; ++i) c[i] = l.coeff(k - i);
  // sum_j C_j (W+1)^j = sum_i (sum_{j>=i} C(j,i) C_j) W^i
  std::vector<FqPoly> d(k + 1);
  for (unsigned i = 0; i <= k; ++i)
    for (unsigned j = i; j <= k; ++j) {
      const ff::Elem b = f.from_int(ff::binom_mod_p(j, i, f.characteristic()));
      if (b != 0) d[i] = ring.add(d[i], ring.scale(c[j], b));
    }
  return d;
}

}  // namespace clrank::motive

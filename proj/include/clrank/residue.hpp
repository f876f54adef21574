#pragma once

#include <memory>

#include "clrank/ff.hpp"
#include "clrank/poly.hpp"

namespace clrank::ff {

/// F_q[theta]/(P) for a monic irreducible P of degree d over F_q.
/// Elements are reduced polynomials of degree < d.
class ResidueCtx {
 public:
  using Elem = poly::FqPoly;

  /// Throws std::invalid_argument when the modulus is not irreducible.
  ResidueCtx(FieldCtx base, const poly::FqPoly& modulus);

  const FieldCtx& base() const noexcept { return base_; }
  const poly::FqPoly& modulus() const noexcept { return *modulus_; }
  unsigned degree() const noexcept { return static_cast<unsigned>(modulus_->degree()); }
  /// q^d; saturates at UINT64_MAX.
  std::uint64_t size() const noexcept;

  Elem zero() const { return {}; }
  Elem one() const { return ring_.one(); }
  bool is_zero(const Elem& a) const noexcept { return a.is_zero(); }
  Elem from_int(std::int64_t x) const { return ring_.constant(base_.from_int(x)); }
  Elem embed(ff::Elem c) const { return ring_.constant(c); }
  Elem reduce(const poly::FqPoly& a) const { return ring_.rem(a, *modulus_); }

  Elem add(const Elem& a, const Elem& b) const { return ring_.add(a, b); }
  Elem sub(const Elem& a, const Elem& b) const { return ring_.sub(a, b); }
  Elem neg(const Elem& a) const { return ring_.neg(a); }
  Elem mul(const Elem& a, const Elem& b) const { return ring_.mulmod(a, b, *modulus_); }
  Elem pow(const Elem& a, std::uint64_t k) const { return ring_.powmod(a, k, *modulus_); }
  /// Throws std::domain_error on zero.
  Elem inv(const Elem& a) const;
  /// x^{q^k}, q = |base|.
  Elem frobenius(const Elem& a, unsigned k) const;

  /// True iff the element lies in the base field (is fixed by x -> x^q).
  bool in_base(const Elem& a) const noexcept { return a.degree() <= 0; }

  friend bool operator==(const ResidueCtx& a, const ResidueCtx& b) {
    return a.base_ == b.base_ && *a.modulus_ == *b.modulus_;
  }

 private:
  FieldCtx base_;
  poly::FqPolyRing ring_;
  std::shared_ptr<const poly::FqPoly> modulus_;
};

}  // namespace clrank::ff

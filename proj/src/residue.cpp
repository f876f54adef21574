#include "clrank/residue.hpp"

#include <limits>

namespace clrank::ff {

ResidueCtx::ResidueCtx(FieldCtx base, const poly::FqPoly& modulus)
    : base_(base), ring_(base), modulus_(nullptr) {
  if (!poly::is_irreducible(base_, modulus))
    throw std::invalid_argument("residue field: modulus is not irreducible");
  modulus_ = std::make_shared<const poly::FqPoly>(ring_.monic(modulus));
}

std::uint64_t ResidueCtx::size() const noexcept {
  std::uint64_t s = 1;
  for (unsigned i = 0; i < degree(); ++i) {
    if (s > std::numeric_limits<std::uint64_t>::max() / base_.size()) return std::numeric_limits<std::uint64_t>::max();
    s *= base_.size();
  }
  return s;
}

ResidueCtx::Elem ResidueCtx::inv(const Elem& a) const {
  if (a.is_zero()) throw std::domain_error("residue field: inverse of zero");
  // Extended Euclid: s*a + t*m = g, g a unit since m is irreducible.
  Elem r0 = *modulus_, r1 = a, s0 = zero(), s1 = one();
  while (!r1.is_zero()) {
    auto [qt, r] = ring_.divmod(r0, r1);
    Elem s = ring_.sub(s0, ring_.mul(qt, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  // r0 is a nonzero constant.
  return reduce(ring_.scale(s0, base_.inv(r0.lead())));
}

ResidueCtx::Elem ResidueCtx::frobenius(const Elem& a, unsigned k) const {
  Elem r = a;
  for (unsigned i = 0; i < k % degree(); ++i) r = pow(r, base_.size());
  return r;
}

}  // namespace clrank::ff

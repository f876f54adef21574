#include "clrank/euler.hpp"

namespace clrank::euler {

LFun LocalFactor::inverse_factor(const ff::FieldCtx& field) const {
  if (norm.is_zero()) return poly::lfun_one(field);
  std::vector<FqPoly> c(degree + 1);
  c[0] = FqPoly({1});
  c[degree] = poly::FqPolyRing(field).neg(norm);
  return poly::lfun_make(field, std::move(c));
}

ResPoly reduce_tau(const TwistedPower& tp, const ff::ResidueCtx& residue) {
  if (!(residue.base() == tp.field())) throw std::invalid_argument("reduce_tau: field mismatch");
  poly::PolyRing<ff::ResidueCtx> ring(residue);
  poly::FqPolyRing fq(tp.field());
  const auto theta_bar = residue.reduce(fq.variable());
  const auto p_bar = residue.reduce(tp.p());
  const ResPoly t_minus_theta = ring.make({residue.neg(theta_bar), residue.one()});
  return ring.mul(ring.constant(p_bar), ring.pow(t_minus_theta, tp.n()));
}

ResPoly reduce_tau(const TwistedPower& tp, const FqPoly& prime) {
  return reduce_tau(tp, ff::ResidueCtx(tp.field(), prime));
}

ResPoly twisted_power(const ff::ResidueCtx& residue, const ResPoly& a, unsigned d) {
  poly::PolyRing<ff::ResidueCtx> ring(residue);
  ResPoly acc = a;
  for (unsigned k = 1; k < d; ++k) {
    ResPoly twisted = a;
    for (auto& c : twisted.coeffs) c = residue.frobenius(c, k);
    acc = ring.mul(twisted, acc);
  }
  return acc;
}

LocalFactor local_factor(const TwistedPower& tp, const FqPoly& prime) {
  ff::ResidueCtx residue(tp.field(), prime);
  const unsigned d = residue.degree();
  const ResPoly n = twisted_power(residue, reduce_tau(tp, residue), d);
  std::vector<ff::Elem> down(n.coeffs.size(), 0);
  for (std::size_t i = 0; i < n.coeffs.size(); ++i) {
    const auto& c = n.coeffs[i];
    if (!residue.in_base(c)) throw std::logic_error("local_factor: norm is not Frobenius-invariant");
    down[i] = c.is_zero() ? 0 : c.coeffs[0];
  }
  return LocalFactor{residue.modulus(), d, poly::FqPolyRing(tp.field()).make(std::move(down))};
}

const std::vector<FqPoly>& PrimeCache::primes(const ff::FieldCtx& field, unsigned degree) {
  std::lock_guard lock(mu_);
  auto key = std::make_tuple(field.characteristic(), field.degree(), field.modulus(), degree);
  auto it = cache_.find(key);
  if (it == cache_.end()) it = cache_.emplace(std::move(key), poly::irreducibles_of_degree(field, degree)).first;
  return it->second;
}

PrimeCache& PrimeCache::global() {
  static PrimeCache cache;
  return cache;
}

LFun truncated_product(const TwistedPower& tp, unsigned max_deg) {
  if (max_deg == 0) throw std::invalid_argument("truncated_product: degree must be >= 1");
  const auto& f = tp.field();
  poly::FqPolyRing ring(f);
  std::vector<FqPoly> s(max_deg + 1);
  s[0] = FqPoly({1});
  for (unsigned d = 1; d <= max_deg; ++d) {
    for (const auto& prime : PrimeCache::global().primes(f, d)) {
      const LocalFactor lf = local_factor(tp, prime);
      if (lf.norm.is_zero()) continue;
      // Multiply by (1 - N U^d)^{-1}: ascending update reuses new terms.
      for (unsigned j = d; j <= max_deg; ++j)
        if (!s[j - d].is_zero()) s[j] = ring.add(s[j], ring.mul(lf.norm, s[j - d]));
    }
  }
  return poly::lfun_make(f, std::move(s));
}

LFun inverse_factors(const TwistedPower& tp, const std::vector<FqPoly>& primes) {
  LFun acc = poly::lfun_one(tp.field());
  for (const auto& prime : primes) acc = poly::lfun_mul(acc, local_factor(tp, prime).inverse_factor(tp.field()));
  return acc;
}

}  // namespace clrank::euler

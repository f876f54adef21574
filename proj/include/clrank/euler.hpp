#pragma once

#include <map>
#include <mutex>
#include <vector>

#include "clrank/motive.hpp"
#include "clrank/residue.hpp"

namespace clrank::euler {

using motive::TwistedPower;
using poly::FqPoly;
using poly::LFun;
using ResPoly = poly::Poly<ff::ResidueCtx::Elem>;

/// Inverse local factor 1 - N(T) U^d at a prime of degree d.
struct LocalFactor {
  FqPoly prime;
  unsigned degree = 0;
  FqPoly norm;  // N(T) in F_q[T]; zero when the prime divides P

  LFun inverse_factor(const ff::FieldCtx& field) const;
};

/// Reduction of the tau-matrix P (T - theta)^n modulo the prime, as a
/// polynomial in T over the residue field.
ResPoly reduce_tau(const TwistedPower& tp, const ff::ResidueCtx& residue);
ResPoly reduce_tau(const TwistedPower& tp, const FqPoly& prime);

/// a^{(d-1)} ... a^{(1)} a, where a^{(k)} raises every coefficient to q^k.
ResPoly twisted_power(const ff::ResidueCtx& residue, const ResPoly& a, unsigned d);

/// Throws std::logic_error if N is not Frobenius-invariant (never expected)
/// and std::invalid_argument if the prime is reducible.
LocalFactor local_factor(const TwistedPower& tp, const FqPoly& prime);

/// Monic irreducibles per degree, computed once per (field, degree).
class PrimeCache {
 public:
  const std::vector<FqPoly>& primes(const ff::FieldCtx& field, unsigned degree);
  static PrimeCache& global();

 private:
  std::mutex mu_;
  std::map<std::tuple<std::uint32_t, std::uint32_t, std::vector<ff::Elem>, unsigned>, std::vector<FqPoly>> cache_;
};

/// Product over all primes of degree <= max_deg of the local L-factors,
/// expanded as a power series in U and truncated at U^max_deg.
LFun truncated_product(const TwistedPower& tp, unsigned max_deg);

/// Product of the inverse local factors over the given primes.
LFun inverse_factors(const TwistedPower& tp, const std::vector<FqPoly>& primes);

}  // namespace clrank::euler

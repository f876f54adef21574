#pragma once

#include <random>
#include <vector>

#include "clrank/motive.hpp"

namespace testing_util {

using clrank::ff::Elem;
using clrank::ff::FieldCtx;
using clrank::motive::TwistedPower;
using clrank::poly::FqPoly;
using clrank::poly::LFun;

inline FieldCtx F(std::uint64_t q) { return FieldCtx::of_order(q); }

/// Little-endian coefficients, trimmed.
inline FqPoly fq(std::vector<Elem> c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
  return FqPoly(std::move(c));
}

inline TwistedPower tp(std::uint64_t q, std::vector<Elem> c, unsigned n) { return TwistedPower(F(q), fq(std::move(c)), n); }

/// L from U-coefficients given as little-endian T-coefficient lists.
inline LFun lfun(std::uint64_t q, std::vector<std::vector<Elem>> rows) {
  std::vector<FqPoly> c;
  for (auto& r : rows) c.push_back(fq(std::move(r)));
  return clrank::poly::lfun_make(F(q), std::move(c));
}

inline FqPoly random_poly(std::mt19937_64& rng, const FieldCtx& f, unsigned deg) {
  std::uniform_int_distribution<Elem> any(0, f.size() - 1), nz(1, f.size() - 1);
  std::vector<Elem> c(deg + 1);
  for (unsigned i = 0; i < deg; ++i) c[i] = any(rng);
  c[deg] = nz(rng);
  return FqPoly(std::move(c));
}

/// Every polynomial of exact degree m, little-endian odometer order.
template <class Fn>
void for_each_poly(const FieldCtx& f, unsigned m, Fn&& fn) {
  std::vector<Elem> c(m + 1, 0);
  c[m] = 1;
  while (true) {
    fn(FqPoly(c));
    std::size_t i = 0;
    while (i < m && ++c[i] == f.size()) c[i++] = 0;
    if (i == m && ++c[m] == f.size()) return;
  }
}

}  // namespace testing_util

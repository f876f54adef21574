#include "clrank/poly.hpp"

#include <algorithm>
#include <limits>

namespace clrank::poly {

namespace {

std::vector<unsigned> prime_divisors(unsigned n) {
  std::vector<unsigned> out;
  for (unsigned d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

bool is_squarefree(const ff::FieldCtx& field, const FqPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("is_squarefree: zero polynomial");
  if (p.degree() == 0) return true;
  FqPolyRing ring(field);
  const FqPoly dp = ring.derivative(p);
  if (dp.is_zero()) return false;
  return gcd(ring, p, dp).degree() == 0;
}

bool is_irreducible(const ff::FieldCtx& field, const FqPoly& p) {
  if (p.degree() < 1) return false;
  if (p.degree() == 1) return true;
  FqPolyRing ring(field);
  const FqPoly f = ring.monic(p);
  const unsigned d = static_cast<unsigned>(f.degree());
  const std::uint64_t q = field.size();
  const FqPoly x = ring.variable();
  // frob[i] = X^{q^i} mod f
  std::vector<FqPoly> frob{ring.rem(x, f)};
  for (unsigned i = 1; i <= d; ++i) frob.push_back(ring.powmod(frob.back(), q, f));
  if (ring.sub(frob[d], ring.rem(x, f)).is_zero() == false) return false;
  for (unsigned r : prime_divisors(d)) {
    const FqPoly h = ring.sub(frob[d / r], x);
    if (gcd(ring, f, h).degree() != 0) return false;
  }
  return true;
}

IrreducibleStream::IrreducibleStream(ff::FieldCtx field, unsigned degree)
    : field_(std::move(field)), degree_(degree) {
  if (degree == 0) throw std::invalid_argument("irreducibles_of_degree: degree must be >= 1");
  end_ = 1;
  for (unsigned i = 0; i < degree; ++i) {
    if (end_ > std::numeric_limits<std::uint64_t>::max() / field_.size())
      throw std::invalid_argument("irreducibles_of_degree: enumeration too large");
    end_ *= field_.size();
  }
}

std::optional<FqPoly> IrreducibleStream::next() {
  const std::uint64_t q = field_.size();
  while (cursor_ < end_) {
    std::uint64_t code = cursor_++;
    std::vector<ff::Elem> c(degree_ + 1, 0);
    for (unsigned i = 0; i < degree_; ++i) {
      c[i] = static_cast<ff::Elem>(code % q);
      code /= q;
    }
    c[degree_] = 1;
    FqPoly cand(std::move(c));
    if (degree_ > 1 && cand.coeffs[0] == 0) continue;
    if (is_irreducible(field_, cand)) return cand;
  }
  return std::nullopt;
}

std::vector<FqPoly> irreducibles_of_degree(const ff::FieldCtx& field, unsigned degree) {
  IrreducibleStream s(field, degree);
  std::vector<FqPoly> out;
  while (auto p = s.next()) out.push_back(std::move(*p));
  return out;
}

std::vector<FqPoly> prime_factors(const ff::FieldCtx& field, const FqPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("prime_factors: zero polynomial");
  FqPolyRing ring(field);
  FqPoly rest = ring.monic(p);
  std::vector<FqPoly> out;
  for (unsigned d = 1; 2 * d <= static_cast<unsigned>(std::max(rest.degree(), 0)); ++d) {
    for (const auto& f : irreducibles_of_degree(field, d)) {
      bool divides = false;
      for (;;) {
        auto [qt, r] = ring.divmod(rest, f);
        if (!r.is_zero()) break;
        rest = std::move(qt);
        divides = true;
      }
      if (divides) out.push_back(f);
    }
  }
  if (rest.degree() >= 1) out.push_back(rest);
  std::sort(out.begin(), out.end(), [](const FqPoly& a, const FqPoly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return std::lexicographical_compare(a.coeffs.rbegin(), a.coeffs.rend(), b.coeffs.rbegin(), b.coeffs.rend());
  });
  return out;
}

LFun lfun_one(const ff::FieldCtx& field) { return LFun{field, {FqPoly({1})}}; }

LFun lfun_make(const ff::FieldCtx& field, std::vector<FqPoly> coeffs) {
  FqPolyRing ring(field);
  for (auto& c : coeffs) ring.normalize(c);
  while (!coeffs.empty() && coeffs.back().is_zero()) coeffs.pop_back();
  return LFun{field, std::move(coeffs)};
}

LFun lfun_mul(const LFun& a, const LFun& b) {
  if (!(a.field == b.field)) throw std::invalid_argument("lfun_mul: field mismatch");
  PolyRing<FqPolyRing> ring{FqPolyRing(a.field)};
  auto r = ring.mul(Poly<FqPoly>(a.coeffs), Poly<FqPoly>(b.coeffs));
  return LFun{a.field, std::move(r.coeffs)};
}

LFun lfun_truncate(const LFun& a, std::size_t max_deg) {
  LFun r = a;
  if (r.coeffs.size() > max_deg + 1) r.coeffs.resize(max_deg + 1);
  while (!r.coeffs.empty() && r.coeffs.back().is_zero()) r.coeffs.pop_back();
  return r;
}

FqPoly lfun_eval_u(const LFun& a, ff::Elem gamma) {
  FqPolyRing ring(a.field);
  FqPoly acc;
  for (std::size_t j = a.coeffs.size(); j-- > 0;) acc = ring.add(ring.scale(acc, gamma), a.coeffs[j]);
  return acc;
}

unsigned lfun_order_at(const LFun& l, ff::Elem gamma) {
  if (gamma == 0) throw std::invalid_argument("lfun_order_at: gamma must be nonzero");
  FqPolyRing ring(l.field);
  std::vector<FqPoly> c = l.coeffs;
  unsigned order = 0;
  while (!c.empty()) {
    // Synthetic division by (U - gamma).
    std::vector<FqPoly> quo(c.size() - 1);
    FqPoly carry;
    for (std::size_t j = c.size() - 1; j >= 1; --j) {
      carry = ring.add(c[j], ring.scale(carry, gamma));
      quo[j - 1] = carry;
    }
    const FqPoly rem = ring.add(c[0], ring.scale(carry, gamma));
    if (!rem.is_zero()) break;
    ++order;
    c = std::move(quo);
  }
  return order;
}

LFun lfun_substitute(const LFun& l, const TMap& t_map, ff::Elem u_scale) {
  if (u_scale == 0) throw std::invalid_argument("lfun_substitute: u_scale must be nonzero");
  const ff::FieldCtx& f = l.field;
  FqPolyRing ring(f);
  std::vector<FqPoly> out(l.coeffs.size());
  for (std::size_t j = 0; j < l.coeffs.size(); ++j) {
    const FqPoly& c = l.coeffs[j];
    FqPoly r = std::visit(
        [&](const auto& m) -> FqPoly {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, tmap::Identity>) {
            return c;
          } else if constexpr (std::is_same_v<M, tmap::Shift>) {
            return ring.compose(c, ring.make({f.neg(m.d), 1}));
          } else if constexpr (std::is_same_v<M, tmap::Scale>) {
            if (m.c == 0) throw std::invalid_argument("lfun_substitute: scale must be nonzero");
            const ff::Elem ci = f.inv(m.c);
            FqPoly s = c;
            for (std::size_t i = 0; i < s.coeffs.size(); ++i) s.coeffs[i] = f.mul(s.coeffs[i], f.pow(ci, i));
            return s;
          } else if constexpr (std::is_same_v<M, tmap::Power>) {
            std::uint64_t step = 1;
            for (unsigned i = 0; i < m.k; ++i) step *= f.size();
            if (c.is_zero()) return c;
            std::vector<ff::Elem> s((c.coeffs.size() - 1) * step + 1, 0);
            for (std::size_t i = 0; i < c.coeffs.size(); ++i) s[i * step] = c.coeffs[i];
            return FqPoly(std::move(s));
          } else {
            const std::size_t bound = std::size_t(m.n) * j;
            if (c.degree() > static_cast<int>(bound))
              throw std::invalid_argument("lfun_substitute: inversion needs deg_T C_j <= n*j");
            std::vector<ff::Elem> s(bound + 1, 0);
            const ff::Elem sign = (bound % 2 == 0) ? f.one() : f.neg(f.one());
            for (std::size_t i = 0; i < c.coeffs.size(); ++i) s[bound - i] = f.mul(sign, c.coeffs[i]);
            return ring.make(std::move(s));
          }
        },
        t_map);
    out[j] = ring.scale(r, f.pow(u_scale, j));
  }
  return lfun_make(f, std::move(out));
}

}  // namespace clrank::poly

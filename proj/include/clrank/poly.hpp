#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "clrank/ff.hpp"

namespace clrank {

template <class R>
concept CommutativeRing = requires(const R& r, const typename R::Elem& a, const typename R::Elem& b) {
  { r.zero() } -> std::convertible_to<typename R::Elem>;
  { r.one() } -> std::convertible_to<typename R::Elem>;
  { r.is_zero(a) } -> std::convertible_to<bool>;
  { r.add(a, b) } -> std::convertible_to<typename R::Elem>;
  { r.sub(a, b) } -> std::convertible_to<typename R::Elem>;
  { r.neg(a) } -> std::convertible_to<typename R::Elem>;
  { r.mul(a, b) } -> std::convertible_to<typename R::Elem>;
  { r.from_int(std::int64_t{}) } -> std::convertible_to<typename R::Elem>;
};

template <class R>
concept Field = CommutativeRing<R> && requires(const R& r, const typename R::Elem& a) {
  { r.inv(a) } -> std::convertible_to<typename R::Elem>;
};

template <class R>
concept FiniteField = Field<R> && requires(const R& r) {
  { r.size() } -> std::convertible_to<std::uint64_t>;
};

namespace poly {

/// Dense univariate polynomial; coeffs[i] is the coefficient of X^i.
/// Normalized: empty (the zero polynomial) or with a nonzero last entry.
template <class C>
struct Poly {
  std::vector<C> coeffs;

  Poly() = default;
  explicit Poly(std::vector<C> c) : coeffs(std::move(c)) {}

  int degree() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
  bool is_zero() const noexcept { return coeffs.empty(); }
  std::size_t size() const noexcept { return coeffs.size(); }
  const C& operator[](std::size_t i) const { return coeffs[i]; }
  const C& lead() const { return coeffs.back(); }

  friend bool operator==(const Poly&, const Poly&) = default;
};

/// Polynomial ring over R.  PolyRing<R> is itself a CommutativeRing, so
/// rings nest (F_q[T][U]).
template <CommutativeRing R>
class PolyRing {
 public:
  using Coeff = typename R::Elem;
  using Elem = Poly<Coeff>;

  explicit PolyRing(R base) : base_(std::move(base)) {}
  const R& base() const noexcept { return base_; }

  Elem zero() const { return {}; }
  Elem one() const { return constant(base_.one()); }
  bool is_zero(const Elem& a) const noexcept { return a.coeffs.empty(); }
  Elem from_int(std::int64_t x) const { return constant(base_.from_int(x)); }

  Elem constant(Coeff c) const {
    Elem r;
    if (!base_.is_zero(c)) r.coeffs.push_back(std::move(c));
    return r;
  }
  Elem monomial(Coeff c, std::size_t deg) const {
    if (base_.is_zero(c)) return {};
    Elem r;
    r.coeffs.assign(deg + 1, base_.zero());
    r.coeffs[deg] = std::move(c);
    return r;
  }
  Elem variable() const { return monomial(base_.one(), 1); }

  /// Builds a polynomial from raw coefficients, trimming zeros.
  Elem make(std::vector<Coeff> c) const {
    Elem r(std::move(c));
    normalize(r);
    return r;
  }
  void normalize(Elem& a) const {
    while (!a.coeffs.empty() && base_.is_zero(a.coeffs.back())) a.coeffs.pop_back();
  }
  Coeff coeff(const Elem& a, std::size_t i) const { return i < a.coeffs.size() ? a.coeffs[i] : base_.zero(); }

  Elem add(const Elem& a, const Elem& b) const {
    const Elem& big = a.size() >= b.size() ? a : b;
    const Elem& small = a.size() >= b.size() ? b : a;
    Elem r = big;
    for (std::size_t i = 0; i < small.size(); ++i) r.coeffs[i] = base_.add(r.coeffs[i], small.coeffs[i]);
    normalize(r);
    return r;
  }
  Elem neg(const Elem& a) const {
    Elem r = a;
    for (auto& c : r.coeffs) c = base_.neg(c);
    return r;
  }
  Elem sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }
  Elem mul(const Elem& a, const Elem& b) const {
    if (a.is_zero() || b.is_zero()) return {};
    Elem r;
    r.coeffs.assign(a.size() + b.size() - 1, base_.zero());
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (base_.is_zero(a.coeffs[i])) continue;
      for (std::size_t j = 0; j < b.size(); ++j)
        r.coeffs[i + j] = base_.add(r.coeffs[i + j], base_.mul(a.coeffs[i], b.coeffs[j]));
    }
    normalize(r);
    return r;
  }
  Elem scale(const Elem& a, const Coeff& c) const {
    Elem r = a;
    for (auto& x : r.coeffs) x = base_.mul(x, c);
    normalize(r);
    return r;
  }
  Elem shift(const Elem& a, std::size_t k) const {
    if (a.is_zero()) return {};
    Elem r;
    r.coeffs.assign(k, base_.zero());
    r.coeffs.insert(r.coeffs.end(), a.coeffs.begin(), a.coeffs.end());
    return r;
  }
  Elem pow(Elem a, std::uint64_t k) const {
    Elem r = one();
    while (k) {
      if (k & 1) r = mul(r, a);
      k >>= 1;
      if (k) a = mul(a, a);
    }
    return r;
  }
  Coeff eval(const Elem& a, const Coeff& x) const {
    Coeff acc = base_.zero();
    for (std::size_t i = a.size(); i-- > 0;) acc = base_.add(base_.mul(acc, x), a.coeffs[i]);
    return acc;
  }
  /// a(b(X)).
  Elem compose(const Elem& a, const Elem& b) const {
    Elem acc;
    for (std::size_t i = a.size(); i-- > 0;) acc = add(mul(acc, b), constant(a.coeffs[i]));
    return acc;
  }
  Elem derivative(const Elem& a) const {
    Elem r;
    if (a.size() <= 1) return r;
    r.coeffs.resize(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i)
      r.coeffs[i - 1] = base_.mul(base_.from_int(static_cast<std::int64_t>(i)), a.coeffs[i]);
    normalize(r);
    return r;
  }

  /// Division with remainder; the divisor's leading coefficient must be a
  /// unit.  For rings without inverses only monic divisors are accepted.
  std::pair<Elem, Elem> divmod(const Elem& a, const Elem& b) const {
    if (b.is_zero()) throw std::domain_error("poly: division by zero polynomial");
    Coeff lead_inv = lead_inverse(b);
    Elem rem = a;
    if (rem.size() < b.size()) return {Elem{}, rem};
    Elem quo;
    quo.coeffs.assign(rem.size() - b.size() + 1, base_.zero());
    const std::size_t db = b.size() - 1;
    for (std::size_t top = rem.size(); top-- > db;) {
      const Coeff c = base_.mul(rem.coeffs[top], lead_inv);
      if (base_.is_zero(c)) continue;
      const std::size_t s = top - db;
      quo.coeffs[s] = c;
      for (std::size_t i = 0; i <= db; ++i)
        rem.coeffs[s + i] = base_.sub(rem.coeffs[s + i], base_.mul(c, b.coeffs[i]));
    }
    normalize(quo);
    normalize(rem);
    return {std::move(quo), std::move(rem)};
  }
  Elem rem(const Elem& a, const Elem& b) const { return divmod(a, b).second; }
  Elem quo(const Elem& a, const Elem& b) const { return divmod(a, b).first; }
  Elem mulmod(const Elem& a, const Elem& b, const Elem& m) const { return rem(mul(a, b), m); }
  Elem powmod(Elem a, std::uint64_t k, const Elem& m) const {
    Elem r = rem(one(), m);
    a = rem(a, m);
    while (k) {
      if (k & 1) r = mulmod(r, a, m);
      k >>= 1;
      if (k) a = mulmod(a, a, m);
    }
    return r;
  }
  Elem monic(const Elem& a) const requires Field<R> {
    if (a.is_zero()) return a;
    return scale(a, base_.inv(a.lead()));
  }

 private:
  Coeff lead_inverse(const Elem& b) const {
    if constexpr (Field<R>) {
      return base_.inv(b.lead());
    } else {
      if (b.lead() != base_.one()) throw std::domain_error("poly: divisor must be monic over a non-field");
      return base_.one();
    }
  }

  R base_;
};

using FqPoly = Poly<ff::Elem>;
using FqPolyRing = PolyRing<ff::FieldCtx>;

/// Monic gcd; gcd(0, 0) = 0.
template <Field R>
Poly<typename R::Elem> gcd(const PolyRing<R>& ring, Poly<typename R::Elem> a, Poly<typename R::Elem> b) {
  while (!b.is_zero()) {
    auto r = ring.rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return ring.monic(a);
}

inline FqPoly poly_gcd(const ff::FieldCtx& field, const FqPoly& a, const FqPoly& b) {
  return gcd(FqPolyRing(field), a, b);
}

/// True iff gcd(P, P') is a nonzero constant.  A positive-degree P with
/// P' = 0 is a p-th power and is reported as not squarefree.
/// Throws std::invalid_argument for P = 0.
bool is_squarefree(const ff::FieldCtx& field, const FqPoly& p);

/// Rabin's test over F_q.
bool is_irreducible(const ff::FieldCtx& field, const FqPoly& p);

/// Monic irreducibles of a fixed degree in increasing order of their lower
/// coefficients read as a base-q integer (coefficient of X^0 least
/// significant).
class IrreducibleStream {
 public:
  IrreducibleStream(ff::FieldCtx field, unsigned degree);
  std::optional<FqPoly> next();

 private:
  ff::FieldCtx field_;
  unsigned degree_;
  std::uint64_t cursor_ = 0;
  std::uint64_t end_ = 0;
};

std::vector<FqPoly> irreducibles_of_degree(const ff::FieldCtx& field, unsigned degree);

/// Distinct monic irreducible factors, by trial division (small degrees).
std::vector<FqPoly> prime_factors(const ff::FieldCtx& field, const FqPoly& p);

// ---------------------------------------------------------------------------
// L-functions: polynomials in U over F_q[T].

struct LFun {
  ff::FieldCtx field;
  std::vector<FqPoly> coeffs;  // coeffs[j] multiplies U^j; trailing zeros trimmed

  int deg_u() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
  FqPoly coeff(std::size_t j) const { return j < coeffs.size() ? coeffs[j] : FqPoly{}; }
  friend bool operator==(const LFun& a, const LFun& b) { return a.field == b.field && a.coeffs == b.coeffs; }
};

LFun lfun_one(const ff::FieldCtx& field);
LFun lfun_make(const ff::FieldCtx& field, std::vector<FqPoly> coeffs);
LFun lfun_mul(const LFun& a, const LFun& b);
LFun lfun_truncate(const LFun& a, std::size_t max_deg);
/// L(U) evaluated at U = gamma, an element of F_q[T].
FqPoly lfun_eval_u(const LFun& a, ff::Elem gamma);

/// Largest r with (U - gamma)^r | L, by repeated exact division.
/// Throws std::invalid_argument for gamma = 0.
unsigned lfun_order_at(const LFun& l, ff::Elem gamma);

namespace tmap {
struct Identity {};
struct Shift { ff::Elem d; };   ///< T -> T - d
struct Scale { ff::Elem c; };   ///< T -> c^{-1} T
struct Power { unsigned k; };   ///< T -> T^{q^k}
struct Invert { unsigned n; };  ///< U^j coefficient -> (-1)^{nj} T^{nj} C_j(1/T)
}  // namespace tmap
using TMap = std::variant<tmap::Identity, tmap::Shift, tmap::Scale, tmap::Power, tmap::Invert>;

/// Applies a T-substitution coefficientwise, then U -> u_scale * U.
/// Throws std::invalid_argument when Invert's degree bound fails.
LFun lfun_substitute(const LFun& l, const TMap& t_map, ff::Elem u_scale = 1);

}  // namespace poly
}  // namespace clrank

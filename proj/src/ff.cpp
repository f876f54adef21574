#include "clrank/ff.hpp"

#include <algorithm>
#include <string>

namespace clrank::ff {

namespace {

using Digits = std::vector<Elem>;

void trim(Digits& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Remainder of a modulo monic b over F_p.
Digits rem_monic(Digits a, const Digits& b, std::uint32_t p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  while (a.size() > db) {
    const Elem lead = a.back();
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) {
      a[shift + i] = (a[shift + i] + (p - lead) * b[i] % p) % p;
    }
    trim(a);
  }
  return a;
}

Digits mulmod(const Digits& a, const Digits& b, const Digits& f, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Digits r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = static_cast<Elem>((r[i + j] + std::uint64_t(a[i]) * b[j]) % p);
  return rem_monic(std::move(r), f, p);
}

Digits to_digits(std::uint64_t code, std::uint32_t p, std::size_t len) {
  Digits d(len, 0);
  for (std::size_t i = 0; i < len; ++i) {
    d[i] = static_cast<Elem>(code % p);
    code /= p;
  }
  return d;
}

std::uint64_t from_digit_vec(const Digits& d, std::uint32_t p) {
  std::uint64_t code = 0;
  for (std::size_t i = d.size(); i-- > 0;) code = code * p + d[i];
  return code;
}

// Trial division by every monic polynomial of degree 1..deg/2.
bool irreducible_over_prime(const Digits& f, std::uint32_t p) {
  const std::size_t deg = f.size() - 1;
  if (deg <= 1) return deg == 1;
  for (std::size_t d = 1; d <= deg / 2; ++d) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t c = 0; c < count; ++c) {
      Digits g = to_digits(c, p, d + 1);
      g[d] = 1;
      if (rem_monic(f, g, p).empty()) return false;
    }
  }
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint32_t binom_mod_p(std::uint64_t j, std::uint64_t i, std::uint32_t p) {
  if (!is_prime(p)) throw std::invalid_argument("binom_mod_p: modulus must be prime");
  if (i > j) return 0;
  // Small Pascal row per digit pair; digits are < p.
  std::uint64_t result = 1;
  while (j > 0 || i > 0) {
    const std::uint64_t jd = j % p, id = i % p;
    if (id > jd) return 0;
    // C(jd, id) mod p with jd < p: multiplicative formula with inverses.
    std::uint64_t num = 1, den = 1;
    for (std::uint64_t t = 0; t < id; ++t) {
      num = num * ((jd - t) % p) % p;
      den = den * ((t + 1) % p) % p;
    }
    // den is a product of units below p, so it is invertible.
    std::uint64_t inv = 1, base = den, exp = p - 2;
    while (exp) {
      if (exp & 1) inv = inv * base % p;
      base = base * base % p;
      exp >>= 1;
    }
    result = result * (num * inv % p) % p;
    j /= p;
    i /= p;
  }
  return static_cast<std::uint32_t>(result);
}

FieldCtx FieldCtx::make(std::uint32_t p, std::uint32_t e) {
  if (!is_prime(p)) throw std::invalid_argument("field: characteristic " + std::to_string(p) + " is not prime");
  if (e == 0) throw std::invalid_argument("field: extension degree must be >= 1");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < e; ++i) {
    q *= p;
    if (q > kMaxFieldSize) throw std::invalid_argument("field: p^e exceeds the supported size 2^16");
  }
  if (e == 1) return build(p, {});
  const std::uint64_t lower = q;  // p^e choices of the lower coefficients
  for (std::uint64_t c = 0; c < lower; ++c) {
    Digits f = to_digits(c, p, e + 1);
    f[e] = 1;
    if (f[0] == 0) continue;
    if (irreducible_over_prime(f, p)) return build(p, std::move(f));
  }
  throw std::logic_error("field: no irreducible polynomial found");
}

FieldCtx FieldCtx::with_modulus(std::uint32_t p, std::vector<Elem> modulus) {
  if (!is_prime(p)) throw std::invalid_argument("field: characteristic " + std::to_string(p) + " is not prime");
  trim(modulus);
  if (modulus.size() < 2 || modulus.back() != 1)
    throw std::invalid_argument("field: modulus must be monic of degree >= 1");
  for (Elem c : modulus)
    if (c >= p) throw std::invalid_argument("field: modulus coefficient out of range");
  if (modulus.size() == 2) return build(p, {});
  if (!irreducible_over_prime(modulus, p)) throw std::invalid_argument("field: modulus is reducible");
  std::uint64_t q = 1;
  for (std::size_t i = 1; i < modulus.size(); ++i) {
    q *= p;
    if (q > kMaxFieldSize) throw std::invalid_argument("field: p^e exceeds the supported size 2^16");
  }
  return build(p, std::move(modulus));
}

FieldCtx FieldCtx::of_order(std::uint64_t q) {
  if (q < 2) throw std::invalid_argument("field: order must be a prime power >= 2");
  const auto ps = prime_factors(q);
  if (ps.size() != 1) throw std::invalid_argument("field: order " + std::to_string(q) + " is not a prime power");
  std::uint32_t e = 0;
  for (std::uint64_t t = q; t > 1; t /= ps[0]) ++e;
  return make(static_cast<std::uint32_t>(ps[0]), e);
}

FieldCtx FieldCtx::build(std::uint32_t p, std::vector<Elem> modulus) {
  auto t = std::make_shared<Tables>();
  t->p = p;
  t->e = modulus.empty() ? 1 : static_cast<std::uint32_t>(modulus.size() - 1);
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < t->e; ++i) q *= p;
  t->q = static_cast<std::uint32_t>(q);
  t->modulus = std::move(modulus);

  const std::uint64_t order = q - 1;
  const auto factors = prime_factors(order);
  // Multiplication of digit vectors in this representation.
  const Digits f = t->e == 1 ? Digits{0, 1} : t->modulus;
  auto code_mul = [&](std::uint64_t a, std::uint64_t b) -> std::uint64_t {
    if (t->e == 1) return a * b % p;
    return from_digit_vec(mulmod(to_digits(a, p, t->e), to_digits(b, p, t->e), f, p), p);
  };
  auto code_pow = [&](std::uint64_t a, std::uint64_t k) {
    std::uint64_t r = 1;
    while (k) {
      if (k & 1) r = code_mul(r, a);
      a = code_mul(a, a);
      k >>= 1;
    }
    return r;
  };

  std::uint64_t gen = 1;
  if (q > 2) {
    for (std::uint64_t g = 2; g < q; ++g) {
      bool primitive = true;
      for (auto r : factors)
        if (code_pow(g, order / r) == 1) {
          primitive = false;
          break;
        }
      if (primitive) {
        gen = g;
        break;
      }
    }
  }
  t->exp.assign(2 * order, 0);
  t->log.assign(q, 0);
  std::uint64_t x = 1;
  for (std::uint64_t i = 0; i < order; ++i) {
    t->exp[i] = static_cast<Elem>(x);
    t->log[x] = static_cast<std::uint32_t>(i);
    x = code_mul(x, gen);
  }
  for (std::uint64_t i = order; i < 2 * order; ++i) t->exp[i] = t->exp[i - order];

  t->neg_table.assign(q, 0);
  for (std::uint64_t a = 0; a < q; ++a) {
    Digits d = to_digits(a, p, t->e);
    for (auto& c : d) c = (p - c) % p;
    t->neg_table[a] = static_cast<Elem>(from_digit_vec(d, p));
  }
  if (p != 2 && t->e > 1 && q <= 1024) {
    t->add_table.assign(q * q, 0);
    for (std::uint64_t a = 0; a < q; ++a) {
      const Digits da = to_digits(a, p, t->e);
      for (std::uint64_t b = 0; b < q; ++b) {
        Digits db = to_digits(b, p, t->e);
        for (std::size_t i = 0; i < db.size(); ++i) db[i] = (db[i] + da[i]) % p;
        t->add_table[a * q + b] = static_cast<std::uint16_t>(from_digit_vec(db, p));
      }
    }
  }
  return FieldCtx(std::move(t));
}

Elem FieldCtx::add_digits(Elem a, Elem b) const noexcept {
  const std::uint32_t p = t_->p;
  Elem r = 0, scale = 1;
  while (a || b) {
    r += ((a % p + b % p) % p) * scale;
    a /= p;
    b /= p;
    scale *= p;
  }
  return r;
}

Elem FieldCtx::inv(Elem a) const {
  if (a == 0) throw std::domain_error("field: inverse of zero");
  const std::uint32_t order = t_->q - 1;
  return t_->exp[(order - t_->log[a]) % order];
}

Elem FieldCtx::pow(Elem a, std::uint64_t k) const noexcept {
  if (k == 0) return 1;
  if (a == 0) return 0;
  const std::uint64_t order = t_->q - 1;
  return t_->exp[(std::uint64_t(t_->log[a]) * (k % order)) % order];
}

Elem FieldCtx::frobenius(Elem a, std::uint64_t k) const noexcept {
  if (a == 0) return 0;
  const std::uint64_t order = t_->q - 1;
  std::uint64_t l = t_->log[a];
  for (std::uint64_t i = 0; i < k % t_->e; ++i) l = l * t_->p % order;
  return t_->exp[l];
}

Elem FieldCtx::from_int(std::int64_t x) const noexcept {
  const std::int64_t p = t_->p;
  std::int64_t r = x % p;
  if (r < 0) r += p;
  return static_cast<Elem>(r);
}

std::vector<Elem> FieldCtx::digits(Elem a) const { return to_digits(a, t_->p, t_->e); }

Elem FieldCtx::from_digits(const std::vector<Elem>& d) const {
  if (d.size() > t_->e) throw std::invalid_argument("field: too many digits");
  for (Elem c : d)
    if (c >= t_->p) throw std::invalid_argument("field: digit out of range");
  return static_cast<Elem>(from_digit_vec(d, t_->p));
}

Extension make_extension(const FieldCtx& base, std::uint32_t e) {
  if (e == 0) throw std::invalid_argument("extension: degree must be >= 1");
  const std::uint32_t p = base.characteristic();
  if (e == 1) {
    Extension ext{base, {}};
    ext.embed.resize(base.size());
    for (Elem x = 0; x < base.size(); ++x) ext.embed[x] = x;
    return ext;
  }
  FieldCtx big = FieldCtx::make(p, base.degree() * e);
  Extension ext{big, std::vector<Elem>(base.size(), 0)};
  if (base.degree() == 1) {
    for (Elem x = 0; x < base.size(); ++x) ext.embed[x] = x;
    return ext;
  }
  // Find a root of the base modulus in the big field; base elements are
  // polynomials in that root.
  const auto& mu = base.modulus();
  for (Elem rho = 0; rho < big.size(); ++rho) {
    Elem acc = 0;
    for (std::size_t i = mu.size(); i-- > 0;) acc = big.add(big.mul(acc, rho), big.from_int(mu[i]));
    if (acc != 0) continue;
    for (Elem x = 0; x < base.size(); ++x) {
      const auto d = base.digits(x);
      Elem v = 0;
      for (std::size_t i = d.size(); i-- > 0;) v = big.add(big.mul(v, rho), big.from_int(d[i]));
      ext.embed[x] = v;
    }
    return ext;
  }
  throw std::logic_error("extension: base modulus has no root");
}

}  // namespace clrank::ff

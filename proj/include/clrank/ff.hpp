#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

namespace clrank::ff {

/// Field element code.  For F_{p^e} the code is the integer whose base-p
/// digits are the coefficients (little-endian) of the representing
/// polynomial modulo the field's defining polynomial.
using Elem = std::uint32_t;

/// Largest supported field size.  Arithmetic is table driven, so every
/// context keeps O(size) words of log/antilog data.
inline constexpr std::uint32_t kMaxFieldSize = 1u << 16;

bool is_prime(std::uint64_t n) noexcept;

/// Binomial coefficient C(j, i) mod p via base-p digit products (Lucas).
/// Returns 0 when i > j.
std::uint32_t binom_mod_p(std::uint64_t j, std::uint64_t i, std::uint32_t p);

/// The finite field F_{p^e}.  A cheap, immutable handle: copies share tables.
class FieldCtx {
 public:
  using Elem = ff::Elem;

  /// F_{p^e}; for e > 1 the defining polynomial is the monic irreducible of
  /// degree e whose lower coefficients, read as a base-p integer, are least.
  static FieldCtx make(std::uint32_t p, std::uint32_t e = 1);
  /// F_{p^e} defined by an explicit monic irreducible (little-endian digits).
  static FieldCtx with_modulus(std::uint32_t p, std::vector<Elem> modulus);
  /// Field of order q; q must be a prime power.
  static FieldCtx of_order(std::uint64_t q);

  std::uint32_t characteristic() const noexcept { return t_->p; }
  std::uint32_t degree() const noexcept { return t_->e; }
  std::uint32_t size() const noexcept { return t_->q; }
  /// Defining polynomial over F_p, little-endian and monic; empty when e = 1.
  const std::vector<Elem>& modulus() const noexcept { return t_->modulus; }

  Elem zero() const noexcept { return 0; }
  Elem one() const noexcept { return 1; }
  bool is_zero(Elem a) const noexcept { return a == 0; }
  bool valid(Elem a) const noexcept { return a < t_->q; }

  Elem add(Elem a, Elem b) const noexcept {
    const Tables& t = *t_;
    if (t.e == 1) {
      Elem s = a + b;
      return s >= t.p ? s - t.p : s;
    }
    if (t.p == 2) return a ^ b;
    if (!t.add_table.empty()) return t.add_table[std::size_t(a) * t.q + b];
    return add_digits(a, b);
  }
  Elem neg(Elem a) const noexcept { return t_->neg_table[a]; }
  Elem sub(Elem a, Elem b) const noexcept { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const noexcept {
    if (a == 0 || b == 0) return 0;
    return t_->exp[t_->log[a] + t_->log[b]];
  }
  /// Throws std::domain_error on zero.
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::uint64_t k) const noexcept;
  /// a^{p^k}: the k-th power of the absolute Frobenius.
  Elem frobenius(Elem a, std::uint64_t k) const noexcept;
  /// Image of an integer in the prime subfield.
  Elem from_int(std::int64_t x) const noexcept;

  /// A fixed generator of the multiplicative group.
  Elem generator() const noexcept { return t_->exp[1]; }
  std::vector<Elem> digits(Elem a) const;
  Elem from_digits(const std::vector<Elem>& d) const;

  friend bool operator==(const FieldCtx& a, const FieldCtx& b) noexcept {
    return a.t_ == b.t_ || (a.t_->p == b.t_->p && a.t_->e == b.t_->e &&
                            a.t_->modulus == b.t_->modulus);
  }

 private:
  struct Tables {
    std::uint32_t p = 0, e = 0, q = 0;
    std::vector<Elem> modulus;
    std::vector<std::uint32_t> log;  // log[0] unused
    std::vector<Elem> exp;           // length 2(q-1)
    std::vector<Elem> neg_table;
    std::vector<std::uint16_t> add_table;  // only for odd p, e > 1, q <= 1024
  };
  explicit FieldCtx(std::shared_ptr<const Tables> t) : t_(std::move(t)) {}
  static FieldCtx build(std::uint32_t p, std::vector<Elem> modulus);
  Elem add_digits(Elem a, Elem b) const noexcept;

  std::shared_ptr<const Tables> t_;
};

/// A degree-e extension of `base` realised as a prime-power field, with the
/// embedding of base elements.
struct Extension {
  FieldCtx field;
  std::vector<Elem> embed;  // embed[x] for every x in base
};

Extension make_extension(const FieldCtx& base, std::uint32_t e);

}  // namespace clrank::ff

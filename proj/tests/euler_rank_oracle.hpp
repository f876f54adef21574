#pragma once

// Analytic rank from the Euler product alone, evaluated at points of an
// extension field.  Shares no code with the determinant route beyond field
// arithmetic and the list of monic irreducibles.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "clrank/ff.hpp"
#include "clrank/poly.hpp"

namespace oracle {

using clrank::ff::Elem;
using clrank::ff::FieldCtx;

class EulerRank {
 public:
  /// Ranks of all P with deg P = m for the n-th twisted power over F_q (q prime).
  EulerRank(std::uint32_t q, unsigned n, unsigned m) : base_(FieldCtx::of_order(q)), q_(q), n_(n), m_(m) {
    if (!clrank::ff::is_prime(q)) throw std::invalid_argument("EulerRank: prime q only");
    deg_ = (m + n + q - 2) / (q - 1);  // U-degree bound of L
    const unsigned points = n * deg_ + 1;
    unsigned e = 1;
    std::uint64_t size = q;
    while (size < points) size *= q, ++e;
    if (e == 1) {
      ext_ = base_;
      for (Elem x = 0; x < q; ++x) embed_.push_back(x);
    } else {
      auto x = clrank::ff::make_extension(base_, e);
      ext_ = x.field;
      embed_ = x.embed;
    }
    for (unsigned i = 0; i < points; ++i) points_.push_back(i);
    for (unsigned d = 1; d <= deg_; ++d)
      for (const auto& p : clrank::poly::irreducibles_of_degree(base_, d)) add_prime(p);
  }

  unsigned degree_bound() const { return deg_; }

  /// Order of vanishing at U = 1 of L, from the truncated Euler product.
  unsigned rank(const std::vector<Elem>& coeffs) const {
    if (coeffs.size() != m_ + 1) throw std::invalid_argument("EulerRank: wrong degree");
    std::vector<Elem> norms(primes_.size());
    for (std::size_t k = 0; k < primes_.size(); ++k) norms[k] = norm_of(primes_[k], coeffs);
    unsigned best = deg_ + 1;
    std::vector<Elem> s(deg_ + 1);
    for (std::size_t pi = 0; pi < points_.size() && best > 0; ++pi) {
      std::fill(s.begin(), s.end(), 0);
      s[0] = 1;
      for (std::size_t k = 0; k < primes_.size(); ++k) {
        if (!norms[k]) continue;
        const auto& pr = primes_[k];
        const Elem c = ext_.mul(embed_[norms[k]], pr.at_point_pow_n[pi]);
        for (unsigned j = pr.degree; j <= deg_; ++j) s[j] = ext_.add(s[j], ext_.mul(c, s[j - pr.degree]));
      }
      best = std::min(best, order_at_one(s));
    }
    return best;
  }

 private:
  struct Prime {
    unsigned degree;
    std::vector<std::vector<Elem>> x_pow;   // theta^i mod prime, digits, i <= m
    std::vector<Elem> norm_table;           // residue code -> norm
    std::vector<Elem> at_point_pow_n;       // prime(t)^n per point
  };

  void add_prime(const clrank::poly::FqPoly& p) {
    Prime pr;
    pr.degree = static_cast<unsigned>(p.degree());
    const unsigned d = pr.degree;
    // theta^i mod p by repeated multiplication by theta
    std::vector<Elem> cur(d, 0);
    cur[0] = 1;
    if (d == 0) throw std::logic_error("constant prime");
    for (unsigned i = 0; i <= m_; ++i) {
      pr.x_pow.push_back(cur);
      const Elem top = cur[d - 1];
      for (unsigned j = d - 1; j > 0; --j) cur[j] = cur[j - 1];
      cur[0] = 0;
      for (unsigned j = 0; j < d; ++j) cur[j] = base_.sub(cur[j], base_.mul(top, p.coeffs[j]));
    }
    // Norm of every residue: r^{(q^d - 1)/(q - 1)} in F_q[x]/p.
    std::uint64_t size = 1;
    for (unsigned i = 0; i < d; ++i) size *= q_;
    std::uint64_t exponent = (size - 1) / (q_ - 1);
    pr.norm_table.assign(size, 0);
    for (std::uint64_t code = 1; code < size; ++code) {
      std::vector<Elem> r(d);
      std::uint64_t c = code;
      for (unsigned j = 0; j < d; ++j) r[j] = static_cast<Elem>(c % q_), c /= q_;
      const auto v = powmod(r, exponent, p);
      for (unsigned j = 1; j < d; ++j)
        if (v[j]) throw std::logic_error("norm outside the base field");
      pr.norm_table[code] = v[0];
    }
    for (auto t : points_) {
      Elem v = 0;
      for (std::size_t i = p.coeffs.size(); i-- > 0;) v = ext_.add(ext_.mul(v, t), embed_[p.coeffs[i]]);
      pr.at_point_pow_n.push_back(ext_.pow(v, n_));
    }
    primes_.push_back(std::move(pr));
  }

  std::vector<Elem> mulmod(const std::vector<Elem>& a, const std::vector<Elem>& b,
                           const clrank::poly::FqPoly& p) const {
    const unsigned d = static_cast<unsigned>(p.degree());
    std::vector<Elem> r(2 * d, 0);
    for (unsigned i = 0; i < d; ++i)
      for (unsigned j = 0; j < d; ++j) r[i + j] = base_.add(r[i + j], base_.mul(a[i], b[j]));
    for (unsigned top = 2 * d - 1; top >= d; --top) {
      const Elem c = r[top];
      if (c)
        for (unsigned j = 0; j <= d; ++j) r[top - d + j] = base_.sub(r[top - d + j], base_.mul(c, p.coeffs[j]));
      if (top == d) break;
    }
    r.resize(d);
    return r;
  }

  std::vector<Elem> powmod(std::vector<Elem> a, std::uint64_t k, const clrank::poly::FqPoly& p) const {
    std::vector<Elem> r(a.size(), 0);
    r[0] = 1;
    while (k) {
      if (k & 1) r = mulmod(r, a, p);
      a = mulmod(a, a, p);
      k >>= 1;
    }
    return r;
  }

  Elem norm_of(const Prime& pr, const std::vector<Elem>& coeffs) const {
    std::vector<Elem> res(pr.degree, 0);
    for (unsigned i = 0; i <= m_; ++i) {
      if (!coeffs[i]) continue;
      for (unsigned j = 0; j < pr.degree; ++j) res[j] = base_.add(res[j], base_.mul(coeffs[i], pr.x_pow[i][j]));
    }
    std::uint64_t code = 0;
    for (unsigned j = pr.degree; j-- > 0;) code = code * q_ + res[j];
    return pr.norm_table[code];
  }

  unsigned order_at_one(std::vector<Elem> s) const {
    unsigned r = 0;
    while (true) {
      // synthetic division by (U - 1)
      Elem acc = 0;
      std::vector<Elem> quo(s.size(), 0);
      for (std::size_t i = s.size(); i-- > 0;) {
        acc = ext_.add(s[i], acc);
        if (i) quo[i - 1] = acc;
      }
      bool zero = true;
      for (auto x : s) zero = zero && x == 0;
      if (zero) throw std::logic_error("L vanished identically at a point");
      if (acc) return r;
      quo.pop_back();
      s = std::move(quo);
      ++r;
    }
  }

  FieldCtx base_, ext_ = base_;
  std::uint32_t q_;
  unsigned n_, m_, deg_ = 0;
  std::vector<Elem> embed_, points_;
  std::vector<Prime> primes_;
};

}  // namespace oracle

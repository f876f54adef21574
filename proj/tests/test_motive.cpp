#include <doctest.h>

#include <random>

#include "clrank/motive.hpp"
#include "clrank/scan.hpp"
#include "helpers.hpp"

using namespace clrank;
using namespace testing_util;
using motive::TMatrix;

namespace {

using TRing = poly::FqPolyRing;
using TURing = poly::PolyRing<TRing>;

/// Laplace expansion along the first row.
TURing::Elem laplace(const TURing& ring, const std::vector<std::vector<TURing::Elem>>& a) {
  const std::size_t k = a.size();
  if (k == 0) return ring.one();
  TURing::Elem acc = ring.zero();
  for (std::size_t j = 0; j < k; ++j) {
    if (ring.is_zero(a[0][j])) continue;
    std::vector<std::vector<TURing::Elem>> minor;
    for (std::size_t i = 1; i < k; ++i) {
      std::vector<TURing::Elem> row;
      for (std::size_t c = 0; c < k; ++c)
        if (c != j) row.push_back(a[i][c]);
      minor.push_back(std::move(row));
    }
    auto term = ring.mul(a[0][j], laplace(ring, minor));
    acc = j % 2 ? ring.sub(acc, term) : ring.add(acc, term);
  }
  return acc;
}

poly::LFun det_by_cofactors(const FieldCtx& f, const TMatrix& m) {
  const TRing tr(f);
  const TURing ring(tr);
  std::vector<std::vector<TURing::Elem>> a(m.rows, std::vector<TURing::Elem>(m.cols));
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) {
      // I - m U as a polynomial in U with F_q[T] coefficients
      std::vector<FqPoly> c{i == j ? tr.one() : tr.zero(), tr.neg(m(i, j))};
      a[i][j] = ring.make(std::move(c));
    }
  return poly::lfun_make(f, laplace(ring, a).coeffs);
}

}  // namespace

TEST_CASE("matrix entries") {
  // P = 2 theta + 2 theta^3: a_1 = a_3 = -1.
  const auto t = tp(3, {0, 2, 0, 2}, 1);
  CHECK(t.k_min() == 2);
  const auto m = motive::build_matrix(t, 2);
  CHECK(m.k == 2);
  CHECK(m.entries(0, 0) == fq({1}));
  CHECK(m.entries(0, 1) == fq({0, 2}));
  CHECK(m.entries(1, 0).is_zero());
  CHECK(m.entries(1, 1) == fq({1}));

  CHECK(motive::build_matrix(tp(3, {1}, 1), 1).entries(0, 0).is_zero());
  CHECK(motive::build_matrix(tp(3, {1}, 2), 1).entries(0, 0) == fq({1}));
  CHECK_THROWS_AS(motive::build_matrix(t, 1), std::invalid_argument);
}

TEST_CASE("matrix entries match the defining sum") {
  std::mt19937_64 rng(21);
  for (std::uint64_t q : {2, 3, 4, 5}) {
    const auto f = F(q);
    for (int it = 0; it < 20; ++it) {
      const auto p = random_poly(rng, f, it % 9);
      const unsigned n = 1 + it % 3;
      const motive::TwistedPower t(f, p, n);
      const auto w = motive::matrix_window(t, 6, 6);
      const TRing ring(f);
      for (std::size_t i = 1; i <= 6; ++i)
        for (std::size_t j = 1; j <= 6; ++j) {
          FqPoly e;
          for (unsigned l = 0; l <= n; ++l) {
            const long idx = static_cast<long>(i * q) - static_cast<long>(j) - static_cast<long>(l);
            Elem c = f.mul(t.coeff(idx), f.from_int(ff::binom_mod_p(n, l, f.characteristic())));
            if (l % 2) c = f.neg(c);
            e = ring.add(e, ring.monomial(c, n - l));
          }
          CHECK(w(i - 1, j - 1) == e);
          CHECK(w(i - 1, j - 1).degree() <= static_cast<int>(n));
        }
    }
  }
}

TEST_CASE("rows past the minimal size vanish on and below the diagonal") {
  std::mt19937_64 rng(2);
  for (std::uint64_t q : {2, 3, 4}) {
    const auto f = F(q);
    for (int it = 0; it < 20; ++it) {
      const motive::TwistedPower t(f, random_poly(rng, f, it % 10), 1 + it % 2);
      const unsigned k = t.k_min() + 3;
      const auto m = motive::build_matrix(t, k);
      for (unsigned i = t.k_min(); i < k; ++i)
        for (unsigned j = 0; j <= i; ++j) CHECK(m.entries(i, j).is_zero());
    }
  }
}

TEST_CASE("L-function examples") {
  CHECK(motive::l_function(tp(3, {1}, 1)) == lfun(3, {{1}}));
  CHECK(motive::l_function(tp(3, {0, 2, 0, 2}, 1)) == lfun(3, {{1}, {1}, {1}}));
  CHECK(motive::analytic_rank(tp(3, {1}, 1)) == 0);
  CHECK(motive::analytic_rank(tp(3, {0, 2, 0, 2}, 1)) == 2);
  CHECK_THROWS_AS(tp(3, {0}, 1), std::invalid_argument);
  CHECK_THROWS_AS(tp(3, {1}, 0), std::invalid_argument);
}

TEST_CASE("the degree-21 shift-stable witness has rank 5") {
  const auto f3 = F(3);
  const auto p = scan::shift_stable_expand(f3, {0, 2, 0, 1, 0, 1, 0, 1});
  CHECK(p.degree() == 21);
  CHECK(motive::analytic_rank(motive::TwistedPower(f3, p, 1)) == 5);
}

TEST_CASE("leading-coefficient coset forces a zero at U = 1") {
  std::mt19937_64 rng(4);
  const auto f3 = F(3);
  for (int it = 0; it < 60; ++it) {
    const unsigned m = 1 + 2 * (it % 5);  // odd
    auto p = random_poly(rng, f3, m);
    p.coeffs.back() = 2;
    const auto l = motive::l_function(motive::TwistedPower(f3, p, 1));
    CHECK(poly::lfun_order_at(l, 1) >= 1);
  }
}

TEST_CASE("infinity factor") {
  const auto t = tp(3, {1, 0, 0, 2}, 1);  // m = 3, a_3 = 2
  CHECK(motive::infinity_factor(t, -2) == lfun(3, {{1}, {2}}));
  CHECK(motive::infinity_factor(t, -3) == lfun(3, {{1}}));
  CHECK_THROWS_AS(motive::infinity_factor(t, -1), std::invalid_argument);
  const auto odd = tp(3, {1, 1, 1}, 1);  // m + n = 3
  CHECK(motive::infinity_factor(odd, -2) == lfun(3, {{1}}));
  CHECK_THROWS_AS(motive::infinity_factor(odd, -1), std::invalid_argument);
  CHECK(motive::infinity_factor(tp(3, {2, 0, 1}, 2), -2) == lfun(3, {{1}, {2}}));  // 1 - U
}

TEST_CASE("boundary row splits off the infinity factor") {
  std::mt19937_64 rng(8);
  for (std::uint64_t q : {2, 3, 4, 5}) {
    const auto f = F(q);
    for (int it = 0; it < 25; ++it) {
      const motive::TwistedPower t(f, random_poly(rng, f, it % 9), 1 + it % 3);
      if (!t.boundary_divisible()) continue;
      const long boundary = -static_cast<long>((t.m() + t.n()) / (q - 1));
      const auto rhs = poly::lfun_mul(motive::infinity_factor(t, boundary), motive::det_at_size(t, t.k_min() - 1));
      CHECK(motive::l_function(t) == rhs);
    }
  }
}

TEST_CASE("Berkowitz agrees with cofactor expansion") {
  std::mt19937_64 rng(13);
  for (std::uint64_t q : {3, 4}) {
    const auto f = F(q);
    for (std::size_t k = 1; k <= 5; ++k)
      for (int it = 0; it < 8; ++it) {
        TMatrix a(k, k, FqPoly{});
        std::uniform_int_distribution<int> deg(-1, 2);
        for (auto& e : a.data) {
          const int d = deg(rng);
          e = d < 0 ? FqPoly{} : random_poly(rng, f, static_cast<unsigned>(d));
        }
        CHECK(motive::char_det(f, a) == det_by_cofactors(f, a));
      }
  }
}

TEST_CASE("determinant is stable beyond the minimal size") {
  std::mt19937_64 rng(17);
  for (int it = 0; it < 50; ++it) {
    const auto f = F(it % 2 ? 3 : 2);
    const motive::TwistedPower t(f, random_poly(rng, f, it % 13), 1 + it % 3);
    const auto l = motive::l_function(t);
    CHECK(motive::det_at_size(t, t.k_min() + 1) == l);
    CHECK(motive::det_at_size(t, t.k_min() + 2) == l);
    CHECK(l.coeff(0) == fq({1}));
    CHECK(l.deg_u() <= static_cast<int>(t.k_min()));
    for (std::size_t j = 0; j < l.coeffs.size(); ++j) CHECK(l.coeffs[j].degree() <= static_cast<int>(t.n() * j));
  }
}

TEST_CASE("D coefficients") {
  const auto d1 = motive::d_coefficients(lfun(3, {{1}}), 1);
  REQUIRE(d1.size() == 2);
  CHECK(d1[0] == fq({1}));
  const auto d2 = motive::d_coefficients(lfun(3, {{1}, {1}, {1}}), 2);
  REQUIRE(d2.size() == 3);
  CHECK(d2[0].is_zero());
  CHECK(d2[1].is_zero());
  CHECK_FALSE(d2[2].is_zero());
  CHECK_THROWS_AS(motive::d_coefficients(lfun(3, {{1}, {1}, {1}}), 1), std::invalid_argument);

  std::mt19937_64 rng(19);
  const auto f3 = F(3);
  for (int it = 0; it < 100; ++it) {
    const motive::TwistedPower t(f3, random_poly(rng, f3, it % 10), 1);
    const auto l = motive::l_function(t);
    const auto d = motive::d_coefficients(l, t.k_min());
    unsigned lead_zeros = 0;
    while (lead_zeros < d.size() && d[lead_zeros].is_zero()) ++lead_zeros;
    CHECK(lead_zeros == motive::analytic_rank(t));
  }
}

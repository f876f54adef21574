#include <doctest.h>

#include <random>

#include "clrank/poly.hpp"
#include "helpers.hpp"

using namespace clrank;
using namespace testing_util;
using poly::FqPolyRing;

namespace {

/// Brute force: P is squarefree iff no monic g of positive degree has g^2 | P.
bool squarefree_by_search(const FieldCtx& f, const FqPoly& p) {
  const FqPolyRing ring(f);
  for (unsigned d = 1; 2 * d <= static_cast<unsigned>(p.degree()); ++d) {
    bool found = false;
    for_each_poly(f, d, [&](const FqPoly& g) {
      if (!found && g.lead() == 1 && ring.rem(p, ring.mul(g, g)).is_zero()) found = true;
    });
    if (found) return false;
  }
  return true;
}

std::int64_t mobius(unsigned n) {
  std::int64_t mu = 1;
  for (unsigned p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return 0;
      mu = -mu;
    }
  return n > 1 ? -mu : mu;
}

std::int64_t necklace(std::int64_t q, unsigned d) {
  std::int64_t sum = 0;
  for (unsigned e = 1; e <= d; ++e)
    if (d % e == 0) {
      std::int64_t pw = 1;
      for (unsigned i = 0; i < d / e; ++i) pw *= q;
      sum += mobius(e) * pw;
    }
  return sum / d;
}

}  // namespace

TEST_CASE("gcd") {
  const auto f3 = F(3);
  CHECK(poly::poly_gcd(f3, fq({2, 0, 1}), fq({2, 1})) == fq({2, 1}));
  CHECK(poly::poly_gcd(f3, fq({2, 1, 2}), FqPoly{}) == fq({1, 2, 1}));
  CHECK(poly::poly_gcd(f3, fq({0, 2, 0, 1}), fq({2, 0, 1})) == fq({2, 0, 1}));
  CHECK(poly::poly_gcd(f3, FqPoly{}, FqPoly{}).is_zero());
}

TEST_CASE("squarefree examples") {
  const auto f3 = F(3);
  CHECK_FALSE(poly::is_squarefree(f3, fq({0, 0, 0, 1})));
  CHECK(poly::is_squarefree(f3, fq({1, 0, 1})));
  CHECK_FALSE(poly::is_squarefree(f3, fq({0, 1, 2, 1})));  // (theta+1)^2 theta
  CHECK(poly::is_squarefree(f3, fq({2})));
  CHECK_THROWS_AS(poly::is_squarefree(f3, FqPoly{}), std::invalid_argument);
}

TEST_CASE("squarefree agrees with exhaustive search over F_3, degree <= 8") {
  const auto f3 = F(3);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 400; ++i) {
    const auto p = random_poly(rng, f3, 1 + i % 8);
    CHECK_MESSAGE(poly::is_squarefree(f3, p) == squarefree_by_search(f3, p), i);
  }
  for (unsigned m = 1; m <= 5; ++m)
    for_each_poly(f3, m, [&](const FqPoly& p) { CHECK(poly::is_squarefree(f3, p) == squarefree_by_search(f3, p)); });
}

TEST_CASE("irreducibles of a given degree") {
  const auto f3 = F(3);
  CHECK(poly::irreducibles_of_degree(f3, 1) == std::vector<FqPoly>{fq({0, 1}), fq({1, 1}), fq({2, 1})});
  CHECK(poly::irreducibles_of_degree(f3, 2).size() == 3);
  CHECK(poly::irreducibles_of_degree(F(2), 3) == std::vector<FqPoly>{fq({1, 1, 0, 1}), fq({1, 0, 1, 1})});
  for (std::uint64_t q : {2, 3, 4, 5})
    for (unsigned d = 1; d <= 6; ++d) {
      if (q == 5 && d == 6) continue;  // 5^6 candidates is slow in a unit test
      const auto f = F(q);
      const auto list = poly::irreducibles_of_degree(f, d);
      CHECK_MESSAGE(static_cast<std::int64_t>(list.size()) == necklace(static_cast<std::int64_t>(q), d),
                    "q=" << q << " d=" << d);
      for (const auto& p : list) CHECK(p.lead() == 1);
    }
}

TEST_CASE("prime factors") {
  const auto f3 = F(3);
  const FqPolyRing ring(f3);
  const auto a = fq({0, 1}), b = fq({1, 0, 1}), c = fq({2, 1});
  const auto p = ring.scale(ring.mul(ring.mul(a, ring.mul(b, b)), c), 2);
  CHECK(poly::prime_factors(f3, p) == std::vector<FqPoly>{a, c, b});
}

TEST_CASE("ring axioms and division") {
  std::mt19937_64 rng(5);
  for (std::uint64_t q : {2, 3, 9}) {
    const auto f = F(q);
    const FqPolyRing ring(f);
    std::uniform_int_distribution<unsigned> deg(0, 7);
    for (int i = 0; i < 100; ++i) {
      const auto x = random_poly(rng, f, deg(rng)), y = random_poly(rng, f, deg(rng)), z = random_poly(rng, f, deg(rng));
      CHECK(ring.add(x, y) == ring.add(y, x));
      CHECK(ring.mul(x, y) == ring.mul(y, x));
      CHECK(ring.mul(ring.mul(x, y), z) == ring.mul(x, ring.mul(y, z)));
      CHECK(ring.mul(x, ring.add(y, z)) == ring.add(ring.mul(x, y), ring.mul(x, z)));
      CHECK(ring.sub(x, x).is_zero());
      const auto [quo, rem] = ring.divmod(x, y);
      CHECK(ring.add(ring.mul(quo, y), rem) == x);
      CHECK(rem.degree() < y.degree());
    }
  }
}

TEST_CASE("order of vanishing") {
  CHECK(poly::lfun_order_at(lfun(3, {{1}}), 1) == 0);
  CHECK(poly::lfun_order_at(lfun(3, {{1}, {1}, {1}}), 1) == 2);  // (1 - U)^2 over F_3
  CHECK(poly::lfun_order_at(lfun(3, {{1}, {2, 2}}), 1) == 0);     // 1 - (T + 1) U
  CHECK(poly::lfun_order_at(lfun(3, {{1}, {1}}), 2) == 1);        // 1 + U = 1 - 2U
  CHECK_THROWS_AS(poly::lfun_order_at(lfun(3, {{1}}), 0), std::invalid_argument);
}

TEST_CASE("substitutions") {
  const auto l = lfun(3, {{1}, {0, 2}});  // 1 - T U
  CHECK(poly::lfun_substitute(l, poly::tmap::Shift{1}) == lfun(3, {{1}, {1, 2}}));  // 1 - (T - 1) U
  CHECK(poly::lfun_substitute(l, poly::tmap::Identity{}, 2) == lfun(3, {{1}, {0, 1}}));
  // (-1)^{nj} T^{nj} C_j(1/T) with C_1 = -T gives 1 + U.
  CHECK(poly::lfun_substitute(l, poly::tmap::Invert{1}) == lfun(3, {{1}, {1}}));
  CHECK(poly::lfun_substitute(l, poly::tmap::Scale{2}) == lfun(3, {{1}, {0, 1}}));  // T -> 2T
  CHECK(poly::lfun_substitute(l, poly::tmap::Power{1}) == lfun(3, {{1}, {0, 0, 0, 2}}));
  CHECK_THROWS_AS(poly::lfun_substitute(lfun(3, {{1}, {0, 0, 1}}), poly::tmap::Invert{1}), std::invalid_argument);
}

TEST_CASE("order at gamma moves with the U scaling") {
  std::mt19937_64 rng(9);
  const auto f = F(5);
  for (int i = 0; i < 40; ++i) {
    // Build L with a prescribed zero at U = g0 and a random cofactor.
    std::uniform_int_distribution<Elem> nz(1, 4);
    const Elem g0 = nz(rng), s = nz(rng);
    const auto root = lfun(5, {{1}, {f.neg(f.inv(g0))}});  // 1 - U / g0
    auto l = poly::lfun_mul(root, root);
    l = poly::lfun_mul(l, lfun(5, {{1}, {random_poly(rng, f, 2).coeffs}}));
    const auto scaled = poly::lfun_substitute(l, poly::tmap::Identity{}, s);
    for (Elem g = 1; g < 5; ++g) CHECK(poly::lfun_order_at(l, g) == poly::lfun_order_at(scaled, f.div(g, s)));
    CHECK(poly::lfun_order_at(l, g0) >= 2);
  }
}

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "clrank/scan.hpp"
#include "euler_rank_oracle.hpp"
#include "helpers.hpp"

using namespace clrank;
using namespace testing_util;
using scan::Mode;
using scan::ScanSpec;

namespace {

ScanSpec spec_for(unsigned m, Elem a, unsigned n = 1, Mode mode = Mode::AllSquarefree) {
  ScanSpec s;
  s.q = 3;
  s.n = n;
  s.m = m;
  s.lead = a;
  s.mode = mode;
  return s;
}

std::uint64_t pow3(unsigned e) {
  std::uint64_t r = 1;
  while (e--) r *= 3;
  return r;
}

}  // namespace

TEST_CASE("shift-stable expansion") {
  const auto f3 = F(3);
  CHECK(scan::shift_stable_expand(f3, {0, 1}) == fq({0, 2, 0, 1}));
  CHECK(scan::shift_stable_expand(f3, {2, 0, 1}) == fq({2, 0, 1, 0, 1, 0, 1}));
  const auto w = scan::shift_stable_expand(f3, {0, 2, 0, 1, 0, 1, 0, 1});
  CHECK(w.degree() == 21);
  CHECK(w.lead() == 1);
}

TEST_CASE("squarefree test on raw coefficients") {
  std::mt19937_64 rng(3);
  for (std::uint64_t q : {2, 3, 4, 5}) {
    const auto f = F(q);
    for (int it = 0; it < 200; ++it) {
      const auto p = random_poly(rng, f, 1 + it % 9);
      CHECK(scan::squarefree_raw(f, p.coeffs.data(), static_cast<unsigned>(p.degree())) ==
            poly::is_squarefree(f, p));
    }
  }
}

TEST_CASE("fast rank kernel agrees with the full L-function") {
  std::mt19937_64 rng(77);
  for (std::uint64_t q : {2, 3, 4, 5, 7}) {
    const auto f = F(q);
    for (unsigned n = 1; n <= 3; ++n)
      for (unsigned m = 0; m <= 10; ++m) {
        if (!scan::RankKernel::supported(f, n, m)) continue;
        const scan::RankKernel kernel(f, n, m);
        for (int it = 0; it < 15; ++it) {
          const auto p = random_poly(rng, f, m);
          CHECK_MESSAGE(kernel.rank(p.coeffs.data()) == motive::analytic_rank(motive::TwistedPower(f, p, n)),
                        "q=" << q << " n=" << n << " m=" << m);
        }
      }
  }
  // Ranks >= 2 are rare at random; sweep a whole degree.
  const auto f3 = F(3);
  const scan::RankKernel k9(f3, 1, 9);
  unsigned high = 0;
  for_each_poly(f3, 9, [&](const FqPoly& p) {
    if (p.coeffs[1] != 2 || p.coeffs[0] != 0) return;  // a slice keeps this quick
    const unsigned r = k9.rank(p.coeffs.data());
    CHECK(r == motive::analytic_rank(motive::TwistedPower(f3, p, 1)));
    high += r >= 2;
  });
  CHECK(high > 0);
}

TEST_CASE("enumeration order and size") {
  const auto f3 = F(3);
  auto s = spec_for(3, 2);
  CHECK(scan::enumeration_size(s) == 27);
  CHECK(scan::enumerate_at(f3, s, 0) == fq({0, 0, 0, 2}));
  CHECK(scan::enumerate_at(f3, s, 1) == fq({1, 0, 0, 2}));
  CHECK(scan::enumerate_at(f3, s, 3) == fq({0, 1, 0, 2}));
  auto st = spec_for(6, 1, 1, Mode::ShiftStable);
  CHECK(scan::enumeration_size(st) == 9);
  CHECK(scan::enumerate_at(f3, st, 1) == scan::shift_stable_expand(f3, {1, 0, 1}));
  CHECK_THROWS_AS(scan::validate(spec_for(7, 1, 1, Mode::ShiftStable)), std::invalid_argument);
  CHECK_THROWS_AS(scan::validate(spec_for(7, 0)), std::invalid_argument);
  auto big = spec_for(8, 1);
  big.cap = 100;
  CHECK_THROWS_AS(scan::run_scan(big), std::runtime_error);
  big.force = true;
  CHECK(scan::run_scan(big).at_least(8, 1, 2) == 3);
}

TEST_CASE("reference cells") {
  CHECK(scan::run_scan(spec_for(8, 1)).at_least(8, 1, 2) == 3);
  const auto t9 = scan::run_scan(spec_for(9, 2));
  CHECK(t9.at_least(9, 2, 2) == 165);
  CHECK(t9.at_least(9, 2, 3) == 6);
  CHECK(t9.max_rank() == 3);
  CHECK(t9.witnesses(9, 2, 3).size() == 6);
  CHECK(t9.audit_mismatches == 0);

  const auto st = scan::run_scan(spec_for(21, 1, 1, Mode::ShiftStable));
  CHECK(st.at_least(21, 1, 4) == 5);
  CHECK(st.exact(21, 1, 5) == 1);
  const auto f3 = F(3);
  REQUIRE(st.witnesses(21, 1, 5).size() == 1);
  CHECK(st.witnesses(21, 1, 5).front() == scan::shift_stable_expand(f3, {0, 2, 0, 1, 0, 1, 0, 1}));

  CHECK(scan::run_scan(spec_for(8, 1, 2)).at_least(8, 1, 2) == 9);
}

TEST_CASE("tallies agree with ranks from the Euler product") {
  const auto f3 = F(3);
  for (unsigned n : {1u, 2u})
    for (unsigned m : {5u, 7u, 8u}) {
      const oracle::EulerRank euler_rank(3, n, m);
      for (Elem a : {1u, 2u}) {
        std::map<unsigned, std::uint64_t> expect;
        for_each_poly(f3, m, [&](const FqPoly& p) {
          if (p.lead() != a || !poly::is_squarefree(f3, p)) return;
          ++expect[euler_rank.rank(p.coeffs)];
        });
        const auto table = scan::run_scan(spec_for(m, a, n));
        for (const auto& [r, count] : expect) CHECK_MESSAGE(table.exact(m, a, r) == count, "n=" << n << " m=" << m);
      }
    }
}

TEST_CASE("determinism across workers and chunking") {
  auto s = spec_for(9, 1);
  s.chunk = 131;
  s.workers = 1;
  const auto one = scan::run_scan(s);
  for (unsigned w : {4u, 16u}) {
    s.workers = w;
    CHECK(scan::run_scan(s) == one);
  }
  s.chunk = 0;
  CHECK(scan::run_scan(s) == one);
}

TEST_CASE("table invariants") {
  const auto t = scan::run_scans(spec_for(0, 1), 3, 10, std::nullopt);
  for (unsigned m = 3; m <= 10; ++m)
    for (Elem a : {1u, 2u}) {
      for (unsigned r = 0; r < 5; ++r) CHECK(t.at_least(m, a, r) >= t.at_least(m, a, r + 1));
      CHECK(t.at_least(m, a, 0) == t.squarefree(m, a));
    }
  for (unsigned m = 4; m <= 10; m += 2)
    for (unsigned r = 1; r <= 3; ++r) CHECK(t.at_least(m, 1, r) == t.at_least(m, 2, r));

  auto st_spec = spec_for(0, 1, 1, Mode::ShiftStable);
  const auto st = scan::run_scans(st_spec, 3, 21, std::nullopt);
  for (unsigned m = 3; m <= 10; ++m)
    for (Elem a : {1u, 2u})
      for (unsigned r = 1; r <= 3; ++r) {
        const std::uint64_t stable = m % 3 == 0 ? st.at_least(m, a, r) : 0;
        CHECK((t.at_least(m, a, r) - stable) % 3 == 0);
      }
  for (unsigned m : {9u, 15u, 21u}) CHECK(st.at_least(m, 2, 1) == 2 * pow3(m / 3 - 1));
}

TEST_CASE("serialization and checkpoints") {
  auto s = spec_for(7, 2);
  s.chunk = 100;
  const auto t = scan::run_scan(s);
  CHECK(scan::RankTable::from_json(t.to_json()) == t);
  const auto csv = t.to_csv();
  CHECK(csv.rfind("m,a,r,count\n", 0) == 0);
  CHECK(csv.find("7,2,2,33\n") != std::string::npos);

  const auto dir = std::filesystem::temp_directory_path() / "clrank_ckpt_test";
  std::filesystem::create_directories(dir);
  s.checkpoint = (dir / "scan.json").string();
  std::filesystem::remove(s.checkpoint);
  const auto first = scan::run_scan(s);
  CHECK(std::filesystem::exists(s.checkpoint));
  const auto resumed = scan::run_scan(s);
  CHECK(first == t);
  CHECK(resumed == t);
  std::filesystem::remove_all(dir);

  auto merged = scan::run_scan(spec_for(5, 1));
  const auto other = scan::run_scan(spec_for(5, 2));
  auto merged2 = other;
  merged.merge(other);
  merged2.merge(scan::run_scan(spec_for(5, 1)));
  CHECK(merged == merged2);
}

TEST_CASE("coset audit") {
  const auto r1 = scan::coset_audit(3, 1, 7);
  CHECK(r1.violations == 0);
  CHECK(r1.coset_members > 0);
  CHECK(r1.classes.size() == 4);
  const auto r2 = scan::coset_audit(3, 2, 6);
  CHECK(r2.violations == 0);
  const auto b = scan::coset_audit(2, 1, 8);
  CHECK(b.violations == 0);
  CHECK(b.off_coset == 0);
  CHECK(b.classes.size() == 1);
}

TEST_CASE("dimension counts") {
  CHECK(scan::equation_count(1, 5) == 6);
  CHECK(scan::equation_count(3, 4) == 12);
  CHECK(scan::dim_report(3, 2, scan::DimMode::Single).max_feasible_r == 3);
  CHECK(scan::dim_report(3, 2, scan::DimMode::InfiniteFamily).max_feasible_r == 3);
  for (std::uint32_t q : {3u, 4u, 5u, 7u, 9u}) {
    const auto single = scan::dim_report(q, 1, scan::DimMode::Single);
    CHECK(single.max_feasible_r == 2 * q - 3);
    CHECK(single.bound_2q_minus_3 == 2 * q - 3);
    CHECK(scan::dim_report(q, 1, scan::DimMode::InfiniteFamily).max_feasible_r == q);
  }
  for (unsigned m : {9u, 15u, 21u, 27u}) {
    const auto st = scan::dim_report(3, 2, scan::DimMode::ShiftStable, m, 2, 1);
    CHECK(st.expected_dim == static_cast<std::int64_t>((m - 3) / 6));
  }
}

#include "suites.hpp"

#include <sstream>

#include "clrank/euler.hpp"
#include "clrank/scan.hpp"
#include "clrank/serialize.hpp"

namespace clrank::suites {

using motive::TwistedPower;
using poly::FqPoly;

void SuiteResult::record(bool ok, const std::string& what) {
  if (ok) {
    ++passed;
    return;
  }
  ++failed;
  if (failures.size() < 8) failures.push_back(what);
}

namespace {

ff::Elem random_elem(std::mt19937_64& rng, const ff::FieldCtx& f, bool nonzero) {
  std::uniform_int_distribution<ff::Elem> dist(nonzero ? 1 : 0, f.size() - 1);
  return dist(rng);
}

FqPoly random_poly(std::mt19937_64& rng, const ff::FieldCtx& f, unsigned deg) {
  std::vector<ff::Elem> c(deg + 1);
  for (unsigned i = 0; i < deg; ++i) c[i] = random_elem(rng, f, false);
  c[deg] = random_elem(rng, f, true);
  return FqPoly(std::move(c));
}

std::string label(const TwistedPower& tp) {
  std::ostringstream os;
  os << "q=" << tp.q() << " n=" << tp.n() << " P=" << io::format_poly(tp.p());
  return os.str();
}

/// Field sizes and degree bounds that keep each case cheap.
struct FieldChoice {
  std::uint32_t q;
  unsigned m_max;
};
const std::vector<FieldChoice> kIdentityFields{{2, 8}, {3, 7}, {4, 5}, {5, 5}};

template <class F>
void guarded(SuiteResult& res, const std::string& what, F&& body) {
  try {
    res.record(body(), what);
  } catch (const std::exception& e) {
    res.record(false, what + ": " + e.what());
  }
}

symmetry::GroupElem random_generator(std::mt19937_64& rng, const std::string& gen, const ff::FieldCtx& f,
                                     bool matrix_level) {
  using namespace symmetry::gen;
  if (gen == "mu") return Mu{random_elem(rng, f, false)};
  if (gen == "nu") return Nu{random_elem(rng, f, true)};
  if (gen == "iota") return Iota{};
  if (gen == "tau") return Tau{random_elem(rng, f, true)};
  if (gen == "sigma") return Sigma{1};
  if (gen == "twist") {
    if (matrix_level) return TwistMul{FqPoly({0, 1})};
    std::uniform_int_distribution<unsigned> deg(1, 2);
    return TwistMul{random_poly(rng, f, deg(rng))};
  }
  throw std::invalid_argument("unknown generator \"" + gen + "\"");
}

}  // namespace

const std::vector<std::string>& generator_names() {
  static const std::vector<std::string> names{"mu", "nu", "iota", "tau", "sigma", "twist"};
  return names;
}

TwistedPower random_twisted_power(std::mt19937_64& rng, const ff::FieldCtx& field, unsigned m_max, unsigned n_max) {
  std::uniform_int_distribution<unsigned> deg(0, m_max), nd(1, n_max);
  const FqPoly p = random_poly(rng, field, deg(rng));
  return TwistedPower(field, p, nd(rng));
}

SuiteResult euler_suite(std::uint64_t cases, std::uint64_t seed, unsigned d) {
  SuiteResult res;
  res.name = "euler";
  std::mt19937_64 rng(seed);
  const ff::FieldCtx fields[] = {ff::FieldCtx::of_order(2), ff::FieldCtx::of_order(3)};
  for (std::uint64_t i = 0; i < cases; ++i) {
    const auto& f = fields[i % 2];
    const TwistedPower tp = random_twisted_power(rng, f, 9, 2);
    guarded(res, label(tp), [&] {
      const auto l = motive::l_function(tp);
      if (euler::truncated_product(tp, d) != poly::lfun_truncate(l, d)) return false;
      return euler::truncated_product(tp, std::max(1u, tp.k_min())) == l;
    });
  }
  return res;
}

SuiteResult identity_suite(const std::string& gen, std::uint64_t cases, std::uint64_t seed) {
  SuiteResult res;
  res.name = "identity/" + gen;
  std::mt19937_64 rng(seed);
  for (std::uint64_t i = 0; i < cases; ++i) {
    const auto& choice = kIdentityFields[i % kIdentityFields.size()];
    const auto f = ff::FieldCtx::of_order(choice.q);
    const TwistedPower tp = random_twisted_power(rng, f, choice.m_max, 2);
    const auto g = random_generator(rng, gen, f, false);
    guarded(res, label(tp) + " " + symmetry::describe(g), [&] { return symmetry::check_l_identity(g, tp).holds; });
  }
  return res;
}

SuiteResult conjugacy_suite(const std::string& gen, std::uint64_t cases, std::uint64_t seed, std::size_t max_window) {
  SuiteResult res;
  res.name = "conjugacy/" + gen;
  std::mt19937_64 rng(seed);
  for (std::uint64_t i = 0; i < cases; ++i) {
    const auto& choice = kIdentityFields[i % kIdentityFields.size()];
    const auto f = ff::FieldCtx::of_order(choice.q);
    const TwistedPower tp = random_twisted_power(rng, f, choice.m_max, 2);
    const auto g = random_generator(rng, gen, f, true);
    const std::size_t lo = gen == "sigma" ? tp.n() + 1 : 1;
    std::uniform_int_distribution<std::size_t> wd(lo, std::max(lo, max_window));
    const std::size_t k = wd(rng);
    guarded(res, label(tp) + " " + symmetry::describe(g) + " K=" + std::to_string(k),
            [&] { return symmetry::verify_conjugacy(g, tp, k).holds; });
  }
  return res;
}

namespace {

/// Pascal's triangle mod p, independent of the digit-product formula.
std::vector<std::vector<std::uint32_t>> pascal(unsigned rows, std::uint32_t p) {
  std::vector<std::vector<std::uint32_t>> c(rows + 1);
  for (unsigned l = 0; l <= rows; ++l) {
    c[l].assign(l + 1, 1);
    for (unsigned i = 1; i < l; ++i) c[l][i] = (c[l - 1][i - 1] + c[l - 1][i]) % p;
  }
  return c;
}

std::uint32_t pascal_at(const std::vector<std::vector<std::uint32_t>>& c, unsigned l, unsigned i) {
  return i > l ? 0 : c[l][i];
}

void binomial_checks(SuiteResult& res) {
  const std::pair<std::uint32_t, std::uint32_t> qs[] = {{2, 2}, {3, 3}, {4, 2}, {9, 3}};  // (q, p)
  for (auto [q, p] : qs) {
    const auto tri = pascal(400, p);
    for (unsigned l = 0; l <= 40; ++l)
      for (unsigned i = 0; i <= 12; ++i) {
        const unsigned top = q * (i + 1) - 1;
        const std::uint32_t lhs = pascal_at(tri, l, top);
        const bool agrees = ff::binom_mod_p(l, top, p) == lhs;
        const std::uint32_t expect = (l + 1) % q != 0 ? 0 : pascal_at(tri, (l + 1) / q - 1, i);
        std::ostringstream what;
        what << "binomial q=" << q << " l=" << l << " i=" << i;
        res.record(agrees && lhs == expect, what.str());
      }
    for (unsigned a = 0; a * q <= 400; ++a)
      for (unsigned g = 0; g <= a; ++g) {
        std::ostringstream what;
        what << "binomial scaling q=" << q << " a=" << a << " g=" << g;
        res.record(pascal_at(tri, a * q, g * q) == pascal_at(tri, a, g), what.str());
      }
  }
}

}  // namespace

SuiteResult property_suite(std::uint64_t cases, std::uint64_t seed) {
  SuiteResult res;
  res.name = "properties";
  std::mt19937_64 rng(seed);
  for (std::uint64_t i = 0; i < cases; ++i) {
    const auto& choice = kIdentityFields[i % kIdentityFields.size()];
    const auto f = ff::FieldCtx::of_order(choice.q);
    const TwistedPower tp = random_twisted_power(rng, f, choice.m_max, 2);
    const std::string name = label(tp);
    const auto l = motive::l_function(tp);
    guarded(res, name + " stability", [&] {
      return motive::det_at_size(tp, tp.k_min() + 1) == l && motive::det_at_size(tp, tp.k_min() + 2) == l;
    });
    guarded(res, name + " L(0)=1", [&] { return l.coeff(0) == FqPoly({1}); });
    guarded(res, name + " T-degree bound", [&] {
      for (std::size_t j = 0; j < l.coeffs.size(); ++j)
        if (l.coeffs[j].degree() > static_cast<int>(tp.n() * j)) return false;
      return true;
    });
    guarded(res, name + " Frobenius-invariant norms", [&] {
      for (unsigned d = 1; d <= 3; ++d)
        for (const auto& prime : euler::PrimeCache::global().primes(f, d)) euler::local_factor(tp, prime);
      return true;
    });
  }
  guarded(res, "worker-count determinism", [] {
    scan::ScanSpec spec;
    spec.q = 3;
    spec.m = 8;
    spec.lead = 2;
    spec.chunk = 97;
    spec.audit_period = 50;
    std::optional<scan::RankTable> first;
    for (unsigned w : {1u, 4u, 16u}) {
      spec.workers = w;
      auto t = scan::run_scan(spec);
      if (!first)
        first = std::move(t);
      else if (!(t == *first))
        return false;
    }
    spec.chunk = 0;
    return scan::run_scan(spec) == *first;
  });
  binomial_checks(res);
  return res;
}

}  // namespace clrank::suites

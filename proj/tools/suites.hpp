#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "clrank/motive.hpp"
#include "clrank/symmetry.hpp"

namespace clrank::suites {

struct SuiteResult {
  std::string name;
  std::uint64_t passed = 0;
  std::uint64_t failed = 0;
  std::vector<std::string> failures;  // first few, for diagnostics

  void record(bool ok, const std::string& what);
  bool ok() const { return failed == 0; }
};

/// Random TwistedPower with deg P <= m_max (leading coefficient nonzero).
motive::TwistedPower random_twisted_power(std::mt19937_64& rng, const ff::FieldCtx& field, unsigned m_max,
                                          unsigned n_max);

/// Truncated Euler product vs the determinant, through U-degree `d` and
/// exactly at U-degree k_min.  Fields F_2 and F_3, deg P <= 9, n <= 2.
SuiteResult euler_suite(std::uint64_t cases, std::uint64_t seed, unsigned d = 4);

/// L-function identities for one generator family ("mu", "nu", "iota",
/// "tau", "sigma", "twist") on random P.
SuiteResult identity_suite(const std::string& gen, std::uint64_t cases, std::uint64_t seed);

/// Matrix relations for one generator family on windows K <= max_window.
SuiteResult conjugacy_suite(const std::string& gen, std::uint64_t cases, std::uint64_t seed,
                            std::size_t max_window = 10);

/// Structural properties: determinant stability, L(0) = 1, T-degree bound,
/// Frobenius-invariant norms, worker-count determinism, binomial identities.
SuiteResult property_suite(std::uint64_t cases, std::uint64_t seed);

const std::vector<std::string>& generator_names();

}  // namespace clrank::suites

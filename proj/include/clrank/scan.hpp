#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clrank/motive.hpp"

namespace clrank::scan {

using motive::TwistedPower;
using poly::FqPoly;

enum class Mode { AllSquarefree, ShiftStable };

struct ScanSpec {
  std::uint32_t q = 3;
  unsigned n = 1;
  unsigned m = 0;
  ff::Elem lead = 1;
  Mode mode = Mode::AllSquarefree;
  /// Thresholds reported in CSV output; the table itself keeps exact ranks.
  std::vector<unsigned> thresholds{1, 2, 3};
  unsigned workers = 1;
  /// Polynomials per chunk; 0 picks a default.
  std::uint64_t chunk = 0;
  /// Largest enumeration allowed without `force`.
  std::uint64_t cap = 43046721;  // 3^16
  bool force = false;
  unsigned witness_cap = 16;
  /// Compare the fast kernel against the full L-function on a
  /// deterministic 1-in-`audit_period` sample; 0 disables.
  std::uint64_t audit_period = 1000;
  /// JSON checkpoint of finished chunks; empty disables.
  std::string checkpoint;
};

/// Throws std::invalid_argument for an unusable spec.
void validate(const ScanSpec& spec);

/// Number of polynomials enumerated by the spec.
std::uint64_t enumeration_size(const ScanSpec& spec);

struct CellKey {
  unsigned m = 0;
  ff::Elem a = 0;
  friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

struct CellTally {
  std::uint64_t enumerated = 0;
  std::uint64_t squarefree = 0;
  std::vector<std::uint64_t> by_rank;                   // exact-rank histogram
  std::map<unsigned, std::vector<FqPoly>> witnesses;  // exact rank >= 1 -> first polynomials
  friend bool operator==(const CellTally&, const CellTally&) = default;
};

/// Counts of squarefree polynomials by exact analytic rank, per (m, a).
class RankTable {
 public:
  std::uint32_t q = 3;
  unsigned n = 1;
  bool shift_stable = false;
  unsigned witness_cap = 16;
  std::map<CellKey, CellTally> cells;
  std::uint64_t audit_checked = 0;
  std::uint64_t audit_mismatches = 0;

  void add(unsigned m, ff::Elem a, unsigned rank, const FqPoly* p);
  std::uint64_t exact(unsigned m, ff::Elem a, unsigned r) const;
  /// The tabulated count: squarefree P of degree m, leading coefficient a, rank >= r.
  std::uint64_t at_least(unsigned m, ff::Elem a, unsigned r) const;
  std::uint64_t squarefree(unsigned m, ff::Elem a) const;
  unsigned max_rank() const;
  const std::vector<FqPoly>& witnesses(unsigned m, ff::Elem a, unsigned exact_rank) const;

  /// Commutative merge; witness lists are re-sorted and truncated.
  void merge(const RankTable& other);

  /// Rows m,a,r,count for r = 1..max(thresholds, observed maximum).
  std::string to_csv(const std::vector<unsigned>& thresholds = {1, 2, 3}) const;
  std::string to_json() const;
  static RankTable from_json(const std::string& text);

  friend bool operator==(const RankTable&, const RankTable&) = default;
};

/// Precomputed arithmetic for the fast rank kernel: the base field embedded
/// in an extension with enough points to decide the rank exactly.
class RankKernel {
 public:
  /// Throws std::invalid_argument when the extension needed exceeds 256 elements.
  RankKernel(const ff::FieldCtx& field, unsigned n, unsigned m);
  /// Analytic rank of P (deg P = m, n as given at construction).
  unsigned rank(const ff::Elem* coeffs) const;
  unsigned points() const noexcept { return static_cast<unsigned>(points_.size()); }
  std::uint32_t extension_size() const noexcept { return size_; }
  /// Whether the kernel applies to (field, n, m).
  static bool supported(const ff::FieldCtx& field, unsigned n, unsigned m);

 private:
  std::uint8_t add(std::uint8_t a, std::uint8_t b) const { return add_[a * size_ + b]; }
  std::uint8_t mul(std::uint8_t a, std::uint8_t b) const { return mul_[a * size_ + b]; }
  unsigned eigen_one_multiplicity(std::uint8_t* b, unsigned k) const;
  bool singular(std::uint8_t* b, unsigned k) const;

  ff::FieldCtx field_;
  unsigned n_, m_, q_, k_;
  bool boundary_;
  std::uint32_t size_ = 0;
  std::vector<std::uint8_t> add_, mul_, neg_, inv_, embed_;
  std::vector<std::uint8_t> points_;
  std::vector<std::vector<std::uint8_t>> weights_;  // per point: t^{n-l} (-1)^l C(n,l)
};

/// Squarefree test on a raw coefficient array of length m + 1 (a_m != 0).
bool squarefree_raw(const ff::FieldCtx& field, const ff::Elem* coeffs, unsigned m);

/// Sum_i c_i (theta^q - theta)^i.
FqPoly shift_stable_expand(const ff::FieldCtx& field, const std::vector<ff::Elem>& c);

/// Polynomial number `index` of the spec's enumeration order.
FqPoly enumerate_at(const ff::FieldCtx& field, const ScanSpec& spec, std::uint64_t index);

/// Throws std::runtime_error when the enumeration exceeds the cap without force.
RankTable run_scan(const ScanSpec& spec);

/// Runs one scan per m in [m_lo, m_hi] and per leading coefficient
/// (all of F_q* when `lead` is empty), merging the results.  For shift-stable
/// scans only multiples of q are visited.
RankTable run_scans(ScanSpec base, unsigned m_lo, unsigned m_hi, std::optional<ff::Elem> lead);

struct CosetClass {
  ff::Elem a = 0;
  unsigned residue = 0;  // m mod (q - 1)
  bool in_coset = false;
  std::uint64_t total = 0;
  std::uint64_t rank_ge1 = 0;
};

struct CosetReport {
  std::uint32_t q = 0;
  unsigned n = 0, m_max = 0;
  std::vector<CosetClass> classes;  // index (q-1)^2 partition by (a_m, m mod (q-1))
  std::uint64_t coset_members = 0;
  std::uint64_t violations = 0;
  std::uint64_t off_coset = 0;
  std::uint64_t off_coset_rank_ge1 = 0;
  std::vector<FqPoly> violating;
};

/// Exhaustive over all nonzero P with deg P <= m_max, using the full
/// L-function.  Coset: m = -n mod (q-1) and a_m = (-1)^n.
CosetReport coset_audit(std::uint32_t q, unsigned n, unsigned m_max);

/// r0 (k + 1) - r0 (r0 - 1) / 2.
std::int64_t equation_count(std::int64_t r0, std::int64_t k);

enum class DimMode { Single, InfiniteFamily, ShiftStable };

struct DimReport {
  std::uint32_t q = 0;
  unsigned r = 0;
  DimMode mode = DimMode::Single;
  unsigned k = 0;               // matrix size used (smallest feasible for single mode)
  std::int64_t equations = 0;
  std::int64_t parameters = 0;
  std::int64_t expected_dim = 0;
  bool feasible = false;
  unsigned max_feasible_r = 0;  // single / infinite-family modes
  unsigned bound_2q_minus_3 = 0;
};

/// Single and infinite-family modes evaluate the naive count for the
/// boundary family m = k(q-1) - 1.  Shift-stable mode needs m (a multiple of
/// q), the leading coefficient a and n.
DimReport dim_report(std::uint32_t q, unsigned r, DimMode mode, unsigned m = 0, ff::Elem a = 1, unsigned n = 1);

}  // namespace clrank::scan

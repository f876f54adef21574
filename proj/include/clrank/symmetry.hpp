#pragma once

#include <optional>
#include <string>
#include <variant>

#include "clrank/motive.hpp"

namespace clrank::symmetry {

using motive::TMatrix;
using motive::TwistedPower;
using poly::FqPoly;
using poly::LFun;

namespace gen {
struct Mu { ff::Elem d; };                   ///< P(theta) -> P(theta + d)
struct Nu { ff::Elem c; };                   ///< a_i -> a_i c^i
struct Iota { std::optional<unsigned> m; };  ///< reversal at length m + 1, m = -n mod (q-1)
struct Tau { ff::Elem c; };                  ///< P -> c^{-n} P
struct Sigma { unsigned k; };                ///< (P, n) -> (P, q^k n)
struct TwistMul { FqPoly q; };               ///< P -> P Q^{q-1}
}  // namespace gen

using GroupElem = std::variant<gen::Mu, gen::Nu, gen::Iota, gen::Tau, gen::Sigma, gen::TwistMul>;

std::string describe(const GroupElem& g);

/// The reversal degree used by Iota: the given m after validation, or the
/// smallest m >= deg P with m = -n mod (q-1).
unsigned iota_degree(const TwistedPower& tp, std::optional<unsigned> m);

/// Throws std::invalid_argument for an inadmissible Iota degree, a zero
/// scalar in Nu/Tau, or Q = 0.
TwistedPower act_on_poly(const GroupElem& g, const TwistedPower& tp);

struct IdentityCheck {
  bool holds = false;
  LFun lhs, rhs;
};

/// Compares both sides of the L-function identity attached to g.
IdentityCheck check_l_identity(const GroupElem& g, const TwistedPower& tp);

namespace conj {
struct W1 { ff::Elem d; };  ///< W_ij = C(j,i) d^{j-i}, j >= i
struct W2 { ff::Elem c; };  ///< diag(c^i)
struct W3 { unsigned k; };  ///< k x k anti-diagonal
struct W5 { unsigned t_power = 1; };  ///< W_ij = T^{t_power (j-i)}, j >= i
}  // namespace conj

using ConjugatorKind = std::variant<conj::W1, conj::W2, conj::W3, conj::W5>;

/// Restriction of an (infinite, upper-triangular) conjugator to
/// [0, rows) x [0, cols).  `exact_rows` is the row range of the
/// multiplied matrix needed for products with a banded matrix to be exact.
struct WindowMatrix {
  TMatrix entries;
  std::size_t exact_rows = 0;
};

/// Conjugator or its inverse on a window.  W3 is finite: its window must
/// equal its size.  Throws std::invalid_argument on an empty window.
WindowMatrix conjugator(const ff::FieldCtx& field, const ConjugatorKind& kind, std::size_t rows, std::size_t cols);
WindowMatrix conjugator_inverse(const ff::FieldCtx& field, const ConjugatorKind& kind, std::size_t rows,
                                std::size_t cols);

/// Rows of the infinite matrix that can meet columns [0, window):
/// ceil((window + m + n) / q).
std::size_t band_rows(const TwistedPower& tp, std::size_t window);

struct ConjugacyCheck {
  bool holds = false;
  std::string identity;
  TMatrix lhs, rhs;
};

/// Checks the matrix-level relation for g on the window [0, K)^2.
/// Iota uses its exact finite size (m+n)/(q-1) - 1; Sigma needs k = 1 and
/// K > n and conjugates by W5 with entries in T^q; TwistMul is supported for Q = theta (block shape).
ConjugacyCheck verify_conjugacy(const GroupElem& g, const TwistedPower& tp, std::size_t window);

}  // namespace clrank::symmetry

#include "clrank/symmetry.hpp"

#include <sstream>
#include <stdexcept>

#include "clrank/euler.hpp"

namespace clrank::symmetry {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

ff::Elem sign_pow(const ff::FieldCtx& f, unsigned n) { return n % 2 ? f.neg(f.one()) : f.one(); }

void require_unit(ff::Elem c, const ff::FieldCtx& f, const char* what) {
  if (c == 0 || !f.valid(c)) throw std::invalid_argument(std::string(what) + ": scalar must be a nonzero field element");
}

std::uint64_t checked_pow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (r > (std::uint64_t{1} << 31) / b) throw std::invalid_argument("Sigma: q^k n is too large");
    r *= b;
  }
  return r;
}

/// L(P) times the inverse local factor at theta.
LFun l_with_theta(const TwistedPower& tp) {
  poly::FqPolyRing ring(tp.field());
  return poly::lfun_mul(motive::l_function(tp), euler::local_factor(tp, ring.variable()).inverse_factor(tp.field()));
}

TMatrix map_entries(const TMatrix& a, const auto& fn) {
  TMatrix r = a;
  for (auto& e : r.data) e = fn(e);
  return r;
}

/// (rows x N) * M(P)[N x K] * (K x K), exact when N covers the band.
TMatrix conjugate(const ff::FieldCtx& f, const TMatrix& left, const TMatrix& m, const TMatrix& right) {
  poly::FqPolyRing ring(f);
  return mat_mul(ring, mat_mul(ring, left, m), right);
}

std::string shape(const TMatrix& a) {
  std::ostringstream os;
  os << a.rows << "x" << a.cols;
  return os.str();
}

}  // namespace

std::string describe(const GroupElem& g) {
  return std::visit(Overloaded{
                        [](const gen::Mu& x) { return "mu(" + std::to_string(x.d) + ")"; },
                        [](const gen::Nu& x) { return "nu(" + std::to_string(x.c) + ")"; },
                        [](const gen::Iota& x) {
                          return x.m ? "iota(m=" + std::to_string(*x.m) + ")" : std::string("iota");
                        },
                        [](const gen::Tau& x) { return "tau(" + std::to_string(x.c) + ")"; },
                        [](const gen::Sigma& x) { return "sigma(" + std::to_string(x.k) + ")"; },
                        [](const gen::TwistMul& x) { return "twist(deg " + std::to_string(x.q.degree()) + ")"; },
                    },
                    g);
}

unsigned iota_degree(const TwistedPower& tp, std::optional<unsigned> m) {
  const unsigned d = tp.q() - 1;
  if (m) {
    if (*m < tp.m()) throw std::invalid_argument("Iota: m is below deg P");
    if ((*m + tp.n()) % d != 0) throw std::invalid_argument("Iota: m + n must be divisible by q - 1");
    return *m;
  }
  unsigned r = tp.m();
  while ((r + tp.n()) % d != 0) ++r;
  return r;
}

TwistedPower act_on_poly(const GroupElem& g, const TwistedPower& tp) {
  const auto& f = tp.field();
  poly::FqPolyRing ring(f);
  return std::visit(
      Overloaded{
          [&](const gen::Mu& x) {
            if (!f.valid(x.d)) throw std::invalid_argument("Mu: shift outside the field");
            return TwistedPower(f, ring.compose(tp.p(), ring.make({x.d, 1})), tp.n());
          },
          [&](const gen::Nu& x) {
            require_unit(x.c, f, "Nu");
            std::vector<ff::Elem> c = tp.p().coeffs;
            for (std::size_t i = 0; i < c.size(); ++i) c[i] = f.mul(c[i], f.pow(x.c, i));
            return TwistedPower(f, FqPoly(std::move(c)), tp.n());
          },
          [&](const gen::Iota& x) {
            const unsigned m = iota_degree(tp, x.m);
            std::vector<ff::Elem> c(m + 1, 0);
            for (unsigned i = 0; i <= m; ++i) c[i] = tp.coeff(static_cast<long>(m - i));
            return TwistedPower(f, FqPoly(std::move(c)), tp.n());
          },
          [&](const gen::Tau& x) {
            require_unit(x.c, f, "Tau");
            return TwistedPower(f, ring.scale(tp.p(), f.inv(f.pow(x.c, tp.n()))), tp.n());
          },
          [&](const gen::Sigma& x) {
            return TwistedPower(f, tp.p(), static_cast<unsigned>(checked_pow(tp.q(), x.k) * tp.n()));
          },
          [&](const gen::TwistMul& x) {
            const FqPoly q = ring.make(x.q.coeffs);
            if (q.is_zero()) throw std::invalid_argument("TwistMul: Q must be nonzero");
            return TwistedPower(f, ring.mul(tp.p(), ring.pow(q, tp.q() - 1)), tp.n());
          },
      },
      g);
}

IdentityCheck check_l_identity(const GroupElem& g, const TwistedPower& tp) {
  const auto& f = tp.field();
  const TwistedPower image = act_on_poly(g, tp);
  auto [lhs, rhs] = std::visit(Overloaded{
                 [&](const gen::Mu& x) {
                   return std::pair{poly::lfun_substitute(motive::l_function(image), poly::tmap::Shift{x.d}),
                               motive::l_function(tp)};
                 },
                 [&](const gen::Nu& x) {
                   return std::pair{poly::lfun_substitute(motive::l_function(image), poly::tmap::Scale{x.c},
                                                 f.pow(x.c, tp.n())),
                               motive::l_function(tp)};
                 },
                 [&](const gen::Iota&) {
                   return std::pair{poly::lfun_substitute(l_with_theta(image), poly::tmap::Invert{tp.n()}),
                               l_with_theta(tp)};
                 },
                 [&](const gen::Tau& x) {
                   return std::pair{poly::lfun_substitute(motive::l_function(image), poly::tmap::Identity{},
                                                 f.pow(x.c, tp.n())),
                               motive::l_function(tp)};
                 },
                 [&](const gen::Sigma& x) {
                   return std::pair{motive::l_function(image),
                               poly::lfun_substitute(motive::l_function(tp), poly::tmap::Power{x.k})};
                 },
                 [&](const gen::TwistMul& x) {
                   std::vector<FqPoly> extra;
                   poly::FqPolyRing ring(f);
                   for (auto& prime : poly::prime_factors(f, x.q))
                     if (!ring.rem(tp.p(), prime).is_zero()) extra.push_back(std::move(prime));
                   return std::pair{motive::l_function(image),
                                    poly::lfun_mul(motive::l_function(tp), euler::inverse_factors(tp, extra))};
                 },
             },
             g);
  const bool holds = lhs == rhs;
  return IdentityCheck{holds, std::move(lhs), std::move(rhs)};
}

std::size_t band_rows(const TwistedPower& tp, std::size_t window) {
  return (window + tp.m() + tp.n() + tp.q() - 1) / tp.q();
}

namespace {

WindowMatrix make_window(const ff::FieldCtx& f, const ConjugatorKind& kind, std::size_t rows, std::size_t cols,
                         bool inverse) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("conjugator: window must be nonempty");
  poly::FqPolyRing ring(f);
  TMatrix w(rows, cols, FqPoly{});
  std::visit(Overloaded{
                 [&](const conj::W1& x) {
                   if (!f.valid(x.d)) throw std::invalid_argument("W1: shift outside the field");
                   const ff::Elem d = inverse ? f.neg(x.d) : x.d;
                   for (std::size_t i = 0; i < rows; ++i)
                     for (std::size_t j = i; j < cols; ++j) {
                       const ff::Elem b = f.from_int(ff::binom_mod_p(j, i, f.characteristic()));
                       w(i, j) = ring.constant(f.mul(b, f.pow(d, j - i)));
                     }
                 },
                 [&](const conj::W2& x) {
                   require_unit(x.c, f, "W2");
                   const ff::Elem c = inverse ? f.inv(x.c) : x.c;
                   for (std::size_t i = 0; i < std::min(rows, cols); ++i) w(i, i) = ring.constant(f.pow(c, i));
                 },
                 [&](const conj::W3& x) {
                   if (rows != x.k || cols != x.k) throw std::invalid_argument("W3: window must equal its size");
                   for (std::size_t i = 0; i < x.k; ++i) w(i, x.k - 1 - i) = ring.one();
                 },
                 [&](const conj::W5& x) {
                   if (x.t_power == 0) throw std::invalid_argument("W5: power of T must be >= 1");
                   const FqPoly t = ring.monomial(1, x.t_power);
                   for (std::size_t i = 0; i < rows; ++i) {
                     if (inverse) {
                       if (i < cols) w(i, i) = ring.one();
                       if (i + 1 < cols) w(i, i + 1) = ring.neg(t);
                     } else {
                       for (std::size_t j = i; j < cols; ++j) w(i, j) = ring.monomial(1, x.t_power * (j - i));
                     }
                   }
                 },
             },
             kind);
  return WindowMatrix{std::move(w), rows};
}

/// With X = T^t:  (W5^s)_{ij} = C(j-i+s-1, s-1) X^{j-i};  (W5^{-s})_{ij} = C(s, j-i) (-X)^{j-i}.
TMatrix w5_power(const ff::FieldCtx& f, unsigned t, unsigned s, bool inverse, std::size_t rows, std::size_t cols) {
  poly::FqPolyRing ring(f);
  TMatrix w(rows, cols, FqPoly{});
  const auto p = f.characteristic();
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = i; j < cols; ++j) {
      const std::size_t e = j - i;
      ff::Elem b;
      if (inverse) {
        if (e > s) break;
        b = f.from_int(ff::binom_mod_p(s, e, p));
        if (e % 2) b = f.neg(b);
      } else {
        b = f.from_int(ff::binom_mod_p(e + s - 1, s - 1, p));
      }
      w(i, j) = ring.monomial(b, e * t);
    }
  return w;
}

}  // namespace

WindowMatrix conjugator(const ff::FieldCtx& field, const ConjugatorKind& kind, std::size_t rows, std::size_t cols) {
  return make_window(field, kind, rows, cols, false);
}

WindowMatrix conjugator_inverse(const ff::FieldCtx& field, const ConjugatorKind& kind, std::size_t rows,
                                std::size_t cols) {
  return make_window(field, kind, rows, cols, true);
}

ConjugacyCheck verify_conjugacy(const GroupElem& g, const TwistedPower& tp, std::size_t window) {
  if (window == 0) throw std::invalid_argument("verify_conjugacy: window must be >= 1");
  const auto& f = tp.field();
  poly::FqPolyRing ring(f);
  const std::size_t k = window;
  ConjugacyCheck r;
  std::visit(
      Overloaded{
          [&](const gen::Mu& x) {
            const TwistedPower image = act_on_poly(g, tp);
            const std::size_t big = band_rows(tp, k);
            r.identity = "W1(d) M(P) W1(d)^-1 = M(mu_d P)(T - d)";
            r.lhs = conjugate(f, conjugator(f, conj::W1{x.d}, k, big).entries, motive::matrix_window(tp, big, k),
                              conjugator_inverse(f, conj::W1{x.d}, k, k).entries);
            const FqPoly shift = ring.make({f.neg(x.d), 1});
            r.rhs = map_entries(motive::matrix_window(image, k, k), [&](const FqPoly& e) { return ring.compose(e, shift); });
          },
          [&](const gen::Nu& x) {
            const TwistedPower image = act_on_poly(g, tp);
            r.identity = "c^-n W2(c) M(P) W2(c)^-1 = M(nu_c P)(c^-1 T)";
            const ff::Elem cn = f.inv(f.pow(x.c, tp.n()));
            const TMatrix conj_m = conjugate(f, conjugator(f, conj::W2{x.c}, k, k).entries,
                                             motive::matrix_window(tp, k, k),
                                             conjugator_inverse(f, conj::W2{x.c}, k, k).entries);
            r.rhs = map_entries(conj_m, [&](const FqPoly& e) { return ring.scale(e, cn); });
            const FqPoly scaled = ring.monomial(f.inv(x.c), 1);
            r.lhs = map_entries(motive::matrix_window(image, k, k),
                                [&](const FqPoly& e) { return ring.compose(e, scaled); });
          },
          [&](const gen::Iota& x) {
            const unsigned m = iota_degree(tp, x.m);
            const unsigned size = (m + tp.n()) / (tp.q() - 1) - 1;
            const TwistedPower image = act_on_poly(g, tp);
            r.identity = "W3 M(P) W3^-1 = (-T)^n M(iota P)(1/T) at size " + std::to_string(size);
            if (size == 0) {
              r.holds = true;
              return;
            }
            const auto w3 = conjugator(f, conj::W3{size}, size, size).entries;
            r.lhs = conjugate(f, w3, motive::matrix_window(tp, size, size), w3);
            const ff::Elem sign = sign_pow(f, tp.n());
            r.rhs = map_entries(motive::matrix_window(image, size, size), [&](const FqPoly& e) {
              if (e.is_zero()) return e;
              if (e.degree() > static_cast<int>(tp.n())) throw std::logic_error("Iota: entry degree exceeds n");
              std::vector<ff::Elem> c(tp.n() + 1, 0);
              for (std::size_t i = 0; i < e.size(); ++i) c[tp.n() - i] = f.mul(sign, e.coeffs[i]);
              return ring.make(std::move(c));
            });
          },
          [&](const gen::Tau& x) {
            const TwistedPower image = act_on_poly(g, tp);
            r.identity = "M(tau_c P) = c^-n M(P)";
            r.lhs = motive::matrix_window(image, k, k);
            const ff::Elem cn = f.inv(f.pow(x.c, tp.n()));
            r.rhs = map_entries(motive::matrix_window(tp, k, k), [&](const FqPoly& e) { return ring.scale(e, cn); });
          },
          [&](const gen::Sigma& x) {
            if (x.k != 1) throw std::invalid_argument("verify_conjugacy: Sigma is checked for k = 1 only");
            const unsigned n = tp.n();
            if (k <= n) throw std::invalid_argument("verify_conjugacy: Sigma needs a window larger than n");
            const TwistedPower image = act_on_poly(g, tp);
            const std::size_t big = band_rows(image, k);
            r.identity = "W5(T^q)^n M(P, qn) W5(T^q)^-n = [[0, 0], [*, M(P, n)(T^q)]]";
            r.lhs = conjugate(f, w5_power(f, tp.q(), n, false, k, big), motive::matrix_window(image, big, k),
                              w5_power(f, tp.q(), n, true, k, k));
            // Expected: first n rows zero, lower-left block free, lower-right block M(P, n)(T^q).
            r.rhs = r.lhs;
            for (std::size_t i = 0; i < n; ++i)
              for (std::size_t j = 0; j < k; ++j) r.rhs(i, j) = FqPoly{};
            const FqPoly tq = ring.monomial(1, tp.q());
            const TMatrix inner = motive::matrix_window(tp, k - n, k - n);
            for (std::size_t i = 0; i < k - n; ++i)
              for (std::size_t j = 0; j < k - n; ++j) r.rhs(n + i, n + j) = ring.compose(inner(i, j), tq);
          },
          [&](const gen::TwistMul& x) {
            if (!(ring.make(x.q.coeffs) == ring.variable()))
              throw std::invalid_argument("verify_conjugacy: TwistMul is checked for Q = theta only");
            const TwistedPower image = act_on_poly(g, tp);
            r.identity = "M(P theta^(q-1)) = [[a_0 T^n, 0], [*, M(P)]]";
            r.lhs = motive::matrix_window(image, k, k);
            r.rhs = r.lhs;
            for (std::size_t j = 0; j < k; ++j) r.rhs(0, j) = FqPoly{};
            r.rhs(0, 0) = ring.monomial(tp.coeff(0), tp.n());
            const TMatrix inner = motive::matrix_window(tp, k - 1, k - 1);
            for (std::size_t i = 0; i + 1 < k; ++i)
              for (std::size_t j = 0; j + 1 < k; ++j) r.rhs(i + 1, j + 1) = inner(i, j);
          },
      },
      g);
  if (r.lhs.rows == 0) return r;  // empty finite size
  if (r.lhs.rows != r.rhs.rows || r.lhs.cols != r.rhs.cols)
    throw std::logic_error("verify_conjugacy: shape mismatch " + shape(r.lhs) + " vs " + shape(r.rhs));
  r.holds = r.lhs == r.rhs;
  return r;
}

}  // namespace clrank::symmetry

#pragma once
// Exact counting for the family census: multiplicative indicators, the
// lower-bound count of obstructed parameter tuples by three independent
// routes, local-solvability counts over coefficient boxes, pairwise
// coprimality counting at scale, and the square-structure decomposition
// of coefficient triples.
//
// The central count is
//
//   N(B) = 2 sum_{a} alpha(a) 1_S(a) sum_{c} sum_{(d,q)=1} sum_{(e,a)=1}
//          beta(c,d,e)
//
// over q^2 a c^2 <= B, a d^2 <= B, q e^2 <= B, where alpha(a) demands
// every prime of a split in Q(sqrt(q)), S is the set of squares mod q
// that are not fourth powers, and beta is the pairwise-coprimality
// indicator.  A Moebius pass over f = gcd(e, a) turns the e-condition
// into free sums (the "rearranged" route), and expanding 1_S into
// Dirichlet characters gives a third route through the nested sums
// V(B,a,f), W_chi(B,f), U_chi(B); all three must agree exactly.
// Pairwise coprimality is counted through the four-fold divisor encoding
// sum mu(uvwt) mu(t) tau(t), which collapses every triple sum here to
// O(soft) many floor evaluations.

#include <gmpxx.h>

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qbm/arith.hpp"

namespace qbm {

struct NumericalInconsistency : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// All Dirichlet characters mod a prime q, indexed 0 .. q-2 through a
// fixed primitive root: character j maps root^k to the (j*k mod q-1)-th
// power of a primitive (q-1)-th root of unity.  Index arithmetic is
// exact; complex values appear only at evaluation.
class CharacterTable {
 public:
  explicit CharacterTable(std::uint64_t q);
  std::uint64_t modulus() const { return q_; }
  std::uint64_t primitive_root() const { return root_; }
  std::size_t count() const { return static_cast<std::size_t>(q_ - 1); }
  std::size_t principal() const { return 0; }
  std::size_t quadratic() const { return static_cast<std::size_t>((q_ - 1) / 2); }  // the symbol (./q)
  // Exact exponent k with chi_j(a) = zeta_{q-1}^k, empty for a = 0 mod q.
  std::optional<std::uint64_t> unity_exponent(std::size_t j, std::uint64_t a) const;
  std::complex<double> value(std::size_t j, std::uint64_t a) const;

 private:
  std::uint64_t q_, root_;
  std::vector<std::uint32_t> dlog_;                // dlog_[a] for a in [1, q-1]
  std::vector<std::complex<double>> unit_circle_;  // (q-1)-th roots of unity
};

// 1 iff every prime divisor p of a has (p/q) = 1; completely
// multiplicative, alpha(1) = 1.
int indicator_alpha(std::uint64_t a, std::uint64_t q);

// 1 iff a mod q is a square but not a fourth power; the character route
// evaluates (1/(q-1)) sum_{s in S} sum_chi chi(s) chi(a), which equals
// the indicator because S is closed under inversion.
int indicator_S(std::int64_t a, std::uint64_t q);
double indicator_S_characters(std::int64_t a, const CharacterTable& table);

// Pairwise coprimality of (c,d,e), directly and through the four-fold
// divisor sum mu(uvwt) mu(t) tau(t) over t | (c,d,e), u | (c,d),
// v | (c,e), w | (d,e).
int indicator_beta(std::uint64_t c, std::uint64_t d, std::uint64_t e);
std::int64_t indicator_beta_moebius(std::uint64_t c, std::uint64_t d, std::uint64_t e);

// 1 iff every prime of v divides 2n.
int indicator_epsilon(std::uint64_t v, std::int64_t n);

// 1 iff u is odd, squarefree, and every prime p | u has (v/p) = 1; the
// rewrite evaluates 1_{(u,2v)=1} mu^2(u)/tau(u) sum_{d|u} (v/d) exactly.
int indicator_delta(std::uint64_t u, std::int64_t v);
mpq_class indicator_delta_rewrite(std::uint64_t u, std::int64_t v);

struct CountReport {
  std::uint64_t B = 0;
  std::uint64_t q = 0;
  std::uint64_t count = 0;
  double predicted = 0.0;  // main-term constant * B^{3/2} (log B)^{1/2} when supplied
  double elapsed_seconds = 0.0;
  std::string route;
};

// The count N(B) by direct summation; outer a-range partitioned into
// `threads` contiguous blocks with partial sums combined in block order,
// so the result is identical for every thread count.
CountReport count_nbr_direct(std::uint64_t B, std::uint64_t q, unsigned threads = 1,
                             std::optional<double> main_term_constant = std::nullopt);

// The Moebius-rearranged route: 2 sum_f mu(f) sum_a alpha(af) 1_S(af) V(B,a,f).
std::uint64_t count_nbr_moebius(std::uint64_t B, std::uint64_t q);

// The inner triple sum V(B,a,f) over (c,f)=1, (d,qf)=1, free e, with
// ranges q^2 a f c^2 <= B, a f d^2 <= B, q f^2 e^2 <= B.
std::uint64_t census_V(std::uint64_t B, std::uint64_t q, std::uint64_t a, std::uint64_t f);

// U_chi(B) = sum_f mu(f) alpha(f) chi(f) sum_a alpha(a) chi(a) V(B,a,f).
std::complex<double> intermediate_U_chi(std::uint64_t B, const CharacterTable& table, std::size_t chi);

// N(B) through (2/(q-1)) sum_{s in S} sum_chi chi(s) U_chi(B); throws
// NumericalInconsistency if the residual imaginary part exceeds 1e-6.
CountReport count_nbr_characters(std::uint64_t B, std::uint64_t q,
                                 std::optional<double> main_term_constant = std::nullopt);

// Ordered coefficient triples (a,b,c) in [-B,B]^3, nonzero, mixed-sign,
// with a x^2 + b y^2 + c z^2 = n solvable over R and every Z_p; the
// convention (ordered, signed, indefinite forms only) is recorded in the
// route field.
CountReport count_nloc(std::uint64_t B, std::int64_t n, unsigned threads = 1);

// sum_{x <= X, (x,a)=1} sum_{y <= Y, (y,b)=1} sum_{z <= Z, (z,c)=1} beta(x,y,z),
// exactly, via the four-fold encoding.
std::uint64_t coprime_triple_count(std::uint64_t X, std::uint64_t Y, std::uint64_t Z, std::int64_t a,
                                   std::int64_t b, std::int64_t c);

struct NoDecomposition : std::runtime_error {
  std::uint64_t witness;  // odd prime away from 2n with an unmatched odd valuation
  NoDecomposition(const std::string& what, std::uint64_t p) : std::runtime_error(what), witness(p) {}
};

// Square-structure decomposition of a coefficient triple relative to n:
// v_i carry sign and all primes dividing 2n; u_ij the primes with odd
// valuation in exactly the coordinates i and j; w_ij the primes shared
// by i and j with odd valuation in i only; squares absorbed into
// (a1,b1,c1).  Triples where some odd prime away from 2n has odd
// valuation in exactly one coordinate, or divides all three with some
// valuation odd, admit no such decomposition.
struct TripleDecomposition {
  std::int64_t v1 = 1, v2 = 1, v3 = 1;
  std::uint64_t u12 = 1, u13 = 1, u23 = 1;
  std::uint64_t w12 = 1, w13 = 1, w21 = 1, w23 = 1, w31 = 1, w32 = 1;
  std::uint64_t a1 = 1, b1 = 1, c1 = 1;
};

TripleDecomposition decompose_triple(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t n);
std::array<std::int64_t, 3> recompose_triple(const TripleDecomposition& t);

// sum over x1 <= X, x2 <= Y, x3 <= Z of
//   delta(x1; k x3 x2) delta(x2; l x3 x1) delta(x3; m x2 x1),
// optionally weighted by 1/(x1 x2 x3); invariant under permuting the
// pairs (X,k), (Y,l), (Z,m).
mpq_class sum_S_direct(std::uint64_t X, std::uint64_t Y, std::uint64_t Z, std::int64_t k, std::int64_t l,
                       std::int64_t m, bool weighted);

}  // namespace qbm

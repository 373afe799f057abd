#pragma once
// The quaternion class attached to a diagonal ternary quadric with a
// rational point at infinity, and the local invariants that cut out its
// integral Brauer set.
//
// Projectivize a x^2 + b y^2 + c z^2 = n to q~ = diag(a, b, c, -n).  An
// integer isotropic vector M spans, together with a dual vector, a
// hyperbolic plane; splitting it off leaves a binary form, and the whole
// thing is rewritten exactly as
//
//     q~ = l1 * l2 + c0 * (l3^2 - d * l4^2)
//
// with l1, l3 primitive integer forms, l2, l4 rational forms, c0 a
// rational scalar and d the squarefree kernel of -abcn.  On the quadric
// l1 * l2 = -c0 * (l3^2 - d l4^2) is a norm from Q(sqrt(d)) up to the
// factor -c0, so the quaternion pair (l1-value, d) is, up to the
// chart-independent correction, a class that local points pair with
// through Hilbert symbols.  Invariants live in (1/2)Z/Z and are reported
// in halves: 0 or 1.
//
// For the family a q^2 c^2 x^2 - a d^2 y^2 + q e^2 z^2 = 1 the canonical
// choice M = (d : -qc : 0 : 0) makes l1 proportional to qc x + d y and
// the second slot of the class comes out to q; the only place that can
// carry a nonzero invariant is q itself, where the answer is read off
// the quartic residue class of a.

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qbm/arith.hpp"
#include "qbm/local.hpp"

namespace qbm {

// Hilbert symbol (a, b)_v in {+1, -1}; a, b nonzero.
int hilbert_symbol(const mpq_class& a, const mpq_class& b, Place v);
int hilbert_symbol(std::int64_t a, std::int64_t b, Place v);

// Is the squarefree integer d a square in the completion at v?
bool square_in_Qv(std::int64_t d, Place v);

struct LinearForm {
  std::array<mpq_class, 4> coef;  // acts on projective (x, y, z, w)
  mpq_class operator()(const std::array<mpq_class, 4>& v) const;
  mpq_class at_point(std::int64_t x, std::int64_t y, std::int64_t z) const;  // w = 1
};

struct BrauerDecomposition {
  QuadricInstance instance;
  std::array<std::int64_t, 4> base_point;  // the isotropic vector M
  LinearForm l1, l2, l3, l4;
  mpq_class c0;
  std::int64_t d = 0;  // squarefree second slot of the quaternion pair
};

// Exact construction from a nonzero integer M with q~(M) = 0.  The
// displayed identity and the independence of the four forms are verified
// in rational arithmetic; violations throw std::logic_error.
BrauerDecomposition brauer_decomposition(const QuadricInstance& Q, const std::array<std::int64_t, 4>& M);

// The family's decomposition at M = (d : -qc : 0 : 0).
BrauerDecomposition family_decomposition(const FamilyInstance& F);

// Local invariant at v in halves (0 or 1), evaluated at a machine-chosen
// integral local point; requires such points to exist at v
// (std::domain_error otherwise).  Witnesses are refined until a chart
// value determines the symbol.  On the affine surface the evaluation is
// only locally constant, so for a general instance the value may depend
// on the chosen point; for family instances it is constant at every
// place.
int invariant_halves(const BrauerDecomposition& D, Place v);

struct IntegralPoint {
  std::int64_t x = 0, y = 0, z = 0;
};

// Exact invariant at v of the class evaluated at a known integral point
// of the instance (throws std::invalid_argument if the point misses the
// quadric).  Summed over all places at a fixed global point this is even.
int invariant_at_point(const BrauerDecomposition& D, Place v, const IntegralPoint& P);

struct InvariantProfile {
  std::vector<std::pair<Place, int>> halves;  // bad places, ascending
  bool obstructed = false;
};

// Closed-form profile over the bad places of a family instance that
// passes the local criterion (std::domain_error otherwise).
InvariantProfile family_invariant_profile(const FamilyInstance& F);

struct ObstructionDecision {
  bool locally_solvable = false;
  bool obstructed = false;  // meaningful only when locally_solvable
  PowerResidueClass a_class = PowerResidueClass::Zero;
};

ObstructionDecision obstruction_decision(const FamilyInstance& F);

struct PointSearchResult {
  std::optional<IntegralPoint> point;  // minimal under (|x|, x, y, z) at its fiber
  std::int64_t searched_z_bound = 0;   // fibers |z| <= bound exhausted when empty
};

// Walks the fibers z = 0, 1, 2, ... of the family equation: each fiber
// reduces to a divisor enumeration of (1 - q e^2 z^2)/a, so a scanned
// fiber is exhausted completely.  Stops at the first fiber containing
// solutions.
PointSearchResult family_point_search(const FamilyInstance& F, std::int64_t z_bound);

// Deterministic box scan for a generic instance.
std::optional<IntegralPoint> find_integral_point(const QuadricInstance& Q, std::int64_t height);

// Isotropy of a rank-4 diagonal form over completions, and a global
// isotropic vector by meet-in-the-middle over growing boxes.
bool isotropic_over_R(const std::array<std::int64_t, 4>& coef);
bool isotropic_over_Qp(const std::array<std::int64_t, 4>& coef, std::uint64_t p);
bool isotropic_everywhere(const std::array<std::int64_t, 4>& coef);
std::optional<std::array<std::int64_t, 4>> isotropic_vector(const std::array<std::int64_t, 4>& coef,
                                                            std::int64_t height);

}  // namespace qbm

#pragma once
// Local solvability of a x^2 + b y^2 + c z^2 = n over the reals and over
// the p-adic integers.  The p-adic decider enumerates solution classes
// mod p^k by increasing k, reports a witness as soon as a class satisfies
// the Hensel criterion (some partial derivative of valuation <= (k-1)/2),
// and certifies insolvability by exhausting all classes up to a depth
// that any true solution would have surfaced at.  Solutions with all
// three coordinates divisible by p are split off by the substitution
// (x,y,z) -> p(x,y,z), which needs p^2 | n.
//
// The family a q^2 c^2 x^2 - a d^2 y^2 + e^2 q z^2 = 1 (q prime,
// q == 1 mod 8, c,d,e pairwise coprime) admits a closed criterion:
// solvable at every place iff gcd(a, eq) = 1, gcd(d, q) = 1, and every
// odd prime p | a splits in Q(sqrt(q)), i.e. (q/p) = 1.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

namespace qbm {

struct QuadricInstance {
  std::int64_t a, b, c, n;
  QuadricInstance(std::int64_t a_, std::int64_t b_, std::int64_t c_, std::int64_t n_);
  bool indefinite() const;
};

struct FamilyInstance {
  std::uint64_t q;
  std::int64_t a, c, d, e;
  FamilyInstance(std::uint64_t q_, std::int64_t a_, std::int64_t c_, std::int64_t d_, std::int64_t e_);
  // The quadric (a q^2 c^2, -a d^2, e^2 q; 1).
  QuadricInstance derived() const;
};

struct Place {
  bool real = false;
  std::uint64_t p = 0;  // meaningful when !real
  static Place archimedean() { return Place{true, 0}; }
  static Place finite(std::uint64_t p) { return Place{false, p}; }
  auto operator<=>(const Place&) const = default;
};

struct LocalVerdict {
  Place place;
  bool solvable = false;
  // Witness residue class mod p^witness_exponent when solvable.
  std::optional<std::array<std::int64_t, 3>> witness;
  unsigned witness_exponent = 0;
  // Depth certified exhausted when not solvable.
  unsigned searched_depth = 0;
};

bool solvable_real(const QuadricInstance& Q);

// Certified search depth for the prime p: twice the largest valuation
// among the coefficients and n, plus 2 v_p(2), plus 3.
unsigned certified_depth(const QuadricInstance& Q, std::uint64_t p);

LocalVerdict solvable_at_prime(const QuadricInstance& Q, std::uint64_t p);
// Test hook: override the exhaustion depth (>= certified_depth gives the
// same verdict; larger only re-confirms).
LocalVerdict solvable_at_prime_to_depth(const QuadricInstance& Q, std::uint64_t p, unsigned depth);
// As solvable_at_prime, but a positive verdict carries a witness Newton-lifted
// to exponent >= min_exponent.
LocalVerdict solvable_at_prime_precise(const QuadricInstance& Q, std::uint64_t p, unsigned min_exponent);

struct EverywhereVerdict {
  bool solvable = false;
  std::vector<Place> failing;  // empty iff solvable
};

// Checks the real place and every p | 2abcn.
EverywhereVerdict solvable_everywhere(const QuadricInstance& Q);

bool family_local_criterion(const FamilyInstance& F);

}  // namespace qbm

#pragma once
// Exact integer arithmetic underneath the quadric machinery: deterministic
// 64-bit factorization, Jacobi symbols, p-adic valuations, square roots
// modulo prime powers, and quartic residue classification modulo primes
// q == 1 (mod 8).

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace qbm {

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = m == 1 ? 0 : 1;
  a %= m;
  while (e) {
    if (e & 1) r = mul_mod(r, a, m);
    a = mul_mod(a, a, m);
    e >>= 1;
  }
  return r;
}

// Deterministic Miller-Rabin, valid for all n < 2^64.
bool is_prime(std::uint64_t n);

// Primes below 10^6, built once on first use.
const std::vector<std::uint32_t>& small_primes();

struct PrimeFactorization {
  int sign = 1;                                           // -1 or +1
  std::vector<std::pair<std::uint64_t, int>> factors;     // primes ascending
};

// Trial division by primes below 10^6, then Pollard-Brent rho with
// Miller-Rabin certification.  Rejects n == 0.
PrimeFactorization factorize(std::int64_t n);
PrimeFactorization factorize_u64(std::uint64_t n);
std::int64_t unfactorize(const PrimeFactorization& f);

// All positive divisors, unsorted unless sort_them.
std::vector<std::uint64_t> divisors(const PrimeFactorization& f, bool sort_them = false);

// Jacobi symbol (a/m) for odd m >= 1; a is reduced mod m first, so the
// symbol is fully periodic in a with period m.  Zero iff gcd(a,m) > 1.
int jacobi(std::int64_t a, std::int64_t m);

// Largest e with p^e | n.  Rejects n == 0, p < 2.
int valuation(std::int64_t n, std::uint64_t p);

// Floor square root; exact for all n >= 0.
std::int64_t isqrt64(std::int64_t n);
std::uint64_t isqrt_u64(std::uint64_t n);

// p^k as u64; throws if it overflows.
std::uint64_t ipow(std::uint64_t p, unsigned k);

// Inverse of a mod m (gcd(a,m) = 1), via extended Euclid.
std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t m);

// A residue r with r^2 == a (mod p^k), or nullopt iff a is a non-square
// mod p^k.  p prime, p^k within u64.  Tonelli-Shanks at the prime level,
// Hensel lifting above it; the mod-8 case table handles p = 2.
std::optional<std::uint64_t> sqrt_mod(std::int64_t a, std::uint64_t p, unsigned k);

enum class PowerResidueClass { Zero, NonResidue, SquareNotFourth, FourthPower };

// Classification of a mod q in the tower {0} / non-squares / squares that
// are not fourth powers / fourth powers, for prime q == 1 (mod 8).
PowerResidueClass power_residue_class(std::int64_t a, std::uint64_t q);

struct MoebiusTau {
  int mu = 0;
  std::int64_t tau = 0;
};

MoebiusTau moebius_tau(std::uint64_t n);

// sign(n) times the product of the primes with odd exponent in n.
std::int64_t squarefree_kernel(std::int64_t n);

}  // namespace qbm

#pragma once
// Euler products and Selberg-Delange constants attached to the census:
// the pairwise-coprimality density C_{a,b,c}, its side-condition variant
// C_f with the (q+1)/(q+2) prefactor, the quadratic L-value L(psi,1) for
// psi = (./q), the splitting-density constant
//
//   D = pi^{-1/2} (1 - 1/q)^{1/2} L(psi,1)^{1/2}
//       prod_{psi(p) = -1} (1 - p^{-2})^{1/2},
//
// and the main-term constant E = 2 C_1 D q^{-3/2}
// prod_{psi(p)=1} (1 - 1/(p(p+2))).  D comes from the Dirichlet-series
// factorization F(s) = (1 - q^{-s})^{1/2} zeta(s)^{1/2} L(psi,s)^{1/2}
// K(s) of the splitting indicator's generating series; the compact
// closed form sometimes quoted for it cannot be evaluated literally as
// printed, so the factorized form above is the one computed here.
// Every product is truncated at a prime bound P with an elementary tail
// bound reported alongside the value.

#include <cstdint>
#include <string>

namespace qbm {

struct ConstantReport {
  std::string name;
  double value = 0.0;
  std::uint64_t truncation_prime = 0;
  double error_estimate = 0.0;
  std::string inputs;
};

// prod_{p <= P} (1 - 1/p)^2 (1 + (2-i)/p) with i = #{a,b,c divisible
// by p}: the density of pairwise-coprime triples with (x,a) = (y,b) =
// (z,c) = 1.
ConstantReport euler_C(std::int64_t a, std::int64_t b, std::int64_t c, std::uint64_t P = 1000000);

// ((q+1)/(q+2)) prod_{p|f} (1 + 2/p)^{-1} prod_{p <= P} (1 - 3/p^2 + 2/p^3).
ConstantReport euler_C_f(std::uint64_t f, std::uint64_t q, std::uint64_t P = 1000000);

// L(psi,1) by direct summation of sum psi(n)/n over n <= 10^8 q, whose
// partial-summation tail is below q/N = 10^-8.  Cached per process.
ConstantReport dirichlet_L1(std::uint64_t q);

ConstantReport constant_D(std::uint64_t q, std::uint64_t P = 1000000);

ConstantReport constant_E(std::uint64_t q, std::uint64_t P = 1000000);

}  // namespace qbm

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "qbm/arith.hpp"

using namespace qbm;

// Independent Jacobi oracle: factor the modulus, take Legendre symbols by
// Euler's criterion, multiply.
static int slow_jacobi(std::int64_t a, std::int64_t m) {
  std::int64_t r = ((a % m) + m) % m;
  if (m == 1) return 1;
  int result = 1;
  for (auto [p, e] : factorize(m).factors) {
    std::uint64_t euler = pow_mod(static_cast<std::uint64_t>(r % static_cast<std::int64_t>(p)), (p - 1) / 2, p);
    int leg = euler == 0 ? 0 : (euler == 1 ? 1 : -1);
    for (int i = 0; i < e; ++i) {
      if (leg == 0) return 0;
      result *= leg;
    }
  }
  return result;
}

TEST_CASE("factorize matches hand values and multiplies back") {
  auto f = factorize(360);
  REQUIRE(f.factors.size() == 3);
  CHECK(f.factors[0] == std::pair<std::uint64_t, int>{2, 3});
  CHECK(f.factors[1] == std::pair<std::uint64_t, int>{3, 2});
  CHECK(f.factors[2] == std::pair<std::uint64_t, int>{5, 1});
  CHECK(f.sign == 1);

  auto g = factorize(-1);
  CHECK(g.sign == -1);
  CHECK(g.factors.empty());
  CHECK(unfactorize(g) == -1);

  CHECK_THROWS_AS(factorize(0), std::invalid_argument);

  std::mt19937_64 rng(12345);
  for (int i = 0; i < 20000; ++i) {
    std::int64_t n = static_cast<std::int64_t>(rng() >> 1) % 2000000000000000LL;
    if (n == 0) n = 1;
    if (rng() & 1) n = -n;
    auto h = factorize(n);
    CHECK(unfactorize(h) == n);
    for (std::size_t j = 0; j + 1 < h.factors.size(); ++j) CHECK(h.factors[j].first < h.factors[j + 1].first);
    for (auto [p, e] : h.factors) CHECK(is_prime(p));
  }
}

TEST_CASE("factorize handles adversarial 64-bit inputs") {
  // Large semiprime: 1000003 * 1000033.
  auto f = factorize(1000003LL * 1000033LL);
  REQUIRE(f.factors.size() == 2);
  CHECK(f.factors[0].first == 1000003);
  CHECK(f.factors[1].first == 1000033);
  // Prime just under 2^62.
  auto g = factorize((1LL << 62) - 57);
  REQUIRE(g.factors.size() == 1);
  CHECK(g.factors[0].second == 1);
  // Square of a 10-digit prime.
  std::uint64_t p = 2147483647ULL;
  auto h = factorize_u64(p * p);
  REQUIRE(h.factors.size() == 1);
  CHECK(h.factors[0] == std::pair<std::uint64_t, int>{p, 2});
}

TEST_CASE("is_prime on known primes, Carmichael numbers, Mersenne") {
  CHECK(is_prime(2));
  CHECK(is_prime(17));
  CHECK(is_prime((1ULL << 61) - 1));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(561));
  CHECK_FALSE(is_prime(3215031751ULL));
  CHECK_FALSE(is_prime(UINT64_MAX));
}

TEST_CASE("jacobi agrees with the factored Legendre oracle") {
  CHECK(jacobi(2, 15) == 1);
  CHECK(jacobi(2, 17) == 1);
  CHECK(jacobi(3, 17) == -1);
  CHECK(jacobi(0, 1) == 1);
  CHECK(jacobi(9, 15) == 0);
  CHECK_THROWS_AS(jacobi(1, 4), std::invalid_argument);
  CHECK_THROWS_AS(jacobi(1, -3), std::invalid_argument);
  for (std::int64_t m = 1; m <= 301; m += 2)
    for (std::int64_t a = -300; a <= 300; ++a) CHECK(jacobi(a, m) == slow_jacobi(a, m));
}

TEST_CASE("jacobi multiplicativity and periodicity over the stated range, sampled") {
  std::mt19937_64 rng(777);
  std::uniform_int_distribution<std::int64_t> ab(-1000, 1000);
  std::uniform_int_distribution<std::int64_t> mm(0, 499);
  for (int i = 0; i < 200000; ++i) {
    std::int64_t a = ab(rng), b = ab(rng), m = 2 * mm(rng) + 1;
    CHECK(jacobi(a * b, m) == jacobi(a, m) * jacobi(b, m));
    CHECK(jacobi(a + m, m) == jacobi(a, m));
  }
}

TEST_CASE("quadratic reciprocity for odd primes below 1000, exhaustive") {
  std::vector<std::int64_t> ps;
  for (std::int64_t p = 3; p < 1000; p += 2)
    if (is_prime(static_cast<std::uint64_t>(p))) ps.push_back(p);
  for (std::int64_t p : ps)
    for (std::int64_t r : ps) {
      if (p == r) continue;
      int sign = (p % 4 == 3 && r % 4 == 3) ? -1 : 1;
      CHECK(jacobi(p, r) * jacobi(r, p) == sign);
    }
}

TEST_CASE("valuation") {
  CHECK(valuation(48, 2) == 4);
  CHECK(valuation(48, 3) == 1);
  CHECK(valuation(48, 5) == 0);
  CHECK(valuation(-48, 2) == 4);
  CHECK_THROWS_AS(valuation(0, 2), std::invalid_argument);
}

TEST_CASE("sqrt_mod agrees with exhaustive enumeration") {
  // Full check over every modulus p^k <= 20000 and every residue.
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL,
                          37ULL, 41ULL, 43ULL, 47ULL, 53ULL, 59ULL, 61ULL, 67ULL, 71ULL, 73ULL,
                          79ULL, 83ULL, 89ULL, 97ULL, 101ULL, 139ULL, 9973ULL}) {
    for (unsigned k = 1;; ++k) {
      std::uint64_t pk;
      try {
        pk = ipow(p, k);
      } catch (const std::overflow_error&) {
        break;
      }
      if (pk > 20000) break;
      std::vector<char> is_square(pk, 0);
      for (std::uint64_t r = 0; r < pk; ++r) is_square[mul_mod(r, r, pk)] = 1;
      for (std::uint64_t a = 0; a < pk; ++a) {
        auto s = sqrt_mod(static_cast<std::int64_t>(a), p, k);
        CHECK(s.has_value() == static_cast<bool>(is_square[a]));
        if (s) CHECK(mul_mod(*s, *s, pk) == a);
      }
    }
  }
  // Larger moduli, sampled residues.
  std::mt19937_64 rng(424242);
  for (auto [p, k] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 16}, {3, 10}, {99991, 1}, {313, 2}}) {
    std::uint64_t pk = ipow(p, k);
    std::vector<char> is_square(pk, 0);
    for (std::uint64_t r = 0; r < pk; ++r) is_square[mul_mod(r, r, pk)] = 1;
    for (int i = 0; i < 5000; ++i) {
      std::uint64_t a = rng() % pk;
      auto s = sqrt_mod(static_cast<std::int64_t>(a), p, k);
      CHECK(s.has_value() == static_cast<bool>(is_square[a]));
      if (s) CHECK(mul_mod(*s, *s, pk) == a);
    }
  }
  CHECK_THROWS_AS(sqrt_mod(1, 4, 1), std::invalid_argument);
  CHECK_THROWS_AS(sqrt_mod(1, 3, 0), std::invalid_argument);
}

TEST_CASE("power_residue_class mod 17: the three nonzero layers") {
  std::vector<std::int64_t> fourth, square_not_fourth, non;
  for (std::int64_t a = 1; a <= 16; ++a) {
    switch (power_residue_class(a, 17)) {
      case PowerResidueClass::FourthPower: fourth.push_back(a); break;
      case PowerResidueClass::SquareNotFourth: square_not_fourth.push_back(a); break;
      case PowerResidueClass::NonResidue: non.push_back(a); break;
      default: FAIL("unexpected zero class");
    }
  }
  CHECK(fourth == std::vector<std::int64_t>{1, 4, 13, 16});
  CHECK(square_not_fourth == std::vector<std::int64_t>{2, 8, 9, 15});
  CHECK(non.size() == 8);
  CHECK(power_residue_class(0, 17) == PowerResidueClass::Zero);
  CHECK(power_residue_class(17, 17) == PowerResidueClass::Zero);
  CHECK(power_residue_class(-2, 17) == PowerResidueClass::SquareNotFourth);  // -2 == 15 mod 17
  CHECK_THROWS_AS(power_residue_class(1, 7), std::invalid_argument);
  CHECK_THROWS_AS(power_residue_class(1, 25), std::invalid_argument);
}

TEST_CASE("power_residue_class against brute-force fourth powers, q = 41") {
  std::vector<char> sq(41, 0), fp(41, 0);
  for (std::uint64_t r = 1; r < 41; ++r) {
    sq[r * r % 41] = 1;
    fp[r * r % 41 * r % 41 * r % 41] = 1;
  }
  int in_s = 0;
  for (std::int64_t a = 1; a <= 40; ++a) {
    auto c = power_residue_class(a, 41);
    if (!sq[a]) CHECK(c == PowerResidueClass::NonResidue);
    if (sq[a] && fp[a]) CHECK(c == PowerResidueClass::FourthPower);
    if (sq[a] && !fp[a]) {
      CHECK(c == PowerResidueClass::SquareNotFourth);
      ++in_s;
    }
  }
  CHECK(in_s == 10);  // (q - 1) / 4
}

TEST_CASE("moebius_tau") {
  CHECK(moebius_tau(1).mu == 1);
  CHECK(moebius_tau(1).tau == 1);
  CHECK(moebius_tau(12).mu == 0);
  CHECK(moebius_tau(12).tau == 6);
  CHECK(moebius_tau(30).mu == -1);
  CHECK(moebius_tau(30).tau == 8);
  CHECK(moebius_tau(17).mu == -1);
  CHECK(moebius_tau(105).mu == -1);
  CHECK(moebius_tau(210).mu == 1);
  // Mertens partial sums as a cross-check on mu.
  std::int64_t mertens = 0;
  for (std::uint64_t n = 1; n <= 10000; ++n) mertens += moebius_tau(n).mu;
  CHECK(mertens == -23);
}

TEST_CASE("divisors enumerates the full divisor lattice") {
  auto ds = divisors(factorize(360), true);
  CHECK(ds.size() == 24);
  CHECK(ds.front() == 1);
  CHECK(ds.back() == 360);
  std::uint64_t sum = std::accumulate(ds.begin(), ds.end(), 0ULL);
  CHECK(sum == 1170);  // sigma(360)
}

TEST_CASE("isqrt and ipow edges") {
  CHECK(isqrt64(0) == 0);
  CHECK(isqrt64(15) == 3);
  CHECK(isqrt64(16) == 4);
  CHECK(isqrt64((1LL << 62) - 1) == 2147483647LL);
  CHECK(isqrt_u64(UINT64_MAX) == 4294967295ULL);
  CHECK(ipow(3, 4) == 81);
  CHECK_THROWS_AS(ipow(10, 30), std::overflow_error);
  CHECK(mod_inverse(3, 17) == 6);
}

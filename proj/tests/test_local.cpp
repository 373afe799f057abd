#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <random>
#include <vector>

#include "doctest.h"
#include "qbm/arith.hpp"
#include "qbm/local.hpp"

using namespace qbm;
using std::int64_t;
using std::uint64_t;

namespace {

uint64_t powu(uint64_t p, unsigned k) {
  uint64_t r = 1;
  while (k--) r *= p;
  return r;
}

// Exhaustive: does a solution of a x^2 + b y^2 + c z^2 = n exist mod p^k?
bool exists_mod(const QuadricInstance& Q, uint64_t p, unsigned k) {
  uint64_t M = powu(p, k);
  auto sq = [&](int64_t coef, uint64_t t) {
    __int128 v = static_cast<__int128>(coef) * t % static_cast<__int128>(M) * t;
    int64_t r = static_cast<int64_t>(v % static_cast<__int128>(M));
    return static_cast<uint64_t>(r < 0 ? r + static_cast<int64_t>(M) : r);
  };
  uint64_t nr = static_cast<uint64_t>(((Q.n % static_cast<int64_t>(M)) + static_cast<int64_t>(M)) % static_cast<int64_t>(M));
  for (uint64_t x = 0; x < M; ++x)
    for (uint64_t y = 0; y < M; ++y) {
      uint64_t partial = (sq(Q.a, x) + sq(Q.b, y)) % M;
      for (uint64_t z = 0; z < M; ++z)
        if ((partial + sq(Q.c, z)) % M == nr) return true;
    }
  return false;
}

// Independent re-check of a reported witness: vanishing mod p^k plus a
// derivative small enough for Newton lifting.
void check_witness(const QuadricInstance& Q, uint64_t p, const LocalVerdict& v) {
  REQUIRE(v.solvable);
  REQUIRE(v.witness.has_value());
  unsigned k = v.witness_exponent;
  REQUIRE(k >= 1);
  uint64_t M = powu(p, k);
  auto& w = *v.witness;
  __int128 F = -static_cast<__int128>(Q.n);
  const int64_t coef[3] = {Q.a, Q.b, Q.c};
  for (int i = 0; i < 3; ++i) {
    REQUIRE(w[i] >= 0);
    REQUIRE(static_cast<uint64_t>(w[i]) < M);
    F += static_cast<__int128>(coef[i]) * w[i] * w[i];
  }
  CHECK(static_cast<int64_t>(((F % static_cast<__int128>(M)) + M) % static_cast<__int128>(M)) == 0);
  int m = -1;
  for (int i = 0; i < 3; ++i) {
    if (w[i] == 0) continue;
    __int128 d = 2 * static_cast<__int128>(coef[i]) * w[i];
    int vv = 0;
    if (d < 0) d = -d;
    while (d % p == 0) d /= p, ++vv;
    if (m < 0 || vv < m) m = vv;
  }
  REQUIRE(m >= 0);
  CHECK(k >= 2 * static_cast<unsigned>(m) + 1);
}

bool sum_three_squares(int64_t n) {
  while (n % 4 == 0) n /= 4;
  return n % 8 != 7;
}

bool rep_one_one_two(int64_t n) {
  while (n % 4 == 0) n /= 4;
  return n % 16 != 14;
}

}  // namespace

TEST_CASE("instance validation") {
  CHECK_THROWS_AS(QuadricInstance(0, 1, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(QuadricInstance(1, 1, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(FamilyInstance(7, 1, 1, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(FamilyInstance(19, 1, 1, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(FamilyInstance(17, 1, 2, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(FamilyInstance(17, 0, 1, 1, 1), std::invalid_argument);
  CHECK_NOTHROW(FamilyInstance(17, -5, 1, 2, 3));
  CHECK_NOTHROW(FamilyInstance(41, 3, 2, 3, 5));
  FamilyInstance f(17, 2, 3, 5, 1);
  QuadricInstance d = f.derived();
  CHECK(d.a == 2 * 289 * 9);
  CHECK(d.b == -2 * 25);
  CHECK(d.c == 17);
  CHECK(d.n == 1);
}

TEST_CASE("real place") {
  CHECK(solvable_real(QuadricInstance(1, 1, -1, 5)));
  CHECK(solvable_real(QuadricInstance(1, 1, 1, 5)));
  CHECK_FALSE(solvable_real(QuadricInstance(1, 1, 1, -5)));
  CHECK(solvable_real(QuadricInstance(-1, -2, -3, -4)));
  CHECK_FALSE(solvable_real(QuadricInstance(-1, -2, -3, 4)));
}

TEST_CASE("certified depth formula") {
  CHECK(certified_depth(QuadricInstance(1, 1, 1, 7), 2) == 5);
  CHECK(certified_depth(QuadricInstance(8, 3, 9, 250), 2) == 11);
  CHECK(certified_depth(QuadricInstance(8, 3, 9, 250), 5) == 9);
  CHECK(certified_depth(QuadricInstance(8, 3, 9, 250), 3) == 7);
  CHECK(certified_depth(QuadricInstance(8, 3, 9, 250), 7) == 3);
}

TEST_CASE("hand-checked local verdicts") {
  QuadricInstance q7(1, 1, 1, 7);
  auto v2 = solvable_at_prime(q7, 2);
  CHECK_FALSE(v2.solvable);
  CHECK(v2.searched_depth == 5);
  auto ev = solvable_everywhere(q7);
  CHECK_FALSE(ev.solvable);
  REQUIRE(ev.failing.size() == 1);
  CHECK(ev.failing[0] == Place::finite(2));

  CHECK(solvable_at_prime(q7, 3).solvable);
  CHECK(solvable_at_prime(q7, 7).solvable);

  auto ev2 = solvable_everywhere(QuadricInstance(1, 1, -1, 2));
  CHECK(ev2.solvable);

  auto evneg = solvable_everywhere(QuadricInstance(1, 1, 1, -1));
  CHECK_FALSE(evneg.solvable);
  REQUIRE(evneg.failing.size() == 2);
  CHECK(evneg.failing[0] == Place::archimedean());
  CHECK(evneg.failing[1] == Place::finite(2));

  CHECK(solvable_everywhere(QuadricInstance(-3, -5, -7, -15)).solvable);

  auto v3 = solvable_at_prime(QuadricInstance(3, 3, 1, 2), 3);
  CHECK_FALSE(v3.solvable);
  CHECK(v3.searched_depth == certified_depth(QuadricInstance(3, 3, 1, 2), 3));

  CHECK_FALSE(solvable_at_prime(QuadricInstance(1, 1, 1, 28), 2).solvable);
  CHECK_FALSE(solvable_at_prime(QuadricInstance(1, 1, 1, 448), 2).solvable);

  auto v32 = solvable_at_prime(QuadricInstance(1, 1, 1, 32), 2);
  check_witness(QuadricInstance(1, 1, 1, 32), 2, v32);
  CHECK(v32.witness->at(0) % 2 == 0);

  auto vc = solvable_at_prime(QuadricInstance(2, 2, 2, 2), 2);
  check_witness(QuadricInstance(2, 2, 2, 2), 2, vc);

  auto v25 = solvable_at_prime(QuadricInstance(25, 5, 1, 5), 5);
  check_witness(QuadricInstance(25, 5, 1, 5), 5, v25);

  auto vbig = solvable_at_prime(QuadricInstance(1, 1, 1, 999999937), 999999937);
  check_witness(QuadricInstance(1, 1, 1, 999999937), 999999937, vbig);

  CHECK_THROWS_AS(solvable_at_prime(q7, 6), std::invalid_argument);
}

TEST_CASE("negative verdicts are depth-stable") {
  QuadricInstance q7(1, 1, 1, 7);
  for (unsigned d : {7u, 9u, 12u}) {
    auto v = solvable_at_prime_to_depth(q7, 2, d);
    CHECK_FALSE(v.solvable);
    CHECK(v.searched_depth == d);
  }
  QuadricInstance q33(3, 3, 1, 2);
  auto v = solvable_at_prime_to_depth(q33, 3, certified_depth(q33, 3) + 2);
  CHECK_FALSE(v.solvable);
}

TEST_CASE("classical genus-one forms as global oracles") {
  for (int64_t n = 1; n <= 200; ++n) {
    CAPTURE(n);
    CHECK(solvable_everywhere(QuadricInstance(1, 1, 1, n)).solvable == sum_three_squares(n));
    CHECK(solvable_everywhere(QuadricInstance(1, 1, 2, n)).solvable == rep_one_one_two(n));
  }
}

TEST_CASE("primes away from the discriminant are always solvable") {
  const uint64_t primes[] = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};
  for (int64_t a = -10; a <= 10; ++a)
    for (int64_t b = -10; b <= 10; ++b)
      for (int64_t c = -10; c <= 10; ++c) {
        if (a == 0 || b == 0 || c == 0) continue;
        for (int64_t n : {int64_t(1), int64_t(5), int64_t(12)}) {
          QuadricInstance Q(a, b, c, n);
          for (uint64_t p : primes) {
            if ((2 * a * b * c * n) % static_cast<int64_t>(p) == 0) continue;
            auto v = solvable_at_prime(Q, p);
            if (!v.solvable) {
              CAPTURE(a);
              CAPTURE(b);
              CAPTURE(c);
              CAPTURE(n);
              CAPTURE(p);
              REQUIRE(v.solvable);
            }
          }
        }
      }
}

TEST_CASE("odd-coefficient 2-adic verdicts match exhaustive search") {
  std::mt19937_64 rng(20260822);
  for (int iter = 0; iter < 400; ++iter) {
    auto odd = [&](int64_t lim) {
      int64_t v;
      do {
        v = static_cast<int64_t>(rng() % (2 * lim + 1)) - lim;
      } while (v == 0 || v % 2 == 0);
      return v;
    };
    QuadricInstance Q(odd(9), odd(9), odd(9), odd(63));
    CAPTURE(Q.a);
    CAPTURE(Q.b);
    CAPTURE(Q.c);
    CAPTURE(Q.n);
    REQUIRE(certified_depth(Q, 2) == 5);
    auto v = solvable_at_prime(Q, 2);
    bool truth = exists_mod(Q, 2, 5);
    CHECK(v.solvable == truth);
    if (v.solvable) check_witness(Q, 2, v);
  }
}

TEST_CASE("random verdicts against bounded enumeration") {
  std::mt19937_64 rng(777444);
  const uint64_t ps[] = {2, 3, 5, 7};
  for (int iter = 0; iter < 400; ++iter) {
    auto pick = [&](int64_t lim) {
      int64_t v;
      do {
        v = static_cast<int64_t>(rng() % (2 * lim + 1)) - lim;
      } while (v == 0);
      return v;
    };
    QuadricInstance Q(pick(25), pick(25), pick(25), pick(60));
    uint64_t p = ps[rng() % 4];
    unsigned K = certified_depth(Q, p);
    unsigned Kp = 0;
    while (Kp + 1 <= K && powu(p, 3 * (Kp + 1)) <= 250000u) ++Kp;
    auto v = solvable_at_prime(Q, p);
    CAPTURE(Q.a);
    CAPTURE(Q.b);
    CAPTURE(Q.c);
    CAPTURE(Q.n);
    CAPTURE(p);
    if (v.solvable) {
      check_witness(Q, p, v);
      if (Kp >= 1) CHECK(exists_mod(Q, p, Kp));
    }
  }
}

TEST_CASE("closed family criterion agrees with the generic decider") {
  const std::array<std::array<int64_t, 3>, 6> cde = {
      {{1, 1, 1}, {2, 1, 1}, {1, 2, 3}, {3, 2, 1}, {2, 3, 5}, {1, 1, 2}}};
  for (uint64_t q : {uint64_t(17), uint64_t(41)})
    for (int64_t a = -20; a <= 20; ++a) {
      if (a == 0) continue;
      for (auto& t : cde) {
        FamilyInstance f(q, a, t[0], t[1], t[2]);
        bool crit = family_local_criterion(f);
        bool dec = solvable_everywhere(f.derived()).solvable;
        CAPTURE(q);
        CAPTURE(a);
        CAPTURE(t[0]);
        CAPTURE(t[1]);
        CAPTURE(t[2]);
        CHECK(crit == dec);
      }
    }
}

TEST_CASE("family criterion hand values") {
  CHECK(family_local_criterion(FamilyInstance(17, 1, 1, 1, 1)));
  CHECK(family_local_criterion(FamilyInstance(17, 2, 1, 1, 1)));
  CHECK(family_local_criterion(FamilyInstance(17, 13, 1, 1, 1)));
  CHECK_FALSE(family_local_criterion(FamilyInstance(17, 3, 1, 1, 1)));
  CHECK_FALSE(family_local_criterion(FamilyInstance(17, 9, 1, 1, 1)));
  CHECK_FALSE(family_local_criterion(FamilyInstance(17, 1, 1, 17, 1)));
  CHECK_FALSE(family_local_criterion(FamilyInstance(17, 17, 1, 1, 1)));
  CHECK_FALSE(family_local_criterion(FamilyInstance(17, 5, 1, 1, 5)));
  CHECK(family_local_criterion(FamilyInstance(17, -2, 1, 1, 1)));
  CHECK_FALSE(family_local_criterion(FamilyInstance(17, -3, 1, 1, 1)));
}

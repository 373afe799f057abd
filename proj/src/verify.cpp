// Implementation of the self-check suites.  Each check recomputes a
// fact two independent ways and compares: the coprimality encoding
// against its literal gcd definition, the divisor-sum rewrite against
// the divisibility indicator, character orthogonality against the
// Kronecker delta, the three census routes against each other, the
// weighted box sum against its permuted variants, decompositions
// against exact recomposition, and a handful of frozen reference
// values against fresh evaluations.

#include "qbm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "qbm/arith.hpp"
#include "qbm/brauer.hpp"
#include "qbm/census.hpp"
#include "qbm/constants.hpp"
#include "qbm/local.hpp"

namespace qbm {

namespace {

using u64 = std::uint64_t;
using i64 = std::int64_t;

void push(std::vector<CheckResult>& out, const std::string& name, bool passed, std::string detail) {
  out.push_back({name, passed, std::move(detail)});
}

void check_beta_encoding(std::vector<CheckResult>& out) {
  u64 bad = 0, first[3] = {0, 0, 0};
  for (u64 c = 1; c <= 40; ++c)
    for (u64 d = 1; d <= 40; ++d)
      for (u64 e = 1; e <= 40; ++e)
        if (static_cast<i64>(indicator_beta(c, d, e)) != indicator_beta_moebius(c, d, e)) {
          if (!bad) first[0] = c, first[1] = d, first[2] = e;
          ++bad;
        }
  std::ostringstream os;
  if (bad)
    os << bad << " mismatches, first at (" << first[0] << "," << first[1] << "," << first[2] << ")";
  else
    os << "exhaustive up to 40 in each argument";
  push(out, "pairwise_coprime_encoding", bad == 0, os.str());
}

void check_delta_rewrite(std::vector<CheckResult>& out) {
  u64 bad = 0;
  for (u64 u = 1; u <= 40; ++u)
    for (i64 v = -40; v <= 40; ++v) {
      if (v == 0) continue;
      if (indicator_delta_rewrite(u, v) != mpq_class(indicator_delta(u, v))) ++bad;
    }
  push(out, "divisibility_rewrite", bad == 0,
       bad ? std::to_string(bad) + " mismatches" : "exhaustive up to 40");
}

void check_orthogonality(std::vector<CheckResult>& out) {
  CharacterTable T(17);
  double worst = 0.0;
  for (std::size_t j1 = 0; j1 < T.count(); ++j1)
    for (std::size_t j2 = 0; j2 < T.count(); ++j2) {
      std::complex<double> s = 0.0;
      for (u64 a = 1; a < 17; ++a) s += T.value(j1, a) * std::conj(T.value(j2, a));
      double target = j1 == j2 ? 16.0 : 0.0;
      worst = std::max(worst, std::abs(s - std::complex<double>(target)));
    }
  for (u64 a = 1; a < 17; ++a)
    for (u64 b = 1; b < 17; ++b) {
      std::complex<double> s = 0.0;
      for (std::size_t j = 0; j < T.count(); ++j) s += T.value(j, a) * std::conj(T.value(j, b));
      double target = a == b ? 16.0 : 0.0;
      worst = std::max(worst, std::abs(s - std::complex<double>(target)));
    }
  std::ostringstream os;
  os << "largest deviation " << worst;
  push(out, "character_orthogonality", worst <= 1e-9, os.str());
}

void check_route_equality(std::vector<CheckResult>& out) {
  bool ok = true;
  std::ostringstream os;
  for (u64 B : {578ull, 5000ull}) {
    u64 direct = count_nbr_direct(B, 17).count;
    u64 moebius = count_nbr_moebius(B, 17);
    u64 characters = count_nbr_characters(B, 17).count;
    os << "B=" << B << ": " << direct << "/" << moebius << "/" << characters << " ";
    ok = ok && direct == moebius && direct == characters;
  }
  push(out, "census_route_equality", ok, os.str());
}

void check_sum_S_permutations(std::vector<CheckResult>& out, u64 seed) {
  std::mt19937_64 rng(seed ^ 0x5u);
  std::uniform_int_distribution<u64> bound(1, 6);
  std::uniform_int_distribution<i64> mult(-2, 2);
  u64 bad = 0;
  for (int trial = 0; trial < 10; ++trial) {
    std::array<std::pair<u64, i64>, 3> pairs;
    for (auto& pr : pairs) {
      pr.first = bound(rng);
      do pr.second = mult(rng);
      while (pr.second == 0);
    }
    for (bool weighted : {false, true}) {
      mpq_class ref = sum_S_direct(pairs[0].first, pairs[1].first, pairs[2].first, pairs[0].second,
                                   pairs[1].second, pairs[2].second, weighted);
      std::array<int, 3> idx = {0, 1, 2};
      do {
        mpq_class got =
            sum_S_direct(pairs[idx[0]].first, pairs[idx[1]].first, pairs[idx[2]].first,
                         pairs[idx[0]].second, pairs[idx[1]].second, pairs[idx[2]].second, weighted);
        if (got != ref) ++bad;
      } while (std::next_permutation(idx.begin(), idx.end()));
    }
  }
  push(out, "box_sum_permutation_symmetry", bad == 0,
       bad ? std::to_string(bad) + " broken permutations" : "10 random shapes, all 6 permutations");
}

void check_decomposition_roundtrip(std::vector<CheckResult>& out, u64 seed) {
  std::mt19937_64 rng(seed ^ 0x7u);
  const std::array<u64, 8> pool = {5, 7, 11, 13, 17, 19, 23, 29};
  u64 bad = 0, trials = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::array<u64, 8> primes = pool;
    std::shuffle(primes.begin(), primes.end(), rng);
    TripleDecomposition t;
    t.v1 = (rng() & 1 ? 1 : -1) * static_cast<i64>(1u << (rng() % 3));
    t.v2 = static_cast<i64>(3 * (1 + rng() % 2));
    t.v3 = 1;
    t.u12 = primes[0];
    t.u23 = primes[1];
    t.w13 = primes[2];
    t.w31 = primes[3];
    t.a1 = primes[4];
    auto co = recompose_triple(t);
    ++trials;
    TripleDecomposition back = decompose_triple(co[0], co[1], co[2], 6);
    auto rt = recompose_triple(back);
    if (rt != co || back.u12 != t.u12 || back.u23 != t.u23 || back.w13 != t.w13 ||
        back.w31 != t.w31 || back.a1 != t.a1)
      ++bad;
  }
  push(out, "decomposition_round_trip", bad == 0,
       bad ? std::to_string(bad) + " of " + std::to_string(trials) + " failed"
           : std::to_string(trials) + " generated triples recovered exactly");
}

void check_obstructing_set(std::vector<CheckResult>& out) {
  std::set<i64> S;
  for (i64 r = 1; r < 17; ++r)
    if (power_residue_class(r, 17) == PowerResidueClass::SquareNotFourth) S.insert(r);
  bool ok = S == std::set<i64>{2, 8, 9, 15};
  std::ostringstream os;
  os << "{";
  for (i64 r : S) os << r << ",";
  os << "} expected {2,8,9,15,}";
  push(out, "obstructing_residues_mod_17", ok, os.str());
}

void check_census_hand_count(std::vector<CheckResult>& out) {
  u64 got = count_nbr_direct(578, 17).count;
  std::ostringstream os;
  os << "direct count at 578 is " << got << ", quadruple-loop value 80";
  push(out, "census_hand_count", got == 80, os.str());
  u64 below = count_nbr_direct(289, 17).count;
  push(out, "census_empty_below_first_instance", below == 0,
       "count at 289 is " + std::to_string(below));
}

void check_first_fiber_points(std::vector<CheckResult>& out) {
  bool ok = true;
  std::ostringstream os;
  {
    PointSearchResult r = family_point_search(FamilyInstance(17, 1, 1, 1, 1), 10);
    ok = ok && r.point && r.point->x == 0 && r.point->y == -4 && r.point->z == -1;
    os << "(1,1,1,1): " << (r.point ? "found" : "none") << " ";
  }
  {
    PointSearchResult r = family_point_search(FamilyInstance(17, 1, 1, 3, 1), 10);
    ok = ok && r.point && r.point->x == -1 && r.point->y == -7 && r.point->z == -3;
    os << "(1,1,3,1): " << (r.point ? "found" : "none");
  }
  push(out, "first_fiber_points", ok, os.str());
}

void check_L_closed_form(std::vector<CheckResult>& out) {
  double L = dirichlet_L1(17).value;
  double closed = 2.0 * std::log(4.0 + std::sqrt(17.0)) / std::sqrt(17.0);
  std::ostringstream os;
  os << "summed " << L << " closed form " << closed;
  push(out, "l_value_closed_form", std::fabs(L - closed) <= 1e-8, os.str());
}

}  // namespace

SuiteReport run_suite(const std::string& suite, std::uint64_t seed) {
  const bool identities = suite == "identities" || suite == "all";
  const bool oracles = suite == "oracles" || suite == "all";
  if (!identities && !oracles)
    throw std::invalid_argument("run_suite: suite must be identities, oracles, or all");
  SuiteReport rep;
  rep.suite = suite;
  if (identities) {
    check_beta_encoding(rep.checks);
    check_delta_rewrite(rep.checks);
    check_orthogonality(rep.checks);
    check_route_equality(rep.checks);
    check_sum_S_permutations(rep.checks, seed);
    check_decomposition_roundtrip(rep.checks, seed);
  }
  if (oracles) {
    check_obstructing_set(rep.checks);
    check_census_hand_count(rep.checks);
    check_first_fiber_points(rep.checks);
    check_L_closed_form(rep.checks);
  }
  rep.ok = std::all_of(rep.checks.begin(), rep.checks.end(),
                       [](const CheckResult& c) { return c.passed; });
  return rep;
}

}  // namespace qbm

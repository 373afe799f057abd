#pragma once
// Self-check suites runnable from the command line.  The identity suite
// re-proves the combinatorial identities the counting engine rests on
// (coprimality encoding, divisor-sum rewrite, character orthogonality,
// agreement of the three census routes, permutation symmetry of the
// weighted box sum, decomposition round trips); the oracle suite pins
// frozen reference values (the obstructing residue set, a census count
// checked by quadruple loop, first points on known fibers, the closed
// form of the L-value).  A failed check signals an internal
// inconsistency, not bad user input.

#include <cstdint>
#include <string>
#include <vector>

namespace qbm {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  bool ok = false;  // every check passed
};

// suite is one of "identities", "oracles", "all".  The seed drives the
// randomized checks only.
SuiteReport run_suite(const std::string& suite, std::uint64_t seed);

}  // namespace qbm

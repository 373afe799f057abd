// Truncated Euler products, sequentially accumulated in long double in
// a fixed prime order so every report is deterministic.  Tail bounds are
// elementary: each neglected factor is 1 + O(p^-2), so the products over
// p > P move the value by a relative O(1/P), recorded conservatively in
// error_estimate.  The L-value is a literal partial sum of psi(n)/n in
// period blocks (each block summed in double, blocks accumulated in
// long double, so rounding stays far below the truncation tail q/N).

#include "qbm/constants.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "qbm/arith.hpp"

namespace qbm {
namespace {

using u64 = std::uint64_t;
using i64 = std::int64_t;

bool is_odd_prime(u64 q) {
  if (q < 3 || q % 2 == 0) return false;
  auto f = factorize_u64(q);
  return f.factors.size() == 1 && f.factors[0].second == 1;
}

std::vector<u64> primes_up_to(u64 P) {
  if (P > 200000000) throw std::invalid_argument("constants: truncation bound too large");
  std::vector<bool> comp(P + 1, false);
  std::vector<u64> primes;
  for (u64 i = 2; i <= P; ++i) {
    if (comp[i]) continue;
    primes.push_back(i);
    for (u64 j = i * i; j <= P; j += i) comp[j] = true;
  }
  return primes;
}

double as_double(long double v) { return static_cast<double>(v); }

}  // namespace

ConstantReport euler_C(i64 a, i64 b, i64 c, u64 P) {
  if (a == 0 || b == 0 || c == 0) throw std::invalid_argument("euler_C: side conditions must be nonzero");
  if (P < 2) throw std::invalid_argument("euler_C: truncation bound must be at least 2");
  long double value = 1.0L;
  for (u64 p : primes_up_to(P)) {
    const i64 sp = static_cast<i64>(p);
    const int i = (a % sp == 0) + (b % sp == 0) + (c % sp == 0);
    const long double ip = 1.0L / static_cast<long double>(p);
    value *= (1.0L - ip) * (1.0L - ip) * (1.0L + static_cast<long double>(2 - i) * ip);
  }
  std::ostringstream in;
  in << "a=" << a << ",b=" << b << ",c=" << c;
  return {"C", as_double(value), P, 3.0 / static_cast<double>(P), in.str()};
}

ConstantReport euler_C_f(u64 f, u64 q, u64 P) {
  if (f == 0 || moebius_tau(f).mu == 0) throw std::invalid_argument("euler_C_f: f must be squarefree");
  if (!is_odd_prime(q)) throw std::invalid_argument("euler_C_f: q must be an odd prime");
  if (P < 2) throw std::invalid_argument("euler_C_f: truncation bound must be at least 2");
  long double value = static_cast<long double>(q + 1) / static_cast<long double>(q + 2);
  if (f > 1)
    for (const auto& [p, e] : factorize_u64(f).factors)
      value /= 1.0L + 2.0L / static_cast<long double>(p);
  for (u64 p : primes_up_to(P)) {
    const long double ip = 1.0L / static_cast<long double>(p);
    value *= 1.0L - 3.0L * ip * ip + 2.0L * ip * ip * ip;
  }
  std::ostringstream in;
  in << "f=" << f << ",q=" << q;
  return {"Cf", as_double(value), P, 3.0 / static_cast<double>(P), in.str()};
}

ConstantReport dirichlet_L1(u64 q) {
  if (q % 8 != 1 || !is_odd_prime(q)) throw std::invalid_argument("dirichlet_L1: q must be a prime congruent to 1 mod 8");
  static std::mutex cache_mutex;
  static std::map<u64, double> cache;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(q);
    if (it != cache.end()) {
      std::ostringstream in;
      in << "q=" << q;
      return {"L1", it->second, 0, 1e-8, in.str()};
    }
  }
  std::vector<double> psi(q);
  for (u64 r = 0; r < q; ++r) psi[r] = static_cast<double>(jacobi(static_cast<i64>(r), static_cast<i64>(q)));
  const u64 blocks = 100000000;  // N = q * 10^8 terms, tail <= q/N = 10^-8
  long double acc = 0.0L;
  for (u64 k = 0; k < blocks; ++k) {
    const double base = static_cast<double>(k) * static_cast<double>(q);
    double block = 0.0;
    for (u64 r = 1; r < q; ++r) block += psi[r] / (base + static_cast<double>(r));
    acc += block;
  }
  const double value = as_double(acc);
  if (!(value > 0.0)) throw std::logic_error("dirichlet_L1: L-value must be positive");
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    cache[q] = value;
  }
  std::ostringstream in;
  in << "q=" << q;
  return {"L1", value, 0, 1e-8, in.str()};
}

ConstantReport constant_D(u64 q, u64 P) {
  if (P < 2) throw std::invalid_argument("constant_D: truncation bound must be at least 2");
  ConstantReport L = dirichlet_L1(q);
  long double inert = 1.0L;
  for (u64 p : primes_up_to(P))
    if (jacobi(static_cast<i64>(p % q), static_cast<i64>(q)) == -1) {
      const long double ip = 1.0L / static_cast<long double>(p);
      inert *= 1.0L - ip * ip;
    }
  const long double value = std::sqrt(1.0L / std::numbers::pi_v<long double>) *
                            std::sqrt(1.0L - 1.0L / static_cast<long double>(q)) *
                            std::sqrt(static_cast<long double>(L.value)) * std::sqrt(inert);
  if (!(value > 0.0L)) throw std::logic_error("constant_D: value must be positive");
  const double err = as_double(value) * (0.5 / static_cast<double>(P) + L.error_estimate / (2.0 * L.value));
  std::ostringstream in;
  in << "q=" << q;
  return {"D", as_double(value), P, err, in.str()};
}

ConstantReport constant_E(u64 q, u64 P) {
  ConstantReport C1 = euler_C_f(1, q, P);
  ConstantReport D = constant_D(q, P);
  long double split = 1.0L;
  for (u64 p : primes_up_to(P))
    if (jacobi(static_cast<i64>(p % q), static_cast<i64>(q)) == 1)
      split *= 1.0L - 1.0L / (static_cast<long double>(p) * static_cast<long double>(p + 2));
  const long double value = 2.0L * static_cast<long double>(C1.value) * static_cast<long double>(D.value) /
                            std::pow(static_cast<long double>(q), 1.5L) * split;
  if (!(value > 0.0L)) throw std::logic_error("constant_E: value must be positive");
  const double err = as_double(value) * (C1.error_estimate / C1.value + D.error_estimate / D.value +
                                         1.0 / static_cast<double>(P));
  std::ostringstream in;
  in << "q=" << q;
  return {"E", as_double(value), P, err, in.str()};
}

}  // namespace qbm

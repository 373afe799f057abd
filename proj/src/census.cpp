// Counting engine for the obstructed-parameter census.  Everything here
// is exact integer arithmetic: range conditions like q^2 a c^2 <= B are
// decided by multiplication, never by floating square roots, and the
// three routes to N(B) (direct, Moebius-rearranged, character-expanded)
// must agree to the last integer.  The workhorse is the four-fold
// divisor encoding of pairwise coprimality,
//
//   beta(x,y,z) = sum_{t|(x,y,z)} sum_{u|(x,y)} sum_{v|(x,z)} sum_{w|(y,z)}
//                 mu(uvwt) mu(t) tau(t),
//
// which on squarefree pairwise-coprime (t,u,v,w) carries weight
// mu(u) mu(v) mu(w) tau(t) and turns each triple sum over a box into a
// short sum of floor divisions against multiples-counting functions.

#include "qbm/census.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <thread>

#include "qbm/local.hpp"

namespace qbm {
namespace {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u32 = std::uint32_t;
using u128 = unsigned __int128;
using i128 = __int128;

bool census_prime(u64 q) {
  if (q < 2) return false;
  auto f = factorize_u64(q);
  return f.factors.size() == 1 && f.factors[0].second == 1;
}

void validate_family_modulus(u64 q) {
  if (q % 8 != 1 || !census_prime(q))
    throw std::invalid_argument("census: q must be a prime congruent to 1 mod 8");
}

// mu and (on squarefree arguments) tau = 2^omega, sieved to N.
struct SieveTables {
  std::vector<std::int8_t> mu;
  std::vector<std::int32_t> tau;
};

SieveTables sieve_to(u64 N) {
  if (N < 1) N = 1;
  SieveTables st;
  st.mu.assign(N + 1, 0);
  st.tau.assign(N + 1, 0);
  std::vector<u32> spf(N + 1, 0);
  for (u64 i = 2; i <= N; ++i) {
    if (spf[i]) continue;
    for (u64 j = i; j <= N; j += i)
      if (!spf[j]) spf[j] = static_cast<u32>(i);
  }
  st.mu[1] = 1;
  st.tau[1] = 1;
  for (u64 i = 2; i <= N; ++i) {
    u64 p = spf[i], m = i / p;
    if (m % p == 0) continue;  // mu = 0, tau unused
    st.mu[i] = static_cast<std::int8_t>(-st.mu[m]);
    st.tau[i] = st.mu[m] ? 2 * st.tau[m] : 0;
  }
  return st;
}

// Largest x >= 0 with coef * x^2 <= B, exactly.
u64 sqrt_bound(u64 B, u128 coef) {
  if (coef == 0) throw std::logic_error("sqrt_bound: zero coefficient");
  if (coef > B) return 0;
  u64 x = isqrt_u64(B / static_cast<u64>(coef));
  while (static_cast<u128>(x + 1) * (x + 1) * coef <= B) ++x;
  while (x > 0 && static_cast<u128>(x) * x * coef > B) --x;
  return x;
}

// Signed divisors (d, mu(d)) of the radical of |v|, for counting
// integers in an interval coprime to v by inclusion-exclusion.
std::vector<std::pair<u64, i64>> signed_radical_divisors(u64 v) {
  std::vector<std::pair<u64, i64>> sd{{1, 1}};
  if (v > 1) {
    auto f = factorize_u64(v);
    for (const auto& [p, e] : f.factors) {
      std::size_t n = sd.size();
      for (std::size_t i = 0; i < n; ++i) sd.emplace_back(sd[i].first * p, -sd[i].second);
    }
  }
  return sd;
}

i64 count_coprime_up_to(u64 N, const std::vector<std::pair<u64, i64>>& sd) {
  i64 s = 0;
  for (const auto& [d, sign] : sd) s += sign * static_cast<i64>(N / d);
  return s;
}

u64 radical_of(const std::vector<std::pair<u64, i64>>& sd) { return sd.back().first; }

// sum over squarefree pairwise-coprime (t,u,v,w) of
// mu(u) mu(v) mu(w) tau(t) f1(tuv) f2(tuw) f3(tvw), with tuv <= b1,
// tuw <= b2, tvw <= b3.  The callables return counts that vanish beyond
// their bound, so the loop limits are exactly the support.
template <class F1, class F2, class F3>
i64 fourfold_sum(u64 b1, u64 b2, u64 b3, const SieveTables& st, F1&& f1, F2&& f2, F3&& f3) {
  if (b1 == 0 || b2 == 0 || b3 == 0) return 0;
  i64 total = 0;
  const u64 tmax = std::min({b1, b2, b3});
  for (u64 t = 1; t <= tmax; ++t) {
    if (st.mu[t] == 0) continue;
    const i64 wt = st.tau[t];
    const u64 umax = std::min(b1, b2) / t;
    for (u64 u = 1; u <= umax; ++u) {
      if (st.mu[u] == 0 || std::gcd(u, t) != 1) continue;
      const u64 tu = t * u;
      const u64 vmax = std::min(b1 / tu, b3 / t);
      for (u64 v = 1; v <= vmax; ++v) {
        if (st.mu[v] == 0 || std::gcd(v, tu) != 1) continue;
        const i64 c1 = f1(tu * v);
        if (c1 == 0) continue;
        const i64 head = wt * st.mu[u] * st.mu[v] * c1;
        const u64 tuv = tu * v, tv = t * v;
        const u64 wmax = std::min(b2 / tu, b3 / tv);
        for (u64 w = 1; w <= wmax; ++w) {
          if (st.mu[w] == 0 || std::gcd(w, tuv) != 1) continue;
          const i64 c2 = f2(tu * w);
          if (c2 == 0) continue;
          const i64 c3 = f3(tv * w);
          if (c3 == 0) continue;
          total += head * st.mu[w] * c2 * c3;
        }
      }
    }
  }
  return total;
}

bool alpha_nocheck(u64 a, u64 q) {
  if (a == 1) return true;
  auto f = factorize_u64(a);
  for (const auto& [p, e] : f.factors)
    if (jacobi(static_cast<i64>(p % q), static_cast<i64>(q)) != 1) return false;
  return true;
}

bool in_square_not_fourth(u64 a, u64 q) {
  return power_residue_class(static_cast<i64>(a % q), q) == PowerResidueClass::SquareNotFourth;
}

// Inner triple sum of the direct route for one admissible a:
// sum_{c <= C} sum_{d <= D, (d,q)=1} sum_{e <= E, (e,a)=1} beta(c,d,e).
u64 direct_inner(u64 B, u64 q, u64 a, u64 E, const SieveTables& st) {
  const u64 C = sqrt_bound(B, static_cast<u128>(q) * q * a);
  const u64 D = sqrt_bound(B, a);
  const auto sd_a = signed_radical_divisors(a);
  const u64 rad_a = radical_of(sd_a);
  i64 inner = fourfold_sum(
      C, D, E, st, [&](u64 m) { return static_cast<i64>(C / m); },
      [&](u64 m) { return m % q == 0 ? 0 : static_cast<i64>(D / m - D / (m * q)); },
      [&](u64 m) {
        if (std::gcd(m, rad_a) != 1) return i64{0};
        return count_coprime_up_to(E / m, sd_a);
      });
  return static_cast<u64>(inner);
}

u64 direct_block(u64 B, u64 q, u64 alo, u64 ahi, u64 E, const SieveTables& st) {
  u64 sum = 0;
  for (u64 a = alo; a < ahi; ++a) {
    if (!in_square_not_fourth(a, q)) continue;
    if (!alpha_nocheck(a, q)) continue;
    sum += direct_inner(B, q, a, E, st);
  }
  return sum;
}

double main_term(u64 B, std::optional<double> constant) {
  if (!constant || B < 2) return 0.0;
  double lb = std::log(static_cast<double>(B));
  return *constant * std::pow(static_cast<double>(B), 1.5) * std::sqrt(lb);
}

std::complex<long double> unit_root_ld(u64 k, u64 order) {
  long double angle = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(k) /
                      static_cast<long double>(order);
  return {std::cos(angle), std::sin(angle)};
}

std::complex<long double> chi_value_ld(const CharacterTable& T, std::size_t j, u64 a) {
  auto k = T.unity_exponent(j, a);
  if (!k) return {0.0L, 0.0L};
  return unit_root_ld(*k, T.modulus() - 1);
}

// U_chi(B) for every character at once; V(B,a,f) is computed once per
// (a,f) and distributed through the residue of a mod q.
std::vector<std::complex<long double>> all_U(u64 B, const CharacterTable& T) {
  const u64 q = T.modulus();
  std::vector<std::complex<long double>> U(T.count(), {0.0L, 0.0L});
  const u64 fmax = sqrt_bound(B, q);
  const SieveTables st_f = sieve_to(fmax);
  std::vector<u64> vres(q);
  for (u64 f = 1; f <= fmax; ++f) {
    if (st_f.mu[f] == 0 || !alpha_nocheck(f, q)) continue;
    std::fill(vres.begin(), vres.end(), 0);
    bool any = false;
    for (u64 a = 1; static_cast<u128>(q) * q * f * a <= B; ++a) {
      if (!alpha_nocheck(a, q)) continue;
      u64 V = census_V(B, q, a, f);
      if (V == 0) continue;
      vres[a % q] += V;
      any = true;
    }
    if (!any) continue;
    for (std::size_t j = 0; j < T.count(); ++j) {
      std::complex<long double> W{0.0L, 0.0L};
      for (u64 r = 1; r < q; ++r)
        if (vres[r]) W += chi_value_ld(T, j, r) * static_cast<long double>(vres[r]);
      U[j] += static_cast<long double>(st_f.mu[f]) * chi_value_ld(T, j, f) * W;
    }
  }
  return U;
}

}  // namespace

CharacterTable::CharacterTable(u64 q) : q_(q) {
  if (q < 3 || !census_prime(q)) throw std::invalid_argument("CharacterTable: modulus must be an odd prime");
  auto group = factorize_u64(q - 1);
  for (root_ = 2;; ++root_) {
    bool primitive = true;
    for (const auto& [r, e] : group.factors)
      if (pow_mod(root_ % q, (q - 1) / r, q) == 1) {
        primitive = false;
        break;
      }
    if (primitive) break;
  }
  dlog_.assign(q, 0);
  u64 cur = 1;
  for (u64 k = 0; k + 1 < q; ++k) {
    dlog_[cur] = static_cast<u32>(k);
    cur = mul_mod(cur, root_, q);
  }
  unit_circle_.reserve(q - 1);
  for (u64 k = 0; k + 1 < q; ++k) {
    double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(q - 1);
    unit_circle_.emplace_back(std::cos(angle), std::sin(angle));
  }
}

std::optional<u64> CharacterTable::unity_exponent(std::size_t j, u64 a) const {
  if (j >= count()) throw std::out_of_range("CharacterTable: character index out of range");
  a %= q_;
  if (a == 0) return std::nullopt;
  return (static_cast<u64>(j) * dlog_[a]) % (q_ - 1);
}

std::complex<double> CharacterTable::value(std::size_t j, u64 a) const {
  auto k = unity_exponent(j, a);
  if (!k) return {0.0, 0.0};
  return unit_circle_[static_cast<std::size_t>(*k)];
}

int indicator_alpha(u64 a, u64 q) {
  if (a == 0) throw std::invalid_argument("indicator_alpha: a must be positive");
  if (q < 3 || !census_prime(q)) throw std::invalid_argument("indicator_alpha: q must be an odd prime");
  return alpha_nocheck(a, q) ? 1 : 0;
}

int indicator_S(i64 a, u64 q) {
  return power_residue_class(a, q) == PowerResidueClass::SquareNotFourth ? 1 : 0;
}

double indicator_S_characters(i64 a, const CharacterTable& table) {
  const u64 q = table.modulus();
  i64 r = a % static_cast<i64>(q);
  if (r < 0) r += static_cast<i64>(q);
  std::complex<double> acc{0.0, 0.0};
  for (u64 s = 1; s < q; ++s) {
    if (power_residue_class(static_cast<i64>(s), q) != PowerResidueClass::SquareNotFourth) continue;
    for (std::size_t j = 0; j < table.count(); ++j)
      acc += table.value(j, s) * table.value(j, static_cast<u64>(r));
  }
  return acc.real() / static_cast<double>(q - 1);
}

int indicator_beta(u64 c, u64 d, u64 e) {
  if (c == 0 || d == 0 || e == 0) throw std::invalid_argument("indicator_beta: arguments must be positive");
  return std::gcd(c, d) == 1 && std::gcd(c, e) == 1 && std::gcd(d, e) == 1 ? 1 : 0;
}

i64 indicator_beta_moebius(u64 c, u64 d, u64 e) {
  if (c == 0 || d == 0 || e == 0)
    throw std::invalid_argument("indicator_beta_moebius: arguments must be positive");
  const u64 gcd_cd = std::gcd(c, d), gcd_ce = std::gcd(c, e), gcd_de = std::gcd(d, e);
  const u64 gcd_all = std::gcd(gcd_cd, e);
  auto square_free_divisors = [](u64 v) {
    std::vector<std::pair<u64, i64>> out;
    for (u64 d0 : divisors(factorize_u64(v), true)) {
      auto mt = moebius_tau(d0);
      if (mt.mu != 0) out.emplace_back(d0, mt.mu);
    }
    return out;
  };
  const auto ts = square_free_divisors(gcd_all);
  const auto us = square_free_divisors(gcd_cd);
  const auto vs = square_free_divisors(gcd_ce);
  const auto ws = square_free_divisors(gcd_de);
  i64 total = 0;
  for (const auto& [t, mu_t] : ts) {
    const i64 tau_t = static_cast<i64>(divisors(factorize_u64(t)).size());
    for (const auto& [u, mu_u] : us) {
      if (std::gcd(u, t) != 1) continue;
      for (const auto& [v, mu_v] : vs) {
        if (std::gcd(v, t * u) != 1) continue;
        for (const auto& [w, mu_w] : ws) {
          if (std::gcd(w, t * u * v) != 1) continue;
          total += mu_u * mu_v * mu_w * tau_t;
        }
      }
    }
  }
  return total;
}

int indicator_epsilon(u64 v, i64 n) {
  if (v == 0) throw std::invalid_argument("indicator_epsilon: v must be positive");
  if (n == 0) throw std::invalid_argument("indicator_epsilon: n must be nonzero");
  if (v == 1) return 1;
  const u64 two_n = 2 * static_cast<u64>(n < 0 ? -n : n);
  for (const auto& [p, e] : factorize_u64(v).factors)
    if (two_n % p != 0) return 0;
  return 1;
}

int indicator_delta(u64 u, i64 v) {
  if (u == 0) throw std::invalid_argument("indicator_delta: u must be positive");
  if (v == 0) throw std::invalid_argument("indicator_delta: v must be nonzero");
  if (u % 2 == 0) return 0;
  if (u == 1) return 1;
  auto f = factorize_u64(u);
  for (const auto& [p, e] : f.factors) {
    if (e > 1) return 0;
    if (jacobi(v, static_cast<i64>(p)) != 1) return 0;
  }
  return 1;
}

mpq_class indicator_delta_rewrite(u64 u, i64 v) {
  if (u == 0) throw std::invalid_argument("indicator_delta_rewrite: u must be positive");
  if (v == 0) throw std::invalid_argument("indicator_delta_rewrite: v must be nonzero");
  const u64 abs_v = static_cast<u64>(v < 0 ? -v : v);
  if (std::gcd(u, 2 * abs_v) != 1) return mpq_class(0);
  auto mt = moebius_tau(u);
  if (mt.mu == 0) return mpq_class(0);
  i64 sum = 0;
  for (u64 d : divisors(factorize_u64(u), true)) sum += jacobi(v, static_cast<i64>(d));
  mpq_class r(static_cast<long>(sum), static_cast<unsigned long>(mt.tau));
  r.canonicalize();
  return r;
}

CountReport count_nbr_direct(u64 B, u64 q, unsigned threads, std::optional<double> main_term_constant) {
  validate_family_modulus(q);
  auto t0 = std::chrono::steady_clock::now();
  CountReport rep;
  rep.B = B;
  rep.q = q;
  rep.route = "direct";
  rep.predicted = main_term(B, main_term_constant);
  const u64 amax = B / (q * q);
  const u64 E = sqrt_bound(B, q);
  const SieveTables st = sieve_to(sqrt_bound(B, 1) + 1);
  u64 total = 0;
  if (threads <= 1 || amax < 2 * threads) {
    total = direct_block(B, q, 1, amax + 1, E, st);
  } else {
    std::vector<u64> partial(threads, 0);
    std::vector<std::thread> pool;
    const u64 len = amax / threads + 1;
    for (unsigned i = 0; i < threads; ++i) {
      const u64 lo = 1 + i * len, hi = std::min(amax + 1, 1 + (i + 1) * len);
      if (lo >= hi) break;
      pool.emplace_back([&, i, lo, hi] { partial[i] = direct_block(B, q, lo, hi, E, st); });
    }
    for (auto& th : pool) th.join();
    for (u64 s : partial) total += s;
  }
  rep.count = 2 * total;
  rep.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

u64 census_V(u64 B, u64 q, u64 a, u64 f) {
  validate_family_modulus(q);
  if (a == 0 || f == 0) throw std::invalid_argument("census_V: a and f must be positive");
  const u64 C = sqrt_bound(B, static_cast<u128>(q) * q * a * f);
  const u64 D = sqrt_bound(B, static_cast<u128>(a) * f);
  const u64 E = sqrt_bound(B, static_cast<u128>(q) * f * f);
  const SieveTables st = sieve_to(std::max({C, D, E}));
  const auto sd_f = signed_radical_divisors(f);
  const u64 rad_f = radical_of(sd_f);
  auto sd_qf = signed_radical_divisors(f);
  if (f % q != 0) {
    std::size_t n = sd_qf.size();
    for (std::size_t i = 0; i < n; ++i) sd_qf.emplace_back(sd_qf[i].first * q, -sd_qf[i].second);
  }
  const u64 rad_qf = radical_of(sd_qf);
  i64 inner = fourfold_sum(
      C, D, E, st,
      [&](u64 m) {
        if (std::gcd(m, rad_f) != 1) return i64{0};
        return count_coprime_up_to(C / m, sd_f);
      },
      [&](u64 m) {
        if (std::gcd(m, rad_qf) != 1) return i64{0};
        return count_coprime_up_to(D / m, sd_qf);
      },
      [&](u64 m) { return static_cast<i64>(E / m); });
  return static_cast<u64>(inner);
}

u64 count_nbr_moebius(u64 B, u64 q) {
  validate_family_modulus(q);
  const u64 fmax = sqrt_bound(B, q);
  const SieveTables st_f = sieve_to(fmax);
  i64 total = 0;
  for (u64 f = 1; f <= fmax; ++f) {
    if (st_f.mu[f] == 0 || !alpha_nocheck(f, q)) continue;
    for (u64 a = 1; static_cast<u128>(q) * q * f * a <= B; ++a) {
      if (!alpha_nocheck(a, q)) continue;
      if (!in_square_not_fourth((f % q) * (a % q) % q, q)) continue;
      total += st_f.mu[f] * static_cast<i64>(census_V(B, q, a, f));
    }
  }
  if (total < 0) throw NumericalInconsistency("count_nbr_moebius: negative total");
  return 2 * static_cast<u64>(total);
}

std::complex<double> intermediate_U_chi(u64 B, const CharacterTable& table, std::size_t chi) {
  validate_family_modulus(table.modulus());
  if (chi >= table.count()) throw std::out_of_range("intermediate_U_chi: character index out of range");
  auto U = all_U(B, table);
  return {static_cast<double>(U[chi].real()), static_cast<double>(U[chi].imag())};
}

CountReport count_nbr_characters(u64 B, u64 q, std::optional<double> main_term_constant) {
  validate_family_modulus(q);
  auto t0 = std::chrono::steady_clock::now();
  CountReport rep;
  rep.B = B;
  rep.q = q;
  rep.route = "characters";
  rep.predicted = main_term(B, main_term_constant);
  CharacterTable T(q);
  auto U = all_U(B, T);
  std::complex<long double> acc{0.0L, 0.0L};
  for (u64 s = 1; s < q; ++s) {
    if (!in_square_not_fourth(s, q)) continue;
    for (std::size_t j = 0; j < T.count(); ++j) acc += chi_value_ld(T, j, s) * U[j];
  }
  acc *= 2.0L / static_cast<long double>(q - 1);
  if (std::abs(static_cast<double>(acc.imag())) > 1e-6)
    throw NumericalInconsistency("count_nbr_characters: residual imaginary part");
  const long double re = acc.real();
  if (re < -0.5L) throw NumericalInconsistency("count_nbr_characters: negative total");
  rep.count = static_cast<u64>(std::llroundl(re));
  rep.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

CountReport count_nloc(u64 B, i64 n, unsigned threads) {
  if (B == 0) throw std::invalid_argument("count_nloc: B must be positive");
  if (n == 0) throw std::invalid_argument("count_nloc: n must be nonzero");
  if (B > static_cast<u64>(std::numeric_limits<i64>::max()))
    throw std::invalid_argument("count_nloc: B out of range");
  auto t0 = std::chrono::steady_clock::now();
  CountReport rep;
  rep.B = B;
  rep.q = 0;
  rep.route = "nloc_ordered_nonzero_indefinite";
  const i64 sB = static_cast<i64>(B);
  std::vector<i64> avals;
  for (i64 a = -sB; a <= sB; ++a)
    if (a != 0) avals.push_back(a);
  auto block_count = [&](std::size_t lo, std::size_t hi) {
    u64 cnt = 0;
    for (std::size_t i = lo; i < hi; ++i) {
      const i64 a = avals[i];
      for (i64 b = -sB; b <= sB; ++b) {
        if (b == 0) continue;
        for (i64 c = -sB; c <= sB; ++c) {
          if (c == 0) continue;
          QuadricInstance Q(a, b, c, n);
          if (!Q.indefinite()) continue;
          if (solvable_everywhere(Q).solvable) ++cnt;
        }
      }
    }
    return cnt;
  };
  u64 total = 0;
  if (threads <= 1 || avals.size() < 2 * threads) {
    total = block_count(0, avals.size());
  } else {
    std::vector<u64> partial(threads, 0);
    std::vector<std::thread> pool;
    const std::size_t len = avals.size() / threads + 1;
    for (unsigned i = 0; i < threads; ++i) {
      const std::size_t lo = i * len, hi = std::min(avals.size(), (i + 1) * len);
      if (lo >= hi) break;
      pool.emplace_back([&, i, lo, hi] { partial[i] = block_count(lo, hi); });
    }
    for (auto& th : pool) th.join();
    for (u64 s : partial) total += s;
  }
  rep.count = total;
  rep.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

u64 coprime_triple_count(u64 X, u64 Y, u64 Z, i64 a, i64 b, i64 c) {
  if (a == 0 || b == 0 || c == 0)
    throw std::invalid_argument("coprime_triple_count: side conditions need nonzero arguments");
  if (X == 0 || Y == 0 || Z == 0) return 0;
  const SieveTables st = sieve_to(std::max({X, Y, Z}));
  const auto sd_a = signed_radical_divisors(static_cast<u64>(a < 0 ? -a : a));
  const auto sd_b = signed_radical_divisors(static_cast<u64>(b < 0 ? -b : b));
  const auto sd_c = signed_radical_divisors(static_cast<u64>(c < 0 ? -c : c));
  const u64 ra = radical_of(sd_a), rb = radical_of(sd_b), rc = radical_of(sd_c);
  i64 total = fourfold_sum(
      X, Y, Z, st,
      [&](u64 m) {
        if (std::gcd(m, ra) != 1) return i64{0};
        return count_coprime_up_to(X / m, sd_a);
      },
      [&](u64 m) {
        if (std::gcd(m, rb) != 1) return i64{0};
        return count_coprime_up_to(Y / m, sd_b);
      },
      [&](u64 m) {
        if (std::gcd(m, rc) != 1) return i64{0};
        return count_coprime_up_to(Z / m, sd_c);
      });
  if (total < 0) throw NumericalInconsistency("coprime_triple_count: negative total");
  return static_cast<u64>(total);
}

TripleDecomposition decompose_triple(i64 a, i64 b, i64 c, i64 n) {
  if (a == 0 || b == 0 || c == 0 || n == 0)
    throw std::invalid_argument("decompose_triple: coefficients and n must be nonzero");
  const std::array<i64, 3> co{a, b, c};
  TripleDecomposition T;
  const u64 two_n = 2 * static_cast<u64>(n < 0 ? -n : n);
  // (i,j) -> the u and w slots of the result, with w oriented odd-side first.
  u64* uslot[3][3] = {{nullptr, &T.u12, &T.u13}, {&T.u12, nullptr, &T.u23}, {&T.u13, &T.u23, nullptr}};
  u64* wslot[3][3] = {{nullptr, &T.w12, &T.w13}, {&T.w21, nullptr, &T.w23}, {&T.w31, &T.w32, nullptr}};
  u64* xslot[3] = {&T.a1, &T.b1, &T.c1};
  std::map<u64, std::array<int, 3>> rough;
  for (int i = 0; i < 3; ++i)
    for (const auto& [p, e] : factorize(co[i]).factors)
      if (two_n % p != 0) rough[p][i] += e;
  for (const auto& [p, vals] : rough) {
    std::vector<int> supp;
    for (int i = 0; i < 3; ++i)
      if (vals[i] > 0) supp.push_back(i);
    if (supp.size() == 3) {
      if (vals[0] % 2 || vals[1] % 2 || vals[2] % 2)
        throw NoDecomposition(
            "decompose_triple: a prime away from 2n divides all three coefficients with odd valuation", p);
      for (int i = 0; i < 3; ++i) *xslot[i] *= ipow(p, static_cast<unsigned>(vals[i] / 2));
      continue;
    }
    if (supp.size() == 1) {
      const int i = supp[0];
      if (vals[i] % 2 != 0)
        throw NoDecomposition("decompose_triple: odd valuation isolated in one coefficient", p);
      *xslot[i] *= ipow(p, static_cast<unsigned>(vals[i] / 2));
      continue;
    }
    const int i = supp[0], j = supp[1];
    const bool oi = vals[i] % 2 != 0, oj = vals[j] % 2 != 0;
    if (oi && oj) {
      *uslot[i][j] *= p;
      *xslot[i] *= ipow(p, static_cast<unsigned>((vals[i] - 1) / 2));
      *xslot[j] *= ipow(p, static_cast<unsigned>((vals[j] - 1) / 2));
    } else if (oi) {
      *wslot[i][j] *= p;
      *xslot[i] *= ipow(p, static_cast<unsigned>((vals[i] - 1) / 2));
      *xslot[j] *= ipow(p, static_cast<unsigned>((vals[j] - 2) / 2));
    } else if (oj) {
      *wslot[j][i] *= p;
      *xslot[j] *= ipow(p, static_cast<unsigned>((vals[j] - 1) / 2));
      *xslot[i] *= ipow(p, static_cast<unsigned>((vals[i] - 2) / 2));
    } else {
      *xslot[i] *= ipow(p, static_cast<unsigned>(vals[i] / 2));
      *xslot[j] *= ipow(p, static_cast<unsigned>(vals[j] / 2));
    }
  }
  const auto rec = recompose_triple(TripleDecomposition{1, 1, 1, T.u12, T.u13, T.u23, T.w12, T.w13, T.w21,
                                                        T.w23, T.w31, T.w32, T.a1, T.b1, T.c1});
  i64* vslot[3] = {&T.v1, &T.v2, &T.v3};
  for (int i = 0; i < 3; ++i) {
    if (rec[i] == 0 || co[i] % rec[i] != 0)
      throw std::logic_error("decompose_triple: internal division mismatch");
    *vslot[i] = co[i] / rec[i];
  }
  return T;
}

std::array<i64, 3> recompose_triple(const TripleDecomposition& t) {
  auto fold = [](std::initializer_list<i128> parts) {
    i128 r = 1;
    for (i128 v : parts) r *= v;
    if (r > std::numeric_limits<i64>::max() || r < std::numeric_limits<i64>::min())
      throw std::overflow_error("recompose_triple: coefficient exceeds 64 bits");
    return static_cast<i64>(r);
  };
  const i128 a1 = t.a1, b1 = t.b1, c1 = t.c1;
  return {fold({t.v1, t.u12, t.u13, t.w12, t.w13, static_cast<i128>(t.w21) * t.w21,
                static_cast<i128>(t.w31) * t.w31, a1 * a1}),
          fold({t.v2, t.u12, t.u23, t.w21, t.w23, static_cast<i128>(t.w12) * t.w12,
                static_cast<i128>(t.w32) * t.w32, b1 * b1}),
          fold({t.v3, t.u13, t.u23, t.w31, t.w32, static_cast<i128>(t.w13) * t.w13,
                static_cast<i128>(t.w23) * t.w23, c1 * c1})};
}

mpq_class sum_S_direct(u64 X, u64 Y, u64 Z, i64 k, i64 l, i64 m, bool weighted) {
  if (k == 0 || l == 0 || m == 0) throw std::invalid_argument("sum_S_direct: multipliers must be nonzero");
  auto admissible = [](u64 N) {
    std::vector<u64> out;
    for (u64 x = 1; x <= N; x += 2)
      if (moebius_tau(x).mu != 0) out.push_back(x);
    return out;
  };
  const auto xs = admissible(X), ys = admissible(Y), zs = admissible(Z);
  auto safe_arg = [](i64 mult, u64 p, u64 r) {
    i128 v = static_cast<i128>(mult) * p * r;
    if (v > std::numeric_limits<i64>::max() || v < std::numeric_limits<i64>::min())
      throw std::overflow_error("sum_S_direct: symbol argument exceeds 64 bits");
    return static_cast<i64>(v);
  };
  mpq_class total(0);
  for (u64 x1 : xs)
    for (u64 x2 : ys) {
      for (u64 x3 : zs) {
        if (indicator_delta(x1, safe_arg(k, x2, x3)) == 0) continue;
        if (indicator_delta(x2, safe_arg(l, x1, x3)) == 0) continue;
        if (indicator_delta(x3, safe_arg(m, x1, x2)) == 0) continue;
        if (weighted) {
          mpq_class term(1, static_cast<unsigned long>(x1 * x2 * x3));
          total += term;
        } else {
          total += 1;
        }
      }
    }
  return total;
}

}  // namespace qbm

#include "qbm/local.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include "qbm/arith.hpp"

namespace qbm {

QuadricInstance::QuadricInstance(std::int64_t a_, std::int64_t b_, std::int64_t c_, std::int64_t n_)
    : a(a_), b(b_), c(c_), n(n_) {
  if (a == 0 || b == 0 || c == 0 || n == 0)
    throw std::invalid_argument("QuadricInstance: coefficients and n must be nonzero");
}

bool QuadricInstance::indefinite() const {
  return !((a > 0 && b > 0 && c > 0) || (a < 0 && b < 0 && c < 0));
}

FamilyInstance::FamilyInstance(std::uint64_t q_, std::int64_t a_, std::int64_t c_, std::int64_t d_, std::int64_t e_)
    : q(q_), a(a_), c(c_), d(d_), e(e_) {
  if (q % 8 != 1 || !is_prime(q)) throw std::invalid_argument("FamilyInstance: q must be a prime congruent to 1 mod 8");
  if (a == 0 || c == 0 || d == 0 || e == 0) throw std::invalid_argument("FamilyInstance: parameters must be nonzero");
  std::int64_t cc = c < 0 ? -c : c, dd = d < 0 ? -d : d, ee = e < 0 ? -e : e;
  if (std::gcd(cc, dd) != 1 || std::gcd(cc, ee) != 1 || std::gcd(dd, ee) != 1)
    throw std::invalid_argument("FamilyInstance: c, d, e must be pairwise coprime");
}

QuadricInstance FamilyInstance::derived() const {
  __int128 A = static_cast<__int128>(a) * q * q * c * c;
  __int128 B = -static_cast<__int128>(a) * d * d;
  __int128 C = static_cast<__int128>(e) * e * q;
  const __int128 lim = std::numeric_limits<std::int64_t>::max();
  if (A > lim || A < -lim || B > lim || B < -lim || C > lim || C < -lim)
    throw std::overflow_error("FamilyInstance: derived coefficients exceed 64 bits");
  return QuadricInstance(static_cast<std::int64_t>(A), static_cast<std::int64_t>(B), static_cast<std::int64_t>(C), 1);
}

bool solvable_real(const QuadricInstance& Q) {
  if (Q.indefinite()) return true;
  return (Q.a > 0) == (Q.n > 0);
}

unsigned certified_depth(const QuadricInstance& Q, std::uint64_t p) {
  int m = std::max(std::max(valuation(Q.a, p), valuation(Q.b, p)), std::max(valuation(Q.c, p), valuation(Q.n, p)));
  return 2 * static_cast<unsigned>(m) + (p == 2 ? 2u : 0u) + 3u;
}

namespace {

using i128 = __int128;
using u64 = std::uint64_t;

int val128(i128 n, u64 p) {
  if (n < 0) n = -n;
  int v = 0;
  while (n % p == 0) n /= p, ++v;
  return v;
}

u64 upow_guarded(u64 p, unsigned k) {
  u64 r = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (p != 0 && r > std::numeric_limits<u64>::max() / p)
      throw std::runtime_error("local decider: required p-adic precision exceeds 64 bits");
    r *= p;
  }
  return r;
}

u64 reduce128(i128 v, u64 m) {
  i128 r = v % static_cast<i128>(m);
  if (r < 0) r += m;
  return static_cast<u64>(r);
}

// F(x) = A0 x0^2 + A1 x1^2 + A2 x2^2 - N reduced mod m.
u64 eval_mod(const std::array<i128, 3>& A, i128 N, const std::array<u64, 3>& x, u64 m) {
  u64 s = reduce128(-N, m);
  for (int i = 0; i < 3; ++i) {
    u64 t = mul_mod(x[i] % m, x[i] % m, m);
    s = (s + mul_mod(reduce128(A[i], m), t, m)) % m;
  }
  return s;
}

constexpr int kInfVal = 1 << 20;

// min_i v_p(2 A_i x_i) for exact residue representatives.
int min_deriv_val(const std::array<i128, 3>& A, const std::array<u64, 3>& x, u64 p) {
  int m = kInfVal;
  for (int i = 0; i < 3; ++i) {
    if (x[i] == 0) continue;
    i128 d = 2 * A[i] * static_cast<i128>(x[i]);
    m = std::min(m, val128(d, p));
  }
  return m;
}

struct PadicWitness {
  std::array<u64, 3> x{0, 0, 0};
  unsigned k = 0;  // vanishing certified mod p^k
};

// Newton-lift a witness with min derivative valuation m (k > 2m) until the
// vanishing exponent reaches target.
void lift_witness(const std::array<i128, 3>& A, i128 N, u64 p, PadicWitness& w, unsigned target) {
  while (w.k < target) {
    u64 M = upow_guarded(p, target);
    int mi = -1, m = kInfVal;
    for (int i = 0; i < 3; ++i) {
      if (w.x[i] == 0) continue;
      int v = val128(2 * A[i] * static_cast<i128>(w.x[i]), p);
      if (v < m) m = v, mi = i;
    }
    if (mi < 0 || w.k <= 2 * static_cast<unsigned>(m))
      throw std::logic_error("local decider: witness not liftable");
    u64 F = eval_mod(A, N, w.x, M);
    unsigned kv = 0;
    u64 Fv = F;
    while (Fv != 0 && Fv % p == 0) Fv /= p, ++kv;
    if (F == 0) {
      w.k = target;
      break;
    }
    if (kv < w.k) throw std::logic_error("local decider: witness vanishing below recorded exponent");
    // delta = -F / (2 A_mi x_mi), exact p-adic division by p^m.
    i128 du = 2 * A[mi] * static_cast<i128>(w.x[mi]);
    u64 pm = upow_guarded(p, static_cast<unsigned>(m));
    u64 unit = reduce128(du / static_cast<i128>(pm), M);
    u64 Fdiv = F / pm;  // exact: kv >= k > 2m >= m
    u64 delta = mul_mod(M - Fdiv % M, mod_inverse(unit % M, M), M);
    w.x[mi] = (w.x[mi] + delta) % M;
    unsigned new_k = std::min<unsigned>(2 * (kv - static_cast<unsigned>(m)), target);
    if (new_k <= w.k) throw std::logic_error("local decider: lift made no progress");
    w.k = new_k;
  }
  u64 M = upow_guarded(p, w.k);
  for (auto& c : w.x) c %= M;
}

// Square root mod an odd prime via a table for small p, Tonelli-Shanks above.
struct PrimeSqrt {
  u64 p;
  std::vector<std::int32_t> table;  // root or -1; built when p small
  explicit PrimeSqrt(u64 p_) : p(p_) {
    if (p <= (1u << 20)) {
      table.assign(p, -1);
      for (u64 t = 0; t < p; ++t) {
        u64 v = mul_mod(t, t, p);
        if (table[v] < 0) table[v] = static_cast<std::int32_t>(t);
      }
    }
  }
  std::optional<u64> operator()(u64 v) const {
    v %= p;
    if (!table.empty()) {
      std::int32_t r = table[v];
      if (r < 0) return std::nullopt;
      return static_cast<u64>(r);
    }
    return sqrt_mod(static_cast<std::int64_t>(v), p, 1);
  }
};

std::optional<PadicWitness> solve_zp(std::array<i128, 3> A, i128 N, u64 p, int depth);

// Odd p, content-reduced.  Total decision by unit-coefficient structure;
// forced substitutions recurse with v_p(N) strictly decreasing.
std::optional<PadicWitness> solve_odd(const std::array<i128, 3>& A, i128 N, u64 p, int depth) {
  std::vector<int> U, D;
  for (int i = 0; i < 3; ++i) (val128(A[i], p) == 0 ? U : D).push_back(i);
  const u64 pr = p;
  auto au = [&](int i) { return reduce128(A[i], pr); };
  if (U.empty()) {
    if (val128(N, p) != 0) throw std::logic_error("local decider: content left after reduction");
    return std::nullopt;
  }

  if (val128(N, p) == 0) {
    u64 n = reduce128(N, pr);
    PrimeSqrt sq(pr);
    if (U.size() == 1) {
      int i = U[0];
      auto r = sq(mul_mod(n, mod_inverse(au(i), pr), pr));
      if (!r) return std::nullopt;
      PadicWitness w;
      w.x[i] = *r;
      w.k = 1;
      return w;
    }
    int i = U[0], j = U[1];
    u64 invj = mod_inverse(au(j), pr);
    for (u64 t = 0;; ++t) {
      if (t >= pr) throw std::logic_error("local decider: binary form scan failed");
      u64 rest = (n + pr - mul_mod(au(i), mul_mod(t, t, pr), pr) % pr) % pr;
      auto r = sq(mul_mod(rest, invj, pr));
      if (r) {
        PadicWitness w;
        w.x[i] = t;
        w.x[j] = *r;
        w.k = 1;
        return w;
      }
    }
  }

  // p | N.
  if (U.size() == 3) {
    PrimeSqrt sq(pr);
    u64 invb = mod_inverse(au(1), pr);
    for (u64 t = 0;; ++t) {
      if (t >= pr) throw std::logic_error("local decider: conic scan failed");
      u64 rhs = reduce128(static_cast<i128>(N) - A[2], pr);  // z = 1

      u64 need = (rhs + pr - mul_mod(au(0), mul_mod(t, t, pr), pr) % pr) % pr;
      auto r = sq(mul_mod(need, invb, pr));
      if (r) {
        PadicWitness w;
        w.x[0] = t;
        w.x[1] = *r;
        w.x[2] = 1;
        w.k = 1;
        return w;
      }
    }
  }
  if (U.size() == 2) {
    int i = U[0], j = U[1], k = D[0];
    u64 m = mul_mod(pr - au(j) % pr, mod_inverse(au(i), pr), pr);  // -Aj/Ai
    PrimeSqrt sq(pr);
    if (auto r = sq(m)) {
      if (*r != 0) {
        PadicWitness w;
        w.x[i] = *r;
        w.x[j] = 1;
        w.k = 1;
        return w;
      }
    }
    // x_i, x_j forced divisible by p.
    std::array<i128, 3> A2 = A;
    A2[i] *= p;
    A2[j] *= p;
    A2[k] /= p;
    auto sub = solve_zp(A2, N / p, p, depth + 1);
    if (!sub) return std::nullopt;
    int msub = min_deriv_val(A2, sub->x, p);
    lift_witness(A2, N / p, p, *sub, std::max<unsigned>(sub->k, 2 * static_cast<unsigned>(msub) + 2));
    PadicWitness w;
    unsigned kk = sub->k + 1;
    u64 M = upow_guarded(p, kk);
    w.x[i] = mul_mod(sub->x[i] % M, p % M, M);
    w.x[j] = mul_mod(sub->x[j] % M, p % M, M);
    w.x[k] = sub->x[k] % M;
    w.k = kk;
    return w;
  }
  // |U| == 1: the unit coordinate is forced divisible by p.
  {
    int i = U[0], j = D[0], k = D[1];
    std::array<i128, 3> A2 = A;
    A2[i] *= p;
    A2[j] /= p;
    A2[k] /= p;
    auto sub = solve_zp(A2, N / p, p, depth + 1);
    if (!sub) return std::nullopt;
    int msub = min_deriv_val(A2, sub->x, p);
    lift_witness(A2, N / p, p, *sub, std::max<unsigned>(sub->k, 2 * static_cast<unsigned>(msub) + 2));
    PadicWitness w;
    unsigned kk = sub->k + 1;
    u64 M = upow_guarded(p, kk);
    w.x[i] = mul_mod(sub->x[i] % M, p % M, M);
    w.x[j] = sub->x[j] % M;
    w.x[k] = sub->x[k] % M;
    w.k = kk;
    return w;
  }
}

// p = 2, content-reduced: breadth-first refinement of primitive vanishing
// classes, then the all-even split via n/4.
std::optional<PadicWitness> solve_two(const std::array<i128, 3>& A, i128 N, int depth, unsigned extra_depth) {
  int maxv = 0;
  for (auto& a : A) maxv = std::max(maxv, val128(a, 2));
  unsigned levels = 2 * static_cast<unsigned>(maxv + 1) + 1 + extra_depth;
  if (levels > 62) throw std::runtime_error("local decider: required 2-adic precision exceeds 64 bits");

  std::vector<std::array<u64, 3>> branches;
  for (u64 x = 0; x < 2; ++x)
    for (u64 y = 0; y < 2; ++y)
      for (u64 z = 0; z < 2; ++z) {
        if (x == 0 && y == 0 && z == 0) continue;
        std::array<u64, 3> c{x, y, z};
        if (eval_mod(A, N, c, 2) == 0) branches.push_back(c);
      }
  for (unsigned k = 1; k <= levels && !branches.empty(); ++k) {
    // Liftable branch at this level?
    for (auto& b : branches) {
      int m = min_deriv_val(A, b, 2);
      if (m < kInfVal && k >= 2 * static_cast<unsigned>(m) + 1) {
        PadicWitness w;
        w.x = b;
        w.k = k;
        return w;
      }
    }
    if (k == levels) break;
    u64 M2 = 1ULL << (k + 1), step = 1ULL << k;
    std::vector<std::array<u64, 3>> next;
    for (auto& b : branches)
      for (u64 dx = 0; dx < 2; ++dx)
        for (u64 dy = 0; dy < 2; ++dy)
          for (u64 dz = 0; dz < 2; ++dz) {
            std::array<u64, 3> c{b[0] + dx * step, b[1] + dy * step, b[2] + dz * step};
            if (eval_mod(A, N, c, M2) == 0) next.push_back(c);
          }
    branches.swap(next);
    if (branches.size() > 200000) throw std::runtime_error("local decider: branch cap exceeded");
  }
  if (!branches.empty()) throw std::logic_error("local decider: unresolved branches at depth bound");
  if (val128(N, 2) >= 2) {
    auto sub = solve_zp(A, N / 4, 2, depth + 1);
    if (sub) {
      unsigned kk = sub->k + 2;
      u64 M = upow_guarded(2, kk);
      PadicWitness w;
      for (int i = 0; i < 3; ++i) w.x[i] = (2 * sub->x[i]) % M;
      w.k = kk;
      return w;
    }
  }
  return std::nullopt;
}

thread_local unsigned g_extra_depth = 0;  // test hook, set around calls

std::optional<PadicWitness> solve_zp(std::array<i128, 3> A, i128 N, u64 p, int depth) {
  if (depth > 400) throw std::logic_error("local decider: descent depth exceeded");
  int g = std::min(std::min(val128(A[0], p), val128(A[1], p)), std::min(val128(A[2], p), val128(N, p)));
  for (int i = 0; i < g; ++i) {
    for (auto& a : A) a /= p;
    N /= p;
  }
  auto w = p == 2 ? solve_two(A, N, depth, g_extra_depth) : solve_odd(A, N, p, depth);
  if (w && g > 0) {
    // Certify against the pre-reduction equation: each derivative valuation
    // grows by g, the vanishing exponent by g as well.
    int m = min_deriv_val(A, w->x, p);
    lift_witness(A, N, p, *w, std::max<unsigned>(w->k, 2 * static_cast<unsigned>(m) + g + 1));
    w->k += static_cast<unsigned>(g);
  }
  return w;
}

}  // namespace

LocalVerdict solvable_at_prime_to_depth(const QuadricInstance& Q, std::uint64_t p, unsigned depth) {
  if (!is_prime(p)) throw std::invalid_argument("solvable_at_prime: p must be prime");
  LocalVerdict v;
  v.place = Place::finite(p);
  unsigned base = certified_depth(Q, p);
  struct HookGuard {
    ~HookGuard() { g_extra_depth = 0; }
  } guard;
  g_extra_depth = depth > base ? depth - base : 0;
  std::array<i128, 3> A{Q.a, Q.b, Q.c};
  auto w = solve_zp(A, Q.n, p, 0);
  if (w) {
    // Final certificate check: vanishing and Hensel margin.
    u64 M = upow_guarded(p, w->k);
    if (eval_mod(A, Q.n, w->x, M) != 0) throw std::logic_error("local decider: witness fails to vanish");
    int m = min_deriv_val(A, w->x, p);
    if (m >= kInfVal || w->k < 2 * static_cast<unsigned>(m) + 1)
      throw std::logic_error("local decider: witness fails the Hensel margin");
    v.solvable = true;
    v.witness_exponent = w->k;
    std::array<std::int64_t, 3> xs{};
    for (int i = 0; i < 3; ++i) {
      if (w->x[i] > static_cast<u64>(std::numeric_limits<std::int64_t>::max()))
        throw std::runtime_error("local decider: witness residue exceeds 64-bit range");
      xs[i] = static_cast<std::int64_t>(w->x[i]);
    }
    v.witness = xs;
  } else {
    v.solvable = false;
    v.searched_depth = std::max(base, depth);
  }
  return v;
}

LocalVerdict solvable_at_prime(const QuadricInstance& Q, std::uint64_t p) {
  return solvable_at_prime_to_depth(Q, p, 0);
}

LocalVerdict solvable_at_prime_precise(const QuadricInstance& Q, std::uint64_t p, unsigned min_exponent) {
  LocalVerdict v = solvable_at_prime(Q, p);
  if (!v.solvable || v.witness_exponent >= min_exponent) return v;
  std::array<i128, 3> A{Q.a, Q.b, Q.c};
  PadicWitness w;
  for (int i = 0; i < 3; ++i) w.x[i] = static_cast<u64>((*v.witness)[i]);
  w.k = v.witness_exponent;
  lift_witness(A, Q.n, p, w, min_exponent);
  for (int i = 0; i < 3; ++i) {
    if (w.x[i] > static_cast<u64>(std::numeric_limits<std::int64_t>::max()))
      throw std::runtime_error("local decider: witness residue exceeds 64-bit range");
    (*v.witness)[i] = static_cast<std::int64_t>(w.x[i]);
  }
  v.witness_exponent = w.k;
  return v;
}

EverywhereVerdict solvable_everywhere(const QuadricInstance& Q) {
  EverywhereVerdict ev;
  if (!solvable_real(Q)) ev.failing.push_back(Place::archimedean());
  std::set<u64> primes{2};
  for (std::int64_t v : {Q.a, Q.b, Q.c, Q.n})
    for (auto [p, e] : factorize(v).factors) {
      (void)e;
      primes.insert(p);
    }
  for (u64 p : primes)
    if (!solvable_at_prime(Q, p).solvable) ev.failing.push_back(Place::finite(p));
  ev.solvable = ev.failing.empty();
  return ev;
}

bool family_local_criterion(const FamilyInstance& F) {
  std::int64_t aa = F.a < 0 ? -F.a : F.a, ee = F.e < 0 ? -F.e : F.e, dd = F.d < 0 ? -F.d : F.d;
  if (std::gcd(aa, ee) != 1) return false;
  if (aa % static_cast<std::int64_t>(F.q) == 0) return false;
  if (dd % static_cast<std::int64_t>(F.q) == 0) return false;
  for (auto [p, e] : factorize(aa).factors) {
    (void)e;
    if (p == 2) continue;
    if (jacobi(static_cast<std::int64_t>(F.q), static_cast<std::int64_t>(p)) != 1) return false;
  }
  return true;
}

}  // namespace qbm

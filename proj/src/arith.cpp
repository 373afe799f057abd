#include "qbm/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qbm {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    const std::uint32_t limit = 1000000;
    std::vector<bool> composite(limit + 1, false);
    std::vector<std::uint32_t> ps;
    for (std::uint32_t i = 2; i <= limit; ++i) {
      if (!composite[i]) {
        ps.push_back(i);
        for (std::uint64_t j = static_cast<std::uint64_t>(i) * i; j <= limit; j += i) composite[j] = true;
      }
    }
    return ps;
  }();
  return primes;
}

namespace {

std::uint64_t rho_factor(std::uint64_t n) {
  // Brent's cycle variant; deterministic over the increment sequence.
  if ((n & 1) == 0) return 2;
  for (std::uint64_t c = 1;; ++c) {
    std::uint64_t x = 2, y = 2, d = 1, q = 1, ys = y;
    const std::uint64_t m = 128;
    std::uint64_t r = 1;
    auto f = [&](std::uint64_t v) { return (mul_mod(v, v, n) + c) % n; };
    while (d == 1) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      for (std::uint64_t k = 0; k < r && d == 1; k += m) {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        d = std::gcd(q, n);
      }
      r <<= 1;
    }
    if (d == n) {
      d = 1;
      do {
        ys = f(ys);
        d = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (d == 1);
    }
    if (d != n) return d;
  }
}

void factor_into(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  std::uint64_t d = rho_factor(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace

PrimeFactorization factorize_u64(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("factorize: zero input");
  PrimeFactorization f;
  std::vector<std::uint64_t> primes;
  for (std::uint32_t p : small_primes()) {
    if (static_cast<std::uint64_t>(p) * p > n) break;
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  if (n > 1) factor_into(n, primes);
  std::sort(primes.begin(), primes.end());
  for (std::uint64_t p : primes) {
    if (!f.factors.empty() && f.factors.back().first == p)
      ++f.factors.back().second;
    else
      f.factors.push_back({p, 1});
  }
  return f;
}

PrimeFactorization factorize(std::int64_t n) {
  if (n == 0) throw std::invalid_argument("factorize: zero input");
  std::uint64_t m = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
  PrimeFactorization f = factorize_u64(m);
  f.sign = n < 0 ? -1 : 1;
  return f;
}

std::int64_t unfactorize(const PrimeFactorization& f) {
  std::int64_t v = f.sign;
  for (auto [p, e] : f.factors)
    for (int i = 0; i < e; ++i) v *= static_cast<std::int64_t>(p);
  return v;
}

std::vector<std::uint64_t> divisors(const PrimeFactorization& f, bool sort_them) {
  std::vector<std::uint64_t> ds{1};
  for (auto [p, e] : f.factors) {
    std::size_t base = ds.size();
    std::uint64_t pe = 1;
    for (int i = 1; i <= e; ++i) {
      pe *= p;
      for (std::size_t j = 0; j < base; ++j) ds.push_back(ds[j] * pe);
    }
  }
  if (sort_them) std::sort(ds.begin(), ds.end());
  return ds;
}

int jacobi(std::int64_t a, std::int64_t m) {
  if (m <= 0 || (m & 1) == 0) throw std::invalid_argument("jacobi: modulus must be odd and positive");
  a %= m;
  if (a < 0) a += m;
  std::int64_t b = m;
  int result = 1;
  while (a != 0) {
    while ((a & 1) == 0) {
      a >>= 1;
      std::int64_t r = b & 7;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, b);
    if ((a & 3) == 3 && (b & 3) == 3) result = -result;
    a %= b;
  }
  return b == 1 ? result : 0;
}

int valuation(std::int64_t n, std::uint64_t p) {
  if (n == 0) throw std::invalid_argument("valuation: zero input");
  if (p < 2) throw std::invalid_argument("valuation: p must be at least 2");
  std::uint64_t m = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
  int v = 0;
  while (m % p == 0) m /= p, ++v;
  return v;
}

std::uint64_t isqrt_u64(std::uint64_t n) {
  std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r > n / r) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

std::int64_t isqrt64(std::int64_t n) {
  if (n < 0) throw std::invalid_argument("isqrt64: negative input");
  return static_cast<std::int64_t>(isqrt_u64(static_cast<std::uint64_t>(n)));
}

std::uint64_t ipow(std::uint64_t p, unsigned k) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (p != 0 && r > UINT64_MAX / p) throw std::overflow_error("ipow: overflow");
    r *= p;
  }
  return r;
}

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t m) {
  std::int64_t t = 0, nt = 1;
  std::int64_t r = static_cast<std::int64_t>(m), nr = static_cast<std::int64_t>(a % m);
  while (nr != 0) {
    std::int64_t qu = r / nr;
    std::swap(t -= qu * nt, nt);
    std::swap(r -= qu * nr, nr);
  }
  if (r != 1) throw std::invalid_argument("mod_inverse: not invertible");
  return static_cast<std::uint64_t>(t < 0 ? t + static_cast<std::int64_t>(m) : t);
}

namespace {

// Tonelli-Shanks for odd prime p; a a quadratic residue, 0 < a < p.
std::uint64_t sqrt_mod_prime(std::uint64_t a, std::uint64_t p) {
  if (p % 4 == 3) return pow_mod(a, (p + 1) / 4, p);
  std::uint64_t q = p - 1;
  int s = 0;
  while ((q & 1) == 0) q >>= 1, ++s;
  std::uint64_t z = 2;
  while (jacobi(static_cast<std::int64_t>(z), static_cast<std::int64_t>(p)) != -1) ++z;
  std::uint64_t m = s, c = pow_mod(z, q, p), t = pow_mod(a, q, p), r = pow_mod(a, (q + 1) / 2, p);
  while (t != 1) {
    std::uint64_t i = 0, tt = t;
    while (tt != 1) tt = mul_mod(tt, tt, p), ++i;
    std::uint64_t b = c;
    for (std::uint64_t j = 0; j + i + 1 < m; ++j) b = mul_mod(b, b, p);
    m = i;
    c = mul_mod(b, b, p);
    t = mul_mod(t, c, p);
    r = mul_mod(r, b, p);
  }
  return r;
}

// Unit square root mod p^e for odd p, lifting a mod-p root by Newton steps.
std::optional<std::uint64_t> unit_sqrt_odd(std::uint64_t u, std::uint64_t p, unsigned e) {
  std::uint64_t pe = ipow(p, e);
  u %= pe;
  if (jacobi(static_cast<std::int64_t>(u % p), static_cast<std::int64_t>(p)) != 1) return std::nullopt;
  std::uint64_t s = sqrt_mod_prime(u % p, p);
  unsigned have = 1;
  std::uint64_t mod = p;
  while (have < e) {
    unsigned next = std::min(2 * have, e);
    std::uint64_t nmod = ipow(p, next);
    std::uint64_t inv_s = mod_inverse(s % nmod, nmod);
    std::uint64_t inv_2 = mod_inverse(2, nmod);
    s = mul_mod(mul_mod((s + mul_mod(u % nmod, inv_s, nmod)) % nmod, inv_2, nmod), 1, nmod);
    have = next;
    mod = nmod;
  }
  return std::min(s, pe - s);
}

// Unit square root mod 2^e; units must be 1 mod min(8, 2^e) to be squares.
std::optional<std::uint64_t> unit_sqrt_two(std::uint64_t u, unsigned e) {
  std::uint64_t m = ipow(2, e);
  u %= m;
  if (e == 1) return 1;
  if (e == 2) return u == 1 ? std::optional<std::uint64_t>(1) : std::nullopt;
  if (u % 8 != 1) return std::nullopt;
  std::uint64_t s = 1;
  for (unsigned t = 3; t < e; ++t) {
    std::uint64_t mod_next = ipow(2, t + 1);
    if ((mul_mod(s, s, mod_next) + mod_next - u % mod_next) % mod_next != 0) s += ipow(2, t - 1);
  }
  std::uint64_t best = std::min(s % m, (m - s) % m);
  best = std::min(best, std::min((s + m / 2) % m, (m - s + m / 2) % m));
  return best;
}

}  // namespace

std::optional<std::uint64_t> sqrt_mod(std::int64_t a, std::uint64_t p, unsigned k) {
  if (k == 0) throw std::invalid_argument("sqrt_mod: k must be positive");
  if (!is_prime(p)) throw std::invalid_argument("sqrt_mod: p must be prime");
  std::uint64_t pk = ipow(p, k);
  std::uint64_t r = static_cast<std::uint64_t>(((a % static_cast<std::int64_t>(pk)) + static_cast<std::int64_t>(pk)) % static_cast<std::int64_t>(pk));
  if (r == 0) return 0;
  unsigned v = 0;
  while (r % p == 0) r /= p, ++v;
  if (v & 1) return std::nullopt;
  unsigned rem = k - v;
  std::optional<std::uint64_t> s = p == 2 ? unit_sqrt_two(r, rem) : unit_sqrt_odd(r, p, rem);
  if (!s) return std::nullopt;
  return ipow(p, v / 2) * *s % pk;
}

PowerResidueClass power_residue_class(std::int64_t a, std::uint64_t q) {
  if (q % 8 != 1 || !is_prime(q)) throw std::invalid_argument("power_residue_class: q must be a prime congruent to 1 mod 8");
  std::int64_t qi = static_cast<std::int64_t>(q);
  std::uint64_t r = static_cast<std::uint64_t>(((a % qi) + qi) % qi);
  if (r == 0) return PowerResidueClass::Zero;
  if (pow_mod(r, (q - 1) / 2, q) != 1) return PowerResidueClass::NonResidue;
  return pow_mod(r, (q - 1) / 4, q) == 1 ? PowerResidueClass::FourthPower : PowerResidueClass::SquareNotFourth;
}

MoebiusTau moebius_tau(std::uint64_t n) {
  PrimeFactorization f = factorize_u64(n);
  MoebiusTau mt;
  mt.mu = 1;
  mt.tau = 1;
  for (auto [p, e] : f.factors) {
    (void)p;
    if (e > 1) mt.mu = 0;
    mt.tau *= e + 1;
  }
  if (mt.mu != 0 && (f.factors.size() & 1)) mt.mu = -1;
  return mt;
}

std::int64_t squarefree_kernel(std::int64_t n) {
  PrimeFactorization f = factorize(n);
  std::int64_t r = f.sign;
  for (auto [p, e] : f.factors)
    if (e & 1) r *= static_cast<std::int64_t>(p);
  return r;
}

}  // namespace qbm

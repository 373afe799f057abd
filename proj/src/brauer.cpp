#include "qbm/brauer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

namespace qbm {

namespace {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using Vec4 = std::array<mpq_class, 4>;

long val_mpz(const mpz_class& t, u64 p, mpz_class& unit) {
  if (t == 0) throw std::invalid_argument("valuation of zero");
  mpz_class pp = static_cast<unsigned long>(p);
  return static_cast<long>(mpz_remove(unit.get_mpz_t(), t.get_mpz_t(), pp.get_mpz_t()));
}

i64 checked_mul(i64 a, i64 b) {
  i128 r = static_cast<i128>(a) * b;
  if (r > std::numeric_limits<i64>::max() || r < std::numeric_limits<i64>::min())
    throw std::overflow_error("product exceeds 64 bits");
  return static_cast<i64>(r);
}

// Squarefree kernel of sign * v0 * v1 * ... without forming the product.
i64 sqfree_of_product(std::initializer_list<i64> vs, int sign) {
  std::map<u64, int> parity;
  for (i64 v : vs) {
    PrimeFactorization f = factorize(v);
    sign *= f.sign;
    for (auto [p, e] : f.factors) parity[p] = (parity[p] + e) & 1;
  }
  i64 r = sign;
  for (auto [p, odd] : parity)
    if (odd) r = checked_mul(r, static_cast<i64>(p));
  return r;
}

std::vector<u64> prime_support(std::initializer_list<i64> vs) {
  std::set<u64> s;
  for (i64 v : vs)
    for (auto [p, e] : factorize(v).factors) {
      (void)e;
      s.insert(p);
    }
  return std::vector<u64>(s.begin(), s.end());
}

}  // namespace

int hilbert_symbol(const mpq_class& a, const mpq_class& b, Place v) {
  if (a == 0 || b == 0) throw std::invalid_argument("hilbert_symbol: arguments must be nonzero");
  if (v.real) return (a < 0 && b < 0) ? -1 : 1;
  u64 p = v.p;
  if (p >= (1ULL << 62) || !is_prime(p)) throw std::invalid_argument("hilbert_symbol: place must be prime");
  mpz_class ta = a.get_num() * a.get_den(), tb = b.get_num() * b.get_den();
  mpz_class ua, ub;
  long alpha = val_mpz(ta, p, ua), beta = val_mpz(tb, p, ub);
  if (p == 2) {
    unsigned long u8 = mpz_fdiv_ui(ua.get_mpz_t(), 8), v8 = mpz_fdiv_ui(ub.get_mpz_t(), 8);
    auto eps = [](unsigned long m) { return ((m - 1) / 2) & 1; };
    auto om = [](unsigned long m) { return ((m * m - 1) / 8) & 1; };
    unsigned long s = eps(u8) * eps(v8) + (alpha & 1) * om(v8) + (beta & 1) * om(u8);
    return (s & 1) ? -1 : 1;
  }
  unsigned s = 0;
  if ((alpha & 1) && (beta & 1) && p % 4 == 3) s ^= 1;
  if (beta & 1) {
    i64 r = static_cast<i64>(mpz_fdiv_ui(ua.get_mpz_t(), p));
    if (jacobi(r, static_cast<i64>(p)) == -1) s ^= 1;
  }
  if (alpha & 1) {
    i64 r = static_cast<i64>(mpz_fdiv_ui(ub.get_mpz_t(), p));
    if (jacobi(r, static_cast<i64>(p)) == -1) s ^= 1;
  }
  return s ? -1 : 1;
}

int hilbert_symbol(std::int64_t a, std::int64_t b, Place v) {
  return hilbert_symbol(mpq_class(static_cast<long>(a)), mpq_class(static_cast<long>(b)), v);
}

bool square_in_Qv(std::int64_t d, Place v) {
  if (d == 0) throw std::invalid_argument("square_in_Qv: zero argument");
  if (v.real) return d > 0;
  if (v.p == 2) return d % 2 != 0 && ((d % 8) + 8) % 8 == 1;
  i64 p = static_cast<i64>(v.p);
  if (d % p == 0) return false;  // d squarefree, so valuation 1
  return jacobi(d, p) == 1;
}

mpq_class LinearForm::operator()(const std::array<mpq_class, 4>& v) const {
  mpq_class s = 0;
  for (int i = 0; i < 4; ++i) s += coef[i] * v[i];
  return s;
}

mpq_class LinearForm::at_point(std::int64_t x, std::int64_t y, std::int64_t z) const {
  return coef[0] * static_cast<long>(x) + coef[1] * static_cast<long>(y) + coef[2] * static_cast<long>(z) + coef[3];
}

namespace {

mpq_class dot_diag(const Vec4& diag, const Vec4& u, const Vec4& v) {
  mpq_class s = 0;
  for (int i = 0; i < 4; ++i) s += diag[i] * u[i] * v[i];
  return s;
}

// Kernel of the two independent linear forms r0, r1 on Q^4, by reduced
// echelon form with first-nonzero pivots; deterministic basis from the
// free columns.
std::pair<Vec4, Vec4> kernel_of_two(Vec4 r0, Vec4 r1) {
  int p0 = -1;
  for (int i = 0; i < 4; ++i)
    if (r0[i] != 0) {
      p0 = i;
      break;
    }
  if (p0 < 0) throw std::logic_error("chart form vanished");
  mpq_class c = r0[p0];
  for (auto& x : r0) x /= c;
  c = r1[p0];
  for (int i = 0; i < 4; ++i) r1[i] -= c * r0[i];
  int p1 = -1;
  for (int i = 0; i < 4; ++i)
    if (i != p0 && r1[i] != 0) {
      p1 = i;
      break;
    }
  if (p1 < 0) throw std::logic_error("chart forms are dependent");
  c = r1[p1];
  for (auto& x : r1) x /= c;
  c = r0[p1];
  for (int i = 0; i < 4; ++i) r0[i] -= c * r1[i];
  std::array<int, 2> free_cols{};
  int nf = 0;
  for (int i = 0; i < 4; ++i)
    if (i != p0 && i != p1) free_cols[nf++] = i;
  auto basis = [&](int f) {
    Vec4 w;
    for (auto& x : w) x = 0;
    w[f] = 1;
    w[p0] = -r0[f];
    w[p1] = -r1[f];
    return w;
  };
  return {basis(free_cols[0]), basis(free_cols[1])};
}

// v = s * l with l primitive integral and s a positive rational.
std::pair<Vec4, mpq_class> primitive_scale(const Vec4& v) {
  mpz_class D = 1;
  for (const auto& x : v) mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), x.get_den_mpz_t());
  mpz_class G = 0;
  std::array<mpz_class, 4> ints;
  for (int i = 0; i < 4; ++i) {
    ints[i] = mpz_class(v[i].get_num() * (D / v[i].get_den()));
    mpz_gcd(G.get_mpz_t(), G.get_mpz_t(), ints[i].get_mpz_t());
  }
  if (G == 0) throw std::logic_error("zero form cannot be normalized");
  Vec4 l;
  for (int i = 0; i < 4; ++i) l[i] = mpq_class(ints[i] / G);
  mpq_class s(G, D);
  s.canonicalize();
  return {l, s};
}

mpq_class exact_sqrt(const mpq_class& r) {
  if (r <= 0) throw std::logic_error("square defect: nonpositive");
  const mpz_class nu = r.get_num(), de = r.get_den();
  if (!mpz_perfect_square_p(nu.get_mpz_t()) || !mpz_perfect_square_p(de.get_mpz_t()))
    throw std::logic_error("square defect: not a rational square");
  mpz_class sn, sd;
  mpz_sqrt(sn.get_mpz_t(), nu.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), de.get_mpz_t());
  mpq_class s(sn, sd);
  s.canonicalize();
  return s;
}

mpq_class det4(std::array<Vec4, 4> m) {
  mpq_class det = 1;
  for (int col = 0; col < 4; ++col) {
    int piv = -1;
    for (int r = col; r < 4; ++r)
      if (m[r][col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return 0;
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (int r = col + 1; r < 4; ++r) {
      if (m[r][col] == 0) continue;
      mpq_class f = m[r][col] / m[col][col];
      for (int cc = col; cc < 4; ++cc) m[r][cc] -= f * m[col][cc];
    }
  }
  return det;
}

}  // namespace

BrauerDecomposition brauer_decomposition(const QuadricInstance& Q, const std::array<std::int64_t, 4>& M) {
  Vec4 diag{mpq_class(static_cast<long>(Q.a)), mpq_class(static_cast<long>(Q.b)),
            mpq_class(static_cast<long>(Q.c)), mpq_class(static_cast<long>(-Q.n))};
  Vec4 Mq;
  bool nonzero = false;
  for (int i = 0; i < 4; ++i) {
    Mq[i] = mpq_class(static_cast<long>(M[i]));
    nonzero = nonzero || M[i] != 0;
  }
  if (!nonzero) throw std::invalid_argument("base point must be nonzero");
  if (dot_diag(diag, Mq, Mq) != 0) throw std::invalid_argument("base point must be isotropic");

  int j = 0;
  while (M[j] == 0) ++j;
  mpq_class Bj = diag[j] * Mq[j];
  Vec4 e2;
  for (int i = 0; i < 4; ++i) {
    e2[i] = -diag[j] / (2 * Bj * Bj) * Mq[i];
    if (i == j) e2[i] += 1 / Bj;
  }
  if (dot_diag(diag, Mq, e2) != 1 || dot_diag(diag, e2, e2) != 0)
    throw std::logic_error("hyperbolic pair construction failed");

  Vec4 phi1, phi2;
  for (int i = 0; i < 4; ++i) {
    phi1[i] = diag[i] * e2[i];
    phi2[i] = diag[i] * Mq[i];
  }
  auto [w1, w2] = kernel_of_two(phi1, phi2);
  mpq_class g11 = dot_diag(diag, w1, w1);
  mpq_class g12 = dot_diag(diag, w1, w2);
  mpq_class g22 = dot_diag(diag, w2, w2);
  if (g11 == 0) {
    std::swap(w1, w2);
    std::swap(g11, g22);
  }
  if (g11 == 0) {
    for (int i = 0; i < 4; ++i) w1[i] += w2[i];
    g11 = 2 * g12;
    // g12 against the new w1 is unchanged: B(w1+w2, w2) = g12 + 0.
  }
  if (g11 == 0) throw std::logic_error("degenerate complement");
  Vec4 w2p;
  for (int i = 0; i < 4; ++i) w2p[i] = w2[i] - g12 / g11 * w1[i];
  mpq_class g22p = dot_diag(diag, w2p, w2p);
  if (g22p == 0) throw std::logic_error("degenerate complement");

  Vec4 raw3, raw4;
  for (int i = 0; i < 4; ++i) {
    raw3[i] = diag[i] * w1[i];
    raw4[i] = diag[i] * w2p[i];
  }

  BrauerDecomposition D{Q, M, {}, {}, {}, {}, mpq_class(0), 0};
  auto [l1v, s1] = primitive_scale(phi2);
  D.l1.coef = l1v;
  for (int i = 0; i < 4; ++i) D.l2.coef[i] = 2 * s1 * phi1[i];
  auto [l3v, s3] = primitive_scale(raw3);
  D.l3.coef = l3v;
  D.c0 = s3 * s3 / g11;
  D.d = sqfree_of_product({Q.a, Q.b, Q.c, Q.n}, -1);
  auto [l4v, s4] = primitive_scale(raw4);
  mpq_class sigma2 = -s4 * s4 / (g22p * D.c0 * mpq_class(static_cast<long>(D.d)));
  mpq_class sigma = exact_sqrt(sigma2);
  for (int i = 0; i < 4; ++i) D.l4.coef[i] = sigma * l4v[i];

  for (int i = 0; i < 4; ++i)
    for (int jj = i; jj < 4; ++jj) {
      mpq_class lhs = (i == jj) ? diag[i] : mpq_class(0);
      mpq_class rhs = (D.l1.coef[i] * D.l2.coef[jj] + D.l1.coef[jj] * D.l2.coef[i]) / 2 +
                      D.c0 * (D.l3.coef[i] * D.l3.coef[jj] -
                              mpq_class(static_cast<long>(D.d)) * D.l4.coef[i] * D.l4.coef[jj]);
      if (lhs != rhs) throw std::logic_error("decomposition identity failed");
    }
  if (det4({D.l1.coef, D.l2.coef, D.l3.coef, D.l4.coef}) == 0)
    throw std::logic_error("decomposition forms are dependent");
  return D;
}

BrauerDecomposition family_decomposition(const FamilyInstance& F) {
  i128 qc = static_cast<i128>(F.q) * F.c;
  if (qc > std::numeric_limits<i64>::max() || -qc > std::numeric_limits<i64>::max())
    throw std::overflow_error("family base point exceeds 64 bits");
  return brauer_decomposition(F.derived(), {F.d, static_cast<i64>(-qc), 0, 0});
}

namespace {

long val_q(const mpq_class& x, u64 p) {
  mpz_class u;
  return val_mpz(mpz_class(x.get_num()), p, u) - val_mpz(mpz_class(x.get_den()), p, u);
}

int symbol_to_halves(int s) { return s == -1 ? 1 : 0; }

// Best-effort real chart evaluation: an axis point of the affine quadric,
// nudged along a second coordinate if the chart form vanishes there.
int real_invariant(const BrauerDecomposition& D) {
  const QuadricInstance& Q = D.instance;
  if (!solvable_real(Q)) throw std::domain_error("no real points");
  if (D.d > 0) return 0;
  const double coef[3] = {double(Q.a), double(Q.b), double(Q.c)};
  auto eval = [](const LinearForm& l, double x, double y, double z) {
    return l.coef[0].get_d() * x + l.coef[1].get_d() * y + l.coef[2].get_d() * z + l.coef[3].get_d();
  };
  for (int i = 0; i < 3; ++i) {
    if (double(Q.n) / coef[i] <= 0) continue;
    for (int jd = 1; jd <= 2; ++jd)
      for (int step = 0; step <= 40; ++step) {
        // x_j = t on a grid, x_i completes the equation, third coordinate 0.
        int jj = (i + jd) % 3;
        double t = step * 0.17;
        double s2 = (double(Q.n) - coef[jj] * t * t) / coef[i];
        if (s2 <= 0) continue;
        double P[3] = {0, 0, 0};
        P[jj] = t;
        P[i] = std::sqrt(s2);
        double v1 = eval(D.l1, P[0], P[1], P[2]);
        double scale = std::abs(P[0]) + std::abs(P[1]) + std::abs(P[2]) + 1;
        if (std::abs(v1) > 1e-7 * scale) return v1 < 0 ? 1 : 0;
        double v2 = eval(D.l2, P[0], P[1], P[2]);
        if (std::abs(v2) > 1e-7 * scale) {
          int s = (v2 < 0 ? -1 : 1) * (D.c0 > 0 ? -1 : 1);  // times (-c0, d) with d < 0
          return symbol_to_halves(s);
        }
      }
  }
  throw std::logic_error("real invariant undetermined");
}

}  // namespace

int invariant_halves(const BrauerDecomposition& D, Place v) {
  if (v.real) return real_invariant(D);
  const QuadricInstance& Q = D.instance;
  u64 p = v.p;
  if (square_in_Qv(D.d, v)) return 0;
  mpq_class dq(static_cast<long>(D.d));
  const int need = (p == 2) ? 3 : 1;
  long den_loss = 0;
  for (int i = 0; i < 4; ++i) {
    mpz_class u;
    den_loss = std::max(den_loss, val_mpz(mpz_class(D.l2.coef[i].get_den()), p, u));
  }
  unsigned k = certified_depth(Q, p) + 6;
  for (int round = 0; round < 12; ++round, k += 6) {
    LocalVerdict verdict = solvable_at_prime_precise(Q, p, k);
    if (!verdict.solvable) throw std::domain_error("no integral local points at the place");
    const auto& w = *verdict.witness;
    int m = std::numeric_limits<int>::max();
    const i64 qc[3] = {Q.a, Q.b, Q.c};
    for (int i = 0; i < 3; ++i) {
      if (w[i] == 0) continue;
      mpz_class u, t = 2 * mpz_class(static_cast<long>(qc[i])) * static_cast<long>(w[i]);
      m = std::min(m, static_cast<int>(val_mpz(t, p, u)));
    }
    if (m == std::numeric_limits<int>::max()) throw std::logic_error("degenerate witness");
    long prec = static_cast<long>(verdict.witness_exponent) - m;
    mpq_class L1 = D.l1.at_point(w[0], w[1], w[2]);
    if (L1 != 0 && val_q(L1, p) + need <= prec)
      return symbol_to_halves(hilbert_symbol(L1, dq, v));
    mpq_class L2 = D.l2.at_point(w[0], w[1], w[2]);
    if (L2 != 0 && val_q(L2, p) + need <= prec - den_loss)
      return symbol_to_halves(hilbert_symbol(L2, dq, v) * hilbert_symbol(-D.c0, dq, v));
  }
  throw std::logic_error("invariant undetermined at available precision");
}

int invariant_at_point(const BrauerDecomposition& D, Place v, const IntegralPoint& P) {
  const QuadricInstance& Q = D.instance;
  i128 lhs = static_cast<i128>(Q.a) * P.x * P.x + static_cast<i128>(Q.b) * P.y * P.y +
             static_cast<i128>(Q.c) * P.z * P.z;
  if (lhs != Q.n) throw std::invalid_argument("point is not on the quadric");
  if (square_in_Qv(D.d, v)) return 0;
  mpq_class dq(static_cast<long>(D.d));
  mpq_class L1 = D.l1.at_point(P.x, P.y, P.z);
  if (L1 != 0) return symbol_to_halves(hilbert_symbol(L1, dq, v));
  mpq_class L2 = D.l2.at_point(P.x, P.y, P.z);
  if (L2 == 0) throw std::logic_error("both charts vanish at a rational point");
  return symbol_to_halves(hilbert_symbol(L2, dq, v) * hilbert_symbol(-D.c0, dq, v));
}

InvariantProfile family_invariant_profile(const FamilyInstance& F) {
  if (!family_local_criterion(F)) throw std::domain_error("family instance fails the local criterion");
  InvariantProfile prof;
  std::set<u64> bad{2, F.q};
  for (u64 p : prime_support({F.a, F.c, F.d, F.e})) bad.insert(p);
  PowerResidueClass cls = power_residue_class(F.a, F.q);
  if (cls != PowerResidueClass::FourthPower && cls != PowerResidueClass::SquareNotFourth)
    throw std::logic_error("locally solvable family instance must have square a mod q");
  int at_q = (cls == PowerResidueClass::SquareNotFourth) ? 1 : 0;
  prof.halves.emplace_back(Place::archimedean(), 0);
  for (u64 p : bad) prof.halves.emplace_back(Place::finite(p), p == F.q ? at_q : 0);
  prof.obstructed = at_q != 0;
  return prof;
}

ObstructionDecision obstruction_decision(const FamilyInstance& F) {
  ObstructionDecision r;
  r.locally_solvable = family_local_criterion(F);
  r.a_class = power_residue_class(F.a, F.q);
  r.obstructed = r.locally_solvable && r.a_class == PowerResidueClass::SquareNotFourth;
  return r;
}

PointSearchResult family_point_search(const FamilyInstance& F, std::int64_t z_bound) {
  if (z_bound < 0) throw std::invalid_argument("negative z bound");
  PointSearchResult res;
  const i128 qe2 = static_cast<i128>(F.q) * F.e * F.e;
  const i128 den_x = 2 * static_cast<i128>(F.q) * F.c;
  const i128 den_y = 2 * static_cast<i128>(F.d);
  const QuadricInstance derived = F.derived();
  for (i64 z = 0; z <= z_bound; ++z) {
    res.searched_z_bound = z;
    i128 num = 1 - qe2 * z * z;
    if (num % F.a != 0) continue;
    i128 Mz = num / F.a;
    if (Mz == 0) throw std::logic_error("degenerate fiber");
    if (Mz > std::numeric_limits<i64>::max() || -Mz > std::numeric_limits<i64>::max())
      throw std::overflow_error("fiber value exceeds 64 bits");
    u64 absM = static_cast<u64>(Mz < 0 ? -Mz : Mz);
    std::vector<u64> divs = divisors(factorize_u64(absM), true);
    std::vector<IntegralPoint> found;
    auto try_pair = [&](i128 u, i128 vv) {
      i128 sx = u + vv, sy = vv - u;
      if (sx % den_x != 0 || sy % den_y != 0) return;
      i128 x = sx / den_x, y = sy / den_y;
      if (x > std::numeric_limits<i64>::max() || -x > std::numeric_limits<i64>::max()) return;
      if (y > std::numeric_limits<i64>::max() || -y > std::numeric_limits<i64>::max()) return;
      i128 lhs = static_cast<i128>(derived.a) * x * x + static_cast<i128>(derived.b) * y * y +
                 static_cast<i128>(derived.c) * z * z;
      if (lhs != derived.n) return;
      found.push_back({static_cast<i64>(x), static_cast<i64>(y), z});
      if (z != 0) found.push_back({static_cast<i64>(x), static_cast<i64>(y), -z});
    };
    for (u64 u0 : divs) {
      i128 v0 = static_cast<i128>(absM / u0);
      if (Mz > 0) {
        try_pair(static_cast<i128>(u0), v0);
        try_pair(-static_cast<i128>(u0), -v0);
      } else {
        try_pair(static_cast<i128>(u0), -v0);
        try_pair(-static_cast<i128>(u0), v0);
      }
    }
    if (!found.empty()) {
      auto key = [](const IntegralPoint& P) {
        return std::make_tuple(P.x < 0 ? -P.x : P.x, P.x, P.y, P.z);
      };
      res.point = *std::min_element(found.begin(), found.end(),
                                    [&](const IntegralPoint& A, const IntegralPoint& B) { return key(A) < key(B); });
      return res;
    }
  }
  return res;
}

std::optional<IntegralPoint> find_integral_point(const QuadricInstance& Q, std::int64_t height) {
  for (i64 ax = 0; ax <= height; ++ax)
    for (i64 x : {-ax, ax}) {
      for (i64 y = -height; y <= height; ++y) {
        i128 t = static_cast<i128>(Q.n) - static_cast<i128>(Q.a) * x * x - static_cast<i128>(Q.b) * y * y;
        if (t % Q.c != 0) continue;
        i128 zz = t / Q.c;
        if (zz < 0) continue;
        if (zz > std::numeric_limits<i64>::max()) continue;
        i64 z0 = static_cast<i64>(isqrt_u64(static_cast<u64>(zz)));
        if (static_cast<i128>(z0) * z0 != zz) continue;
        return IntegralPoint{x, y, -z0};
      }
      if (ax == 0) break;
    }
  return std::nullopt;
}

bool isotropic_over_R(const std::array<std::int64_t, 4>& coef) {
  bool pos = false, neg = false;
  for (i64 c : coef) {
    if (c == 0) throw std::invalid_argument("degenerate form");
    (c > 0 ? pos : neg) = true;
  }
  return pos && neg;
}

bool isotropic_over_Qp(const std::array<std::int64_t, 4>& coef, std::uint64_t p) {
  for (i64 c : coef)
    if (c == 0) throw std::invalid_argument("degenerate form");
  Place v = Place::finite(p);
  i64 dsq = sqfree_of_product({coef[0], coef[1], coef[2], coef[3]}, 1);
  int eps = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) eps *= hilbert_symbol(coef[i], coef[j], v);
  bool aniso = square_in_Qv(dsq, v) && eps == -hilbert_symbol(-1, -1, v);
  return !aniso;
}

bool isotropic_everywhere(const std::array<std::int64_t, 4>& coef) {
  if (!isotropic_over_R(coef)) return false;
  std::set<u64> ps{2};
  for (u64 p : prime_support({coef[0], coef[1], coef[2], coef[3]})) ps.insert(p);
  for (u64 p : ps)
    if (!isotropic_over_Qp(coef, p)) return false;
  return true;
}

std::optional<std::array<std::int64_t, 4>> isotropic_vector(const std::array<std::int64_t, 4>& coef,
                                                            std::int64_t height) {
  struct Entry {
    i128 val;
    std::int32_t a, b;
  };
  for (i64 h = 8;; h *= 2) {
    if (h > height) h = height;
    std::vector<Entry> left, right;
    left.reserve((h + 1) * (h + 1));
    right.reserve((h + 1) * (h + 1));
    for (i64 x = 0; x <= h; ++x)
      for (i64 y = 0; y <= h; ++y) {
        left.push_back({static_cast<i128>(coef[0]) * x * x + static_cast<i128>(coef[1]) * y * y,
                        static_cast<std::int32_t>(x), static_cast<std::int32_t>(y)});
        right.push_back({-(static_cast<i128>(coef[2]) * x * x + static_cast<i128>(coef[3]) * y * y),
                         static_cast<std::int32_t>(x), static_cast<std::int32_t>(y)});
      }
    auto cmp = [](const Entry& A, const Entry& B) {
      return std::tie(A.val, A.a, A.b) < std::tie(B.val, B.a, B.b);
    };
    std::sort(left.begin(), left.end(), cmp);
    std::sort(right.begin(), right.end(), cmp);
    std::size_t i = 0, j = 0;
    while (i < left.size() && j < right.size()) {
      if (left[i].val < right[j].val)
        ++i;
      else if (right[j].val < left[i].val)
        ++j;
      else {
        // First value match in sorted order; skip the all-zero pairing.
        for (std::size_t jj = j; jj < right.size() && right[jj].val == left[i].val; ++jj) {
          const Entry &L = left[i], &R = right[jj];
          if (L.a == 0 && L.b == 0 && R.a == 0 && R.b == 0) continue;
          std::array<i64, 4> pt{L.a, L.b, R.a, R.b};
          i128 check = 0;
          for (int t = 0; t < 4; ++t) check += static_cast<i128>(coef[t]) * pt[t] * pt[t];
          if (check != 0) throw std::logic_error("isotropy bookkeeping failed");
          return pt;
        }
        ++i;
      }
    }
    if (h == height) return std::nullopt;
  }
}

}  // namespace qbm

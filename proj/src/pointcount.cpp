#include "kurisym/pointcount.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>

namespace kurisym {

namespace {

i64 reduce_mpz(const mpz_class& x, i64 l) {
  mpz_class r;
  mpz_class lz = static_cast<long>(l);
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), lz.get_mpz_t());
  return r.get_si();
}

// Affine point on y^2 = x^3 + A x + B over F_l, l > 3.
struct Pt {
  i64 x = 0, y = 0;
  bool inf = true;
};

class ShortCurve {
 public:
  ShortCurve(i64 l, i64 A, i64 B) : l_(l), A_(A), B_(B) {}

  i64 rhs(i64 x) const { return mod(mulmod(mod(mulmod(x, x, l_) + A_, l_), x, l_) + B_, l_); }

  Pt add(const Pt& P, const Pt& Q) const {
    if (P.inf) return Q;
    if (Q.inf) return P;
    i64 lam;
    if (P.x == Q.x) {
      if (mod(P.y + Q.y, l_) == 0) return {};
      lam = mulmod(mod(3 * mulmod(P.x, P.x, l_) + A_, l_), invmod(mod(2 * P.y, l_), l_), l_);
    } else {
      lam = mulmod(mod(Q.y - P.y, l_), invmod(mod(Q.x - P.x, l_), l_), l_);
    }
    i64 x3 = mod(mulmod(lam, lam, l_) - P.x - Q.x, l_);
    i64 y3 = mod(mulmod(lam, mod(P.x - x3, l_), l_) - P.y, l_);
    return {x3, y3, false};
  }

  Pt neg(const Pt& P) const { return P.inf ? P : Pt{P.x, mod(-P.y, l_), false}; }

  Pt mul(Pt P, i64 k) const {
    if (k < 0) {
      P = neg(P);
      k = -k;
    }
    Pt R;
    while (k) {
      if (k & 1) R = add(R, P);
      P = add(P, P);
      k >>= 1;
    }
    return R;
  }

  Pt random_point(std::mt19937_64& rng) const {
    std::uniform_int_distribution<i64> dist(0, l_ - 1);
    while (true) {
      i64 x = dist(rng);
      i64 v = rhs(x);
      if (v == 0) continue;  // skip 2-torsion
      if (legendre(v, l_) == 1) return {x, sqrt_mod(v, l_), false};
    }
  }

  /// Order of P given that its order divides some m in [lo, hi].
  i64 order(const Pt& P, i64 lo, i64 hi) const {
    const i64 width = hi - lo + 1;
    const i64 w = static_cast<i64>(std::ceil(std::sqrt(static_cast<double>(width))));
    std::unordered_multimap<i64, std::pair<i64, Pt>> baby;
    Pt jP;
    for (i64 j = 0; j < w; ++j) {
      baby.emplace(jP.inf ? -1 : jP.x, std::make_pair(j, jP));
      jP = add(jP, P);
    }
    const Pt step = mul(P, w);
    Pt R = mul(P, lo);
    i64 found = 0;
    for (i64 i = 0; i * w < width && !found; ++i) {
      // (lo + i w + j) P = O  <=>  j P = -R
      Pt target = neg(R);
      auto [b, e] = baby.equal_range(target.inf ? -1 : target.x);
      for (auto it = b; it != e; ++it) {
        const Pt& cand = it->second.second;
        if (cand.inf == target.inf && cand.y == target.y) {
          i64 m = lo + i * w + it->second.first;
          if (m >= lo && m <= hi && m > 0) {
            found = m;
            break;
          }
        }
      }
      R = add(R, step);
    }
    if (!found) throw Error(ErrorCode::kInternal, "bsgs: no multiple of point order in Hasse interval");
    // Reduce found multiple to the exact order.
    i64 ord = found;
    for (auto [q, e] : factor(found)) {
      (void)e;
      while (ord % q == 0 && mul(P, ord / q).inf) ord /= q;
    }
    return ord;
  }

 private:
  i64 l_, A_, B_;
};

std::vector<i64> multiples_in(i64 m, i64 lo, i64 hi) {
  std::vector<i64> out;
  for (i64 k = (lo + m - 1) / m * m; k <= hi; k += m) out.push_back(k);
  return out;
}

}  // namespace

ReducedCurve::ReducedCurve(const WeierstrassModel& model, i64 l)
    : l(l),
      a1(reduce_mpz(model.a1(), l)),
      a2(reduce_mpz(model.a2(), l)),
      a3(reduce_mpz(model.a3(), l)),
      a4(reduce_mpz(model.a4(), l)),
      a6(reduce_mpz(model.a6(), l)) {}

i64 ReducedCurve::b_poly(i64 x) const {
  const i64 b2 = mod(mulmod(a1, a1, l) + 4 * a2, l);
  const i64 b4 = mod(2 * a4 + mulmod(a1, a3, l), l);
  const i64 b6 = mod(mulmod(a3, a3, l) + 4 * a6, l);
  i64 v = mod(mulmod(4, x, l) + b2, l);
  v = mod(mulmod(v, x, l) + 2 * b4, l);
  return mod(mulmod(v, x, l) + b6, l);
}

i64 count_points_naive(const WeierstrassModel& model, i64 l) {
  const ReducedCurve E(model, l);
  if (l == 2) {
    i64 n = 1;
    for (i64 x = 0; x < 2; ++x) {
      for (i64 y = 0; y < 2; ++y) {
        i64 lhs = y * y + E.a1 * x * y + E.a3 * y;
        i64 rhs = x * x * x + E.a2 * x * x + E.a4 * x + E.a6;
        if (mod(lhs - rhs, 2) == 0) ++n;
      }
    }
    return n;
  }
  // (2y + a1 x + a3)^2 = b_poly(x); each x contributes 1 + (b_poly(x) | l).
  std::vector<signed char> chi(static_cast<std::size_t>(l), -1);
  chi[0] = 0;
  for (i64 y = 1; y < l; ++y) chi[static_cast<std::size_t>(mulmod(y, y, l))] = 1;
  i64 n = 1;
  for (i64 x = 0; x < l; ++x) n += 1 + chi[static_cast<std::size_t>(E.b_poly(x))];
  return n;
}

i64 count_points_bsgs(const WeierstrassModel& model, i64 l) {
  if (l <= 3) throw Error(ErrorCode::kUnsupported, "bsgs point count needs l > 3");
  const Invariants& I = model.invariants();
  if (reduce_mpz(I.disc, l) == 0) throw Error(ErrorCode::kUnsupported, "bad reduction at l");
  // y^2 = x^3 - 27 c4 x - 54 c6 is isomorphic over F_l.
  const i64 A = reduce_mpz(-27 * I.c4, l);
  const i64 B = reduce_mpz(-54 * I.c6, l);
  const ShortCurve E(l, A, B);

  // Quadratic twist by a non-residue d: y^2 = x^3 + d^2 A x + d^3 B.
  i64 d = 2;
  while (legendre(d, l) != -1) ++d;
  const ShortCurve T(l, mulmod(mulmod(d, d, l), A, l), mulmod(mulmod(mulmod(d, d, l), d, l), B, l));

  const i64 s = static_cast<i64>(std::floor(2.0 * std::sqrt(static_cast<double>(l)))) + 1;
  const i64 lo = std::max<i64>(1, l + 1 - s), hi = l + 1 + s;
  const i64 sum = 2 * l + 2;

  std::mt19937_64 rng(static_cast<u64>(l) * 0x9E3779B97F4A7C15ull);
  i64 lcm_e = 1, lcm_t = 1;
  for (int round = 0; round < 64; ++round) {
    lcm_e = std::lcm(lcm_e, E.order(E.random_point(rng), lo, hi));
    lcm_t = std::lcm(lcm_t, T.order(T.random_point(rng), lo, hi));
    std::vector<i64> candidates;
    for (i64 n : multiples_in(lcm_e, lo, hi)) {
      if ((sum - n) % lcm_t == 0) candidates.push_back(n);
    }
    if (candidates.size() == 1) return candidates.front();
    if (candidates.empty()) throw Error(ErrorCode::kInternal, "bsgs: inconsistent twist orders");
  }
  throw Error(ErrorCode::kInternal, "bsgs: group order not determined at l=" + std::to_string(l));
}

i64 count_points(const WeierstrassModel& model, i64 l) {
  return l < kNaiveCountBound ? count_points_naive(model, l) : count_points_bsgs(model, l);
}

i64 count_points_quadratic(const WeierstrassModel& model, i64 l) {
  if (l == 2 || reduce_mpz(model.discriminant(), l) == 0)
    throw Error(ErrorCode::kUnsupported, "count_points_quadratic needs an odd prime of good reduction");
  if (l > 1 << 15) throw Error(ErrorCode::kUnsupported, "count_points_quadratic: field too large to enumerate");
  const Invariants& inv = model.invariants();
  const i64 b2 = reduce_mpz(inv.b2, l), b4 = reduce_mpz(inv.b4, l), b6 = reduce_mpz(inv.b6, l);
  i64 d = 2;
  while (legendre(d, l) != -1) ++d;
  // F_{l^2} = F_l[t]/(t^2 - d); v is a square there iff its norm is a square in F_l.
  struct F2 {
    i64 re, im;
  };
  auto mul = [&](F2 u, F2 v) {
    return F2{mod(u.re * v.re + mulmod(u.im * v.im % l, d, l), l), mod(u.re * v.im + u.im * v.re, l)};
  };
  i64 chi_sum = 0;
  for (i64 r = 0; r < l; ++r)
    for (i64 s = 0; s < l; ++s) {
      const F2 x{r, s};
      // Horner: ((4x + b2) x + 2 b4) x + b6
      F2 v{mod(4 * r + b2, l), mod(4 * s, l)};
      v = mul(v, x);
      v.re = mod(v.re + 2 * b4, l);
      v = mul(v, x);
      v.re = mod(v.re + b6, l);
      const i64 norm = mod(v.re * v.re - mulmod(v.im * v.im % l, d, l), l);
      chi_sum += legendre(norm, l);
    }
  return l * l + 1 + chi_sum;
}

}  // namespace kurisym

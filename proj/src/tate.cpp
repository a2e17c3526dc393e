// Tate's algorithm over Z_(l), following the classical step sequence
// (multiplicative test, then II, III, IV, I0*, In*, IV*, III*, II*, rescale).

#include <climits>

#include "kurisym/curves.hpp"
#include "tate_internal.hpp"

namespace kurisym {
namespace {

class LocalField {
 public:
  explicit LocalField(i64 p) : p_(p), pz_(static_cast<long>(p)) {}

  i64 p() const { return p_; }
  const mpz_class& pz() const { return pz_; }

  i64 reduce(const mpz_class& x) const {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), pz_.get_mpz_t());
    return r.get_si();
  }
  bool divides(const mpz_class& x) const { return reduce(x) == 0; }
  int val(const mpz_class& x) const { return x == 0 ? INT_MAX : valuation(x, p_); }
  i64 inv(const mpz_class& x) const { return invmod(reduce(x), p_); }

  // Some root of x^k = a for the char-2/char-3 cases where Frobenius is trivial on F_p.
  i64 root(const mpz_class& a) const { return reduce(a); }

  bool quad_has_root(const mpz_class& a, const mpz_class& b, const mpz_class& c) const {
    i64 ra = reduce(a), rb = reduce(b), rc = reduce(c);
    if (ra == 0) return rb != 0 || rc == 0;
    if (p_ == 2) {
      return rc == 0 || (ra + rb + rc) % 2 == 0;
    }
    i64 disc = mod(mulmod(rb, rb, p_) - mulmod(4 % p_, mulmod(ra, rc, p_), p_), p_);
    return legendre(disc, p_) != -1;
  }

  // Brute force; additive primes are small at desk scale.
  int cubic_root_count(const mpz_class& b, const mpz_class& c, const mpz_class& d) const {
    i64 rb = reduce(b), rc = reduce(c), rd = reduce(d);
    int n = 0;
    for (i64 x = 0; x < p_; ++x) {
      i64 v = mod(mulmod(mod(mulmod(mod(x + rb, p_), x, p_) + rc, p_), x, p_) + rd, p_);
      if (v == 0) ++n;
    }
    return n;
  }

 private:
  i64 p_;
  mpz_class pz_;
};

struct Coeffs {
  mpz_class a1, a2, a3, a4, a6;

  void rst(const mpz_class& r, const mpz_class& s, const mpz_class& t) {
    mpz_class n1 = a1 + 2 * s;
    mpz_class n2 = a2 - s * a1 + 3 * r - s * s;
    mpz_class n3 = a3 + r * a1 + 2 * t;
    mpz_class n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
    mpz_class n6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
    a1 = n1;
    a2 = n2;
    a3 = n3;
    a4 = n4;
    a6 = n6;
  }
};

mpz_class exact_div(const mpz_class& x, const mpz_class& d) {
  mpz_class q;
  mpz_divexact(q.get_mpz_t(), x.get_mpz_t(), d.get_mpz_t());
  return q;
}

}  // namespace

TateResult run_tate(const WeierstrassModel& model, i64 l) {
  LocalField F(l);
  const mpz_class& pi = F.pz();
  const i64 half = l == 2 ? 0 : invmod(2, l);

  Coeffs C{model.a1(), model.a2(), model.a3(), model.a4(), model.a6()};
  LocalData out;
  out.prime = l;

  while (true) {
    WeierstrassModel cur(C.a1, C.a2, C.a3, C.a4, C.a6);
    const Invariants& I = cur.invariants();
    const int vd = F.val(I.disc);
    out.disc_valuation = vd;

    if (vd == 0) {
      out.reduction = Reduction::Good;
      out.kodaira = Kodaira::I0;
      out.conductor_exponent = 0;
      out.tamagawa = 1;
      return {out, cur};
    }

    // Move the singular point to (0,0): p | a3, a4, a6.
    mpz_class r, t;
    if (l == 2) {
      if (F.divides(I.b2)) {
        r = F.root(C.a4);
        t = F.root(((r + C.a2) * r + C.a4) * r + C.a6);
      } else {
        mpz_class inv = F.inv(C.a1);
        r = inv * C.a3;
        t = inv * (C.a4 + r * r);
      }
    } else if (l == 3) {
      if (F.divides(I.b2)) {
        r = F.root(-I.b6);
      } else {
        r = -F.inv(I.b2) * I.b4;
      }
      t = C.a1 * r + C.a3;
    } else {
      if (F.divides(I.c4)) {
        r = -mpz_class(static_cast<long>(invmod(12, l))) * I.b2;
      } else {
        r = -mpz_class(static_cast<long>(invmod(F.reduce(12 * I.c4), l))) * (I.c6 + I.b2 * I.c4);
      }
      t = -mpz_class(static_cast<long>(half)) * (C.a1 * r + C.a3);
    }
    r = F.reduce(r);
    t = F.reduce(t);
    C.rst(r, 0, t);

    if (!F.divides(I.c4)) {
      out.kodaira = Kodaira::In;
      out.kodaira_index = vd;
      out.conductor_exponent = 1;
      if (F.quad_has_root(1, C.a1, -C.a2)) {
        out.reduction = Reduction::SplitMultiplicative;
        out.tamagawa = vd;
      } else {
        out.reduction = Reduction::NonsplitMultiplicative;
        out.tamagawa = vd % 2 == 0 ? 2 : 1;
      }
      return {out, WeierstrassModel(C.a1, C.a2, C.a3, C.a4, C.a6)};
    }

    out.reduction = Reduction::Additive;
    auto finish = [&](Kodaira k, int f, i64 c, int index = 0) {
      out.kodaira = k;
      out.kodaira_index = index;
      out.conductor_exponent = f;
      out.tamagawa = c;
      return TateResult{out, WeierstrassModel(C.a1, C.a2, C.a3, C.a4, C.a6)};
    };

    const mpz_class b6 = C.a3 * C.a3 + 4 * C.a6;
    const mpz_class b8 = C.a1 * C.a1 * C.a6 + 4 * C.a2 * C.a6 - C.a1 * C.a3 * C.a4 + C.a2 * C.a3 * C.a3 - C.a4 * C.a4;
    if (F.val(C.a6) < 2) return finish(Kodaira::II, vd, 1);
    if (F.val(b8) < 3) return finish(Kodaira::III, vd - 1, 2);
    if (F.val(b6) < 3) {
      i64 c = F.quad_has_root(1, exact_div(C.a3, pi), -exact_div(C.a6, pi * pi)) ? 3 : 1;
      return finish(Kodaira::IV, vd - 2, c);
    }

    // p | a1, a2; p^2 | a3, a4; p^3 | a6.
    mpz_class s;
    if (l == 2) {
      s = F.root(C.a2);
      t = pi * F.root(exact_div(C.a6, pi * pi));
    } else if (l == 3) {
      s = C.a1;
      t = C.a3;
    } else {
      s = -C.a1 * half;
      t = -C.a3 * half;
    }
    C.rst(0, s, t);

    const mpz_class b = exact_div(C.a2, pi);
    const mpz_class c = exact_div(C.a4, pi * pi);
    const mpz_class d = exact_div(C.a6, pi * pi * pi);
    const mpz_class w = 27 * d * d - b * b * c * c + 4 * b * b * b * d - 18 * b * c * d + 4 * c * c * c;
    const mpz_class x = 3 * c - b * b;
    const int sw = F.divides(w) ? (F.divides(x) ? 3 : 2) : 1;

    if (sw == 1) {
      return finish(Kodaira::I0Star, vd - 4, 1 + F.cubic_root_count(b, c, d));
    }

    if (sw == 2) {
      // Double root: move it to 0.
      if (l == 2) {
        r = F.root(c);
      } else if (l == 3) {
        r = c * F.inv(b);
      } else {
        r = (b * c - 9 * d) * F.inv(2 * x);
      }
      r = pi * F.reduce(r);
      C.rst(r, 0, 0);

      int ix = 3, iy = 3;
      mpz_class mx = pi * pi, my = pi * pi;
      i64 cp = 0;
      while (true) {
        mpz_class a2t = exact_div(C.a2, pi);
        mpz_class a3t = exact_div(C.a3, my);
        mpz_class a4t = exact_div(C.a4, pi * mx);
        mpz_class a6t = exact_div(C.a6, mx * my);
        if (F.divides(a3t * a3t + 4 * a6t)) {
          if (l == 2) {
            t = my * F.root(a6t);
          } else {
            t = my * F.reduce(-a3t * half);
          }
          C.rst(0, 0, t);
          my *= pi;
          ++iy;
          a2t = exact_div(C.a2, pi);
          a3t = exact_div(C.a3, my);
          a4t = exact_div(C.a4, pi * mx);
          a6t = exact_div(C.a6, mx * my);
          if (F.divides(a4t * a4t - 4 * a6t * a2t)) {
            if (l == 2) {
              r = mx * F.root(a6t * F.inv(a2t));
            } else {
              r = mx * F.reduce(-a4t * F.inv(2 * a2t));
            }
            C.rst(r, 0, 0);
            mx *= pi;
            ++ix;
          } else {
            cp = F.quad_has_root(a2t, a4t, a6t) ? 4 : 2;
            break;
          }
        } else {
          cp = F.quad_has_root(1, a3t, -a6t) ? 4 : 2;
          break;
        }
      }
      const int m = ix + iy - 5;
      return finish(Kodaira::InStar, vd - m - 4, cp, m);
    }

    // Triple root: move it to 0.
    if (l == 2) {
      r = b;
    } else if (l == 3) {
      r = F.root(-d);
    } else {
      r = -b * F.inv(3);
    }
    r = pi * F.reduce(r);
    C.rst(r, 0, 0);
    const mpz_class x3 = exact_div(C.a3, pi * pi);
    const mpz_class x6 = exact_div(C.a6, pi * pi * pi * pi);
    if (!F.divides(x3 * x3 + 4 * x6)) {
      i64 cp = F.quad_has_root(1, x3, -x6) ? 3 : 1;
      return finish(Kodaira::IVStar, vd - 6, cp);
    }
    if (l == 2) {
      t = x6;
    } else {
      t = x3 * half;
    }
    t = -pi * pi * F.reduce(t);
    C.rst(0, 0, t);
    if (F.val(C.a4) < 4) return finish(Kodaira::IIIStar, vd - 7, 2);
    if (F.val(C.a6) < 6) return finish(Kodaira::IIStar, vd - 8, 1);

    // Not minimal at l: scale by u = l and restart.
    C.a1 = exact_div(C.a1, pi);
    C.a2 = exact_div(C.a2, pi * pi);
    C.a3 = exact_div(C.a3, pi * pi * pi);
    C.a4 = exact_div(C.a4, pi * pi * pi * pi);
    C.a6 = exact_div(C.a6, pi * pi * pi * pi * pi * pi);
  }
}

LocalData tate_local_data(const WeierstrassModel& model, i64 l) { return run_tate(model, l).local; }

}  // namespace kurisym

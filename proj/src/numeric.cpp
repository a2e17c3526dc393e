#include "kurisym/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace kurisym {

namespace {

template <class F>
F agm(F a, F b) {
  for (int it = 0; it < 100; ++it) {
    const F m = (a + b) / 2;
    const F g = std::sqrt(a * b);
    if (std::fabs(m - g) <= std::numeric_limits<F>::epsilon() * m) return m;
    a = m;
    b = g;
  }
  return (a + b) / 2;
}

// Real roots of x^3 + a x^2 + b x + c, ascending, polished by Newton steps.
template <class F>
std::vector<F> real_roots(F a, F b, F c, bool three) {
  const F Q = (a * a - 3 * b) / 9, R = (2 * a * a * a - 9 * a * b + 27 * c) / 54;
  std::vector<F> r;
  if (three) {
    const F sq = std::sqrt(std::max<F>(Q, 0));
    const F ratio = std::clamp<F>(R / (sq * sq * sq), -1, 1);
    const F th = std::acos(ratio);
    const F pi = std::numbers::pi_v<F>;
    for (F shift : {F(0), 2 * pi, -2 * pi}) r.push_back(-2 * sq * std::cos((th + shift) / 3) - a / 3);
  } else {
    const F A = -std::copysign(std::cbrt(std::fabs(R) + std::sqrt(std::max<F>(R * R - Q * Q * Q, 0))), R);
    const F B = A == 0 ? 0 : Q / A;
    r.push_back(A + B - a / 3);
  }
  for (F& x : r)
    for (int it = 0; it < 4; ++it) {
      const F f = ((x + a) * x + b) * x + c, df = (3 * x + 2 * a) * x + b;
      if (df == 0) break;
      x -= f / df;
    }
  std::sort(r.begin(), r.end());
  return r;
}

template <class F>
F period(F b2, F b4, F b6, bool positive_disc) {
  // 4x^3 + b2 x^2 + 2 b4 x + b6 = 4 (x - e1)(x - e2)(x - e3)
  const auto e = real_roots<F>(b2 / 4, b4 / 2, b6 / 4, positive_disc);
  const F pi = std::numbers::pi_v<F>;
  if (positive_disc) {
    const F e3 = e[0], e2 = e[1], e1 = e[2];
    // two real components, each of length pi / AGM
    return 2 * pi / agm<F>(std::sqrt(e1 - e3), std::sqrt(e1 - e2));
  }
  const F e1 = e[0];
  const F A = 3 * e1 + b2 / 4;
  const F B = std::sqrt(3 * e1 * e1 + b2 / 2 * e1 + b4 / 2);
  return 2 * pi / agm<F>(2 * std::sqrt(B), std::sqrt(2 * B + A));
}

// bound on sum over n > M of |a_n| / n e^{-c n}, using |a_n| <= d(n) sqrt(n) <= 2 n
double tail_bound(i64 M, double c) { return 2 * std::exp(-c * static_cast<double>(M + 1)) / (1 - std::exp(-c)); }

constexpr double kT0 = 1.2;

}  // namespace

Approx real_period(const WeierstrassModel& minimal) {
  const Invariants& inv = minimal.invariants();
  const bool pos = sgn(inv.disc) > 0;
  const long double hi = period<long double>(inv.b2.get_d(), inv.b4.get_d(), inv.b6.get_d(), pos);
  const double lo = period<double>(inv.b2.get_d(), inv.b4.get_d(), inv.b6.get_d(), pos);
  Approx out;
  out.value = static_cast<double>(hi);
  out.error = std::fabs(static_cast<double>(hi) - lo) + 4 * std::numeric_limits<double>::epsilon() * out.value;
  return out;
}

std::vector<i64> dirichlet_coefficients(const WeierstrassModel& minimal, i64 terms) {
  const std::size_t n = static_cast<std::size_t>(std::max<i64>(terms, 1));
  std::vector<i64> a(n + 1, 0), spf(n + 1, 0);
  a[1] = 1;
  for (i64 l : primes_up_to(terms)) {
    const i64 al = hecke_eigenvalue(minimal, l);
    const bool good = mpz_divisible_ui_p(minimal.discriminant().get_mpz_t(), static_cast<unsigned long>(l)) == 0;
    for (i64 m = l; m <= terms; m += l)
      if (spf[static_cast<std::size_t>(m)] == 0) spf[static_cast<std::size_t>(m)] = l;
    i64 prev = 1, cur = al;
    for (i64 q = l;;) {
      a[static_cast<std::size_t>(q)] = cur;
      if (q > terms / l) break;
      q *= l;
      const i64 next = good ? al * cur - l * prev : al * cur;
      prev = cur;
      cur = next;
    }
  }
  for (std::size_t m = 2; m <= n; ++m) {
    const std::size_t l = static_cast<std::size_t>(spf[m]);
    std::size_t q = 1, r = m;
    while (r % l == 0) {
      r /= l;
      q *= l;
    }
    if (r != 1) a[m] = a[q] * a[r];
  }
  return a;
}

i64 terms_for_precision(i64 N, double target) {
  const double c = 2 * std::numbers::pi / (kT0 * std::sqrt(static_cast<double>(N)));
  i64 M = 1;
  while (2 * tail_bound(M, c) > target) M += std::max<i64>(1, M / 8);
  return M;
}

LValue l_value_approx(const CurveArithmetic& curve, i64 terms, double target) {
  if (terms < 1) throw Error(ErrorCode::kMalformedInput, "terms must be positive");
  const auto a = dirichlet_coefficients(curve.minimal, terms);
  const long double rootN = std::sqrt(static_cast<long double>(curve.conductor));
  const long double twopi = 2 * std::numbers::pi_v<long double>;
  auto S = [&](long double t) {
    long double s = 0;
    for (i64 n = terms; n >= 1; --n)
      s += static_cast<long double>(a[static_cast<std::size_t>(n)]) / n * std::exp(-twopi * n * t / rootN);
    return s;
  };
  const long double s1 = S(1), st = S(kT0), sinv = S(1 / kT0);
  LValue out;
  out.terms = terms;
  const long double res_plus = std::fabs(st + sinv - 2 * s1), res_minus = std::fabs(st - sinv);
  out.epsilon = res_plus <= res_minus ? 1 : -1;
  out.fe_residual = static_cast<double>(std::min(res_plus, res_minus));
  out.value = static_cast<double>(st + out.epsilon * sinv);
  const double c_slow = static_cast<double>(twopi / (kT0 * rootN)), c_fast = static_cast<double>(twopi * kT0 / rootN);
  out.error = tail_bound(terms, c_slow) + tail_bound(terms, c_fast) +
              static_cast<double>(terms) * 1e-18 * (1 + std::fabs(out.value));
  if (target > 0 && out.error > target)
    throw Error(ErrorCode::kUnsupported, std::to_string(terms) + " terms give error bound " + std::to_string(out.error) +
                                             " above target " + std::to_string(target));
  return out;
}

AnalyticData analytic_data(const CurveArithmetic& curve, double target) {
  AnalyticData d;
  d.omega_plus = real_period(curve.minimal);
  d.l_value = l_value_approx(curve, terms_for_precision(curve.conductor, target), target);
  return d;
}

std::optional<mpq_class> recognize_rational(double x, i64 max_den, double rel_tol) {
  if (!std::isfinite(x)) return std::nullopt;
  const double ax = std::fabs(x);
  // convergents h/k of |x|
  mpz_class h1 = 1, h2 = 0, k1 = 0, k2 = 1;
  double r = ax;
  for (int it = 0; it < 64; ++it) {
    const double fl = std::floor(r);
    const mpz_class t = static_cast<long>(fl);
    const mpz_class h = t * h1 + h2, k = t * k1 + k2;
    if (k > max_den) break;
    const mpq_class q(h, k);
    if (std::fabs(q.get_d() - ax) <= rel_tol * std::max(ax, 1e-300)) {
      mpq_class out = q;
      out.canonicalize();
      return x < 0 ? mpq_class(-out) : out;
    }
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = k;
    if (r - fl == 0) break;
    r = 1 / (r - fl);
  }
  return std::nullopt;
}

DeltaOneCheck delta_one_crosscheck(const EigenSymbol& sym, const CurveArithmetic& curve, double tol) {
  DeltaOneCheck out;
  out.exact = sym.evaluate(0, 1);
  const AnalyticData d = analytic_data(curve);
  const double L = d.l_value.value;
  out.numeric = L / d.omega_plus.value;
  if (std::fabs(L) < 1e-8) {
    out.skipped = true;
    out.note = "L(E,1) numerically zero: analytic rank positive, no ratio to recognize";
    out.ok = out.exact == 0;
    return out;
  }
  if (out.exact == 0) {
    out.note = "symbol vanishes at 0 but L(E,1) does not";
    return out;
  }
  out.ratio = recognize_rational(out.exact.get_d() / out.numeric, 10000, tol);
  if (!out.ratio) {
    out.note = "ratio not recognized with denominator at most 10^4";
    return out;
  }
  out.rel_error = std::fabs(out.exact.get_d() - out.ratio->get_d() * out.numeric) / std::fabs(out.exact.get_d());
  const i64 p = curve.p;
  const bool unit = valuation(out.ratio->get_num(), p) == 0 && valuation(out.ratio->get_den(), p) == 0;
  out.ok = unit && out.rel_error < tol;
  if (!unit) out.note = "ratio is not a p-adic unit";
  return out;
}

}  // namespace kurisym

#include "kurisym/curves.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "kurisym/divpoly.hpp"
#include "kurisym/pointcount.hpp"
#include "tate_internal.hpp"

namespace kurisym {

namespace {

Invariants compute_invariants(const std::array<mpz_class, 5>& a) {
  const auto& [a1, a2, a3, a4, a6] = a;
  Invariants I;
  I.b2 = a1 * a1 + 4 * a2;
  I.b4 = 2 * a4 + a1 * a3;
  I.b6 = a3 * a3 + 4 * a6;
  I.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  I.c4 = I.b2 * I.b2 - 24 * I.b4;
  I.c6 = -I.b2 * I.b2 * I.b2 + 36 * I.b2 * I.b4 - 216 * I.b6;
  I.disc = -I.b2 * I.b2 * I.b8 - 8 * I.b4 * I.b4 * I.b4 - 27 * I.b6 * I.b6 + 9 * I.b2 * I.b4 * I.b6;
  return I;
}

mpz_class divexact_checked(const mpz_class& x, const mpz_class& d) {
  if (!mpz_divisible_p(x.get_mpz_t(), d.get_mpz_t())) {
    throw Error(ErrorCode::kInternal, "coordinate change leaves Z");
  }
  mpz_class q;
  mpz_divexact(q.get_mpz_t(), x.get_mpz_t(), d.get_mpz_t());
  return q;
}

mpz_class floor_div(const mpz_class& x, long d) {
  mpz_class q;
  mpz_class dz = d;
  mpz_fdiv_q(q.get_mpz_t(), x.get_mpz_t(), dz.get_mpz_t());
  return q;
}

// Laska normalization: a1, a3 in {0,1}, a2 in {-1,0,1}. Uses u = 1 only.
WeierstrassModel reduce_model(const WeierstrassModel& m) {
  mpz_class a1r = m.a1() - 2 * floor_div(m.a1(), 2);  // a1 mod 2
  mpz_class sv = (a1r - m.a1()) / 2;
  mpz_class a2s = m.a2() - sv * m.a1() - sv * sv;  // a2 after s-step, before r
  // choose r with a2s + 3r in {-1,0,1}
  mpz_class rv = -floor_div(a2s + 1, 3);
  WeierstrassModel step = m.change_coordinates(1, rv, sv, 0);
  mpz_class a3r = step.a3() - 2 * floor_div(step.a3(), 2);
  mpz_class tv = (a3r - step.a3()) / 2;
  return step.change_coordinates(1, 0, 0, tv);
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

WeierstrassModel::WeierstrassModel(mpz_class a1, mpz_class a2, mpz_class a3, mpz_class a4, mpz_class a6)
    : a_{std::move(a1), std::move(a2), std::move(a3), std::move(a4), std::move(a6)}, inv_(compute_invariants(a_)) {
  if (inv_.disc == 0) throw Error(ErrorCode::kSingularCurve, "singular Weierstrass model [" + to_string() + "]");
}

WeierstrassModel WeierstrassModel::from_ints(i64 a1, i64 a2, i64 a3, i64 a4, i64 a6) {
  return WeierstrassModel(static_cast<long>(a1), static_cast<long>(a2), static_cast<long>(a3), static_cast<long>(a4),
                          static_cast<long>(a6));
}

WeierstrassModel WeierstrassModel::change_coordinates(const mpz_class& u, const mpz_class& r, const mpz_class& s,
                                                      const mpz_class& t) const {
  const auto& [a1, a2, a3, a4, a6] = a_;
  const mpz_class u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u6 = u3 * u3;
  return WeierstrassModel(divexact_checked(a1 + 2 * s, u), divexact_checked(a2 - s * a1 + 3 * r - s * s, u2),
                          divexact_checked(a3 + r * a1 + 2 * t, u3),
                          divexact_checked(a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t, u4),
                          divexact_checked(a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1, u6));
}

std::pair<mpz_class, mpz_class> WeierstrassModel::j_invariant() const {
  mpz_class num = inv_.c4 * inv_.c4 * inv_.c4, den = inv_.disc, g;
  mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  num /= g;
  den /= g;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return {num, den};
}

std::string WeierstrassModel::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < a_.size(); ++i) os << (i ? "," : "") << a_[i].get_str();
  return os.str();
}

WeierstrassModel parse_weierstrass(std::string_view text) {
  std::vector<mpz_class> coeffs;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = text.find(',', start);
    std::string field = trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    std::string digits = (!field.empty() && (field[0] == '-' || field[0] == '+')) ? field.substr(1) : field;
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw Error(ErrorCode::kMalformedInput, "malformed curve coefficient '" + field + "' in '" + std::string(text) + "'");
    }
    mpz_class v(digits, 10);
    coeffs.push_back(field[0] == '-' ? mpz_class(-v) : v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (coeffs.size() != 5) {
    throw Error(ErrorCode::kMalformedInput, "expected 5 coefficients a1,a2,a3,a4,a6, got " + std::to_string(coeffs.size()));
  }
  return WeierstrassModel(coeffs[0], coeffs[1], coeffs[2], coeffs[3], coeffs[4]);
}

std::string to_string(Kodaira k, int index) {
  switch (k) {
    case Kodaira::I0: return "I0";
    case Kodaira::In: return "I" + std::to_string(index);
    case Kodaira::II: return "II";
    case Kodaira::III: return "III";
    case Kodaira::IV: return "IV";
    case Kodaira::I0Star: return "I0*";
    case Kodaira::InStar: return "I" + std::to_string(index) + "*";
    case Kodaira::IVStar: return "IV*";
    case Kodaira::IIIStar: return "III*";
    case Kodaira::IIStar: return "II*";
  }
  return "?";
}

std::string to_string(Reduction r) {
  switch (r) {
    case Reduction::Good: return "good";
    case Reduction::SplitMultiplicative: return "split_mult";
    case Reduction::NonsplitMultiplicative: return "nonsplit_mult";
    case Reduction::Additive: return "additive";
  }
  return "?";
}

std::string to_string(ReductionAtP r) {
  switch (r) {
    case ReductionAtP::GoodOrdinary: return "good_ordinary";
    case ReductionAtP::GoodSupersingular: return "good_supersingular";
    case ReductionAtP::Multiplicative: return "multiplicative";
    case ReductionAtP::Additive: return "additive";
  }
  return "?";
}

std::string to_string(Surjectivity s) {
  switch (s) {
    case Surjectivity::Surjective: return "surjective";
    case Surjectivity::NotSurjective: return "not_surjective";
    case Surjectivity::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::string to_string(ManinFlag m) { return m == ManinFlag::Yes ? "yes" : "inconclusive"; }

WeierstrassModel minimal_model(const WeierstrassModel& model) {
  WeierstrassModel current = model;
  for (const auto& [q, e] : factor(model.discriminant())) {
    if (e < 12) continue;
    current = run_tate(current, q.get_si()).model;
  }
  return reduce_model(current);
}

i64 frobenius_trace(const WeierstrassModel& model, i64 l) {
  if (mpz_divisible_ui_p(model.discriminant().get_mpz_t(), static_cast<unsigned long>(l))) {
    throw Error(ErrorCode::kUnsupported, "frobenius_trace: bad reduction at " + std::to_string(l));
  }
  const i64 a = l + 1 - count_points(model, l);
  if (static_cast<double>(a) * a > 4.0 * static_cast<double>(l)) {
    throw Error(ErrorCode::kInternal, "Hasse bound violated at " + std::to_string(l));
  }
  return a;
}

i64 nonsingular_count(const WeierstrassModel& minimal, i64 l) {
  const LocalData ld = tate_local_data(minimal, l);
  switch (ld.reduction) {
    case Reduction::Good: return l + 1 - frobenius_trace(minimal, l);
    case Reduction::SplitMultiplicative: return l - 1;
    case Reduction::NonsplitMultiplicative: return l + 1;
    case Reduction::Additive: return l;
  }
  return 0;
}

i64 hecke_eigenvalue(const WeierstrassModel& minimal, i64 l) {
  if (!mpz_divisible_ui_p(minimal.discriminant().get_mpz_t(), static_cast<unsigned long>(l))) {
    return frobenius_trace(minimal, l);
  }
  switch (tate_local_data(minimal, l).reduction) {
    case Reduction::Good: return frobenius_trace(minimal, l);
    case Reduction::SplitMultiplicative: return 1;
    case Reduction::NonsplitMultiplicative: return -1;
    case Reduction::Additive: return 0;
  }
  return 0;
}

namespace {

// Affine arithmetic on Y^2 = x^3 + A2 x^2 + A4 x + A6 over Z/p^K for points whose
// reductions avoid the denominators used.
struct PadicCurve {
  mpz_class M, A2, A4, A6;

  mpz_class red(const mpz_class& v) const {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), M.get_mpz_t());
    return r;
  }
  mpz_class inv(const mpz_class& v) const {
    mpz_class r;
    if (!mpz_invert(r.get_mpz_t(), red(v).get_mpz_t(), M.get_mpz_t())) {
      throw Error(ErrorCode::kInternal, "p-adic inverse of non-unit");
    }
    return r;
  }
  mpz_class rhs(const mpz_class& x) const { return red(((x + A2) * x + A4) * x + A6); }

  std::pair<mpz_class, mpz_class> add(const std::pair<mpz_class, mpz_class>& P, const std::pair<mpz_class, mpz_class>& Q,
                                      bool doubling) const {
    const auto& [x1, y1] = P;
    const auto& [x2, y2] = Q;
    mpz_class lam = doubling ? red((3 * x1 * x1 + 2 * A2 * x1 + A4) * inv(2 * y1)) : red((y2 - y1) * inv(x2 - x1));
    mpz_class x3 = red(lam * lam - A2 - x1 - x2);
    mpz_class y3 = red(-(lam * (x3 - x1) + y1));
    return {x3, y3};
  }
};

}  // namespace

LocalTorsion local_p_torsion_order(const WeierstrassModel& minimal, i64 p, int depth) {
  if (p == 2 || !is_prime(static_cast<u64>(p))) throw Error(ErrorCode::kUnsupported, "local torsion needs an odd prime");
  if (depth < 1) throw Error(ErrorCode::kMalformedInput, "depth must be positive");
  if (mpz_divisible_ui_p(minimal.discriminant().get_mpz_t(), static_cast<unsigned long>(p))) {
    throw Error(ErrorCode::kUnsupported, "local_p_torsion_order: bad reduction at p");
  }
  const i64 np = count_points(minimal, p);
  const int bound = np % p == 0 ? valuation(np, p) : 0;
  if (bound == 0) return {0, false};
  // Hasse gives #E(F_p) < p^2 for odd p, so the p-part is at most Z/p.
  if (bound > 1) throw Error(ErrorCode::kInternal, "p^2 | #E(F_p) contradicts the Hasse bound");

  // Y = y + (a1 x + a3)/2 over Z_(p): Y^2 = x^3 + (b2/4) x^2 + (b4/2) x + b6/4.
  const int K = 6;
  mpz_class M;
  mpz_ui_pow_ui(M.get_mpz_t(), static_cast<unsigned long>(p), K);
  const Invariants& I = minimal.invariants();
  PadicCurve C{M, 0, 0, 0};
  C.A2 = C.red(I.b2 * C.inv(4));
  C.A4 = C.red(I.b4 * C.inv(2));
  C.A6 = C.red(I.b6 * C.inv(4));

  // A point of exact order p in the reduction: m * Q for Q in E(F_p), m = #E(F_p)/p.
  const i64 cofactor = np / p;
  std::optional<std::pair<mpz_class, mpz_class>> base;
  for (i64 x = 0; x < p && !base; ++x) {
    i64 v = C.rhs(x).get_si() % p;
    if (v == 0 || legendre(v, p) != 1) continue;
    // Work mod p only to find the reduction point.
    PadicCurve Cp{mpz_class(static_cast<long>(p)), C.A2 % p, C.A4 % p, C.A6 % p};
    std::pair<mpz_class, mpz_class> Q{x, sqrt_mod(v, p)};
    // m*Q by repeated addition, tracking infinity.
    std::optional<std::pair<mpz_class, mpz_class>> acc;
    for (i64 k = 0; k < cofactor; ++k) {
      if (!acc) {
        acc = Q;
      } else if (Cp.red(acc->first) == Cp.red(Q.first)) {
        if (Cp.red(acc->second + Q.second) == 0) {
          acc.reset();
        } else {
          acc = Cp.add(*acc, Q, true);
        }
      } else {
        acc = Cp.add(*acc, Q, false);
      }
    }
    if (acc) base = acc;
  }
  if (!base) throw Error(ErrorCode::kInternal, "no point of order p found in E(F_p)");

  // Hensel-lift the y-coordinate (y is a unit since the point has odd order).
  mpz_class x0 = base->first, y = base->second;
  for (int it = 0; it < K + 1; ++it) y = C.red(y - (y * y - C.rhs(x0)) * C.inv(2 * y));
  const std::pair<mpz_class, mpz_class> P{x0, y};

  // The reduction lifts to a torsion point iff [p]P lies in E2, i.e.
  // v(x([p-1]P) - x(P)) >= 2 (formal parameter of [p]P has the same valuation).
  std::pair<mpz_class, mpz_class> A = P;
  for (i64 k = 1; k < p - 1; ++k) A = C.add(A, P, k == 1);
  const mpz_class diff = C.red(A.first - P.first);
  const int v = diff == 0 ? K : valuation(diff, p);
  return {v >= 2 ? 1 : 0, false};
}

std::optional<std::pair<mpz_class, mpz_class>> rational_p_torsion_x(const WeierstrassModel& model, i64 p) {
  auto roots = rational_roots(division_polynomial(model, static_cast<int>(p)));
  if (roots.empty()) return std::nullopt;
  return roots.front();
}

Surjectivity mod_p_surjectivity_heuristic(const WeierstrassModel& model, i64 p, i64 sample_bound) {
  if (rational_p_torsion_x(model, p)) return Surjectivity::NotSurjective;
  if (p < 5) return Surjectivity::Inconclusive;
  bool split_seen = false, nonsplit_seen = false, exceptional_ruled_out = false;
  for (i64 l : primes_up_to(sample_bound)) {
    if (l == p || mpz_divisible_ui_p(model.discriminant().get_mpz_t(), static_cast<unsigned long>(l))) continue;
    const i64 tr = mod(frobenius_trace(model, l), p);
    const i64 det = mod(l, p);
    const i64 disc = mod(tr * tr - 4 * det, p);
    if (tr != 0 && disc != 0) {
      if (legendre(disc, p) == 1) split_seen = true;
      if (legendre(disc, p) == -1) nonsplit_seen = true;
    }
    const i64 u = mulmod(tr * tr % p, invmod(det, p), p);
    if (u != 0 && u != 1 && u != 2 && u != 4 % p && mod(u * u - 3 * u + 1, p) != 0) exceptional_ruled_out = true;
    if (split_seen && nonsplit_seen && exceptional_ruled_out) return Surjectivity::Surjective;
  }
  return Surjectivity::Inconclusive;
}

bool cm_suspect(const WeierstrassModel& minimal, i64 bound) {
  int zeros = 0, total = 0;
  for (i64 l : primes_up_to(bound)) {
    if (l < 5 || mpz_divisible_ui_p(minimal.discriminant().get_mpz_t(), static_cast<unsigned long>(l))) continue;
    ++total;
    if (frobenius_trace(minimal, l) == 0) ++zeros;
  }
  return total > 0 && 4 * zeros >= total;
}

const LocalData* CurveArithmetic::local_at(i64 l) const {
  auto it = std::find_if(local.begin(), local.end(), [l](const LocalData& d) { return d.prime == l; });
  return it == local.end() ? nullptr : &*it;
}

ReductionAtP reduction_type_at_p(const CurveArithmetic& curve, i64 p) {
  if (const LocalData* ld = curve.local_at(p)) {
    return ld->reduction == Reduction::Additive ? ReductionAtP::Additive : ReductionAtP::Multiplicative;
  }
  return frobenius_trace(curve.minimal, p) % p == 0 ? ReductionAtP::GoodSupersingular : ReductionAtP::GoodOrdinary;
}

CurveArithmetic analyze_curve(const WeierstrassModel& model, i64 p, const CurveOptions& opts) {
  if (p < 3 || !is_prime(static_cast<u64>(p))) throw Error(ErrorCode::kMalformedInput, "p must be an odd prime");
  CurveArithmetic out{minimal_model(model), 1, {}, 1, 0, ReductionAtP::GoodOrdinary, std::nullopt, std::nullopt, {}};
  out.p = p;
  for (const auto& [q, e] : factor(out.minimal.discriminant())) {
    (void)e;
    LocalData ld = tate_local_data(out.minimal, q.get_si());
    out.conductor *= ipow(ld.prime, static_cast<unsigned>(ld.conductor_exponent));
    out.tamagawa_product *= ld.tamagawa;
    out.local.push_back(ld);
  }
  out.reduction_at_p = reduction_type_at_p(out, p);
  if (!out.local_at(p)) out.local_torsion = local_p_torsion_order(out.minimal, p, opts.torsion_depth);
  out.flags.sur = mod_p_surjectivity_heuristic(out.minimal, p, opts.surjectivity_bound);
  out.flags.manin_ok = out.conductor % (p * p) != 0 ? ManinFlag::Yes : ManinFlag::Inconclusive;
  out.flags.cm_suspect = cm_suspect(out.minimal);
  return out;
}

}  // namespace kurisym

#include "kurisym/heegner.hpp"

#include "kurisym/kurihara.hpp"
#include "kurisym/pointcount.hpp"

namespace kurisym {

namespace {

bool squarefree(i64 n) {
  for (auto [q, e] : factor(n))
    if (e > 1) return false;
  return true;
}

mpz_class pk(i64 p, int k) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
  return r;
}

mpz_class reduce(const mpz_class& x, const mpz_class& m) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

void require_odd_prime(i64 p) {
  if (p < 3 || !is_prime(static_cast<u64>(p))) throw Error(ErrorCode::kMalformedInput, "p must be an odd prime");
}

void require_good_ordinary(const CurveArithmetic& curve, i64 p) {
  const ReductionAtP r = reduction_type_at_p(curve, p);
  if (r != ReductionAtP::GoodOrdinary)
    throw Error(ErrorCode::kUnsupported, "p = " + std::to_string(p) + " is not good ordinary (" + to_string(r) + ")");
}

}  // namespace

bool is_fundamental_discriminant(i64 D) {
  if (D <= 0) return false;
  if (D % 4 == 3) return squarefree(D);
  if (D % 4 != 0) return false;
  const i64 m = D / 4;
  return (m % 4 == 1 || m % 4 == 2) && squarefree(m);
}

HeegnerSetup check_heegner_hypotheses(const CurveArithmetic& curve, i64 D_K, i64 p) {
  if (!is_fundamental_discriminant(D_K))
    throw Error(ErrorCode::kMalformedInput, "-" + std::to_string(D_K) + " is not a fundamental discriminant");
  require_odd_prime(p);
  HeegnerSetup s;
  s.D_K = D_K;
  s.p = p;
  s.flags.heeg_ok = true;
  for (const auto& ld : curve.local)
    if (kronecker(-D_K, ld.prime) != 1) s.flags.heeg_ok = false;
  s.flags.disc_ok = D_K % 2 == 1 && D_K != 3;
  const int chi_p = kronecker(-D_K, p);
  s.flags.p_unramified = chi_p != 0;
  s.flags.p_split_in_K = chi_p == 1;
  s.flags.good_ordinary = reduction_type_at_p(curve, p) == ReductionAtP::GoodOrdinary;

  if (!s.flags.heeg_ok) s.caveats.push_back("some prime dividing N does not split in K");
  if (!s.flags.disc_ok) s.caveats.push_back("D_K is even or equal to 3");
  if (!s.flags.p_unramified) s.caveats.push_back("p ramifies in K");
  if (!s.flags.good_ordinary) s.caveats.push_back("p is not a good ordinary prime");
  return s;
}

std::vector<HeegnerPrime> enumerate_heegner_primes(const CurveArithmetic& curve, i64 D_K, i64 p, i64 lmax, int m) {
  if (!is_fundamental_discriminant(D_K))
    throw Error(ErrorCode::kMalformedInput, "-" + std::to_string(D_K) + " is not a fundamental discriminant");
  require_odd_prime(p);
  if (m < 1) throw Error(ErrorCode::kMalformedInput, "m must be positive");
  std::vector<HeegnerPrime> out;
  for (i64 l : primes_up_to(lmax)) {
    if (curve.conductor % l == 0 || l == p) continue;
    if ((l + 1) % p != 0) continue;
    if (kronecker(-D_K, l) != -1) continue;
    const i64 a = hecke_eigenvalue(curve.minimal, l);
    if (a % p != 0) continue;
    const int e = a == 0 ? valuation(l + 1, p) : std::min(valuation(l + 1, p), valuation(a, p));
    if (e < m) continue;
    out.push_back({l, a, e});
  }
  return out;
}

UnitRoot unit_root(i64 a_p, i64 p, int k) {
  require_odd_prime(p);
  if (k < 1) throw Error(ErrorCode::kMalformedInput, "precision must be positive");
  if (a_p % p == 0) throw Error(ErrorCode::kUnsupported, "p divides a_p: no unit root (supersingular)");
  const mpz_class a = static_cast<long>(a_p), P = static_cast<long>(p);
  // Newton iteration doubles the precision each step; f'(alpha) = 2 alpha - a_p is a unit.
  mpz_class alpha = static_cast<long>(mod(a_p, p));
  int prec = 1;
  while (prec < k) {
    prec = std::min(2 * prec, k);
    const mpz_class M = pk(p, prec);
    const mpz_class f = reduce(alpha * alpha - a * alpha + P, M);
    mpz_class df = reduce(2 * alpha - a, M), inv;
    mpz_invert(inv.get_mpz_t(), df.get_mpz_t(), M.get_mpz_t());
    alpha = reduce(alpha - f * inv, M);
  }
  const mpz_class M = pk(p, k);
  UnitRoot u;
  u.p = p;
  u.a_p = a_p;
  u.k = k;
  u.alpha = reduce(alpha, M);
  u.beta = reduce(a - u.alpha, M);
  return u;
}

Stabilization stabilization_detail(const CurveArithmetic& curve, i64 p, bool split_in_K) {
  require_odd_prime(p);
  require_good_ordinary(curve, p);
  const i64 a_p = frobenius_trace(curve.minimal, p);
  Stabilization s;
  for (int k = 4;; k *= 2) {
    const UnitRoot u = unit_root(a_p, p, k);
    const mpz_class M = pk(p, k);
    mpz_class v;
    if (split_in_K) {
      const mpz_class x = (u.alpha - 1) * (u.beta - 1);
      v = reduce(x * x, M);
    } else {
      v = reduce((u.alpha * u.alpha - 1) * (u.beta * u.beta - 1), M);
    }
    if (v != 0) {
      s.from_unit_root = valuation(v, p);
      s.precision = k;
      break;
    }
  }
  if (split_in_K) {
    s.point_count = static_cast<long>(count_points(curve.minimal, p));
    s.from_point_count = 2 * valuation(s.point_count, p);
  } else {
    s.point_count = static_cast<long>(count_points_quadratic(curve.minimal, p));
    s.from_point_count = valuation(s.point_count, p);
  }
  return s;
}

int stabilization_valuation(const CurveArithmetic& curve, i64 p, bool split_in_K) {
  const Stabilization s = stabilization_detail(curve, p, split_in_K);
  if (s.from_unit_root != s.from_point_count)
    throw Error(ErrorCode::kInternal, "stabilization valuation: unit-root and point-count routes disagree");
  return s.from_unit_root;
}

LambdaPrediction lambda_index_prediction(const CurveArithmetic& curve, i64 p, bool split_in_K) {
  LambdaPrediction out;
  out.M_inf_heeg = valuation(curve.tamagawa_product, p);
  out.M_inf_lambda = out.M_inf_heeg + stabilization_valuation(curve, p, split_in_K);
  out.caveats = hypothesis_caveats(curve, p);
  out.caveats.push_back("predictions only: Heegner classes are not computed");
  return out;
}

HeegnerReport heegner_report(const CurveArithmetic& curve, i64 D_K, i64 p, i64 lmax, int precision) {
  if (D_K == 3 || D_K == 4) throw Error(ErrorCode::kUnsupported, "D_K = 3 or 4 has extra units; not supported");
  HeegnerReport r;
  r.setup = check_heegner_hypotheses(curve, D_K, p);
  require_good_ordinary(curve, p);
  if (!r.setup.flags.p_unramified) throw Error(ErrorCode::kUnsupported, "p ramifies in K");
  r.primes = enumerate_heegner_primes(curve, D_K, p, lmax);
  r.alpha = unit_root(frobenius_trace(curve.minimal, p), p, precision);
  r.prediction = lambda_index_prediction(curve, p, r.setup.flags.p_split_in_K);
  r.prediction.caveats.insert(r.prediction.caveats.begin(), r.setup.caveats.begin(), r.setup.caveats.end());
  return r;
}

}  // namespace kurisym

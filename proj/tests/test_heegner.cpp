#include "doctest.h"

#include <cmath>
#include <random>
#include <set>

#include "kurisym/heegner.hpp"
#include "kurisym/pointcount.hpp"
#include "oracles.hpp"

using namespace kurisym;

namespace {

CurveArithmetic curve_of(const std::string& label, i64 p) {
  const auto& f = oracle::fixture(label);
  return analyze_curve(WeierstrassModel::from_ints(f.a[0], f.a[1], f.a[2], f.a[3], f.a[4]), p);
}

mpz_class pow_z(i64 p, int k) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
  return r;
}

bool divides(const mpz_class& m, const mpz_class& x) { return mpz_divisible_p(x.get_mpz_t(), m.get_mpz_t()) != 0; }

}  // namespace

TEST_CASE("fundamental discriminants") {
  for (i64 D : {3, 4, 7, 8, 11, 15, 19, 20, 23, 24, 40, 43, 67, 163}) CHECK(is_fundamental_discriminant(D));
  for (i64 D : {1, 2, 12, 16, 27, 28, 36, 44, 45, 0, -7}) CHECK_FALSE(is_fundamental_discriminant(D));
}

TEST_CASE("Kronecker inertness agrees with factorization in the ring of integers") {
  std::mt19937_64 rng(7);
  std::vector<i64> discs;
  for (i64 D = 3; D < 400; ++D)
    if (is_fundamental_discriminant(D)) discs.push_back(D);
  const auto ls = primes_up_to(2000);
  for (int it = 0; it < 100; ++it) {
    const i64 D = discs[rng() % discs.size()];
    const i64 l = ls[rng() % ls.size()];
    CAPTURE(D);
    CAPTURE(l);
    CHECK(kronecker(-D, l) == oracle::dedekind_splitting(l, D));
  }
}

TEST_CASE("hypothesis flags") {
  const CurveArithmetic E = curve_of("11a1", 7);
  const HeegnerSetup s = check_heegner_hypotheses(E, 7, 7);
  // (-7)^5 = 4^5 = 1024 = 1 mod 11, so 11 splits in Q(sqrt(-7))
  CHECK(powmod(mod(-7, 11), 5, 11) == 1);
  CHECK(s.flags.heeg_ok);
  CHECK(s.flags.disc_ok);
  CHECK_FALSE(s.flags.p_unramified);
  CHECK(s.flags.good_ordinary);
  CHECK_FALSE(s.caveats.empty());

  CHECK_FALSE(check_heegner_hypotheses(E, 3, 5).flags.disc_ok);
  CHECK_FALSE(check_heegner_hypotheses(E, 8, 5).flags.disc_ok);
  // (-3 | 11) = -1: 11 is inert in Q(sqrt(-3))
  CHECK_FALSE(check_heegner_hypotheses(E, 3, 5).flags.heeg_ok);

  const HeegnerSetup t = check_heegner_hypotheses(E, 7, 5);
  CHECK(t.flags.p_unramified);
  CHECK(t.flags.p_split_in_K == (oracle::dedekind_splitting(5, 7) == 1));

  CHECK_THROWS_AS(check_heegner_hypotheses(E, 12, 5), Error);
  CHECK_THROWS_AS(check_heegner_hypotheses(E, 7, 2), Error);
}

TEST_CASE("Heegner primes") {
  const auto& f = oracle::fixture("37a1");
  const CurveArithmetic E = curve_of("37a1", 3);
  const i64 D = 7;
  const auto hp = enumerate_heegner_primes(E, D, 3, 500);
  CHECK_FALSE(hp.empty());
  std::set<i64> got;
  for (const auto& h : hp) {
    CAPTURE(h.l);
    got.insert(h.l);
    CHECK(oracle::dedekind_splitting(h.l, D) == -1);
    CHECK((h.l + 1) % 3 == 0);
    CHECK(h.a_l == h.l + 1 - oracle::brute_count(f.a, h.l));
    CHECK(h.a_l % 3 == 0);
    const int va = h.a_l == 0 ? 1000 : valuation(h.a_l, 3);
    CHECK(h.e == std::min(valuation(h.l + 1, 3), va));
    CHECK(D % h.l != 0);
  }
  // exhaustive scan with the oracles
  for (i64 l = 2; l <= 500; ++l) {
    if (!oracle::naive_is_prime(l) || l == 3 || l == 37) continue;
    const bool member = oracle::dedekind_splitting(l, D) == -1 && (l + 1) % 3 == 0 && (oracle::brute_count(f.a, l) - l - 1) % 3 == 0;
    CHECK(member == (got.count(l) == 1));
  }
  for (const auto& h : enumerate_heegner_primes(E, D, 3, 500, 2)) CHECK(got.count(h.l) == 1);
  // ramified primes never appear
  for (const auto& h : enumerate_heegner_primes(curve_of("11a1", 5), 15, 5, 1000)) CHECK(15 % h.l != 0);
}

TEST_CASE("unit roots") {
  const UnitRoot u = unit_root(3, 5, 2);
  CHECK(u.alpha == 18);
  CHECK(u.beta == mpz_class(3 - 18 + 25));

  std::mt19937_64 rng(99);
  const auto ps = primes_up_to(200);
  for (int it = 0; it < 50; ++it) {
    const i64 p = ps[1 + rng() % (ps.size() - 1)];
    const i64 bound = static_cast<i64>(2 * std::sqrt(static_cast<double>(p)));
    i64 a = std::uniform_int_distribution<i64>(-bound, bound)(rng);
    if (a % p == 0) a += 1;
    const int k = 1 + static_cast<int>(rng() % 15);
    const UnitRoot r = unit_root(a, p, k);
    const mpz_class M = pow_z(p, k);
    CHECK(divides(M, r.alpha * r.beta - p));
    CHECK(divides(M, r.alpha + r.beta - a));
    CHECK(valuation(r.alpha, p) == 0);
  }

  const i64 a5 = frobenius_trace(curve_of("37a1", 5).minimal, 5);
  const UnitRoot r = unit_root(a5, 5, 10);
  CHECK(divides(pow_z(5, 10), r.alpha * r.alpha - a5 * r.alpha + 5));

  // extending the precision never changes lower digits
  for (i64 a : {1, -2, 3, 4}) {
    for (i64 p : {5, 7, 11}) {
      if (a % p == 0) continue;
      const UnitRoot top = unit_root(a, p, 20);
      for (int k = 1; k < 20; ++k) {
        const mpz_class M = pow_z(p, k);
        CHECK(mpz_class(top.alpha % M) == unit_root(a, p, k).alpha);
        CHECK(mpz_class(unit_root(a, p, k + 1).alpha % M) == unit_root(a, p, k).alpha);
      }
    }
  }
  CHECK_THROWS_AS(unit_root(0, 5, 3), Error);
  CHECK_THROWS_AS(unit_root(5, 5, 3), Error);
}

TEST_CASE("point counts over the quadratic extension") {
  for (const auto& f : oracle::fixtures()) {
    const WeierstrassModel E = WeierstrassModel::from_ints(f.a[0], f.a[1], f.a[2], f.a[3], f.a[4]);
    for (i64 p : {3, 5, 7, 11, 13}) {
      if (f.conductor % p == 0) continue;
      CAPTURE(f.label);
      CAPTURE(p);
      const i64 a = p + 1 - oracle::brute_count(f.a, p);
      const i64 n2 = oracle::brute_count_quadratic(f.a, p);
      CHECK(count_points_quadratic(E, p) == n2);
      CHECK((p + 1) * (p + 1) - a * a == n2);
    }
  }
}

TEST_CASE("stabilization valuation") {
  const CurveArithmetic E7 = curve_of("11a1", 7);
  // #E(F_7) = 10 and #E(F_49) = 8^2 - 4 = 60: no 7 in either
  CHECK(oracle::brute_count({0, -1, 1, -10, -20}, 7) == 10);
  CHECK(oracle::brute_count_quadratic({0, -1, 1, -10, -20}, 7) == 60);
  for (bool split : {true, false}) {
    const Stabilization s = stabilization_detail(E7, 7, split);
    CHECK(s.from_unit_root == s.from_point_count);
    CHECK(s.from_unit_root == 0);
  }
  // 11a1 has a rational 5-torsion point: 5 | #E(F_5) = 5 and #E(F_25) = 35
  const CurveArithmetic E5 = curve_of("11a1", 5);
  CHECK(stabilization_valuation(E5, 5, true) == 2);
  CHECK(stabilization_valuation(E5, 5, false) == 1);
  CHECK(stabilization_detail(E5, 5, false).point_count == 35);

  // every good ordinary (E, p) among the fixtures: both routes agree with the oracle counts
  for (const auto& f : oracle::fixtures()) {
    for (i64 p : {3, 5, 7, 11, 13, 17}) {
      if (f.conductor % p == 0) continue;
      const i64 a = p + 1 - oracle::brute_count(f.a, p);
      if (a % p == 0) continue;
      CAPTURE(f.label);
      CAPTURE(p);
      const CurveArithmetic E = curve_of(f.label, p);
      CHECK(stabilization_valuation(E, p, true) == 2 * valuation(p + 1 - a, p));
      CHECK(stabilization_valuation(E, p, false) == valuation(oracle::brute_count_quadratic(f.a, p), p));
    }
  }
  CHECK_THROWS_AS(stabilization_valuation(curve_of("11a1", 11), 11, true), Error);
}

TEST_CASE("lambda index prediction") {
  const LambdaPrediction a = lambda_index_prediction(curve_of("11a1", 7), 7, true);
  CHECK(a.M_inf_heeg == 0);
  CHECK(a.M_inf_lambda == 0);
  // c_11 = 5
  const LambdaPrediction b = lambda_index_prediction(curve_of("11a1", 5), 5, true);
  CHECK(b.M_inf_heeg == 1);
  CHECK(b.M_inf_lambda - b.M_inf_heeg == stabilization_valuation(curve_of("11a1", 5), 5, true));
  CHECK_FALSE(b.caveats.empty());
}

TEST_CASE("Heegner report") {
  const CurveArithmetic E = curve_of("11a1", 5);
  CHECK_THROWS_AS(heegner_report(E, 3, 5, 100), Error);
  CHECK_THROWS_AS(heegner_report(E, 4, 5, 100), Error);
  CHECK_THROWS_AS(heegner_report(E, 15, 5, 100), Error);  // 5 ramifies
  const HeegnerReport r = heegner_report(E, 7, 5, 1000);
  CHECK(r.setup.flags.heeg_ok);
  CHECK(r.alpha.k == 20);
  CHECK(r.prediction.M_inf_heeg == 1);
  for (const auto& h : r.primes) CHECK(oracle::dedekind_splitting(h.l, 7) == -1);
}

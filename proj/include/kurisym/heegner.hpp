#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>

#include "kurisym/curves.hpp"

namespace kurisym {

/// True when -D is a fundamental discriminant of an imaginary quadratic field.
bool is_fundamental_discriminant(i64 D);

struct HeegnerFlags {
  bool heeg_ok = false;       // every l | N splits in K
  bool disc_ok = false;       // D_K odd and D_K != 3
  bool p_unramified = false;
  bool good_ordinary = false;
  bool p_split_in_K = false;
};

struct HeegnerSetup {
  i64 D_K = 0;  // K = Q(sqrt(-D_K))
  i64 p = 0;
  HeegnerFlags flags;
  std::vector<std::string> caveats;
};

/// Throws kMalformedInput unless -D_K is fundamental and p an odd prime.
HeegnerSetup check_heegner_hypotheses(const CurveArithmetic& curve, i64 D_K, i64 p);

/// l inert in K, l not dividing Np, p | l + 1, p | a_l.
struct HeegnerPrime {
  i64 l = 0;
  i64 a_l = 0;
  int e = 0;  // min(v_p(l + 1), v_p(a_l)), with v_p(0) = infinity
};

std::vector<HeegnerPrime> enumerate_heegner_primes(const CurveArithmetic& curve, i64 D_K, i64 p, i64 lmax,
                                                   int m = 1);

/// p-adic unit root alpha of x^2 - a_p x + p modulo p^k and beta = a_p - alpha.
struct UnitRoot {
  i64 p = 0;
  i64 a_p = 0;
  int k = 0;
  mpz_class alpha;
  mpz_class beta;
};

/// Throws kUnsupported when p | a_p.
UnitRoot unit_root(i64 a_p, i64 p, int k);

/// Both computations of the stabilization valuation: split uses (alpha - 1)^2 (beta - 1)^2
/// against #E(F_p)^2, inert uses (alpha^2 - 1)(beta^2 - 1) against #E(F_{p^2}).
struct Stabilization {
  int from_unit_root = 0;
  int from_point_count = 0;
  mpz_class point_count;  // #E(F_p) or #E(F_{p^2})
  int precision = 0;      // k used for the unit roots
};

Stabilization stabilization_detail(const CurveArithmetic& curve, i64 p, bool split_in_K);

/// Throws kUnsupported unless p is good ordinary; kInternal if the two routes disagree.
int stabilization_valuation(const CurveArithmetic& curve, i64 p, bool split_in_K);

struct LambdaPrediction {
  int M_inf_heeg = 0;    // ord_p(Tam_E)
  int M_inf_lambda = 0;  // ord_p(Tam_E) + sum over v | p of ord_p(#E(F_v))
  std::vector<std::string> caveats;
};

LambdaPrediction lambda_index_prediction(const CurveArithmetic& curve, i64 p, bool split_in_K);

struct HeegnerReport {
  HeegnerSetup setup;
  std::vector<HeegnerPrime> primes;
  UnitRoot alpha;
  LambdaPrediction prediction;
};

/// Full Heegner-side run. D_K in {3, 4} is refused (kUnsupported): the unit index is assumed 1.
HeegnerReport heegner_report(const CurveArithmetic& curve, i64 D_K, i64 p, i64 lmax, int precision = 20);

}  // namespace kurisym

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "kurisym/curves.hpp"
#include "kurisym/modsym.hpp"

namespace kurisym {

/// A floating-point value with an explicit error bound.
struct Approx {
  double value = 0;
  double error = 0;
};

/// Omega^+ = integral of the Neron differential over E(R), by AGM. The error is the
/// disagreement between double and extended precision runs.
Approx real_period(const WeierstrassModel& minimal);

/// a_1..a_terms (index 0 unused), multiplicative from a_l of every prime.
std::vector<i64> dirichlet_coefficients(const WeierstrassModel& minimal, i64 terms);

/// Smallest number of terms whose series tail is below target at conductor N.
i64 terms_for_precision(i64 N, double target);

struct LValue {
  double value = 0;
  double error = 0;     // tail bound plus rounding
  int epsilon = 0;      // sign fitted to the functional equation
  double fe_residual = 0;
  i64 terms = 0;
};

/// L(E, 1) = S(t) + eps S(1/t), S(t) = sum a_n/n exp(-2 pi n t / sqrt(N)), with eps chosen by
/// comparing t = 1 and t = 6/5. Throws kUnsupported when the error exceeds target (if target > 0).
LValue l_value_approx(const CurveArithmetic& curve, i64 terms, double target = 0);

struct AnalyticData {
  Approx omega_plus;
  LValue l_value;
};

AnalyticData analytic_data(const CurveArithmetic& curve, double target = 1e-14);

/// Best rational p/q with q <= max_den within rel_tol of x, by continued fractions.
std::optional<mpq_class> recognize_rational(double x, i64 max_den, double rel_tol);

struct DeltaOneCheck {
  bool skipped = false;
  std::string note;
  mpq_class exact;       // [0/1] of the symbol
  double numeric = 0;    // L(E,1) / Omega^+
  std::optional<mpq_class> ratio;  // exact / numeric, recognized
  double rel_error = 0;  // |exact - ratio * numeric| / |exact|
  bool ok = false;       // ratio found and a p-adic unit
};

/// Compares the symbol at 0 with L(E,1)/Omega^+ for p = curve.p. Rank-positive curves
/// (numeric L-value below 1e-8) are skipped.
DeltaOneCheck delta_one_crosscheck(const EigenSymbol& sym, const CurveArithmetic& curve, double tol = 1e-6);

}  // namespace kurisym

#pragma once

#include "kurisym/curves.hpp"

namespace kurisym {

/// Naive crossover: below this bound #E(F_l) is counted by enumerating x.
inline constexpr i64 kNaiveCountBound = i64{1} << 14;

/// Coefficients of a Weierstrass model reduced mod l.
struct ReducedCurve {
  i64 l;
  i64 a1, a2, a3, a4, a6;

  ReducedCurve(const WeierstrassModel& model, i64 l);
  /// b-polynomial value 4x^3 + b2 x^2 + 2 b4 x + b6 mod l.
  i64 b_poly(i64 x) const;
};

/// #E(F_l) including the point at infinity, by enumeration. Valid for any good l.
i64 count_points_naive(const WeierstrassModel& model, i64 l);

/// #E(F_l) by baby-step giant-step order finding on E and its quadratic twist; l > 3.
i64 count_points_bsgs(const WeierstrassModel& model, i64 l);

/// Dispatch on kNaiveCountBound.
i64 count_points(const WeierstrassModel& model, i64 l);

/// #E(F_{l^2}) by enumerating x in F_{l^2}; odd good l.
i64 count_points_quadratic(const WeierstrassModel& model, i64 l);

}  // namespace kurisym

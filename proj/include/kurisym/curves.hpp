#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "kurisym/arith.hpp"

namespace kurisym {

struct Invariants {
  mpz_class b2, b4, b6, b8, c4, c6, disc;
};

/// Long Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Z.
class WeierstrassModel {
 public:
  /// Throws kSingularCurve when the discriminant vanishes.
  WeierstrassModel(mpz_class a1, mpz_class a2, mpz_class a3, mpz_class a4, mpz_class a6);
  static WeierstrassModel from_ints(i64 a1, i64 a2, i64 a3, i64 a4, i64 a6);

  const mpz_class& a1() const { return a_[0]; }
  const mpz_class& a2() const { return a_[1]; }
  const mpz_class& a3() const { return a_[2]; }
  const mpz_class& a4() const { return a_[3]; }
  const mpz_class& a6() const { return a_[4]; }
  const std::array<mpz_class, 5>& coefficients() const { return a_; }
  const Invariants& invariants() const { return inv_; }
  const mpz_class& discriminant() const { return inv_.disc; }

  /// x = u^2 x' + r, y = u^3 y' + s u^2 x' + t. Requires the result to be integral.
  WeierstrassModel change_coordinates(const mpz_class& u, const mpz_class& r, const mpz_class& s,
                                      const mpz_class& t) const;

  /// j-invariant as a reduced fraction (numerator, denominator).
  std::pair<mpz_class, mpz_class> j_invariant() const;

  /// Canonical text form "a1,a2,a3,a4,a6".
  std::string to_string() const;

  friend bool operator==(const WeierstrassModel& x, const WeierstrassModel& y) { return x.a_ == y.a_; }

 private:
  std::array<mpz_class, 5> a_;
  Invariants inv_;
};

/// Parses "a1,a2,a3,a4,a6" (decimal, optional sign, surrounding blanks allowed).
WeierstrassModel parse_weierstrass(std::string_view text);

enum class Kodaira { I0, In, II, III, IV, I0Star, InStar, IVStar, IIIStar, IIStar };
enum class Reduction { Good, SplitMultiplicative, NonsplitMultiplicative, Additive };
enum class ReductionAtP { GoodOrdinary, GoodSupersingular, Multiplicative, Additive };
enum class Surjectivity { Surjective, NotSurjective, Inconclusive };
enum class ManinFlag { Yes, Inconclusive };

std::string to_string(Kodaira k, int index);
std::string to_string(Reduction r);
std::string to_string(ReductionAtP r);
std::string to_string(Surjectivity s);
std::string to_string(ManinFlag m);

struct LocalData {
  i64 prime = 0;
  int conductor_exponent = 0;
  Kodaira kodaira = Kodaira::I0;
  int kodaira_index = 0;  // n for I_n and I_n^*
  i64 tamagawa = 1;
  Reduction reduction = Reduction::Good;
  int disc_valuation = 0;  // v_l of the minimal discriminant

  std::string kodaira_symbol() const { return to_string(kodaira, kodaira_index); }
};

/// Globally minimal model in reduced form (a1, a3 in {0,1}, a2 in {-1,0,1}).
WeierstrassModel minimal_model(const WeierstrassModel& model);

/// Tate's algorithm at l. The model must be minimal at l; a non-minimal
/// model is rescaled internally and the local data of the minimal model returned.
LocalData tate_local_data(const WeierstrassModel& model, i64 l);

/// a_l = l + 1 - #E(F_l). Throws kUnsupported when l divides the model's discriminant.
i64 frobenius_trace(const WeierstrassModel& model, i64 l);

/// #E_ns(F_l) for any prime l, computed from the reduction type.
i64 nonsingular_count(const WeierstrassModel& minimal, i64 l);

/// a_l for every prime including bad ones (+1 split, -1 nonsplit, 0 additive).
i64 hecke_eigenvalue(const WeierstrassModel& minimal, i64 l);

struct LocalTorsion {
  int t = 0;
  bool lower_bound_only = false;
};

/// t with p^t = #E(Q_p)[p^infty], probing p^j-torsion for j <= depth.
LocalTorsion local_p_torsion_order(const WeierstrassModel& minimal, i64 p, int depth);

Surjectivity mod_p_surjectivity_heuristic(const WeierstrassModel& model, i64 p, i64 sample_bound);

/// Rational x-coordinate of a nontrivial p-torsion point, if one exists.
std::optional<std::pair<mpz_class, mpz_class>> rational_p_torsion_x(const WeierstrassModel& model, i64 p);

/// True when a_l vanishes for an unusually large share of good l <= bound.
bool cm_suspect(const WeierstrassModel& minimal, i64 bound = 1000);

struct HypothesisFlags {
  Surjectivity sur = Surjectivity::Inconclusive;
  ManinFlag manin_ok = ManinFlag::Inconclusive;
  bool cm_suspect = false;
};

struct CurveArithmetic {
  WeierstrassModel minimal;
  i64 conductor = 1;
  std::vector<LocalData> local;  // ascending l | N
  i64 tamagawa_product = 1;
  i64 p = 0;
  ReductionAtP reduction_at_p = ReductionAtP::GoodOrdinary;
  std::optional<LocalTorsion> local_torsion;  // only for good reduction at p
  std::optional<int> epsilon;                 // root number, filled from modular symbols
  HypothesisFlags flags;

  const LocalData* local_at(i64 l) const;
};

struct CurveOptions {
  int torsion_depth = 4;
  i64 surjectivity_bound = 10000;
};

CurveArithmetic analyze_curve(const WeierstrassModel& model, i64 p, const CurveOptions& opts = {});

ReductionAtP reduction_type_at_p(const CurveArithmetic& curve, i64 p);

}  // namespace kurisym

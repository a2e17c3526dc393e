#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "kurisym/curves.hpp"
#include "kurisym/modsym.hpp"

namespace kurisym {

/// l = 1 mod p, l not dividing Np, a_l = l + 1 mod p.
struct KolyvaginPrime {
  i64 l = 0;
  i64 a_l = 0;
  int e = 0;    // min(v_p(l - 1), v_p(a_l - l - 1))
  i64 eta = 0;  // primitive root used for the discrete log
};

std::vector<KolyvaginPrime> enumerate_kolyvagin_primes(const CurveArithmetic& curve, i64 p, int m, i64 lmax);

/// Image in Z/p^e of log_eta(a) in Z/(l - 1), by Pohlig-Hellman on the p-Sylow subgroup.
i64 discrete_log_p_part(i64 l, i64 eta, i64 a, i64 p, int e);

/// p-part discrete logs mod p^v (v = v_p(l - 1)) of every residue 1..l-1.
class LogTable {
 public:
  LogTable(const KolyvaginPrime& kp, i64 p);
  i64 prime() const { return l_; }
  int v() const { return v_; }
  i64 operator[](i64 x) const { return table_[static_cast<std::size_t>(x)]; }

 private:
  i64 l_;
  int v_;
  std::vector<std::uint32_t> table_;
};

/// How log digits are lifted to integers before summation.
enum class LiftPolicy {
  Canonical,  // least nonnegative residue mod p^{e_n}
  Shifted,    // residue plus a varying multiple of l - 1
};

struct DeltaResult {
  i64 n = 1;
  std::vector<KolyvaginPrime> factors;
  std::optional<int> e_n;  // absent for n = 1, where delta_1 is the exact value [0/1]
  mpz_class residue;       // in [0, p^{e_n}); for n = 1 the numerator of delta_1
  mpq_class exact;         // delta_1 itself when n = 1
  std::optional<int> M;    // absent when the residue vanishes

  int nu() const { return static_cast<int>(factors.size()); }
};

/// delta_n = sum over a mod n, (a, n) = 1, of [a/n] prod_l log_l(a), reduced mod p^{e_n}.
DeltaResult delta(const EigenSymbol& sym, const std::vector<KolyvaginPrime>& factors, i64 p,
                  LiftPolicy lift = LiftPolicy::Canonical);

/// Same, with precomputed log tables (one per factor, in order).
DeltaResult delta(const EigenSymbol& sym, const std::vector<KolyvaginPrime>& factors,
                  const std::vector<const LogTable*>& tables, i64 p, LiftPolicy lift = LiftPolicy::Canonical);

enum class Verdict { ConsistentWitness, CounterexampleSignal, Inconclusive };
std::string to_string(Verdict v);

struct SweepBounds {
  i64 lmax = 1000;
  int rmax = 2;
  int m = 1;
  bool diagnostic_parity = false;
  unsigned threads = 1;
  double work_budget = 2e10;  // cap on the number of [a/n] evaluations
};

struct SearchReport {
  SweepBounds bounds;
  i64 p = 0;
  int epsilon = 1;
  int ord_p_tam = 0;
  std::vector<KolyvaginPrime> primes;
  std::vector<DeltaResult> deltas;       // parity-correct n, by nu then lexicographic factors
  std::vector<DeltaResult> wrong_parity; // diagnostic mode only
  std::map<int, std::optional<int>> M_r; // r of the correct parity -> min M(n), absent = all vanish
  std::optional<int> rho;
  std::optional<int> M_inf_upper;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::string> caveats;
  double work = 0;

  int wrong_parity_nonvanishing() const;
};

/// Estimated work (sum of phi(n)) for the given prime list and bounds.
double sweep_work(const std::vector<KolyvaginPrime>& primes, const SweepBounds& bounds, int epsilon);

/// Throws kBudgetExceeded before doing any work if the estimate exceeds the budget.
SearchReport sweep(const EigenSymbol& sym, const CurveArithmetic& curve, i64 p, const SweepBounds& bounds);

/// M_rho - M_inf_upper when both are defined.
std::optional<int> sha_prediction(const SearchReport& report);

/// Caveats carried from the curve's hypothesis flags and p.
std::vector<std::string> hypothesis_caveats(const CurveArithmetic& curve, i64 p);

}  // namespace kurisym

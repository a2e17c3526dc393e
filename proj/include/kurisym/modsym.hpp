#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include <gmpxx.h>

#include "kurisym/arith.hpp"
#include "kurisym/curves.hpp"
#include "kurisym/linalg.hpp"

namespace kurisym {

/// Largest level accepted; evaluation keeps an N x N lookup table.
inline constexpr i64 kMaxLevel = 4000;

/// P^1(Z/N): classes of pairs (c, d) with gcd(c, d, N) = 1 modulo scaling by units.
class P1List {
 public:
  explicit P1List(i64 N);

  i64 level() const { return N_; }
  std::size_t size() const { return reps_.size(); }
  const std::pair<i64, i64>& rep(std::size_t i) const { return reps_[i]; }

  /// Class index of (c, d) (any integers), or -1 when gcd(c, d, N) > 1.
  int index(i64 c, i64 d) const { return table_[static_cast<std::size_t>(mod(c, N_) * N_ + mod(d, N_))]; }
  /// Same, for residues already in [0, N).
  int index_reduced(i64 c, i64 d) const { return table_[static_cast<std::size_t>(c * N_ + d)]; }

 private:
  i64 N_;
  std::vector<std::pair<i64, i64>> reps_;
  std::vector<int> table_;
};

/// Lift of a class (c : d) to a matrix [a b; c d] in SL2(Z).
struct Unimodular {
  i64 a, b, c, d;
};
Unimodular lift_to_sl2(i64 c, i64 d, i64 N);

/// Plus quotient of weight-2 modular symbols for Gamma_0(N) in the Manin presentation,
/// described through its dual: the space of linear functionals on the free generators
/// that vanish on all relations.
class ManinSymbolSpace {
 public:
  explicit ManinSymbolSpace(i64 N);

  i64 level() const { return N_; }
  const P1List& p1() const { return *p1_; }
  std::shared_ptr<const P1List> p1_shared() const { return p1_; }

  /// Class i equals sign(i) * free generator gen(i); gen is -1 for classes forced to zero.
  int gen(std::size_t i) const { return gen_[i]; }
  int sign(std::size_t i) const { return sign_[i]; }
  int num_generators() const { return ngens_; }

  /// Dimension of the plus quotient and of its cuspidal part.
  int dimension() const { return static_cast<int>(basis_.size()); }
  int cuspidal_dimension() const { return cuspidal_dim_; }

  /// Functionals spanning the dual, as values on free generators.
  const std::vector<QVec>& basis() const { return basis_; }
  /// Free generators whose values are the coordinates of a functional.
  const std::vector<int>& coordinate_generators() const { return coord_gens_; }

  /// Matrix of T_q on the dual: row j holds the coordinates of T_q applied to basis()[j].
  /// For q | N the same Heilbronn sum gives U_q.
  QMat hecke_matrix(i64 q) const;

  /// (T_q phi)(x_i) for every class i, where phi is given by its values on classes.
  QVec hecke_apply(const QVec& class_values, i64 q) const;

  /// Values on all classes of the functional with the given generator values.
  QVec class_values(const QVec& generator_values) const;

  /// Class representatives of the 2-term, 3-term and plus relations, for inspection.
  std::size_t s_image(std::size_t i) const;
  std::size_t t_image(std::size_t i) const;
  std::size_t eta_image(std::size_t i) const;

 private:
  // sum over Heilbronn matrices of class i * h: class index -> multiplicity.
  std::map<int, i64> heilbronn_image(std::size_t i, i64 q) const;

  i64 N_;
  std::shared_ptr<const P1List> p1_;
  std::vector<int> gen_, sign_;
  int ngens_ = 0;
  std::vector<QVec> basis_;
  std::vector<int> coord_gens_;
  int cuspidal_dim_ = 0;
};

/// Merel's Heilbronn matrices [a b; c d] of determinant q with a > b >= 0, d > c >= 0.
std::vector<Unimodular> heilbronn_matrices(i64 q);

/// Class of the cusp a/c for Gamma_0(N) modulo x -> -x.
std::pair<i64, i64> plus_cusp_class(i64 a, i64 c, i64 N);

/// Rational plus eigensymbol of the newform attached to an elliptic curve.
class EigenSymbol {
 public:
  EigenSymbol(std::shared_ptr<const P1List> p1, std::vector<mpq_class> class_values, std::map<i64, i64> probes,
              mpq_class scale);

  i64 level() const { return p1_->level(); }
  const P1List& p1() const { return *p1_; }
  std::shared_ptr<const P1List> p1_shared() const { return p1_; }
  const std::vector<mpq_class>& values() const { return values_; }
  const std::map<i64, i64>& probe_eigenvalues() const { return probes_; }
  /// Product of the rescalings applied after the primitive integral choice.
  const mpq_class& scale() const { return scale_; }

  /// Common denominator D of the table; numerator() = D * value.
  const mpz_class& denominator() const { return den_; }

  /// [a/n] = value on the path from infinity to a/n.
  mpq_class evaluate(i64 a, i64 n) const {
    mpq_class v(evaluate_numerator(a, n), den_);
    v.canonicalize();
    return v;
  }
  /// D * [a/n] as an integer.
  i64 evaluate_numerator(i64 a, i64 n) const;
  /// D * (value on the path from infinity to x) for x = a/n, or 0 for x = infinity (n = 0).
  i64 cusp_numerator(i64 a, i64 n) const;

  /// D * [a/n] for 0 <= a < n coprime (a = 0 only with n = 1). This is the inner
  /// loop of every theta-element sum, so it avoids 64-bit division.
  i64 evaluate_reduced(std::uint32_t a, std::uint32_t n) const {
    // After the first convergent 0/1 the path continues along the expansion of n/a;
    // step k contributes the Manin symbol ((-1)^(k-1) q_k : q_{k-1}).
    i64 sum = start_;
    std::uint32_t x = n, y = a, qm1 = 1, qm2 = 0, qm1n = fast_mod(1);
    bool neg = false;
    while (y != 0) {
      const std::uint32_t t = x < 2 * static_cast<std::uint64_t>(y) ? 1 : x / y;
      const std::uint32_t r = x - t * y;
      const std::uint32_t q = t * qm1 + qm2;
      const std::uint32_t qn = fast_mod(q);
      const std::uint32_t c = neg ? (qn == 0 ? 0 : level32_ - qn) : qn;
      sum += flat_[static_cast<std::size_t>(c) * level32_ + qm1n];
      qm2 = qm1;
      qm1 = q;
      qm1n = qn;
      neg = !neg;
      x = y;
      y = r;
    }
    return sum;
  }

 private:
  std::shared_ptr<const P1List> p1_;
  std::vector<mpq_class> values_;
  std::map<i64, i64> probes_;
  mpq_class scale_;
  std::uint32_t fast_mod(std::uint32_t x) const {
    const std::uint64_t low = mod_magic_ * x;
    return static_cast<std::uint32_t>((static_cast<unsigned __int128>(low) * level32_) >> 64);
  }

  mpz_class den_;
  std::vector<i64> flat_;  // D * value indexed by c * N + d
  std::uint32_t level32_ = 1;
  std::uint64_t mod_magic_ = 0;
  i64 start_ = 0;  // D * value of the symbol (-1 : 0), the segment from infinity to 0
};

/// Good primes not dividing N, ascending, starting after `after`.
std::vector<i64> good_primes(i64 N, std::size_t count, i64 after = 1);

/// Common eigenline of T_q - a_q over the probes. Throws kEigenspace when the
/// intersection is not one-dimensional. Output is primitive integral with the
/// first nonzero class value positive.
EigenSymbol rational_eigensymbol(const ManinSymbolSpace& space, const WeierstrassModel& minimal,
                                 const std::vector<i64>& probes);

/// Adds good probes until the eigenline is cut out (at most max_probes).
EigenSymbol rational_eigensymbol(const ManinSymbolSpace& space, const WeierstrassModel& minimal,
                                 std::size_t max_probes = 12);

/// Rescale by a power of p so all values are p-integral and one is a p-unit.
EigenSymbol normalize_p_integral(const EigenSymbol& sym, i64 p);

/// True when sym is an eigenvector of T_q with eigenvalue a.
bool satisfies_hecke(const ManinSymbolSpace& space, const EigenSymbol& sym, i64 q, i64 a);

/// Fricke eigenvalue w of sym; the root number is -w. Throws kEigenspace if sym
/// is not a W_N eigenvector.
int fricke_eigenvalue(const EigenSymbol& sym);
int atkin_lehner_sign(const EigenSymbol& sym);

}  // namespace kurisym

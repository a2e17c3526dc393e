#pragma once

#include <utility>
#include <vector>

#include <gmpxx.h>

namespace kurisym {

using QVec = std::vector<mpq_class>;
using QMat = std::vector<QVec>;

/// Sparse row over Q: (column, coefficient) pairs, columns strictly increasing, no zeros.
using SparseRow = std::vector<std::pair<int, mpq_class>>;

/// Incrementally maintained reduced row echelon form over Q.
class SparseEchelon {
 public:
  explicit SparseEchelon(int ncols);

  /// Reduces the row against the current basis and adds what is left.
  /// Returns false when the row was already in the span.
  bool add_row(SparseRow row);

  int ncols() const { return ncols_; }
  int rank() const { return static_cast<int>(rows_.size()); }

  /// Columns without a pivot, ascending.
  std::vector<int> free_columns() const;

  /// Basis of {x : r.x = 0 for every added row r}; vector j is 1 at the j-th
  /// free column and 0 at the others.
  std::vector<QVec> kernel() const;

 private:
  int ncols_;
  std::vector<SparseRow> rows_;  // each row has coefficient 1 at its pivot
  std::vector<int> pivot_row_;   // column -> index into rows_, or -1
  std::vector<int> pivot_col_;   // row index -> pivot column
};

/// row += c * other
void axpy(SparseRow& row, const mpq_class& c, const SparseRow& other);

/// Dense rank and nullspace ({x : m x = 0}) over Q.
int rank(QMat m);
std::vector<QVec> nullspace(QMat m, int ncols);

}  // namespace kurisym

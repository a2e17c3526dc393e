#include "kurisym/linalg.hpp"

#include <algorithm>

namespace kurisym {

void axpy(SparseRow& row, const mpq_class& c, const SparseRow& other) {
  SparseRow out;
  out.reserve(row.size() + other.size());
  auto i = row.begin();
  auto j = other.begin();
  while (i != row.end() || j != other.end()) {
    if (j == other.end() || (i != row.end() && i->first < j->first)) {
      out.push_back(std::move(*i++));
    } else if (i == row.end() || j->first < i->first) {
      out.emplace_back(j->first, c * j->second);
      ++j;
    } else {
      mpq_class v = i->second + c * j->second;
      if (v != 0) out.emplace_back(i->first, std::move(v));
      ++i;
      ++j;
    }
  }
  row = std::move(out);
}

SparseEchelon::SparseEchelon(int ncols) : ncols_(ncols), pivot_row_(static_cast<std::size_t>(ncols), -1) {}

bool SparseEchelon::add_row(SparseRow row) {
  // Clear every pivot column from the row. Basis rows are fully reduced, so one
  // pass over the pivots present in the original row suffices.
  std::vector<std::pair<int, mpq_class>> hits;
  for (const auto& [col, val] : row)
    if (pivot_row_[static_cast<std::size_t>(col)] >= 0) hits.emplace_back(col, val);
  for (const auto& [col, val] : hits) axpy(row, -val, rows_[static_cast<std::size_t>(pivot_row_[static_cast<std::size_t>(col)])]);
  if (row.empty()) return false;

  // Prefer a unit coefficient to keep denominators out, then the sparsest column.
  std::size_t best = 0;
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (abs(row[k].second) == 1) {
      best = k;
      break;
    }
  }
  const int pc = row[best].first;
  const mpq_class inv = 1 / row[best].second;
  for (auto& e : row) e.second *= inv;

  for (auto& other : rows_) {
    auto it = std::lower_bound(other.begin(), other.end(), pc, [](const auto& e, int c) { return e.first < c; });
    if (it != other.end() && it->first == pc) {
      const mpq_class c = -it->second;
      axpy(other, c, row);
    }
  }
  pivot_row_[static_cast<std::size_t>(pc)] = static_cast<int>(rows_.size());
  pivot_col_.push_back(pc);
  rows_.push_back(std::move(row));
  return true;
}

std::vector<int> SparseEchelon::free_columns() const {
  std::vector<int> out;
  for (int c = 0; c < ncols_; ++c)
    if (pivot_row_[static_cast<std::size_t>(c)] < 0) out.push_back(c);
  return out;
}

std::vector<QVec> SparseEchelon::kernel() const {
  const std::vector<int> fc = free_columns();
  std::vector<int> where(static_cast<std::size_t>(ncols_), -1);
  for (std::size_t j = 0; j < fc.size(); ++j) where[static_cast<std::size_t>(fc[j])] = static_cast<int>(j);
  std::vector<QVec> basis(fc.size(), QVec(static_cast<std::size_t>(ncols_), 0));
  for (std::size_t j = 0; j < fc.size(); ++j) basis[j][static_cast<std::size_t>(fc[j])] = 1;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const int pc = pivot_col_[r];
    for (const auto& [col, val] : rows_[r]) {
      if (col == pc) continue;
      basis[static_cast<std::size_t>(where[static_cast<std::size_t>(col)])][static_cast<std::size_t>(pc)] = -val;
    }
  }
  return basis;
}

namespace {

// In-place reduced row echelon form; returns pivot columns.
std::vector<int> rref(QMat& m, int ncols) {
  std::vector<int> pivots;
  std::size_t r = 0;
  for (int c = 0; c < ncols && r < m.size(); ++c) {
    std::size_t k = r;
    while (k < m.size() && m[k][static_cast<std::size_t>(c)] == 0) ++k;
    if (k == m.size()) continue;
    std::swap(m[r], m[k]);
    const mpq_class inv = 1 / m[r][static_cast<std::size_t>(c)];
    for (auto& x : m[r]) x *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][static_cast<std::size_t>(c)] == 0) continue;
      const mpq_class f = m[i][static_cast<std::size_t>(c)];
      for (std::size_t j = 0; j < static_cast<std::size_t>(ncols); ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

int rank(QMat m) {
  if (m.empty()) return 0;
  return static_cast<int>(rref(m, static_cast<int>(m.front().size())).size());
}

std::vector<QVec> nullspace(QMat m, int ncols) {
  const std::vector<int> piv = rref(m, ncols);
  std::vector<bool> is_pivot(static_cast<std::size_t>(ncols), false);
  for (int c : piv) is_pivot[static_cast<std::size_t>(c)] = true;
  std::vector<QVec> out;
  for (int f = 0; f < ncols; ++f) {
    if (is_pivot[static_cast<std::size_t>(f)]) continue;
    QVec v(static_cast<std::size_t>(ncols), 0);
    v[static_cast<std::size_t>(f)] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) v[static_cast<std::size_t>(piv[r])] = -m[r][static_cast<std::size_t>(f)];
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace kurisym

#include "skl/linalg.hpp"

#include <stdexcept>

namespace skl {

namespace {

// dst += k * src
void axpy(SparseRow& dst, const GaussRat& k, const SparseRow& src) {
  for (const auto& [c, v] : src) {
    auto [it, inserted] = dst.try_emplace(c, k * v);
    if (inserted) continue;
    it->second += k * v;
    if (it->second.is_zero()) dst.erase(it);
  }
}

}  // namespace

void SparseMatrix::validate_and_prune() {
  for (auto& row : rows) {
    for (auto it = row.begin(); it != row.end();) {
      if (it->first >= ncols) throw std::out_of_range("SparseMatrix: column index out of range");
      it = it->second.is_zero() ? row.erase(it) : std::next(it);
    }
  }
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t;
  t.ncols = rows.size();
  t.rows.resize(ncols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (const auto& [c, v] : rows[r]) t.rows[c].emplace(r, v);
  return t;
}

RrefResult rref_rank(const SparseMatrix& m) {
  std::vector<SparseRow> pending;
  for (const auto& row : m.rows) {
    SparseRow clean;
    for (const auto& [c, v] : row)
      if (!v.is_zero()) clean.emplace(c, v);
    if (!clean.empty()) pending.push_back(std::move(clean));
  }

  RrefResult out;
  while (!pending.empty()) {
    std::size_t best_row = 0;
    std::size_t best_col = pending[0].begin()->first;
    for (std::size_t r = 1; r < pending.size(); ++r) {
      std::size_t lead = pending[r].begin()->first;
      if (lead < best_col) {
        best_col = lead;
        best_row = r;
      }
    }
    SparseRow pivot = std::move(pending[best_row]);
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best_row));
    GaussRat inv = GaussRat(1) / pivot.begin()->second;
    for (auto& [c, v] : pivot) v *= inv;

    std::vector<SparseRow> next;
    next.reserve(pending.size());
    for (auto& row : pending) {
      auto it = row.find(best_col);
      if (it != row.end()) axpy(row, -GaussRat(it->second), pivot);
      if (!row.empty()) next.push_back(std::move(row));
    }
    pending = std::move(next);

    for (auto& done : out.rows) {
      auto it = done.find(best_col);
      if (it != done.end()) axpy(done, -GaussRat(it->second), pivot);
    }
    out.pivots.push_back(best_col);
    out.rows.push_back(std::move(pivot));
  }
  out.rank = out.rows.size();
  return out;
}

bool reduces_to_zero(SparseRow row, const RrefResult& basis) {
  for (std::size_t k = 0; k < basis.rows.size(); ++k) {
    auto it = row.find(basis.pivots[k]);
    if (it != row.end()) axpy(row, -GaussRat(it->second), basis.rows[k]);
  }
  for (auto it = row.begin(); it != row.end();) it = it->second.is_zero() ? row.erase(it) : std::next(it);
  return row.empty();
}

}  // namespace skl

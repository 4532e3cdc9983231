#pragma once

// Exact sparse row reduction over the Gaussian rationals.

#include <cstddef>
#include <map>
#include <vector>

#include "skl/ring.hpp"

namespace skl {

using SparseRow = std::map<std::size_t, GaussRat>;

struct SparseMatrix {
  std::vector<SparseRow> rows;
  std::size_t ncols = 0;

  /// Drops stored zeros; throws std::out_of_range on a column >= ncols.
  void validate_and_prune();
  SparseMatrix transpose() const;
};

struct RrefResult {
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;  // ascending
  std::vector<SparseRow> rows;      // reduced rows, pivot entry 1, ordered by pivot
};

/// Reduced row echelon form. Pivot = lowest column still available, taken
/// from the first remaining row that has it, so the result is reproducible.
RrefResult rref_rank(const SparseMatrix& m);

/// True iff row lies in the row space spanned by a reduced basis.
bool reduces_to_zero(SparseRow row, const RrefResult& basis);

}  // namespace skl

#include <doctest.h>

#include <random>

#include "skl/linalg.hpp"

using namespace skl;

namespace {

// Dense Gaussian elimination kept apart from the sparse routine.
std::size_t dense_rank(std::vector<std::vector<GaussRat>> m) {
  std::size_t rank = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t p = rank;
    while (p < m.size() && m[p][c].is_zero()) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[rank]);
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == rank || m[r][c].is_zero()) continue;
      const GaussRat f = m[r][c] / m[rank][c];
      for (std::size_t k = 0; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

TEST_CASE("rank examples") {
  SparseMatrix id{{{{0, GaussRat(1)}}, {{1, GaussRat(1)}}, {{2, GaussRat(1)}}}, 3};
  CHECK(rref_rank(id).rank == 3);
  SparseMatrix dep{{{{0, GaussRat(1)}, {1, GaussRat::i()}}, {{0, GaussRat::i()}, {1, GaussRat(-1)}}}, 2};
  CHECK(rref_rank(dep).rank == 1);
  SparseMatrix zero{{{}, {}}, 4};
  CHECK(rref_rank(zero).rank == 0);
}

TEST_CASE("validation") {
  SparseMatrix m{{{{5, GaussRat(1)}}}, 3};
  CHECK_THROWS_AS(m.validate_and_prune(), std::out_of_range);
  SparseMatrix z{{{{1, GaussRat(0)}}}, 3};
  z.validate_and_prune();
  CHECK(z.rows[0].empty());
}

TEST_CASE("random matrices against dense elimination") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> v(-2, 2), dim(1, 7);
  for (int t = 0; t < 200; ++t) {
    const std::size_t rows = static_cast<std::size_t>(dim(rng)), cols = static_cast<std::size_t>(dim(rng));
    SparseMatrix m{{}, cols};
    std::vector<std::vector<GaussRat>> dense(rows, std::vector<GaussRat>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
      SparseRow row;
      for (std::size_t c = 0; c < cols; ++c) {
        if (v(rng) < 1) continue;  // sparse
        const GaussRat x(v(rng), v(rng));
        dense[r][c] = x;
        if (!x.is_zero()) row[c] = x;
      }
      m.rows.push_back(row);
    }
    const RrefResult res = rref_rank(m);
    CHECK(res.rank == dense_rank(dense));
    CHECK(res.rank == rref_rank(m.transpose()).rank);
    for (const auto& row : m.rows) CHECK(reduces_to_zero(row, res));
    for (std::size_t k = 0; k < res.rows.size(); ++k) CHECK(res.rows[k].at(res.pivots[k]) == GaussRat(1));
  }
}

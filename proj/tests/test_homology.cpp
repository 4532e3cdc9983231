#include <doctest.h>

#include <numeric>
#include <random>

#include "skl/homology.hpp"

using namespace skl;

namespace {

const Lattice kTorus = Lattice::symplectic(1);

HomClass e1() { return {1, 0}; }
HomClass e2() { return {0, 1}; }

AElem gen(const HomClass& g) { return AElem::generator(g, kTorus); }

AElem scaled(const HomClass& g, const GaussRat& c) {
  AElem x = gen(g);
  x *= c;
  return x;
}

Integer gcd_z(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

// Determinantal divisors of a 2 x k matrix: d1 = gcd of entries, d1 d2 = gcd
// of 2x2 minors.
std::vector<Integer> divisor_oracle(const IntMatrix& m) {
  Integer g1 = 0, g2 = 0;
  for (const auto& row : m)
    for (const auto& x : row) g1 = gcd_z(g1, x);
  const std::size_t k = m[0].size();
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b) g2 = gcd_z(g2, m[0][a] * m[1][b] - m[0][b] * m[1][a]);
  std::vector<Integer> out{g1};
  out.push_back(g1 == 0 ? Integer(0) : Integer(g2 / g1));
  return out;
}

}  // namespace

TEST_CASE("canonical lift examples") {
  CanonicalLift a = a_canonicalize({3, 0}, kTorus);
  CHECK(a.unit == GaussRat(1));
  CHECK(a.key == e1());
  CanonicalLift b = a_canonicalize({1, 2}, kTorus);
  CHECK(b.unit == GaussRat(-1));
  CHECK(b.key == e1());
  CanonicalLift c = a_canonicalize({0, 0}, kTorus);
  CHECK(c.unit == GaussRat(1));
  CHECK(c.key == HomClass{0, 0});
}

TEST_CASE("algebra A products") {
  CHECK(a_mul(gen(e1()), gen(e2()), kTorus) == scaled({1, 1}, -GaussRat::i()));
  CHECK(a_mul(gen(e1()), gen(e1()), kTorus) == AElem::one(kTorus));
  CHECK(a_mul(gen(e2()), gen(e1()), kTorus) == scaled({1, 1}, GaussRat::i()));
}

TEST_CASE("algebra A on random triples") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::int64_t> coord(-6, 6);
  auto draw = [&] { return HomClass{coord(rng), coord(rng)}; };
  for (int t = 0; t < 500; ++t) {
    const HomClass a = draw(), b = draw(), c = draw();
    const AElem x = gen(a), y = gen(b), z = gen(c);
    CHECK(a_mul(a_mul(x, y, kTorus), z, kTorus) == a_mul(x, a_mul(y, z, kTorus), kTorus));
    CHECK(a_mul(x, x, kTorus) == AElem::one(kTorus));
    // [a][b] = i^{-omega(a,b)} [a+b], with omega = det on the torus.
    const std::int64_t w = a.coords[0] * b.coords[1] - a.coords[1] * b.coords[0];
    CHECK(a_mul(x, y, kTorus) == scaled(a + b, GaussRat::i_pow(-w)));
    const CanonicalLift lift = a_canonicalize(a, kTorus);
    CHECK(reduce_mod2(lift.key) == reduce_mod2(a));
    CHECK(lift.unit.is_unit_of_order_four());
    CHECK(a_canonicalize(a + 2 * c, kTorus).key == lift.key);
  }
}

TEST_CASE("lattice validation") {
  CHECK_THROWS_AS(Lattice({{0, 1}, {1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(kTorus.omega({1, 0, 0}, {0, 1}), DimensionMismatch);
  CHECK(kTorus.omega(e1(), e2()) == 1);
  CHECK(kTorus.omega(e2(), e1()) == -1);
  CHECK(Lattice::symplectic(2).rank() == 4);
}

TEST_CASE("smith form examples") {
  CHECK(smith_form({{1, 1}, {0, 2}}).diagonal == std::vector<Integer>{1, 2});
  CHECK(smith_form({{1, 1}, {0, 3}}).diagonal == std::vector<Integer>{1, 3});
  CHECK(smith_form({{1, 0}, {0, 1}}).diagonal == std::vector<Integer>{1, 1});
  CHECK(quotient_invariants(2, {e1(), e2()}).empty());
  CHECK(quotient_invariants(2, {{1, 0}, {1, 2}}) == std::vector<Integer>{2});
  CHECK(has_two_torsion({2}));
  CHECK(!has_two_torsion({3}));
  CHECK(quotient_invariants(2, {}) == std::vector<Integer>{0, 0});
}

TEST_CASE("smith form against determinantal divisors") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> entry(-9, 9), width(1, 4);
  for (int t = 0; t < 400; ++t) {
    IntMatrix m(2, std::vector<Integer>(static_cast<std::size_t>(width(rng))));
    for (auto& row : m)
      for (auto& x : row) x = entry(rng);
    const SmithForm s = smith_form(m);
    const IntMatrix prod = mat_mul(mat_mul(s.u, m), s.v);
    for (std::size_t r = 0; r < prod.size(); ++r)
      for (std::size_t c = 0; c < prod[r].size(); ++c)
        CHECK(prod[r][c] == ((r == c) ? s.diagonal[r] : Integer(0)));
    CHECK(abs(determinant(s.u)) == 1);
    CHECK(abs(determinant(s.v)) == 1);
    const std::vector<Integer> oracle = divisor_oracle(m);
    for (std::size_t k = 0; k < s.diagonal.size(); ++k) CHECK(abs(s.diagonal[k]) == oracle[k]);
  }
}

TEST_CASE("divisibility audit examples") {
  const DivisibilityReport ok = lemma_divisibility_audit(kTorus, {e1()}, {{1, 3}}, 6);
  CHECK(ok.hypothesis_ok);
  CHECK(ok.pairs > 0);
  CHECK(ok.all_divisible());

  const DivisibilityReport bad = lemma_divisibility_audit(kTorus, {e1()}, {{1, 2}}, 6);
  CHECK(!bad.hypothesis_ok);
  CHECK(bad.quotient == std::vector<Integer>{2});
  REQUIRE(bad.witness.has_value());
  CHECK(((bad.witness->omega % 4) + 4) % 4 == 2);
  CHECK(kTorus.omega(bad.witness->alpha, bad.witness->alpha_prime) == bad.witness->omega);

  const DivisibilityReport empty = lemma_divisibility_audit(kTorus, {}, {}, 6);
  CHECK(empty.all_divisible());
  CHECK(!empty.witness.has_value());

  const DivisibilityReport five = lemma_divisibility_audit(kTorus, {e1()}, {{1, 5}}, 6);
  CHECK(five.hypothesis_ok);
  CHECK(five.all_divisible());
}

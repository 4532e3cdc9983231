#include <doctest.h>

#include <random>

#include "skl/io.hpp"
#include "skl/random_diagram.hpp"
#include "skl/skein.hpp"

using namespace skl;

namespace {

LaurentPoly zeta(long e) { return LaurentPoly::zeta(e); }
const LaurentPoly kLoop = LaurentPoly::loop_value();

SimpleMulticurve torus_mc(std::map<IVec2, int> slopes) { return {SurfaceKind::Torus, std::move(slopes)}; }

Diagram one_crossing() {
  const Surface t = Surface::torus();
  return stack(realize(t, torus_mc({{{1, 0}, 1}})), realize(t, torus_mc({{{0, 1}, 1}}), 1));
}

Diagram load(const char* name) {
  return build_diagram(diagram_file_from_json(read_json_file(std::string(SKL_DATA_DIR) + "/" + name)));
}

}  // namespace

TEST_CASE("bracket examples") {
  const Diagram loop = load("loop.json");
  CHECK(bracket(loop) == Skein::basis(SimpleMulticurve::empty(SurfaceKind::Disk), kLoop));

  const SimpleMulticurve two = torus_mc({{{2, 1}, 2}});
  CHECK(bracket(realize(Surface::torus(), two)) == Skein::basis(two, 1));

  Skein expected(SurfaceKind::Torus);
  expected.add(torus_mc({{{1, 1}, 1}}), zeta(1));
  expected.add(torus_mc({{{1, -1}, 1}}), zeta(-1));
  CHECK(bracket(one_crossing()) == expected);
}

TEST_CASE("trefoil against a hand state sum") {
  const Diagram d = load("trefoil.json");
  REQUIRE(d.crossing_count() == 3);
  // Standard trefoil: the number of loops depends only on how many crossings
  // get the +1 smoothing.
  const int loops_by_plus[4] = {3, 2, 1, 2};
  int states = 0;
  for_each_state(d, 3, [&](const State& s, const Resolution& r) {
    ++states;
    const int plus = (s.sum() + 3) / 2;
    CHECK(r.t == loops_by_plus[plus]);
    CHECK(r.s_prime.is_empty());
  });
  CHECK(states == 8);
  LaurentPoly hand;
  for (int plus = 0; plus <= 3; ++plus) {
    const int ways = plus == 0 || plus == 3 ? 1 : 3;
    hand += LaurentPoly(ways) * zeta(2 * plus - 3) * kLoop.pow(static_cast<unsigned>(loops_by_plus[plus]));
  }
  CHECK(bracket(d).coeff(SimpleMulticurve::empty(SurfaceKind::Disk)) == hand);
  CHECK(hand == kLoop * (zeta(-7) - zeta(-3) - zeta(5)));
}

TEST_CASE("crossing cap") {
  CHECK_THROWS_AS(bracket(load("trefoil.json"), 2), CrossingCapExceeded);
}

TEST_CASE("stacking product") {
  const Surface t = Surface::torus();
  const Skein one = Skein::basis(SimpleMulticurve::empty(SurfaceKind::Torus), 1);
  const Skein x = Skein::basis(torus_mc({{{1, 0}, 1}}), zeta(2) + LaurentPoly(3));
  CHECK(skein_mul(t, one, x) == x);
  CHECK(skein_mul(t, x, one) == x);
  const Skein a = Skein::basis(torus_mc({{{1, 0}, 1}}), 1);
  CHECK(skein_mul(t, a, a) == Skein::basis(torus_mc({{{1, 0}, 2}}), 1));
  const Skein b = Skein::basis(torus_mc({{{0, 1}, 1}}), 1);
  CHECK(skein_mul(t, a, b) == bracket(one_crossing()));
  // b a has the opposite crossing
  Skein ba(SurfaceKind::Torus);
  ba.add(torus_mc({{{1, 1}, 1}}), zeta(-1));
  ba.add(torus_mc({{{1, -1}, 1}}), zeta(1));
  CHECK(skein_mul(t, b, a) == ba);
}

TEST_CASE("Z2 grading and characters") {
  const Skein a = Skein::basis(torus_mc({{{1, 0}, 1}}), 1);
  const GradedSkein g = grade(a);
  REQUIRE(g.size() == 1);
  CHECK(g.begin()->first == reduce_mod2({1, 0}));
  const GradedSkein ge = grade(Skein::basis(SimpleMulticurve::empty(SurfaceKind::Torus), 1));
  CHECK(ge.begin()->first == reduce_mod2({0, 0}));

  const Z2Character trivial{reduce_mod2({0, 0})};
  const Z2Character dual_e2{reduce_mod2({1, 0})};
  CHECK(character_act(a, trivial) == a);
  CHECK(character_act(a, dual_e2) == -1 * a);
  const Skein even = Skein::basis(torus_mc({{{1, 1}, 2}}), zeta(3));
  for (const auto& c : {reduce_mod2({1, 0}), reduce_mod2({0, 1}), reduce_mod2({1, 1})})
    CHECK(character_act(even, Z2Character{c}) == even);

  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    const Surface s = t % 2 ? Surface::torus() : Surface::punctured_torus();
    const Diagram d = random_diagram(s, rng, {5, 3, 5, false});
    const GradedSkein gd = grade(bracket(d));
    REQUIRE(gd.size() <= 1);
    if (!gd.empty()) CHECK(gd.begin()->first == reduce_mod2(s.to_class(d.total_class())));
  }
}

TEST_CASE("phi on basis curves") {
  const Surface t = Surface::torus();
  const SimpleMulticurve a = torus_mc({{{1, 1}, 1}});
  TensorElem ea;
  ea.add(a, {1, 1}, -1);
  CHECK(phi(Skein::basis(a, 1), t) == ea);

  const SimpleMulticurve e = SimpleMulticurve::empty(SurfaceKind::Torus);
  TensorElem ee;
  ee.add(e, {0, 0}, 1);
  CHECK(phi(Skein::basis(e, 1), t) == ee);

  const SimpleMulticurve a2 = torus_mc({{{1, 1}, 2}});
  TensorElem ea2;
  ea2.add(a2, {0, 0}, 1);
  CHECK(phi(Skein::basis(a2, 1), t) == ea2);
}

TEST_CASE("psi examples") {
  const Surface t = Surface::torus();
  for (const auto& mc : {torus_mc({{{1, 1}, 1}}), torus_mc({{{2, 1}, 3}}), SimpleMulticurve::empty(SurfaceKind::Torus)}) {
    const Diagram d = realize(t, mc);
    CHECK(bracket_psi(d) == phi(Skein::basis(mc, 1), t));
  }

  const Diagram d = one_crossing();
  for (const auto& dirs : std::vector<std::vector<int>>{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}) {
    const PsiResult p = psi(OrientedDiagram(d, dirs));
    CHECK(p.coeff == -GaussRat::i());
    CHECK(p.key == HomClass{1, 1});
  }
  // -i [(1,1)] = +i [(1,-1)]
  const CanonicalLift lift = a_canonicalize({1, -1}, t.homology());
  CHECK(lift.key == HomClass{1, 1});
  CHECK(GaussRat::i() * lift.unit == -GaussRat::i());
}

TEST_CASE("commutativity on small diagrams") {
  const Diagram empty = Diagram::build(Surface::torus(), {});
  CHECK(verify_comm(empty));

  const CommReport rep = verify_comm_report(one_crossing());
  CHECK(rep.ok);
  TensorElem expected;
  expected.add(torus_mc({{{1, 1}, 1}}), {1, 1}, LaurentPoly::monomial(-GaussRat::i(), 1));
  expected.add(torus_mc({{{1, -1}, 1}}), {1, 1}, LaurentPoly::monomial(-GaussRat::i(), -1));
  CHECK(rep.lhs == expected);
  CHECK(rep.rhs == expected);
}

TEST_CASE("psi and the skein relation") {
  const Diagram knot = load("trefoil.json");
  CHECK_THROWS_AS(psi_expand(knot, 0), std::logic_error);
  const Diagram d = one_crossing();
  CHECK(psi_expand(d, 0) == bracket_psi(d));
}

TEST_CASE("random suite: Kauffman relation, loop value and commutativity") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 45; ++t) {
    const Surface s = t % 3 == 0 ? Surface::disk() : (t % 3 == 1 ? Surface::torus() : Surface::punctured_torus());
    const Diagram d = random_diagram(s, rng);
    const Skein whole = bracket(d);
    for (std::size_t k = 0; k < d.crossing_count(); ++k) {
      Skein rhs = zeta(1) * bracket(smooth_crossing(d, k, 1));
      rhs += zeta(-1) * bracket(smooth_crossing(d, k, -1));
      CHECK(rhs == whole);
    }
    CHECK(bracket(add_trivial_loop(d)) == kLoop * whole);
    const CommReport rep = verify_comm_report(d);
    CHECK_MESSAGE(rep.ok, rep.witness);
  }
}

#include <doctest.h>

#include <random>
#include <set>

#include "skl/diagram.hpp"
#include "skl/random_diagram.hpp"

using namespace skl;

namespace {

Point P(long xn, long xd, long yn, long yd) { return {Rational(xn, xd), Rational(yn, yd)}; }

Polyline horizontal(int height, Rational y = Rational(1, 3)) {
  return make_polyline({{0, y}, {Rational(1, 2), y}}, {1, 0}, height);
}

Polyline vertical(int height, Rational x = Rational(1, 4)) {
  return make_polyline({{x, 0}, {x, Rational(1, 2)}}, {0, 1}, height);
}

Polyline square(Point corner, Rational side, int height = 0) {
  return make_polyline({corner, corner + Point(side, 0), corner + Point(side, side), corner + Point(0, side)}, {},
                       height);
}

Diagram one_crossing() { return Diagram::build(Surface::torus(), {horizontal(1), vertical(0)}); }

DiagramError::Kind error_kind(const Surface& s, std::vector<Polyline> comps, std::vector<OverHint> hints = {}) {
  try {
    Diagram::build(s, std::move(comps), std::move(hints));
  } catch (const DiagramError& e) {
    return e.kind();
  }
  FAIL("expected a DiagramError");
  return DiagramError::Kind::Malformed;
}

SimpleMulticurve torus_mc(std::map<IVec2, int> slopes) { return {SurfaceKind::Torus, std::move(slopes)}; }

}  // namespace

TEST_CASE("diagram construction examples") {
  const Diagram h = Diagram::build(Surface::torus(), {horizontal(0, Rational(1, 2))});
  CHECK(h.crossing_count() == 0);
  CHECK(h.component_count() == 1);
  CHECK(h.component_class(0) == IVec2{1, 0});

  const Diagram x = one_crossing();
  REQUIRE(x.crossing_count() == 1);
  CHECK(x.crossings()[0].over.component == 0);
  CHECK(x.crossings()[0].under.component == 1);

  const Diagram sq = Diagram::build(Surface::disk(), {square(P(0, 1, 0, 1), 1)});
  CHECK(sq.component_class(0) == IVec2{0, 0});
  CHECK(sq.crossing_count() == 0);
}

TEST_CASE("slanted curves wrap the expected number of times") {
  // (2,1) and (1,1) straight lines meet |det| = 1 times.
  const Polyline a = make_polyline({P(0, 1, 1, 7), P(1, 1, 1, 7) + P(0, 1, 1, 2)}, {2, 1}, 1);
  const Polyline b = make_polyline({P(1, 5, 0, 1), P(1, 5, 0, 1) + P(1, 2, 1, 2)}, {1, 1}, 0);
  CHECK(Diagram::build(Surface::torus(), {a, b}).crossing_count() == 1);
  // (1,2) against (2,1): |det| = 3.
  const Polyline c = make_polyline({P(1, 9, 0, 1), P(1, 9, 0, 1) + P(1, 2, 1, 1)}, {1, 2}, 0);
  CHECK(Diagram::build(Surface::torus(), {a, c}).crossing_count() == 3);
}

TEST_CASE("general position errors") {
  const Surface disk = Surface::disk();
  // two squares sharing an edge segment
  CHECK(error_kind(disk, {square(P(0, 1, 0, 1), 1, 0), square(P(1, 2, 0, 1), 1, 1)}) ==
        DiagramError::Kind::NonTransverse);
  // a vertex of one square on an edge of another
  CHECK(error_kind(disk, {square(P(0, 1, 0, 1), 1, 0), square(P(1, 1, 1, 2), 1, 1)}) ==
        DiagramError::Kind::VertexIncidence);
  // three lines through one point
  const Polyline l1 = make_polyline({P(-1, 1, 0, 1), P(1, 1, 0, 1), P(0, 1, 5, 1)}, {}, 0);
  const Polyline l2 = make_polyline({P(-1, 1, -1, 1), P(1, 1, 1, 1), P(5, 1, -3, 1)}, {}, 1);
  const Polyline l3 = make_polyline({P(0, 1, -1, 1), P(0, 1, 1, 1), P(-7, 1, 2, 1)}, {}, 2);
  CHECK(error_kind(disk, {l1, l2, l3}) == DiagramError::Kind::TriplePoint);
  // equal levels between components
  CHECK(error_kind(Surface::torus(), {horizontal(0), vertical(0)}) == DiagramError::Kind::MissingOverride);
  // the curve runs through the puncture
  CHECK(error_kind(Surface::punctured_torus(), {horizontal(0, Rational(1, 2))}) == DiagramError::Kind::PunctureHit);
  // degenerate polylines
  CHECK(error_kind(disk, {make_polyline({P(0, 1, 0, 1), P(0, 1, 0, 1), P(1, 1, 1, 1)})}) ==
        DiagramError::Kind::Malformed);
  CHECK(error_kind(disk, {make_polyline({P(0, 1, 0, 1)}, {}, 0)}) == DiagramError::Kind::Malformed);
}

TEST_CASE("over hints decide self-crossings") {
  // figure-eight curve on the disk with one self-crossing at (1,1)
  const Polyline eight = make_polyline({P(0, 1, 0, 1), P(2, 1, 2, 1), P(2, 1, 0, 1), P(0, 1, 2, 1)}, {}, 0);
  CHECK(error_kind(Surface::disk(), {eight}) == DiagramError::Kind::MissingOverride);
  const Diagram a = Diagram::build(Surface::disk(), {eight}, {{P(1, 1, 1, 1), P(2, 1, 2, 1)}});
  const Diagram b = Diagram::build(Surface::disk(), {eight}, {{P(1, 1, 1, 1), P(-2, 1, 2, 1)}});
  REQUIRE(a.crossing_count() == 1);
  CHECK(a.crossings()[0].over.segment == 0);
  CHECK(b.crossings()[0].over.segment == 2);
  CHECK(a.crossings()[0].handedness == -b.crossings()[0].handedness);
}

TEST_CASE("resolution of the one-crossing stack") {
  const Diagram d = one_crossing();
  std::set<IVec2> classes;
  std::set<int> cs;
  for (std::uint64_t idx = 0; idx < 2; ++idx) {
    const Resolution r = resolve(d, state_from_index(1, idx));
    REQUIRE(r.components.size() == 1);
    classes.insert(r.components[0].homology);
    cs.insert(r.c);
    CHECK(r.t == 0);
  }
  CHECK(classes == std::set<IVec2>{{1, 1}, {1, -1}});
  CHECK(cs == std::set<int>{1, -1});
}

TEST_CASE("crossingless resolutions") {
  const Diagram h = Diagram::build(Surface::torus(), {horizontal(0), horizontal(0, Rational(2, 3))});
  const Resolution r = resolve(h, State{});
  CHECK(r.c == 0);
  CHECK(r.t == 0);
  CHECK(r.s_prime == torus_mc({{{1, 0}, 2}}));

  const Diagram loop = Diagram::build(Surface::disk(), {square(P(0, 1, 0, 1), 1)});
  const Resolution rl = resolve(loop, State{});
  CHECK(rl.t == 1);
  CHECK(rl.s_prime.is_empty());
}

TEST_CASE("triviality") {
  ResolvedComponent c;
  c.homology = {0, 0};
  CHECK(triviality(c, Surface::torus()));
  c.puncture_winding = 1;
  CHECK(!triviality(c, Surface::punctured_torus()));
  c.puncture_winding = -1;
  CHECK(!triviality(c, Surface::punctured_torus()));
  c.puncture_winding = 0;
  CHECK(triviality(c, Surface::punctured_torus()));
  c.homology = {1, 0};
  CHECK(!triviality(c, Surface::torus()));

  // a square around the puncture resolves to a boundary-parallel curve
  const Diagram around = Diagram::build(Surface::punctured_torus(), {square(P(1, 4, 1, 4), Rational(1, 2))});
  const Resolution r = resolve(around, State{});
  CHECK(r.t == 0);
  CHECK(r.s_prime.boundary_parallel() == 1);
  // the same square on the closed torus bounds a disk
  const Diagram closed = Diagram::build(Surface::torus(), {square(P(1, 4, 1, 4), Rational(1, 2))});
  CHECK(resolve(closed, State{}).t == 1);
}

TEST_CASE("canonical multicurves") {
  CHECK(canonical_multicurve(Surface::torus(), {{{1, 1}}, {{-1, -1}}}) == torus_mc({{{1, 1}, 2}}));
  CHECK_THROWS_AS(canonical_multicurve(Surface::torus(), {{{2, 2}}}), std::invalid_argument);
  const SimpleMulticurve bp = canonical_multicurve(Surface::punctured_torus(), {{{0, 0}, 1}});
  CHECK(bp.boundary_parallel() == 1);
  CHECK(bp.slopes().empty());
  CHECK(normalize_slope({-2, 3}) == IVec2{2, -3});
  CHECK(normalize_slope({0, -1}) == IVec2{0, 1});
  CHECK_THROWS_AS(torus_mc({{{1, 0}, 1}, {{0, 1}, 1}}), std::invalid_argument);
}

TEST_CASE("writhe and the Seifert cycle") {
  const Diagram flat = Diagram::build(Surface::torus(), {horizontal(0)});
  CHECK(orient_data(OrientedDiagram::as_drawn(flat)).writhe == 0);

  const Diagram d = one_crossing();
  const OrientationData data = orient_data(OrientedDiagram::as_drawn(d));
  CHECK(std::abs(data.writhe) == 1);
  CHECK((data.xi == IVec2{1, 1} || data.xi == IVec2{1, -1}));
  // the Seifert state traces xi
  State seifert{{data.per_crossing[0].seifert_choice}};
  const Resolution r = resolve(d, seifert);
  REQUIRE(r.components.size() == 1);
  CHECK((r.components[0].homology == data.xi || r.components[0].homology == -data.xi));

  const OrientationData flipped = orient_data(OrientedDiagram(d, {1, -1}));
  CHECK(flipped.writhe == -data.writhe);

  for (std::uint64_t idx = 0; idx < 2; ++idx) {
    const State s = state_from_index(1, idx);
    const Resolution rs = resolve(d, s);
    const int ss = data.seifert_count(s);
    CHECK(GaussRat::i_pow(rs.c + data.writhe) == GaussRat(ss % 2 ? -1 : 1));
  }
}

TEST_CASE("Euler parity") {
  const Diagram flat = Diagram::build(Surface::torus(), {horizontal(0), horizontal(0, Rational(2, 3))});
  const ParityDetail pf = euler_parity_detail(flat, OrientedDiagram::as_drawn(flat), State{});
  CHECK(pf.n == 2);
  CHECK(pf.m == 0);
  CHECK(pf.chi == 2);
  CHECK(pf.parity_ok);

  const Diagram d = one_crossing();
  for (const auto& dirs : std::vector<std::vector<int>>{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}})
    for (std::uint64_t idx = 0; idx < 2; ++idx) {
      const ParityDetail p = euler_parity_detail(d, OrientedDiagram(d, dirs), state_from_index(1, idx));
      CHECK(p.parity_ok);
      CHECK(p.m_formula_ok);
    }
}

TEST_CASE("stacking straight curves") {
  const Surface t = Surface::torus();
  auto count = [&](IVec2 a, IVec2 b) {
    return stack(realize(t, torus_mc({{a, 1}}), 0), realize(t, torus_mc({{b, 1}}), 1)).crossing_count();
  };
  CHECK(count({1, 0}, {0, 1}) == 1);
  CHECK(count({1, 0}, {1, 0}) == 0);
  CHECK(count({2, 1}, {1, 1}) == 1);
  CHECK(count({1, 2}, {2, 1}) == 3);
  const Diagram st = stack(realize(t, torus_mc({{{1, 0}, 1}})), realize(t, torus_mc({{{0, 1}, 1}}), 1));
  CHECK(st.crossings()[0].over.component == 0);
}

TEST_CASE("realize gives simple diagrams of the requested class") {
  for (const Surface& s : {Surface::torus(), Surface::punctured_torus()}) {
    for (const auto& slopes : std::vector<std::map<IVec2, int>>{{}, {{{1, 0}, 3}}, {{{2, -1}, 2}}, {{{1, 3}, 1}}}) {
      const SimpleMulticurve mc(s.kind(), slopes, s.kind() == SurfaceKind::PuncturedTorus ? 2 : 0);
      for (unsigned v = 0; v < 3; ++v) {
        const Diagram d = realize(s, mc, v);
        CHECK(d.crossing_count() == 0);
        CHECK(resolve(d, State{}).s_prime == mc);
      }
    }
  }
}

TEST_CASE("smoothing agrees with the resolution of the full diagram") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 45; ++t) {
    const Surface s = t % 3 == 0 ? Surface::disk() : (t % 3 == 1 ? Surface::torus() : Surface::punctured_torus());
    const Diagram d = random_diagram(s, rng, {4, 3, 5, false});
    const std::size_t n = d.crossing_count();
    for (int choice : {1, -1}) {
      const Diagram sm = smooth_crossing(d, 0, choice);
      REQUIRE(sm.crossing_count() == n - 1);
      // every state of the smoothed diagram is a state of d with crossing 0 fixed
      for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << (n - 1)); ++idx) {
        const State small = state_from_index(n - 1, idx);
        State big;
        big.choice.push_back(choice);
        // crossings keep their order after removing the first
        big.choice.insert(big.choice.end(), small.choice.begin(), small.choice.end());
        const Resolution a = resolve(sm, small);
        const Resolution b = resolve(d, big);
        CHECK(a.s_prime == b.s_prime);
        CHECK(a.t == b.t);
      }
    }
  }
}

TEST_CASE("translation and trivial loops") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 30; ++t) {
    const Surface s = t % 2 ? Surface::torus() : Surface::disk();
    const Diagram d = random_diagram(s, rng, {4, 3, 5, false});
    const Diagram moved = translate(d, P(1, 97, 2, 89));
    CHECK(moved.crossing_count() == d.crossing_count());
    CHECK(orient_data(OrientedDiagram::as_drawn(moved)).writhe == orient_data(OrientedDiagram::as_drawn(d)).writhe);
    const Diagram looped = add_trivial_loop(d, static_cast<unsigned>(t));
    CHECK(looped.crossing_count() == d.crossing_count());
    CHECK(looped.component_count() == d.component_count() + 1);
    CHECK(resolve(looped, state_from_index(d.crossing_count(), 0)).t ==
          resolve(d, state_from_index(d.crossing_count(), 0)).t + 1);
  }
}

TEST_CASE("lattice winding") {
  const std::vector<Point> sq{P(0, 1, 0, 1), P(1, 2, 0, 1), P(1, 2, 1, 2), P(0, 1, 1, 2), P(0, 1, 0, 1)};
  CHECK(lattice_winding(sq, P(1, 4, 1, 4), false) == 1);
  CHECK(lattice_winding(sq, P(3, 4, 1, 4), false) == 0);
  CHECK(lattice_winding(sq, P(5, 4, 1, 4), true) == 1);
  std::vector<Point> rev(sq.rbegin(), sq.rend());
  CHECK(lattice_winding(rev, P(1, 4, 1, 4), false) == -1);
}

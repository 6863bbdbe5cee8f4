#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "stripfold/saturation.hpp"
#include "support/fixtures.hpp"

using namespace stripfold;
using testsupport::load_fixture;

namespace {

SaturatedSet heights_only(int strip, Rat lo, Rat hi) {
  SaturatedSet s;
  s.heights[strip].emplace_back(std::move(lo), std::move(hi));
  return s;
}

}  // namespace

TEST_CASE("rectangle saturation is the height interval, clipped to the strip") {
  StripModel m = load_fixture("M0.model");
  auto s = saturate_basic(m, RectBox{0, ExtRat(Rat(-3)), ExtRat(Rat(5)), Rat(1, 4), Rat(1, 2)});
  SaturatedSet expect = heights_only(0, Rat(1, 4), Rat(1, 2));
  CHECK(s == expect);

  // Excess height range is clipped away: only the strip interior counts.
  auto clipped = saturate_basic(m, RectBox{.strip = 1, .y_lo = Rat(-2), .y_hi = Rat(1, 8)});
  CHECK(clipped == heights_only(1, Rat(0), Rat(1, 8)));
  CHECK(clipped.contains_leaf(InteriorLeaf{1, Rat(1, 16)}));
  CHECK_FALSE(clipped.contains_leaf(InteriorLeaf{1, Rat(1, 8)}));
  CHECK_FALSE(clipped.contains_leaf(InteriorLeaf{0, Rat(1, 16)}));
}

TEST_CASE("arc collar saturation: whole arc leaf plus both collars") {
  StripModel m = load_fixture("M1.model");
  // g0 glues the (-inf,0) arcs of s1.top and s2.bottom.
  auto s = saturate_basic(
      m, ArcCollarBox{0, ExtRat::neg_inf(), ExtRat(Rat(0)), Rat(1, 8), Rat(1, 8)});

  SaturatedSet expect;
  expect.arc_leaves = {0};
  expect.heights[0].emplace_back(Rat(7, 8), Rat(1));  // s1, collar under its top side
  expect.heights[1].emplace_back(Rat(0), Rat(1, 8));  // s2, collar above its bottom side
  CHECK(s == expect);

  CHECK(s.contains_leaf(ArcLeaf{0}));
  CHECK_FALSE(s.contains_leaf(ArcLeaf{1}));
  CHECK(s.contains_point(m, OnArc{0, Rat(-7)}));
  CHECK(s.contains_point(m, InStrip{0, Rat(3), Rat(15, 16)}));
  CHECK_FALSE(s.contains_point(m, InStrip{0, Rat(3), Rat(1, 2)}));

  // The sub-arc does not shrink the saturation: the leaf is whole either way.
  auto narrow = saturate_basic(m, ArcCollarBox{0, ExtRat(Rat(-2)), ExtRat(Rat(-1)), Rat(1, 8), Rat(1, 8)});
  CHECK(narrow == s);
}

TEST_CASE("boundary collar saturation") {
  StripModel m = load_fixture("M3.model");
  int s1 = m.strip_index("s1");
  auto s = saturate_basic(m, BoundaryCollarBox{.strip = s1, .side = SideName::Bottom, .collar = Rat(1, 4)});
  SaturatedSet expect;
  expect.boundary_leaves = {{s1, SideName::Bottom}};
  expect.heights[s1].emplace_back(Rat(0), Rat(1, 4));
  CHECK(s == expect);
}

TEST_CASE("degenerate boxes are rejected") {
  StripModel m = load_fixture("M1.model");
  CHECK_THROWS_AS(saturate_basic(m, RectBox{.strip = 0, .y_lo = Rat(1, 2), .y_hi = Rat(1, 2)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(saturate_basic(m, RectBox{.strip = 0, .y_lo = Rat(2), .y_hi = Rat(3)}), std::invalid_argument);
  CHECK_THROWS_AS(saturate_basic(m, RectBox{0, ExtRat(Rat(1)), ExtRat(Rat(1)), Rat(0), Rat(1)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(saturate_basic(m, RectBox{.strip = 9, .y_lo = Rat(0), .y_hi = Rat(1)}), std::invalid_argument);
  // Sub-arc sticking out of the glued arc.
  CHECK_THROWS_AS(
      saturate_basic(m, ArcCollarBox{0, ExtRat(Rat(-1)), ExtRat(Rat(1)), Rat(1, 8), Rat(1, 8)}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      saturate_basic(m, ArcCollarBox{0, ExtRat::neg_inf(), ExtRat(Rat(0)), Rat(0), Rat(1, 8)}),
      std::invalid_argument);
  // Boundary collar on a glued side.
  CHECK_THROWS_AS(saturate_basic(m, BoundaryCollarBox{.strip = 0, .side = SideName::Top, .collar = Rat(1, 8)}),
                  std::invalid_argument);
}

TEST_CASE("normalization merges overlap but keeps touching open intervals apart") {
  SaturatedSet s;
  s.heights[0] = {{Rat(1, 2), Rat(3, 4)}, {Rat(1, 4), Rat(5, 8)}, {Rat(3, 4), Rat(7, 8)},
                  {Rat(1, 3), Rat(1, 3)}};
  s.normalize();
  REQUIRE(s.heights[0].size() == 2);
  CHECK(s.heights[0][0] == std::pair<Rat, Rat>{Rat(1, 4), Rat(3, 4)});
  CHECK(s.heights[0][1] == std::pair<Rat, Rat>{Rat(3, 4), Rat(7, 8)});
  CHECK_FALSE(s.contains_leaf(InteriorLeaf{0, Rat(3, 4)}));
}

TEST_CASE("saturating a saturated set changes nothing") {
  StripModel m = load_fixture("M2.model");
  std::vector<BasicBox> boxes = {
      RectBox{.strip = 0, .y_lo = Rat(1, 3), .y_hi = Rat(2, 3)},
      ArcCollarBox{0, ExtRat(Rat(-5)), ExtRat(Rat(-1)), Rat(1, 4), Rat(1, 3)},
      ArcCollarBox{1, ExtRat(Rat(1)), ExtRat(Rat(2)), Rat(1, 2), Rat(1, 5)},
      ArcCollarBox{2, ExtRat(Rat(1)), ExtRat(Rat(4)), Rat(1, 7), Rat(1, 7)},
  };
  SaturatedSet u;
  for (const auto& b : boxes) {
    SaturatedSet s = saturate_basic(m, b);
    CHECK(saturate_set(m, s) == s);
    u = sat_union(u, s);
  }
  CHECK(saturate_set(m, u) == u);
  CHECK(set_contains(u, saturate_basic(m, boxes[1])));
  CHECK(sets_intersect(u, saturate_basic(m, boxes[2])));
}

TEST_CASE("union, intersection and containment agree on hand-built sets") {
  SaturatedSet a = heights_only(0, Rat(0), Rat(1, 2));
  SaturatedSet b = heights_only(0, Rat(1, 2), Rat(1));
  CHECK_FALSE(sets_intersect(a, b));  // open intervals sharing an endpoint miss each other
  CHECK(sets_intersect(a, heights_only(0, Rat(1, 4), Rat(3, 4))));
  CHECK_FALSE(sets_intersect(a, heights_only(1, Rat(0), Rat(1, 2))));

  SaturatedSet u = sat_union(a, b);
  CHECK(set_contains(u, a));
  CHECK(set_contains(u, b));
  CHECK_FALSE(set_contains(a, u));
  // (0,1/2) and (1/2,1) do not cover (1/4,3/4).
  CHECK_FALSE(set_contains(u, heights_only(0, Rat(1, 4), Rat(3, 4))));

  SaturatedSet with_arc = a;
  with_arc.arc_leaves.insert(0);
  CHECK(sets_intersect(with_arc, SaturatedSet{{}, {0}, {}}));
  CHECK_FALSE(set_contains(a, with_arc));
  CHECK(set_contains(with_arc, a));
}

TEST_CASE("contained basic neighborhoods witness openness") {
  StripModel m = load_fixture("M1.model");
  auto s = saturate_basic(
      m, ArcCollarBox{0, ExtRat::neg_inf(), ExtRat(Rat(0)), Rat(1, 8), Rat(1, 8)});

  SUBCASE("interior point deep in a collar") {
    auto box = contained_basic_neighborhood(m, s, InStrip{0, Rat(42), Rat(63, 64)});
    REQUIRE(box.has_value());
    auto sat = saturate_basic(m, *box);
    CHECK(set_contains(s, sat));
    CHECK(sat.contains_leaf(InteriorLeaf{0, Rat(63, 64)}));
  }
  SUBCASE("point on the arc leaf itself") {
    auto box = contained_basic_neighborhood(m, s, OnArc{0, Rat(-17)});
    REQUIRE(box.has_value());
    REQUIRE(std::holds_alternative<ArcCollarBox>(*box));
    CHECK(set_contains(s, saturate_basic(m, *box)));
  }
  SUBCASE("point outside the set") {
    CHECK_FALSE(contained_basic_neighborhood(m, s, InStrip{0, Rat(0), Rat(1, 2)}).has_value());
    CHECK_FALSE(contained_basic_neighborhood(m, s, OnArc{1, Rat(5)}).has_value());
  }
  SUBCASE("arc leaf stripped of one collar is not an interior point") {
    SaturatedSet broken = s;
    broken.heights.erase(1);
    CHECK_FALSE(contained_basic_neighborhood(m, broken, OnArc{0, Rat(-17)}).has_value());
  }
}

TEST_CASE("sampled openness check passes on saturations and flags broken sets") {
  for (const char* name : {"M0.model", "M1.model", "M2.model", "M3.model"}) {
    CAPTURE(name);
    StripModel m = load_fixture(name);
    SaturatedSet u;
    for (size_t g = 0; g < m.gluings.size(); ++g) {
      const Arc& arc = m.arc(m.gluings[g].a);
      ExtRat lo = arc.lo.is_finite() ? ExtRat(arc.lo.finite() + Rat(1, 10)) : arc.lo;
      ExtRat hi = arc.hi.is_finite() ? ExtRat(arc.hi.finite() - Rat(1, 10)) : arc.hi;
      u = sat_union(u, saturate_basic(m, ArcCollarBox{(int)g, lo, hi, Rat(1, 6), Rat(1, 9)}));
    }
    for (size_t st = 0; st < m.strips.size(); ++st) {
      u = sat_union(u, saturate_basic(m, RectBox{.strip = (int)st, .y_lo = Rat(2, 5), .y_hi = Rat(3, 5)}));
      for (SideName side : {SideName::Bottom, SideName::Top})
        if (m.side((int)st, side).kind == SideKind::Boundary)
          u = sat_union(u, saturate_basic(m, BoundaryCollarBox{.strip = (int)st, .side = side, .collar = Rat(1, 5)}));
    }
    auto check = check_openness_by_sampling(m, u, 200);
    CAPTURE(check.failures.empty() ? "" : check.failures.front());
    CHECK(check.ok);
    CHECK(check.points_checked >= 200);
  }

  // An arc leaf whose collars were removed is not open; sampling catches it.
  StripModel m1 = load_fixture("M1.model");
  SaturatedSet broken;
  broken.arc_leaves.insert(0);
  auto check = check_openness_by_sampling(m1, broken, 50);
  CHECK_FALSE(check.ok);
  CHECK_FALSE(check.failures.empty());
}

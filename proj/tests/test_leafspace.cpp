#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "stripfold/leafspace.hpp"
#include "support/fixtures.hpp"

using namespace stripfold;
using testsupport::load_fixture;

namespace {

// Representative leaf for a vertex of the graph.
LeafDescriptor leaf_for(const LeafSpaceGraph& g, int v) {
  const LeafVertex& lv = g.vertices[v];
  if (lv.kind == VertexKind::Arc) return ArcLeaf{lv.gluing};
  return BoundaryLeaf{lv.strip, lv.side};
}

bool closure_has(const std::vector<YPoint>& cl, const YPoint& p) {
  return std::find(cl.begin(), cl.end(), p) != cl.end();
}

}  // namespace

TEST_CASE("leaf space of M0: an interval with one interior branch-free vertex") {
  StripModel m = load_fixture("M0.model");
  LeafSpaceGraph g = build_leaf_space(m);
  CHECK(g.edges == std::vector<std::string>{"s1", "s2"});
  REQUIRE(g.vertices.size() == 1);
  CHECK(g.vertices[0].kind == VertexKind::Arc);
  CHECK(g.ends_of(0).size() == 2);
  CHECK(g.nonseparated.empty());
  CHECK(special_points(g).empty());
  CHECK(hausdorff_closure(g, VertexPoint{0}) == std::vector<YPoint>{VertexPoint{0}});
  CHECK(hausdorff_closure(g, EdgePoint{0, Rat(1, 3)}) ==
        std::vector<YPoint>{EdgePoint{0, Rat(1, 3)}});
}

TEST_CASE("leaf space of M1: the line with two origins") {
  StripModel m = load_fixture("M1.model");
  LeafSpaceGraph g = build_leaf_space(m);
  CHECK(g.edges.size() == 2);
  REQUIRE(g.vertices.size() == 2);
  // Both vertices attach to (s1,top) and (s2,bottom) in arc order.
  std::vector<int> both{0, 1};
  CHECK(g.attachments.at({0, SideName::Top}) == both);
  CHECK(g.attachments.at({1, SideName::Bottom}) == both);
  CHECK(g.nonseparated == std::set<std::pair<int, int>>{{0, 1}});
  CHECK(special_points(g) == std::vector<int>{0, 1});

  auto cl = hausdorff_closure(g, VertexPoint{0});
  CHECK(cl.size() == 2);
  CHECK(closure_has(cl, VertexPoint{0}));
  CHECK(closure_has(cl, VertexPoint{1}));
}

TEST_CASE("leaf space of M2: non-separation is not transitive") {
  StripModel m = load_fixture("M2.model");
  LeafSpaceGraph g = build_leaf_space(m);
  REQUIRE(g.vertices.size() == 3);
  CHECK(g.nonseparated.count({0, 1}) == 1);
  CHECK(g.nonseparated.count({1, 2}) == 1);
  CHECK(g.nonseparated.count({0, 2}) == 0);
  CHECK(special_points(g) == std::vector<int>{0, 1, 2});
}

TEST_CASE("leaf space of M3: boundary vertices close off their edges") {
  StripModel m = load_fixture("M3.model");
  LeafSpaceGraph g = build_leaf_space(m);
  CHECK(g.edges.size() == 2);
  REQUIRE(g.vertices.size() == 3);
  CHECK(g.vertices[0].kind == VertexKind::Arc);
  CHECK(g.vertices[1].kind == VertexKind::Boundary);
  CHECK(g.vertices[2].kind == VertexKind::Boundary);
  CHECK(g.nonseparated.empty());
  CHECK(g.ends_of(0).size() == 2);
  CHECK(g.ends_of(1).size() == 1);
  CHECK(g.ends_of(2).size() == 1);

  // Doubling the same model doubles the edge count of the leaf space.
  LeafSpaceGraph gd = build_leaf_space(double_model(m).model);
  CHECK(gd.edges.size() == 2 * g.edges.size());
  CHECK(gd.nonseparated.empty());
}

TEST_CASE("hausdorff closure is symmetric and rejects unknown points") {
  for (const char* name : {"M0.model", "M1.model", "M2.model", "M3.model"}) {
    CAPTURE(name);
    StripModel m = load_fixture(name);
    LeafSpaceGraph g = build_leaf_space(m);
    std::vector<YPoint> pts;
    for (size_t v = 0; v < g.vertices.size(); ++v) pts.push_back(VertexPoint{(int)v});
    for (size_t e = 0; e < g.edges.size(); ++e) pts.push_back(EdgePoint{(int)e, Rat(1, 3)});
    for (const YPoint& u : pts)
      for (const YPoint& w : pts)
        CHECK(closure_has(hausdorff_closure(g, w), u) ==
              closure_has(hausdorff_closure(g, u), w));
  }
  LeafSpaceGraph g = build_leaf_space(load_fixture("M0.model"));
  CHECK_THROWS_AS(hausdorff_closure(g, VertexPoint{7}), std::invalid_argument);
  CHECK_THROWS_AS(hausdorff_closure(g, EdgePoint{0, Rat(2)}), std::invalid_argument);
  CHECK_THROWS_AS(hausdorff_closure(g, EdgePoint{5, Rat(1, 2)}), std::invalid_argument);
}

TEST_CASE("shrinking-neighborhood oracle matches the combinatorial relation") {
  for (const char* name : {"M0.model", "M1.model", "M2.model", "M3.model"}) {
    CAPTURE(name);
    StripModel m = load_fixture(name);
    LeafSpaceGraph g = build_leaf_space(m);
    for (size_t v = 0; v < g.vertices.size(); ++v) {
      for (size_t w = v + 1; w < g.vertices.size(); ++w) {
        bool combinatorial = g.nonseparated.count({(int)v, (int)w}) > 0;
        bool oracle = nonseparated_oracle(m, leaf_for(g, (int)v), leaf_for(g, (int)w), 20);
        CAPTURE(v);
        CAPTURE(w);
        CHECK(combinatorial == oracle);
      }
      // Vertices always separate from interior leaves...
      CHECK_FALSE(nonseparated_oracle(m, leaf_for(g, (int)v), InteriorLeaf{0, Rat(1, 2)}, 20));
    }
    // ...and interior leaves from each other.
    CHECK_FALSE(nonseparated_oracle(m, InteriorLeaf{0, Rat(1, 3)}, InteriorLeaf{0, Rat(1, 2)}, 20));
  }
}

TEST_CASE("the M0 oracle example separates at the first halving") {
  StripModel m = load_fixture("M0.model");
  // Default collar 1/2; at collar width 1/4 the neighborhoods (3/4,1) in s1
  // and (1/4,3/4) around the interior leaf miss each other.
  CHECK_FALSE(nonseparated_oracle(m, ArcLeaf{0}, InteriorLeaf{0, Rat(1, 2)}, 1));
  auto a = leaf_neighborhood(m, ArcLeaf{0}, Rat(1, 4));
  auto b = leaf_neighborhood(m, InteriorLeaf{0, Rat(1, 2)}, Rat(1, 4));
  CHECK_FALSE(sets_intersect(a, b));
  CHECK(a.heights.at(0) == std::vector<std::pair<Rat, Rat>>{{Rat(3, 4), Rat(1)}});
}

TEST_CASE("quotient projection is an open map on saturated images") {
  for (const char* name : {"M0.model", "M1.model", "M2.model", "M3.model"}) {
    CAPTURE(name);
    StripModel m = load_fixture(name);
    LeafSpaceGraph g = build_leaf_space(m);
    for (size_t gi = 0; gi < m.gluings.size(); ++gi) {
      SaturatedSet s = leaf_neighborhood(m, ArcLeaf{(int)gi}, Rat(1, 5));
      CHECK(y_image_is_open(g, s));
      YOpenSet img = project_saturated(g, s);
      CHECK(img.vertices.count((int)gi) == 1);
    }
    SaturatedSet rect = saturate_basic(m, RectBox{.strip = 0, .y_lo = Rat(1, 4), .y_hi = Rat(1, 2)});
    CHECK(y_image_is_open(g, rect));
    CHECK(project_saturated(g, rect).vertices.empty());
  }

  // A saturated set containing a vertex but no collar on one attached end has
  // a non-open image.
  StripModel m1 = load_fixture("M1.model");
  LeafSpaceGraph g1 = build_leaf_space(m1);
  SaturatedSet broken = leaf_neighborhood(m1, ArcLeaf{0}, Rat(1, 5));
  broken.heights.erase(1);
  CHECK_FALSE(y_image_is_open(g1, broken));
}

TEST_CASE("leaves are closed: complements are open saturated sets") {
  for (const char* name : {"M0.model", "M1.model", "M3.model"}) {
    CAPTURE(name);
    StripModel m = load_fixture(name);
    LeafSpaceGraph g = build_leaf_space(m);
    std::vector<LeafDescriptor> leaves{InteriorLeaf{0, Rat(1, 3)}};
    for (size_t v = 0; v < g.vertices.size(); ++v) leaves.push_back(leaf_for(g, (int)v));
    for (const LeafDescriptor& leaf : leaves) {
      SaturatedSet c = leaf_complement(m, leaf);
      CHECK_FALSE(c.contains_leaf(leaf));
      auto check = check_openness_by_sampling(m, c, 100);
      CAPTURE(check.failures.empty() ? "" : check.failures.front());
      CHECK(check.ok);
    }
  }
}

TEST_CASE("hypothesis report certifies the fibration hypotheses") {
  StripModel m0 = load_fixture("M0.model");
  auto r0 = hypothesis_report(m0, build_leaf_space(m0));
  CHECK(r0.ok());
  CHECK(r0.hausdorff);
  CHECK(r0.all_leaves_noncompact.value);
  CHECK_FALSE(r0.all_leaves_noncompact.certificate.empty());

  StripModel m1 = load_fixture("M1.model");
  auto r1 = hypothesis_report(m1, build_leaf_space(m1));
  CHECK(r1.ok());
  CHECK_FALSE(r1.hausdorff);

  StripModel m3 = load_fixture("M3.model");
  auto r3 = hypothesis_report(m3, build_leaf_space(m3));
  CHECK(r3.ok());
  CHECK(r3.hausdorff);
  CHECK(r3.locally_euclidean.value);
  CHECK(r3.locally_euclidean.certificate.find("2 boundary vertices") != std::string::npos);
}

TEST_CASE("graph export: deterministic dot and json round-trip") {
  StripModel m1 = load_fixture("M1.model");
  LeafSpaceGraph g = build_leaf_space(m1);

  std::string dot = export_graph(g, "dot");
  CHECK(dot.find("style=dashed") != std::string::npos);
  CHECK(dot.find("shape=box") != std::string::npos);
  CHECK(dot == export_graph(g, "dot"));

  std::string json = export_graph(g, "json");
  CHECK(json == export_graph(g, "json"));
  CHECK(graph_from_json(json) == g);

  for (const char* name : {"M0.model", "M2.model", "M3.model"}) {
    LeafSpaceGraph gg = build_leaf_space(load_fixture(name));
    CHECK(graph_from_json(export_graph(gg, "json")) == gg);
  }
  CHECK_THROWS_AS(export_graph(g, "yaml"), std::invalid_argument);
}

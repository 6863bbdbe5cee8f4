#include "stripfold/leafspace.hpp"

#include "json.hpp"

#include <algorithm>
#include <sstream>

namespace stripfold {

using ordered_json = nlohmann::ordered_json;

std::vector<SideEnd> LeafSpaceGraph::ends_of(int v) const {
  std::vector<SideEnd> out;
  for (const auto& [end, vs] : attachments)
    if (std::find(vs.begin(), vs.end(), v) != vs.end()) out.push_back(end);
  return out;
}

std::vector<int> LeafSpaceGraph::nonseparated_with(int v) const {
  std::vector<int> out;
  for (const auto& [a, b] : nonseparated) {
    if (a == v) out.push_back(b);
    if (b == v) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int LeafSpaceGraph::vertex_of(const LeafDescriptor& leaf) const {
  for (size_t i = 0; i < vertices.size(); ++i) {
    const LeafVertex& v = vertices[i];
    if (const auto* al = std::get_if<ArcLeaf>(&leaf)) {
      if (v.kind == VertexKind::Arc && v.gluing == al->gluing) return static_cast<int>(i);
    } else if (const auto* bl = std::get_if<BoundaryLeaf>(&leaf)) {
      if (v.kind == VertexKind::Boundary && v.strip == bl->strip && v.side == bl->side)
        return static_cast<int>(i);
    }
  }
  return -1;
}

LeafSpaceGraph build_leaf_space(const StripModel& m) {
  LeafSpaceGraph g;
  for (const Strip& s : m.strips) g.edges.push_back(s.name);

  for (size_t gi = 0; gi < m.gluings.size(); ++gi)
    g.vertices.push_back(LeafVertex{VertexKind::Arc, static_cast<int>(gi), -1, SideName::Bottom});
  for (size_t si = 0; si < m.strips.size(); ++si)
    for (SideName side : {SideName::Bottom, SideName::Top})
      if (m.side(static_cast<int>(si), side).kind == SideKind::Boundary)
        g.vertices.push_back(LeafVertex{VertexKind::Boundary, -1, static_cast<int>(si), side});

  // Attachment lists in arc order.  Arc vertices attach at both side ends of
  // their gluing; each Boundary side carries exactly its own vertex.
  for (size_t si = 0; si < m.strips.size(); ++si) {
    for (SideName side : {SideName::Bottom, SideName::Top}) {
      const Side& sd = m.side(static_cast<int>(si), side);
      SideEnd end{static_cast<int>(si), side};
      if (sd.kind == SideKind::Glued) {
        std::vector<std::pair<ExtRat, int>> order;
        for (size_t gi = 0; gi < m.gluings.size(); ++gi)
          for (const ArcRef& r : {m.gluings[gi].a, m.gluings[gi].b})
            if (r.strip == static_cast<int>(si) && r.side == side)
              order.emplace_back(m.arc(r).lo, static_cast<int>(gi));
        std::sort(order.begin(), order.end());
        std::vector<int> vs;
        for (const auto& [lo, gi] : order) vs.push_back(gi);
        g.attachments[end] = std::move(vs);
      } else if (sd.kind == SideKind::Boundary) {
        g.attachments[end] = {
            g.vertex_of(BoundaryLeaf{static_cast<int>(si), side})};
      }
    }
  }

  for (const auto& [end, vs] : g.attachments)
    for (size_t i = 0; i < vs.size(); ++i)
      for (size_t j = i + 1; j < vs.size(); ++j)
        g.nonseparated.insert({std::min(vs[i], vs[j]), std::max(vs[i], vs[j])});
  return g;
}

YPoint project_leaf(const LeafSpaceGraph& g, const LeafDescriptor& leaf) {
  if (const auto* il = std::get_if<InteriorLeaf>(&leaf)) return EdgePoint{il->strip, il->y};
  int v = g.vertex_of(leaf);
  if (v < 0) throw std::invalid_argument("project_leaf: leaf has no vertex in this graph");
  return VertexPoint{v};
}

std::vector<YPoint> hausdorff_closure(const LeafSpaceGraph& g, const YPoint& u) {
  if (const auto* ep = std::get_if<EdgePoint>(&u)) {
    if (ep->strip < 0 || ep->strip >= static_cast<int>(g.edges.size()) || !(ep->y > 0) ||
        !(ep->y < 1))
      throw std::invalid_argument("hausdorff_closure: unknown point");
    return {u};
  }
  int v = std::get<VertexPoint>(u).vertex;
  if (v < 0 || v >= static_cast<int>(g.vertices.size()))
    throw std::invalid_argument("hausdorff_closure: unknown point");
  std::vector<YPoint> out{u};
  for (int w : g.nonseparated_with(v)) out.push_back(VertexPoint{w});
  return out;
}

std::vector<int> special_points(const LeafSpaceGraph& g) {
  std::vector<int> out;
  for (size_t v = 0; v < g.vertices.size(); ++v)
    if (g.is_special(static_cast<int>(v))) out.push_back(static_cast<int>(v));
  return out;
}

SaturatedSet leaf_neighborhood(const StripModel& m, const LeafDescriptor& leaf,
                               const Rat& collar) {
  if (!(collar > 0)) throw std::invalid_argument("leaf_neighborhood: collar must be positive");
  if (const auto* il = std::get_if<InteriorLeaf>(&leaf)) {
    Rat lo = rat_max(il->y - collar, Rat(0));
    Rat hi = rat_min(il->y + collar, Rat(1));
    return saturate_basic(m, RectBox{.strip = il->strip, .y_lo = lo, .y_hi = hi});
  }
  if (const auto* al = std::get_if<ArcLeaf>(&leaf)) {
    const Arc& arc = m.arc(m.gluings.at(al->gluing).a);
    return saturate_basic(m, ArcCollarBox{al->gluing, arc.lo, arc.hi, collar, collar});
  }
  const auto& bl = std::get<BoundaryLeaf>(leaf);
  return saturate_basic(m, BoundaryCollarBox{.strip = bl.strip, .side = bl.side, .collar = collar});
}

bool nonseparated_oracle(const StripModel& m, const LeafDescriptor& A, const LeafDescriptor& B,
                         int depth) {
  if (depth <= 0) throw std::invalid_argument("nonseparated_oracle: depth must be positive");
  Rat eps = m.default_collar();
  for (int k = 1; k <= depth; ++k) {
    eps /= 2;
    if (!sets_intersect(leaf_neighborhood(m, A, eps), leaf_neighborhood(m, B, eps))) return false;
  }
  return true;
}

SaturatedSet leaf_complement(const StripModel& m, const LeafDescriptor& leaf) {
  SaturatedSet out;
  for (size_t si = 0; si < m.strips.size(); ++si)
    out.heights[static_cast<int>(si)] = {{Rat(0), Rat(1)}};
  for (size_t gi = 0; gi < m.gluings.size(); ++gi) out.arc_leaves.insert(static_cast<int>(gi));
  for (size_t si = 0; si < m.strips.size(); ++si)
    for (SideName side : {SideName::Bottom, SideName::Top})
      if (m.side(static_cast<int>(si), side).kind == SideKind::Boundary)
        out.boundary_leaves.insert({static_cast<int>(si), side});

  if (const auto* il = std::get_if<InteriorLeaf>(&leaf))
    out.heights[il->strip] = {{Rat(0), il->y}, {il->y, Rat(1)}};
  else if (const auto* al = std::get_if<ArcLeaf>(&leaf))
    out.arc_leaves.erase(al->gluing);
  else {
    const auto& bl = std::get<BoundaryLeaf>(leaf);
    out.boundary_leaves.erase({bl.strip, bl.side});
  }
  out.normalize();
  return out;
}

YOpenSet project_saturated(const LeafSpaceGraph& g, const SaturatedSet& s) {
  YOpenSet out;
  out.edge_intervals = s.heights;
  for (int gl : s.arc_leaves) out.vertices.insert(g.vertex_of(ArcLeaf{gl}));
  for (const auto& [strip, side] : s.boundary_leaves)
    out.vertices.insert(g.vertex_of(BoundaryLeaf{strip, side}));
  return out;
}

namespace {

bool has_adjacent_interval(const SaturatedSet& s, const SideEnd& end) {
  auto it = s.heights.find(end.first);
  if (it == s.heights.end()) return false;
  for (const auto& iv : it->second) {
    if (end.second == SideName::Top && iv.second == 1) return true;
    if (end.second == SideName::Bottom && iv.first == 0) return true;
  }
  return false;
}

}  // namespace

bool y_image_is_open(const LeafSpaceGraph& g, const SaturatedSet& s) {
  YOpenSet img = project_saturated(g, s);
  for (int v : img.vertices) {
    if (v < 0) return false;
    for (const SideEnd& end : g.ends_of(v))
      if (!has_adjacent_interval(s, end)) return false;
  }
  return true;
}

HypothesisReport hypothesis_report(const StripModel& m, const LeafSpaceGraph& g) {
  HypothesisReport r;

  size_t interior_families = m.strips.size();
  size_t arcs = m.gluings.size();
  size_t boundaries = g.vertices.size() - arcs;
  {
    std::ostringstream c;
    c << "all leaf types parametrized by open intervals: " << interior_families
      << " strip interiors, " << arcs << " arc leaves, " << boundaries << " boundary leaves";
    r.all_leaves_noncompact = {true, c.str()};
  }
  {
    std::ostringstream c;
    c << "finitely many vertices: " << g.vertices.size() << " candidate special leaves";
    r.special_family_locally_finite = {true, c.str()};
  }
  r.t1 = {true, "every leaf is closed: its complement is a saturated open set"};
  r.hausdorff = special_points(g).empty();

  bool euclid = true;
  std::ostringstream notes;
  int half_charts = 0;
  for (size_t v = 0; v < g.vertices.size(); ++v) {
    size_t ends = g.ends_of(static_cast<int>(v)).size();
    if (g.vertices[v].kind == VertexKind::Arc && ends != 2) euclid = false;
    if (g.vertices[v].kind == VertexKind::Boundary) {
      if (ends != 1) euclid = false;
      ++half_charts;
    }
  }
  notes << "every arc vertex joins 2 edge ends (chart to R); " << half_charts
        << " boundary vertices with 1 end (chart to R+)";
  r.locally_euclidean = {euclid, notes.str()};
  return r;
}

namespace {

std::string vertex_label(const LeafSpaceGraph& g, int v) {
  const LeafVertex& lv = g.vertices[v];
  if (lv.kind == VertexKind::Arc) return "g" + std::to_string(lv.gluing);
  return g.edges[lv.strip] + "." + side_name_str(lv.side);
}

std::string graph_to_dot(const LeafSpaceGraph& g) {
  std::ostringstream out;
  out << "graph leafspace {\n";
  out << "  node [fontsize=10];\n";
  for (size_t e = 0; e < g.edges.size(); ++e)
    out << "  e" << e << " [shape=box, label=\"" << g.edges[e] << "\"];\n";
  for (size_t v = 0; v < g.vertices.size(); ++v)
    out << "  v" << v << " [shape=circle, label=\"" << vertex_label(g, static_cast<int>(v))
        << "\"];\n";
  for (const auto& [end, vs] : g.attachments)
    for (int v : vs)
      out << "  e" << end.first << " -- v" << v << " [label=\"" << side_name_str(end.second)
          << "\"];\n";
  for (const auto& [a, b] : g.nonseparated)
    out << "  v" << a << " -- v" << b << " [style=dashed, constraint=false];\n";
  out << "}\n";
  return out.str();
}

std::string graph_to_json(const LeafSpaceGraph& g) {
  ordered_json j;
  j["edges"] = g.edges;
  j["vertices"] = ordered_json::array();
  for (const LeafVertex& v : g.vertices) {
    ordered_json jv;
    if (v.kind == VertexKind::Arc) {
      jv["kind"] = "arc";
      jv["gluing"] = v.gluing;
    } else {
      jv["kind"] = "boundary";
      jv["strip"] = v.strip;
      jv["side"] = side_name_str(v.side);
    }
    j["vertices"].push_back(jv);
  }
  j["attachments"] = ordered_json::array();
  for (const auto& [end, vs] : g.attachments) {
    ordered_json ja;
    ja["strip"] = end.first;
    ja["side"] = side_name_str(end.second);
    ja["vertices"] = vs;
    j["attachments"].push_back(ja);
  }
  j["nonseparated"] = ordered_json::array();
  for (const auto& [a, b] : g.nonseparated) j["nonseparated"].push_back({a, b});
  return j.dump(2) + "\n";
}

SideName parse_side_name(const std::string& s) {
  if (s == "bottom") return SideName::Bottom;
  if (s == "top") return SideName::Top;
  throw std::invalid_argument("unknown side name: " + s);
}

}  // namespace

std::string export_graph(const LeafSpaceGraph& g, const std::string& format) {
  if (format == "dot") return graph_to_dot(g);
  if (format == "json") return graph_to_json(g);
  throw std::invalid_argument("export_graph: unknown format: " + format);
}

LeafSpaceGraph graph_from_json(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  LeafSpaceGraph g;
  g.edges = j.at("edges").get<std::vector<std::string>>();
  for (const auto& jv : j.at("vertices")) {
    LeafVertex v;
    if (jv.at("kind") == "arc") {
      v.kind = VertexKind::Arc;
      v.gluing = jv.at("gluing").get<int>();
    } else {
      v.kind = VertexKind::Boundary;
      v.strip = jv.at("strip").get<int>();
      v.side = parse_side_name(jv.at("side").get<std::string>());
    }
    g.vertices.push_back(v);
  }
  for (const auto& ja : j.at("attachments"))
    g.attachments[{ja.at("strip").get<int>(), parse_side_name(ja.at("side").get<std::string>())}] =
        ja.at("vertices").get<std::vector<int>>();
  for (const auto& jp : j.at("nonseparated"))
    g.nonseparated.insert({jp.at(0).get<int>(), jp.at(1).get<int>()});
  return g;
}

}  // namespace stripfold

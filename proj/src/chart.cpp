#include "stripfold/chart.hpp"

#include "stripfold/leafspace.hpp"

#include <json.hpp>

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace stripfold {

using ordered_json = nlohmann::ordered_json;

// --- chart construction -------------------------------------------------------

TrivChart trivialize_leaf_neighborhood(const StripModel& m, const LeafDescriptor& leaf) {
  CrossSection sec = cross_section_through(m, leaf);
  SaturatedSet sat = sec.frame.saturation();
  return TrivChart{std::move(sec.frame), std::move(sat), std::nullopt, nullptr};
}

CrossSection section_from_chart(const TrivChart& chart, const Rat& s) {
  if (chart.fiber_bounds &&
      !(chart.fiber_bounds->first < s && s < chart.fiber_bounds->second))
    throw std::invalid_argument("section_from_chart: s outside fiber range");
  Rat center = chart.frame.base_center();
  return CrossSection{chart.frame, s, chart.frame.leaf_at(center), chart.frame.pos_at(s, center)};
}

TrivAtlas build_atlas(const StripModel& m) { return build_atlas(m, m.default_collar(), Rat(1)); }

TrivAtlas build_atlas(const StripModel& m, const Rat& collar, const Rat& spacing) {
  if (!(collar > 0) || collar > m.default_collar())
    throw std::invalid_argument("build_atlas: collar outside (0, default collar]");
  if (!(spacing > 0)) throw std::invalid_argument("build_atlas: spacing must be positive");
  TrivAtlas atlas;
  const Rat& eps = collar;
  auto push = [&atlas](FiberedFrame f) {
    SaturatedSet sat = f.saturation();
    atlas.charts.push_back(TrivChart{std::move(f), std::move(sat), std::nullopt, nullptr});
  };
  for (size_t s = 0; s < m.strips.size(); ++s) {
    // Slab between the side collars; reaches the open boundary when a side is
    // unglued, so the slabs plus the tubes cover everything.
    Rat lo = m.side(static_cast<int>(s), SideName::Bottom).kind == SideKind::Open ? Rat(0)
                                                                                 : eps / 2;
    Rat hi = m.side(static_cast<int>(s), SideName::Top).kind == SideKind::Open ? Rat(1)
                                                                               : 1 - eps / 2;
    push(strip_frame(m, static_cast<int>(s), lo, hi, spacing));
  }
  for (size_t g = 0; g < m.gluings.size(); ++g)
    push(vertex_frame(m, static_cast<int>(g), eps, spacing));
  for (size_t s = 0; s < m.strips.size(); ++s)
    for (SideName side : {SideName::Bottom, SideName::Top})
      if (m.side(static_cast<int>(s), side).kind == SideKind::Boundary)
        push(boundary_frame(m, static_cast<int>(s), side, eps, spacing));
  return atlas;
}

// --- grid verification --------------------------------------------------------

namespace {

std::vector<Rat> fiber_grid(int n, const Rat& half_span) {
  std::vector<Rat> ts;
  ts.reserve(n);
  for (int k = 0; k < n; ++k) ts.push_back(-half_span + 2 * half_span * Rat(k, n - 1));
  return ts;
}

std::vector<Rat> base_grid(const FiberedFrame& f, int n) {
  auto [lo, hi] = f.base_range();
  std::vector<Rat> us;
  us.reserve(n);
  // Strictly interior points, except that a boundary base keeps its closed
  // end.  Odd counts hit the center, so vertex grids include the arc leaf.
  int first = f.base_includes_lo() ? 0 : 1;
  for (int j = first; j < first + n; ++j) us.push_back(lo + (hi - lo) * Rat(j, n + 1));
  return us;
}

std::string grid_label(const StripModel& m, const Rat& t, const Rat& u, const ModelPoint& pt) {
  return "t=" + to_string(t) + " u=" + to_string(u) + " -> " + point_to_string(m, pt);
}

CheckResult make_check(const char* name) {
  CheckResult c;
  c.name = name;
  return c;
}

}  // namespace

GridReport verify_trivialization(const StripModel& m, const TrivChart& chart, int grid_n) {
  if (grid_n < 2) throw std::invalid_argument("verify_trivialization: grid too small");
  const FiberedFrame& f = chart.frame;

  CheckResult valid = make_check("valid points");
  CheckResult insat = make_check("inside the saturation");
  CheckResult leafconst = make_check("leaf constant along fibers");
  CheckResult mono = make_check("fiber strictly monotone");
  CheckResult distinct = make_check("distinct leaves across the base");
  CheckResult roundtrip = make_check("exact inverse round-trip");
  CheckResult exhaust = make_check("leaf exhaustion");

  std::vector<Rat> ts = fiber_grid(grid_n, Rat(5));
  std::vector<Rat> us = base_grid(f, grid_n);

  std::set<std::string> leaves_seen;
  for (const Rat& u : us) {
    std::string expected_leaf = leaf_to_string(m, f.leaf_at(u));
    leaves_seen.insert(expected_leaf);
    bool have_prev = false;
    Rat prev_pos;
    for (const Rat& t : ts) {
      ModelPoint pt = chart.eval(t, u);

      ++valid.samples;
      try {
        check_point(m, pt);
      } catch (const std::invalid_argument& e) {
        record_failure(valid, grid_label(m, t, u, pt) + ": " + e.what());
      }

      ++insat.samples;
      if (!chart.saturation.contains_point(m, pt))
        record_failure(insat, grid_label(m, t, u, pt));

      ++leafconst.samples;
      if (leaf_to_string(m, leaf_of(m, pt)) != expected_leaf)
        record_failure(leafconst, grid_label(m, t, u, pt) + " expected leaf " + expected_leaf);

      ++mono.samples;
      auto loc = f.locate(pt);
      if (!loc) {
        record_failure(mono, grid_label(m, t, u, pt) + ": not locatable");
      } else {
        if (have_prev && !(prev_pos < loc->second))
          record_failure(mono, grid_label(m, t, u, pt) + ": position did not advance");
        prev_pos = loc->second;
        have_prev = true;
      }

      ++roundtrip.samples;
      auto inv = chart.invert(pt);
      if (!inv || inv->first != t || inv->second != u)
        record_failure(roundtrip, grid_label(m, t, u, pt) + ": inverse mismatch");
    }
  }

  distinct.samples = static_cast<long>(us.size());
  if (leaves_seen.size() != us.size())
    record_failure(distinct, "only " + std::to_string(leaves_seen.size()) + " leaves over " +
                                 std::to_string(us.size()) + " base points");

  // Beyond every bound in proper leaf coordinates, in both directions, for a
  // spread of base points.
  const Rat bound(1000);
  size_t stride = std::max<size_t>(1, us.size() / 8);
  for (size_t idx = 0; idx < us.size(); idx += stride) {
    const Rat& u = us[idx];
    for (int dir : {1, -1}) {
      ++exhaust.samples;
      bool escaped = false;
      for (int k = 0; k <= 60 && !escaped; ++k) {
        Rat step{BigInt(1) << k};
        Rat t = dir > 0 ? step : Rat(-step);
        auto loc = f.locate(chart.eval(t, u));
        if (!loc) break;
        Rat p = f.leaf_param(u, loc->second);
        escaped = dir > 0 ? p > bound : p < -bound;
      }
      if (!escaped)
        record_failure(exhaust, "u=" + to_string(u) + (dir > 0 ? " right" : " left") +
                                    " half-leaf not exhausted");
    }
  }

  return GridReport{{valid, insat, leafconst, mono, distinct, roundtrip, exhaust}};
}

namespace {

// Height interval a tube chart occupies in the given strip.
std::pair<Rat, Rat> collar_interval(SideName side, const Rat& eps) {
  return side == SideName::Top ? std::pair<Rat, Rat>{1 - eps, Rat(1)}
                               : std::pair<Rat, Rat>{Rat(0), eps};
}

}  // namespace

GridReport verify_atlas(const StripModel& m, const TrivAtlas& atlas, int grid_n,
                        int transition_n) {
  if (transition_n < 2) throw std::invalid_argument("verify_atlas: transition grid too small");
  GridReport report;
  for (size_t i = 0; i < atlas.charts.size(); ++i) {
    GridReport one = verify_trivialization(m, atlas.charts[i], grid_n);
    for (CheckResult& c : one.checks) {
      c.name = "chart" + std::to_string(i) + ": " + c.name;
      report.checks.push_back(std::move(c));
    }
  }

  // Base cover: the chart bases, pushed to height intervals per strip, must
  // cover every transversal, and every arc / boundary leaf must lie in some
  // chart.
  CheckResult cover = make_check("bases cover the leaf space");
  std::map<int, std::vector<std::pair<Rat, Rat>>> bands;
  for (const TrivChart& c : atlas.charts) {
    const FiberedFrame& f = c.frame;
    switch (f.kind) {
      case FrameKind::Strip:
        bands[f.strip].push_back({f.base_lo, f.base_hi});
        break;
      case FrameKind::Vertex: {
        const Gluing& g = f.model.gluings.at(f.gluing);
        bands[g.a.strip].push_back(collar_interval(g.a.side, f.eps));
        bands[g.b.strip].push_back(collar_interval(g.b.side, f.eps));
        break;
      }
      case FrameKind::Boundary:
        bands[f.strip].push_back(collar_interval(f.side, f.eps));
        break;
      case FrameKind::Chain:
        for (const ChainLink& link : f.links) bands[link.strip].push_back({Rat(0), Rat(1)});
        break;
    }
  }
  for (size_t s = 0; s < m.strips.size(); ++s) {
    ++cover.samples;
    const auto& ivs = bands[static_cast<int>(s)];
    Rat reach(0);
    while (reach < 1) {
      Rat best = reach;
      for (const auto& [lo, hi] : ivs)
        if ((reach == 0 ? lo == 0 : lo < reach) && hi > best) best = hi;
      if (best == reach) break;
      reach = best;
    }
    if (reach < 1)
      record_failure(cover, "strip " + m.strips[s].name + " uncovered above height " +
                                to_string(reach));
  }
  for (size_t g = 0; g < m.gluings.size(); ++g) {
    ++cover.samples;
    LeafDescriptor leaf = ArcLeaf{static_cast<int>(g)};
    if (!std::any_of(atlas.charts.begin(), atlas.charts.end(),
                     [&](const TrivChart& c) { return c.saturation.contains_leaf(leaf); }))
      record_failure(cover, leaf_to_string(m, leaf) + " in no chart");
  }
  for (size_t s = 0; s < m.strips.size(); ++s)
    for (SideName side : {SideName::Bottom, SideName::Top}) {
      if (m.side(static_cast<int>(s), side).kind != SideKind::Boundary) continue;
      ++cover.samples;
      LeafDescriptor leaf = BoundaryLeaf{static_cast<int>(s), side};
      if (!std::any_of(atlas.charts.begin(), atlas.charts.end(),
                       [&](const TrivChart& c) { return c.saturation.contains_leaf(leaf); }))
        record_failure(cover, leaf_to_string(m, leaf) + " in no chart");
    }
  report.checks.push_back(std::move(cover));

  // Transitions: wherever chart j sees a point of chart i, inverting there
  // must succeed, preserve fibers (base coordinate independent of t) and
  // reproduce the point exactly.
  CheckResult trans = make_check("fiber-preserving transitions");
  std::vector<Rat> ts = fiber_grid(transition_n, Rat(3));
  for (size_t i = 0; i < atlas.charts.size(); ++i) {
    for (size_t j = 0; j < atlas.charts.size(); ++j) {
      if (i == j) continue;
      const TrivChart& ci = atlas.charts[i];
      const TrivChart& cj = atlas.charts[j];
      if (!sets_intersect(ci.saturation, cj.saturation)) continue;
      std::string pair_tag = "chart" + std::to_string(i) + "->chart" + std::to_string(j) + " ";
      for (const Rat& u : base_grid(ci.frame, transition_n)) {
        std::optional<Rat> u_under_j;
        for (const Rat& t : ts) {
          ModelPoint pt = ci.eval(t, u);
          if (!cj.saturation.contains_point(m, pt)) continue;
          ++trans.samples;
          auto loc = cj.invert(pt);
          if (!loc) {
            record_failure(trans, pair_tag + grid_label(m, t, u, pt) + ": not invertible");
            continue;
          }
          if (u_under_j && *u_under_j != loc->second)
            record_failure(trans, pair_tag + grid_label(m, t, u, pt) + ": base drifts with t");
          u_under_j = loc->second;
          ModelPoint back = cj.eval(loc->first, loc->second);
          if (!(back == pt))
            record_failure(trans, pair_tag + grid_label(m, t, u, pt) + ": round-trip mismatch");
        }
      }
    }
  }
  report.checks.push_back(std::move(trans));
  return report;
}

// --- serialization ------------------------------------------------------------

namespace {

const char* kind_str(FrameKind k) {
  switch (k) {
    case FrameKind::Strip: return "strip";
    case FrameKind::Vertex: return "vertex";
    case FrameKind::Boundary: return "boundary";
    case FrameKind::Chain: return "chain";
  }
  throw std::logic_error("unreachable");
}

SideName side_from_str(const std::string& s) {
  if (s == "bottom") return SideName::Bottom;
  if (s == "top") return SideName::Top;
  throw std::invalid_argument("atlas_from_json: bad side name '" + s + "'");
}

ordered_json saturation_to_json(const SaturatedSet& s) {
  ordered_json j;
  ordered_json heights = ordered_json::object();
  for (const auto& [strip, ivs] : s.heights) {
    ordered_json list = ordered_json::array();
    for (const auto& [lo, hi] : ivs) list.push_back({to_string(lo), to_string(hi)});
    heights[std::to_string(strip)] = std::move(list);
  }
  j["heights"] = std::move(heights);
  j["arc_leaves"] = s.arc_leaves;
  ordered_json bl = ordered_json::array();
  for (const auto& [strip, side] : s.boundary_leaves)
    bl.push_back({strip, side_name_str(side)});
  j["boundary_leaves"] = std::move(bl);
  return j;
}

SaturatedSet saturation_from_json(const ordered_json& j) {
  SaturatedSet s;
  for (const auto& [key, list] : j.at("heights").items()) {
    auto& ivs = s.heights[std::stoi(key)];
    for (const auto& iv : list)
      ivs.push_back({parse_rational(iv.at(0).get<std::string>()),
                     parse_rational(iv.at(1).get<std::string>())});
  }
  for (const auto& g : j.at("arc_leaves")) s.arc_leaves.insert(g.get<int>());
  for (const auto& b : j.at("boundary_leaves"))
    s.boundary_leaves.insert({b.at(0).get<int>(), side_from_str(b.at(1).get<std::string>())});
  return s;
}

}  // namespace

std::string atlas_to_json(const StripModel& m, const TrivAtlas& atlas) {
  ordered_json root;
  root["model"] = model_to_text(m);
  ordered_json charts = ordered_json::array();
  for (const TrivChart& c : atlas.charts) {
    const FiberedFrame& f = c.frame;
    ordered_json j;
    j["kind"] = kind_str(f.kind);
    j["eps"] = to_string(f.eps);
    j["spacing"] = to_string(f.spacing);
    j["x0"] = to_string(f.x0);
    switch (f.kind) {
      case FrameKind::Strip:
        j["strip"] = f.strip;
        j["base_lo"] = to_string(f.base_lo);
        j["base_hi"] = to_string(f.base_hi);
        break;
      case FrameKind::Vertex:
        j["gluing"] = f.gluing;
        break;
      case FrameKind::Boundary:
        j["strip"] = f.strip;
        j["side"] = side_name_str(f.side);
        break;
      case FrameKind::Chain: {
        ordered_json links = ordered_json::array();
        for (const ChainLink& link : f.links)
          links.push_back({{"strip", link.strip},
                           {"slope", to_string(link.to_strip.slope)},
                           {"offset", to_string(link.to_strip.offset)},
                           {"up", link.up}});
        j["links"] = std::move(links);
        ordered_json joins = ordered_json::array();
        for (const ChainJoin& jn : f.joins)
          joins.push_back({{"gluing", jn.gluing},
                           {"arc_link", jn.arc_link},
                           {"lo", to_string(jn.lo)},
                           {"hi", to_string(jn.hi)}});
        j["joins"] = std::move(joins);
        break;
      }
    }
    if (c.fiber_bounds)
      j["fiber_bounds"] = {to_string(c.fiber_bounds->first), to_string(c.fiber_bounds->second)};
    j["saturation"] = saturation_to_json(c.saturation);
    charts.push_back(std::move(j));
  }
  root["charts"] = std::move(charts);
  return root.dump(2) + "\n";
}

std::pair<StripModel, TrivAtlas> atlas_from_json(const std::string& text) {
  ordered_json root = ordered_json::parse(text);
  StripModel m = parse_model(root.at("model").get<std::string>());
  TrivAtlas atlas;
  for (const auto& j : root.at("charts")) {
    std::string kind = j.at("kind").get<std::string>();
    Rat eps = parse_rational(j.at("eps").get<std::string>());
    Rat spacing = parse_rational(j.at("spacing").get<std::string>());
    Rat x0 = parse_rational(j.at("x0").get<std::string>());
    FiberedFrame f;
    if (kind == "strip") {
      f = strip_frame(m, j.at("strip").get<int>(),
                      parse_rational(j.at("base_lo").get<std::string>()),
                      parse_rational(j.at("base_hi").get<std::string>()), spacing, x0);
    } else if (kind == "vertex") {
      f = vertex_frame(m, j.at("gluing").get<int>(), eps, spacing);
      f.x0 = x0;
    } else if (kind == "boundary") {
      f = boundary_frame(m, j.at("strip").get<int>(),
                         side_from_str(j.at("side").get<std::string>()), eps, spacing);
      f.x0 = x0;
    } else if (kind == "chain") {
      f.kind = FrameKind::Chain;
      f.model = m;
      f.eps = eps;
      f.spacing = spacing;
      f.x0 = x0;
      for (const auto& lj : j.at("links"))
        f.links.push_back(ChainLink{lj.at("strip").get<int>(),
                                    AffineMap{parse_rational(lj.at("slope").get<std::string>()),
                                              parse_rational(lj.at("offset").get<std::string>())},
                                    lj.at("up").get<bool>()});
      for (const auto& jj : j.at("joins"))
        f.joins.push_back(ChainJoin{jj.at("gluing").get<int>(), jj.at("arc_link").get<int>(),
                                    parse_ext_rational(jj.at("lo").get<std::string>()),
                                    parse_ext_rational(jj.at("hi").get<std::string>())});
      if (f.links.empty()) throw std::invalid_argument("atlas_from_json: empty chain");
    } else {
      throw std::invalid_argument("atlas_from_json: unknown chart kind '" + kind + "'");
    }
    f.eps = eps;
    TrivChart chart{std::move(f), saturation_from_json(j.at("saturation")), std::nullopt, nullptr};
    if (j.contains("fiber_bounds"))
      chart.fiber_bounds = {{parse_rational(j.at("fiber_bounds").at(0).get<std::string>()),
                             parse_rational(j.at("fiber_bounds").at(1).get<std::string>())}};
    atlas.charts.push_back(std::move(chart));
  }
  return {std::move(m), std::move(atlas)};
}

// --- Kaplan decomposition -----------------------------------------------------

namespace {

ExtRat apply_ext(const AffineMap& f, const ExtRat& x) {
  if (x.is_finite()) return ExtRat(f(x.finite()));
  bool positive = x.is_pos_inf();
  if (f.slope < 0) positive = !positive;
  return positive ? ExtRat::pos_inf() : ExtRat::neg_inf();
}

std::pair<ExtRat, ExtRat> apply_ext_interval(const AffineMap& f, const ExtRat& lo,
                                             const ExtRat& hi) {
  ExtRat a = apply_ext(f, lo), b = apply_ext(f, hi);
  if (b < a) std::swap(a, b);
  return {a, b};
}

int uf_find(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

KaplanDecomposition kaplan_decomposition(const StripModel& m) {
  LeafSpaceGraph g = build_leaf_space(m);
  KaplanDecomposition out;

  std::set<int> special_gluings;
  for (int v : special_points(g)) {
    const LeafVertex& lv = g.vertices.at(v);
    if (lv.kind == VertexKind::Arc) {
      special_gluings.insert(lv.gluing);
      out.special_leaves.push_back(ArcLeaf{lv.gluing});
    } else {
      out.special_leaves.push_back(BoundaryLeaf{lv.strip, lv.side});
    }
  }
  for (size_t s = 0; s < m.strips.size(); ++s)
    for (SideName side : {SideName::Bottom, SideName::Top})
      if (m.side(static_cast<int>(s), side).kind == SideKind::Boundary)
        out.boundary_cuts.push_back(BoundaryLeaf{static_cast<int>(s), side});

  // Merge strips across non-special gluings, in gluing order; a join that
  // would close a cycle is cut instead, keeping every component a chain.
  std::vector<int> parent(m.strips.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<int> kept;
  for (size_t gi = 0; gi < m.gluings.size(); ++gi) {
    if (special_gluings.count(static_cast<int>(gi))) continue;
    const Gluing& gl = m.gluings[gi];
    int ra = uf_find(parent, gl.a.strip), rb = uf_find(parent, gl.b.strip);
    if (ra == rb) {
      out.extra_cuts.push_back(static_cast<int>(gi));
      continue;
    }
    parent[ra] = rb;
    kept.push_back(static_cast<int>(gi));
  }

  std::vector<std::vector<std::pair<int, int>>> adj(m.strips.size());  // (gluing, other strip)
  for (int gi : kept) {
    const Gluing& gl = m.gluings[gi];
    adj[gl.a.strip].push_back({gi, gl.b.strip});
    adj[gl.b.strip].push_back({gi, gl.a.strip});
  }

  std::map<int, std::vector<int>> groups;  // root -> member strips, ascending
  for (size_t s = 0; s < m.strips.size(); ++s)
    groups[uf_find(parent, static_cast<int>(s))].push_back(static_cast<int>(s));
  std::vector<std::vector<int>> comps;
  for (auto& [root, members] : groups) comps.push_back(members);
  std::sort(comps.begin(), comps.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              return a.front() < b.front();
            });

  for (const std::vector<int>& members : comps) {
    // Acyclic with every strip on at most one join per side, so the component
    // is a path; walk it from its smallest-index endpoint.
    int start = -1;
    for (int s : members)
      if (adj[s].size() <= 1) {
        start = s;
        break;
      }
    if (start < 0) throw std::logic_error("kaplan_decomposition: component is not a chain");

    std::vector<int> path_strips, path_joins;
    int prev_join = -1, cur = start;
    while (true) {
      path_strips.push_back(cur);
      int next_join = -1, next_strip = -1;
      for (const auto& [gi, other] : adj[cur])
        if (gi != prev_join) {
          next_join = gi;
          next_strip = other;
          break;
        }
      if (next_join < 0) break;
      path_joins.push_back(next_join);
      prev_join = next_join;
      cur = next_strip;
    }

    FiberedFrame f;
    f.kind = FrameKind::Chain;
    f.model = m;
    f.eps = m.default_collar();
    AffineMap theta{Rat(1), Rat(0)};  // chain coordinates -> current strip
    for (size_t t = 0; t < path_strips.size(); ++t) {
      int s = path_strips[t];
      bool up = true;
      if (t < path_joins.size()) {
        const Gluing& gl = m.gluings[path_joins[t]];
        SideName exit_side = gl.a.strip == s ? gl.a.side : gl.b.side;
        up = exit_side == SideName::Top;
      } else if (t > 0) {
        const Gluing& gl = m.gluings[path_joins[t - 1]];
        SideName enter_side = gl.a.strip == s ? gl.a.side : gl.b.side;
        up = enter_side == SideName::Bottom;
      }
      f.links.push_back(ChainLink{s, theta, up});
      if (t < path_joins.size()) {
        int gi = path_joins[t];
        const Gluing& gl = m.gluings[gi];
        bool a_here = gl.a.strip == s;
        AffineMap alpha = affine_gluing_map(m, gi);
        AffineMap theta_next =
            a_here ? affine_compose(alpha, theta) : affine_compose(alpha.inverse(), theta);
        const AffineMap& theta_a = a_here ? theta : theta_next;
        const Arc& arc = m.arc(gl.a);
        auto [jlo, jhi] = apply_ext_interval(theta_a.inverse(), arc.lo, arc.hi);
        f.joins.push_back(
            ChainJoin{gi, a_here ? static_cast<int>(t) : static_cast<int>(t) + 1, jlo, jhi});
        theta = theta_next;
      }
    }

    SaturatedSet sat = f.saturation();
    out.components.push_back(
        KaplanComponent{path_strips, path_joins,
                        TrivChart{std::move(f), std::move(sat), std::nullopt, nullptr}});
  }
  return out;
}

}  // namespace stripfold

#include "stripfold/saturation.hpp"

#include <algorithm>
#include <sstream>

namespace stripfold {

namespace {

std::pair<Rat, Rat> collar_heights(SideName side, const Rat& eps) {
  return side == SideName::Top ? std::pair<Rat, Rat>{1 - eps, Rat(1)}
                               : std::pair<Rat, Rat>{Rat(0), eps};
}

void add_interval(SaturatedSet& s, int strip, Rat lo, Rat hi) {
  if (!(lo < hi)) return;
  s.heights[strip].emplace_back(std::move(lo), std::move(hi));
}

}  // namespace

void SaturatedSet::normalize() {
  for (auto it = heights.begin(); it != heights.end();) {
    auto& v = it->second;
    std::sort(v.begin(), v.end());
    std::vector<std::pair<Rat, Rat>> merged;
    for (auto& iv : v) {
      if (!(iv.first < iv.second)) continue;
      // Open intervals merge only on genuine overlap; touching ones stay
      // apart (their union misses the shared endpoint).
      if (!merged.empty() && iv.first < merged.back().second)
        merged.back().second = rat_max(merged.back().second, iv.second);
      else
        merged.push_back(iv);
    }
    v = std::move(merged);
    it = v.empty() ? heights.erase(it) : std::next(it);
  }
}

bool SaturatedSet::contains_leaf(const LeafDescriptor& leaf) const {
  if (const auto* il = std::get_if<InteriorLeaf>(&leaf)) {
    auto it = heights.find(il->strip);
    if (it == heights.end()) return false;
    for (const auto& iv : it->second)
      if (iv.first < il->y && il->y < iv.second) return true;
    return false;
  }
  if (const auto* al = std::get_if<ArcLeaf>(&leaf)) return arc_leaves.count(al->gluing) > 0;
  const auto& bl = std::get<BoundaryLeaf>(leaf);
  return boundary_leaves.count({bl.strip, bl.side}) > 0;
}

bool SaturatedSet::contains_point(const StripModel& m, const ModelPoint& pt) const {
  return contains_leaf(leaf_of(m, pt));
}

SaturatedSet saturate_basic(const StripModel& m, const BasicBox& box) {
  SaturatedSet out;
  if (const auto* r = std::get_if<RectBox>(&box)) {
    if (r->strip < 0 || r->strip >= static_cast<int>(m.strips.size()))
      throw std::invalid_argument("saturate_basic: unknown strip");
    if (!(r->x_lo < r->x_hi)) throw std::invalid_argument("saturate_basic: degenerate box");
    Rat lo = rat_max(r->y_lo, Rat(0));
    Rat hi = rat_min(r->y_hi, Rat(1));
    if (!(lo < hi)) throw std::invalid_argument("saturate_basic: degenerate box");
    add_interval(out, r->strip, lo, hi);
  } else if (const auto* a = std::get_if<ArcCollarBox>(&box)) {
    if (a->gluing < 0 || a->gluing >= static_cast<int>(m.gluings.size()))
      throw std::invalid_argument("saturate_basic: unknown gluing");
    const Gluing& g = m.gluings[a->gluing];
    const Arc& arc = m.arc(g.a);
    if (!(a->s_lo < a->s_hi) || a->s_lo < arc.lo || arc.hi < a->s_hi)
      throw std::invalid_argument("saturate_basic: degenerate box (sub-arc)");
    if (!(a->collar_a > 0 && a->collar_a <= 1 && a->collar_b > 0 && a->collar_b <= 1))
      throw std::invalid_argument("saturate_basic: degenerate box (collar)");
    out.arc_leaves.insert(a->gluing);
    auto [alo, ahi] = collar_heights(g.a.side, a->collar_a);
    add_interval(out, g.a.strip, alo, ahi);
    auto [blo, bhi] = collar_heights(g.b.side, a->collar_b);
    add_interval(out, g.b.strip, blo, bhi);
  } else {
    const auto& b = std::get<BoundaryCollarBox>(box);
    if (b.strip < 0 || b.strip >= static_cast<int>(m.strips.size()))
      throw std::invalid_argument("saturate_basic: unknown strip");
    if (m.side(b.strip, b.side).kind != SideKind::Boundary)
      throw std::invalid_argument("saturate_basic: boundary collar on non-boundary side");
    if (!(b.x_lo < b.x_hi)) throw std::invalid_argument("saturate_basic: degenerate box");
    if (!(b.collar > 0 && b.collar <= 1))
      throw std::invalid_argument("saturate_basic: degenerate box (collar)");
    out.boundary_leaves.insert({b.strip, b.side});
    auto [lo, hi] = collar_heights(b.side, b.collar);
    add_interval(out, b.strip, lo, hi);
  }
  out.normalize();
  return out;
}

SaturatedSet saturate_set(const StripModel& m, const SaturatedSet& s) {
  // Every piece is already a union of whole leaves, so saturating again only
  // re-derives the same descriptors.
  (void)m;
  SaturatedSet out = s;
  out.normalize();
  return out;
}

SaturatedSet sat_union(const SaturatedSet& a, const SaturatedSet& b) {
  SaturatedSet out = a;
  for (const auto& [strip, ivs] : b.heights)
    out.heights[strip].insert(out.heights[strip].end(), ivs.begin(), ivs.end());
  out.arc_leaves.insert(b.arc_leaves.begin(), b.arc_leaves.end());
  out.boundary_leaves.insert(b.boundary_leaves.begin(), b.boundary_leaves.end());
  out.normalize();
  return out;
}

bool sets_intersect(const SaturatedSet& a, const SaturatedSet& b) {
  for (int g : a.arc_leaves)
    if (b.arc_leaves.count(g)) return true;
  for (const auto& bl : a.boundary_leaves)
    if (b.boundary_leaves.count(bl)) return true;
  for (const auto& [strip, ivs] : a.heights) {
    auto it = b.heights.find(strip);
    if (it == b.heights.end()) continue;
    for (const auto& x : ivs)
      for (const auto& y : it->second)
        if (rat_max(x.first, y.first) < rat_min(x.second, y.second)) return true;
  }
  return false;
}

bool set_contains(const SaturatedSet& outer, const SaturatedSet& inner) {
  for (int g : inner.arc_leaves)
    if (!outer.arc_leaves.count(g)) return false;
  for (const auto& bl : inner.boundary_leaves)
    if (!outer.boundary_leaves.count(bl)) return false;
  for (const auto& [strip, ivs] : inner.heights) {
    auto it = outer.heights.find(strip);
    if (it == outer.heights.end()) return false;
    for (const auto& iv : ivs) {
      bool covered = false;
      for (const auto& o : it->second)
        if (o.first <= iv.first && iv.second <= o.second) {
          covered = true;
          break;
        }
      if (!covered) return false;
    }
  }
  return true;
}

namespace {

// Height interval of the set in `strip` adjacent to the given side, i.e. an
// interval of the form (c,1) for Top or (0,c) for Bottom.
std::optional<Rat> adjacent_collar(const SaturatedSet& s, int strip, SideName side) {
  auto it = s.heights.find(strip);
  if (it == s.heights.end()) return std::nullopt;
  for (const auto& iv : it->second) {
    if (side == SideName::Top && iv.second == 1) return Rat((Rat(1) - iv.first) / 2);
    if (side == SideName::Bottom && iv.first == 0) return Rat(iv.second / 2);
  }
  return std::nullopt;
}

}  // namespace

std::optional<BasicBox> contained_basic_neighborhood(const StripModel& m, const SaturatedSet& s,
                                                     const ModelPoint& pt) {
  if (const auto* p = std::get_if<InStrip>(&pt)) {
    auto it = s.heights.find(p->strip);
    if (it == s.heights.end()) return std::nullopt;
    for (const auto& iv : it->second) {
      if (iv.first < p->y && p->y < iv.second) {
        Rat r = rat_min(p->y - iv.first, iv.second - p->y) / 2;
        return BasicBox{RectBox{p->strip, ExtRat(p->x - 1), ExtRat(p->x + 1), p->y - r, p->y + r}};
      }
    }
    return std::nullopt;
  }
  if (const auto* p2 = std::get_if<OnArc>(&pt)) {
    if (!s.arc_leaves.count(p2->gluing)) return std::nullopt;
    const Gluing& g = m.gluings.at(p2->gluing);
    auto ca = adjacent_collar(s, g.a.strip, g.a.side);
    auto cb = adjacent_collar(s, g.b.strip, g.b.side);
    if (!ca || !cb) return std::nullopt;  // arc leaf without both collars: not open there
    const Arc& arc = m.arc(g.a);
    ExtRat lo = arc.lo.is_finite() ? ExtRat((arc.lo.finite() + p2->x) / 2) : ExtRat(p2->x - 1);
    ExtRat hi = arc.hi.is_finite() ? ExtRat((arc.hi.finite() + p2->x) / 2) : ExtRat(p2->x + 1);
    return BasicBox{ArcCollarBox{p2->gluing, lo, hi, *ca, *cb}};
  }
  const auto& p3 = std::get<OnBoundary>(pt);
  if (!s.boundary_leaves.count({p3.strip, p3.side})) return std::nullopt;
  auto c = adjacent_collar(s, p3.strip, p3.side);
  if (!c) return std::nullopt;
  return BasicBox{BoundaryCollarBox{p3.strip, p3.side, ExtRat(p3.x - 1), ExtRat(p3.x + 1), *c}};
}

OpennessCheck check_openness_by_sampling(const StripModel& m, const SaturatedSet& s,
                                         int target_points) {
  OpennessCheck out;
  auto probe = [&](const ModelPoint& pt) {
    ++out.points_checked;
    auto box = contained_basic_neighborhood(m, s, pt);
    if (!box) {
      out.ok = false;
      out.failures.push_back("no basic neighborhood at " + point_to_string(m, pt));
      return;
    }
    if (!set_contains(s, saturate_basic(m, *box))) {
      out.ok = false;
      out.failures.push_back("witness box escapes the set at " + point_to_string(m, pt));
    }
  };

  // Boundary-adjacent points at geometrically shrinking depth; deepen until
  // the sample budget is spent.
  Rat delta = Rat(1) / 8;
  for (int depth = 0; depth < 24 && out.points_checked < target_points; ++depth) {
    for (const auto& [strip, ivs] : s.heights) {
      for (const auto& iv : ivs) {
        Rat w = iv.second - iv.first;
        probe(InStrip{strip, Rat(0), iv.first + w * delta});
        probe(InStrip{strip, Rat(0), iv.second - w * delta});
      }
    }
    for (int g : s.arc_leaves) {
      const Arc& arc = m.arc(m.gluings.at(g).a);
      Rat inv = Rat(1) / delta;
      if (arc.lo.is_finite() && arc.hi.is_finite()) {
        Rat w = arc.hi.finite() - arc.lo.finite();
        probe(OnArc{g, arc.lo.finite() + w * delta});
        probe(OnArc{g, arc.hi.finite() - w * delta});
      } else {
        if (arc.lo.is_finite())
          probe(OnArc{g, arc.lo.finite() + delta});
        else
          probe(OnArc{g, -inv});
        if (arc.hi.is_finite())
          probe(OnArc{g, arc.hi.finite() - delta});
        else
          probe(OnArc{g, inv});
      }
    }
    for (const auto& [strip, side] : s.boundary_leaves) {
      probe(OnBoundary{strip, side, Rat(1) / delta});
      probe(OnBoundary{strip, side, -Rat(1) / delta});
    }
    delta /= 8;
  }
  return out;
}

}  // namespace stripfold

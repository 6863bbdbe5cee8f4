#include "stripfold/section.hpp"

#include <algorithm>

namespace stripfold {

namespace {

// Height at distance d from a side, inside (0,1).
Rat height_from(SideName side, const Rat& d) { return side == SideName::Top ? Rat(1 - d) : d; }
Rat dist_to(SideName side, const Rat& y) { return side == SideName::Top ? Rat(1 - y) : y; }

Rat point_x(const ModelPoint& pt) {
  if (const auto* p = std::get_if<InStrip>(&pt)) return p->x;
  if (const auto* p = std::get_if<OnArc>(&pt)) return p->x;
  return std::get<OnBoundary>(pt).x;
}

}  // namespace

Rat end_sigmoid(const ExtRat& lo, const ExtRat& hi, const Rat& x0, const Rat& spacing,
                const Rat& i) {
  if (i == 0) return x0;
  if (i > 0) {
    if (hi.is_finite()) return x0 + (hi.finite() - x0) * i / (1 + i);
    return x0 + spacing * i;
  }
  Rat n = -i;
  if (lo.is_finite()) return x0 + (lo.finite() - x0) * n / (1 + n);
  return x0 + spacing * i;
}

Rat default_anchor(const ExtRat& lo, const ExtRat& hi) {
  if (lo.is_finite() && hi.is_finite()) return (lo.finite() + hi.finite()) / 2;
  if (lo.is_finite()) return lo.finite() + 1;
  if (hi.is_finite()) return hi.finite() - 1;
  return Rat(0);
}

Rat proper_param(const ExtRat& lo, const ExtRat& hi, const Rat& x) {
  if (lo.is_finite() && hi.is_finite())
    return Rat(1) / (hi.finite() - x) - Rat(1) / (x - lo.finite());
  if (hi.is_finite()) return x + Rat(1) / (hi.finite() - x);
  if (lo.is_finite()) return x - Rat(1) / (x - lo.finite());
  return x;
}

// --- base ---------------------------------------------------------------------

std::pair<Rat, Rat> FiberedFrame::base_range() const {
  switch (kind) {
    case FrameKind::Strip: return {base_lo, base_hi};
    case FrameKind::Vertex: return {-eps, eps};
    case FrameKind::Boundary: return {Rat(0), eps};
    case FrameKind::Chain: return {Rat(0), Rat(static_cast<int>(links.size()))};
  }
  throw std::logic_error("unreachable");
}

bool FiberedFrame::base_contains(const Rat& u) const {
  auto [lo, hi] = base_range();
  if (u == lo) return base_includes_lo();
  return lo < u && u < hi;
}

Rat FiberedFrame::base_center() const {
  if (kind == FrameKind::Vertex || kind == FrameKind::Boundary) return Rat(0);
  auto [lo, hi] = base_range();
  return (lo + hi) / 2;
}

// --- leaves -------------------------------------------------------------------

LeafDescriptor FiberedFrame::leaf_at(const Rat& u) const {
  if (!base_contains(u)) throw std::invalid_argument("leaf_at: u outside the base");
  switch (kind) {
    case FrameKind::Strip: return InteriorLeaf{strip, u};
    case FrameKind::Vertex: {
      if (u == 0) return ArcLeaf{gluing};
      const Gluing& g = model.gluings.at(gluing);
      if (u < 0) return InteriorLeaf{g.a.strip, height_from(g.a.side, -u)};
      return InteriorLeaf{g.b.strip, height_from(g.b.side, u)};
    }
    case FrameKind::Boundary: {
      if (u == 0) return BoundaryLeaf{strip, side};
      return InteriorLeaf{strip, height_from(side, u)};
    }
    case FrameKind::Chain: {
      BigInt t = rat_floor(u);
      if (u == Rat(t)) return ArcLeaf{joins.at(t.convert_to<size_t>() - 1).gluing};
      const ChainLink& link = links.at(t.convert_to<size_t>());
      Rat frac = u - Rat(t);
      return InteriorLeaf{link.strip, link.up ? frac : Rat(1 - frac)};
    }
  }
  throw std::logic_error("unreachable");
}

std::optional<Rat> FiberedFrame::u_of_leaf(const LeafDescriptor& leaf) const {
  switch (kind) {
    case FrameKind::Strip: {
      const auto* il = std::get_if<InteriorLeaf>(&leaf);
      if (il && il->strip == strip && base_lo < il->y && il->y < base_hi) return il->y;
      return std::nullopt;
    }
    case FrameKind::Vertex: {
      if (const auto* al = std::get_if<ArcLeaf>(&leaf))
        return al->gluing == gluing ? std::optional<Rat>(Rat(0)) : std::nullopt;
      const auto* il = std::get_if<InteriorLeaf>(&leaf);
      if (!il) return std::nullopt;
      const Gluing& g = model.gluings.at(gluing);
      if (il->strip == g.a.strip) {
        Rat d = dist_to(g.a.side, il->y);
        if (d > 0 && d < eps) return -d;
      }
      if (il->strip == g.b.strip) {
        Rat d = dist_to(g.b.side, il->y);
        if (d > 0 && d < eps) return d;
      }
      return std::nullopt;
    }
    case FrameKind::Boundary: {
      if (const auto* bl = std::get_if<BoundaryLeaf>(&leaf))
        return (bl->strip == strip && bl->side == side) ? std::optional<Rat>(Rat(0))
                                                        : std::nullopt;
      const auto* il = std::get_if<InteriorLeaf>(&leaf);
      if (il && il->strip == strip) {
        Rat d = dist_to(side, il->y);
        if (d > 0 && d < eps) return d;
      }
      return std::nullopt;
    }
    case FrameKind::Chain: {
      if (const auto* al = std::get_if<ArcLeaf>(&leaf)) {
        for (size_t j = 0; j < joins.size(); ++j)
          if (joins[j].gluing == al->gluing) return Rat(static_cast<int>(j) + 1);
        return std::nullopt;
      }
      const auto* il = std::get_if<InteriorLeaf>(&leaf);
      if (!il) return std::nullopt;
      for (size_t t = 0; t < links.size(); ++t)
        if (links[t].strip == il->strip)
          return Rat(static_cast<int>(t)) + (links[t].up ? il->y : Rat(1 - il->y));
      return std::nullopt;
    }
  }
  throw std::logic_error("unreachable");
}

std::pair<ExtRat, ExtRat> FiberedFrame::leaf_interval(const Rat& u) const {
  if (kind == FrameKind::Vertex && u == 0) {
    const Arc& arc = model.arc(model.gluings.at(gluing).a);
    return {arc.lo, arc.hi};
  }
  if (kind == FrameKind::Chain) {
    BigInt t = rat_floor(u);
    if (u == Rat(t)) {
      const ChainJoin& j = joins.at(t.convert_to<size_t>() - 1);
      return {j.lo, j.hi};
    }
  }
  return {ExtRat::neg_inf(), ExtRat::pos_inf()};
}

// --- section positions --------------------------------------------------------

Rat FiberedFrame::pos_block(const Rat& i, const Rat& u) const {
  switch (kind) {
    case FrameKind::Strip:
    case FrameKind::Boundary:
      return x0 + spacing * i;
    case FrameKind::Vertex: {
      const Arc& arc = model.arc(model.gluings.at(gluing).a);
      Rat w = rat_abs(u) / eps;  // 0 on the arc leaf, 1 at the open collar edge
      Rat g = end_sigmoid(arc.lo, arc.hi, x0, spacing, i);
      Rat free = x0 + spacing * i;
      return (1 - w) * g + w * free;
    }
    case FrameKind::Chain: {
      int k = static_cast<int>(links.size());
      auto join_pos = [&](int j) {
        const ChainJoin& jn = joins.at(j);
        return end_sigmoid(jn.lo, jn.hi, default_anchor(jn.lo, jn.hi), spacing, i);
      };
      auto join_anchor = [&](int j) {
        const ChainJoin& jn = joins.at(j);
        return default_anchor(jn.lo, jn.hi);
      };
      BigInt tb = rat_floor(u);
      if (u == Rat(tb)) return join_pos(tb.convert_to<int>() - 1);
      int t = tb.convert_to<int>();
      Rat frac = u - t;
      Rat lam_l = (t >= 1 && frac < eps) ? Rat(1 - frac / eps) : Rat(0);
      Rat lam_r = (t + 1 <= k - 1 && (1 - frac) < eps) ? Rat(1 - (1 - frac) / eps) : Rat(0);
      Rat lam_c = 1 - lam_l - lam_r;
      Rat pos(0);
      if (lam_l > 0) pos += lam_l * join_pos(t - 1);
      if (lam_r > 0) pos += lam_r * join_pos(t);
      if (lam_c > 0) {
        Rat xbar;
        bool left = t >= 1, right = t + 1 <= k - 1;
        if (left && right)
          xbar = join_anchor(t - 1) + frac * (join_anchor(t) - join_anchor(t - 1));
        else if (left)
          xbar = join_anchor(t - 1);
        else if (right)
          xbar = join_anchor(t);
        else
          xbar = x0;
        pos += lam_c * (xbar + spacing * i);
      }
      return pos;
    }
  }
  throw std::logic_error("unreachable");
}

Rat FiberedFrame::pos_at(const Rat& t, const Rat& u) const {
  BigInt i = rat_floor(t);
  Rat ri(i);
  if (t == ri) return pos_block(ri, u);
  Rat tau = t - ri;
  return (1 - tau) * pos_block(ri, u) + tau * pos_block(ri + 1, u);
}

// --- materialization ----------------------------------------------------------

ModelPoint FiberedFrame::materialize(const Rat& u, const Rat& chain_x) const {
  if (!base_contains(u)) throw std::invalid_argument("materialize: u outside the base");
  switch (kind) {
    case FrameKind::Strip: return InStrip{strip, chain_x, u};
    case FrameKind::Vertex: {
      const Gluing& g = model.gluings.at(gluing);
      if (u == 0) return OnArc{gluing, chain_x};
      if (u < 0) return InStrip{g.a.strip, chain_x, height_from(g.a.side, -u)};
      AffineMap alpha = affine_gluing_map(model, gluing);
      return InStrip{g.b.strip, alpha(chain_x), height_from(g.b.side, u)};
    }
    case FrameKind::Boundary: {
      if (u == 0) return OnBoundary{strip, side, chain_x};
      return InStrip{strip, chain_x, height_from(side, u)};
    }
    case FrameKind::Chain: {
      BigInt tb = rat_floor(u);
      if (u == Rat(tb)) {
        const ChainJoin& j = joins.at(tb.convert_to<size_t>() - 1);
        return OnArc{j.gluing, links.at(j.arc_link).to_strip(chain_x)};
      }
      const ChainLink& link = links.at(tb.convert_to<size_t>());
      Rat frac = u - Rat(tb);
      return InStrip{link.strip, link.to_strip(chain_x), link.up ? frac : Rat(1 - frac)};
    }
  }
  throw std::logic_error("unreachable");
}

std::optional<std::pair<Rat, Rat>> FiberedFrame::locate(const ModelPoint& pt) const {
  switch (kind) {
    case FrameKind::Strip: {
      const auto* p = std::get_if<InStrip>(&pt);
      if (p && p->strip == strip && base_lo < p->y && p->y < base_hi)
        return std::pair<Rat, Rat>{p->y, p->x};
      return std::nullopt;
    }
    case FrameKind::Vertex: {
      if (const auto* pa = std::get_if<OnArc>(&pt)) {
        if (pa->gluing == gluing) return std::pair<Rat, Rat>{Rat(0), pa->x};
        return std::nullopt;
      }
      const auto* p = std::get_if<InStrip>(&pt);
      if (!p) return std::nullopt;
      const Gluing& g = model.gluings.at(gluing);
      if (p->strip == g.a.strip) {
        Rat d = dist_to(g.a.side, p->y);
        if (d > 0 && d < eps) return std::pair<Rat, Rat>{-d, p->x};
      }
      if (p->strip == g.b.strip) {
        Rat d = dist_to(g.b.side, p->y);
        if (d > 0 && d < eps)
          return std::pair<Rat, Rat>{d, affine_gluing_map(model, gluing).inverse()(p->x)};
      }
      return std::nullopt;
    }
    case FrameKind::Boundary: {
      if (const auto* pb = std::get_if<OnBoundary>(&pt)) {
        if (pb->strip == strip && pb->side == side) return std::pair<Rat, Rat>{Rat(0), pb->x};
        return std::nullopt;
      }
      const auto* p = std::get_if<InStrip>(&pt);
      if (p && p->strip == strip) {
        Rat d = dist_to(side, p->y);
        if (d > 0 && d < eps) return std::pair<Rat, Rat>{d, p->x};
      }
      return std::nullopt;
    }
    case FrameKind::Chain: {
      if (const auto* pa = std::get_if<OnArc>(&pt)) {
        for (size_t j = 0; j < joins.size(); ++j)
          if (joins[j].gluing == pa->gluing)
            return std::pair<Rat, Rat>{Rat(static_cast<int>(j) + 1),
                                       links.at(joins[j].arc_link).to_strip.inverse()(pa->x)};
        return std::nullopt;
      }
      const auto* p = std::get_if<InStrip>(&pt);
      if (!p) return std::nullopt;
      for (size_t t = 0; t < links.size(); ++t) {
        if (links[t].strip != p->strip) continue;
        Rat frac = links[t].up ? p->y : Rat(1 - p->y);
        return std::pair<Rat, Rat>{Rat(static_cast<int>(t)) + frac,
                                   links[t].to_strip.inverse()(p->x)};
      }
      return std::nullopt;
    }
  }
  throw std::logic_error("unreachable");
}

std::optional<Rat> FiberedFrame::fiber_from_pos(const Rat& chain_x, const Rat& u) const {
  Rat c0 = pos_block(Rat(0), u);
  if (chain_x == c0) return Rat(0);
  // Exponential bracket, then integer bisection to the block [i, i+1).
  BigInt lo, hi;
  if (chain_x > c0) {
    BigInt step(1);
    int iter = 0;
    while (pos_block(Rat(step), u) <= chain_x) {
      step <<= 1;
      if (++iter > 300) return std::nullopt;
    }
    lo = 0;
    hi = step;
  } else {
    BigInt step(-1);
    int iter = 0;
    while (pos_block(Rat(step), u) > chain_x) {
      step <<= 1;
      if (++iter > 300) return std::nullopt;
    }
    lo = step;
    hi = 0;
  }
  // invariant: pos(lo) <= chain_x < pos(hi)
  while (hi - lo > 1) {
    BigInt mid = (lo + hi) / 2;
    if (pos_block(Rat(mid), u) <= chain_x)
      lo = mid;
    else
      hi = mid;
  }
  Rat c_lo = pos_block(Rat(lo), u);
  if (chain_x == c_lo) return Rat(lo);
  Rat c_hi = pos_block(Rat(hi), u);
  return Rat(lo) + (chain_x - c_lo) / (c_hi - c_lo);
}

std::optional<std::pair<Rat, Rat>> FiberedFrame::invert(const ModelPoint& pt) const {
  auto loc = locate(pt);
  if (!loc) return std::nullopt;
  auto [u, xi] = *loc;
  auto t = fiber_from_pos(xi, u);
  if (!t) return std::nullopt;
  return std::pair<Rat, Rat>{*t, u};
}

SaturatedSet FiberedFrame::saturation() const {
  switch (kind) {
    case FrameKind::Strip:
      return saturate_basic(model, RectBox{.strip = strip, .y_lo = base_lo, .y_hi = base_hi});
    case FrameKind::Vertex: {
      const Arc& arc = model.arc(model.gluings.at(gluing).a);
      return saturate_basic(model, ArcCollarBox{gluing, arc.lo, arc.hi, eps, eps});
    }
    case FrameKind::Boundary:
      return saturate_basic(model, BoundaryCollarBox{.strip = strip, .side = side, .collar = eps});
    case FrameKind::Chain: {
      SaturatedSet s;
      for (const ChainLink& link : links) s.heights[link.strip] = {{Rat(0), Rat(1)}};
      for (const ChainJoin& j : joins) s.arc_leaves.insert(j.gluing);
      s.normalize();
      return s;
    }
  }
  throw std::logic_error("unreachable");
}

// --- factories ----------------------------------------------------------------

FiberedFrame strip_frame(const StripModel& m, int strip, const Rat& lo, const Rat& hi,
                         const Rat& spacing, const Rat& x0) {
  if (strip < 0 || strip >= static_cast<int>(m.strips.size()))
    throw std::invalid_argument("strip_frame: unknown strip");
  if (!(Rat(0) <= lo && lo < hi && hi <= Rat(1)))
    throw std::invalid_argument("strip_frame: bad height window");
  if (!(spacing > 0)) throw std::invalid_argument("strip_frame: parameters non-positive");
  FiberedFrame f;
  f.kind = FrameKind::Strip;
  f.model = m;
  f.strip = strip;
  f.base_lo = lo;
  f.base_hi = hi;
  f.spacing = spacing;
  f.x0 = x0;
  return f;
}

FiberedFrame vertex_frame(const StripModel& m, int gluing, const Rat& eps, const Rat& spacing) {
  if (gluing < 0 || gluing >= static_cast<int>(m.gluings.size()))
    throw std::invalid_argument("vertex_frame: unknown gluing");
  if (!(eps > 0) || !(spacing > 0))
    throw std::invalid_argument("vertex_frame: parameters non-positive");
  if (eps > Rat(1, 2)) throw std::invalid_argument("vertex_frame: collar wider than 1/2");
  FiberedFrame f;
  f.kind = FrameKind::Vertex;
  f.model = m;
  f.gluing = gluing;
  f.eps = eps;
  f.spacing = spacing;
  const Arc& arc = m.arc(m.gluings[gluing].a);
  f.x0 = default_anchor(arc.lo, arc.hi);
  return f;
}

FiberedFrame boundary_frame(const StripModel& m, int strip, SideName side, const Rat& eps,
                            const Rat& spacing) {
  if (strip < 0 || strip >= static_cast<int>(m.strips.size()))
    throw std::invalid_argument("boundary_frame: unknown strip");
  if (m.side(strip, side).kind != SideKind::Boundary)
    throw std::invalid_argument("boundary_frame: side is not a boundary");
  if (!(eps > 0) || !(spacing > 0))
    throw std::invalid_argument("boundary_frame: parameters non-positive");
  if (eps > Rat(1, 2)) throw std::invalid_argument("boundary_frame: collar wider than 1/2");
  FiberedFrame f;
  f.kind = FrameKind::Boundary;
  f.model = m;
  f.strip = strip;
  f.side = side;
  f.eps = eps;
  f.spacing = spacing;
  return f;
}

// --- cross sections -----------------------------------------------------------

CrossSection cross_section_through(const StripModel& m, const LeafDescriptor& leaf) {
  Rat eps = m.default_collar();
  if (const auto* il = std::get_if<InteriorLeaf>(&leaf)) {
    if (il->strip < 0 || il->strip >= static_cast<int>(m.strips.size()) || !(il->y > 0) ||
        !(il->y < 1))
      throw std::invalid_argument("cross_section_through: leaf outside the model");
    Rat lo = rat_max(Rat(0), il->y - eps);
    Rat hi = rat_min(Rat(1), il->y + eps);
    FiberedFrame f = strip_frame(m, il->strip, lo, hi);
    return CrossSection{std::move(f), Rat(0), leaf, Rat(0)};
  }
  if (const auto* al = std::get_if<ArcLeaf>(&leaf)) {
    FiberedFrame f = vertex_frame(m, al->gluing, eps);
    Rat anchor = f.x0;
    return CrossSection{std::move(f), Rat(0), leaf, anchor};
  }
  const auto& bl = std::get<BoundaryLeaf>(leaf);
  FiberedFrame f = boundary_frame(m, bl.strip, bl.side, eps);
  return CrossSection{std::move(f), Rat(0), leaf, Rat(0)};
}

// --- towers -------------------------------------------------------------------

CrossSection SectionTower::section(const Rat& i) const {
  Rat center = frame.base_center();
  return CrossSection{frame, i, frame.leaf_at(center), frame.pos_at(i, center)};
}

SectionTower parallel_tower(const StripModel& m, const CrossSection& seed,
                            const TowerParams& params) {
  (void)m;
  if (!(params.spacing > 0) || (params.collar && !(*params.collar > 0)))
    throw std::invalid_argument("parallel_tower: parameters non-positive");
  FiberedFrame f = seed.frame;
  f.spacing = params.spacing;
  if (params.collar) {
    Rat c = *params.collar;
    if ((f.kind == FrameKind::Vertex || f.kind == FrameKind::Boundary) && c > Rat(1, 2))
      throw std::invalid_argument("parallel_tower: collar wider than 1/2");
    if (f.kind == FrameKind::Strip) {
      // Recenter the height window around the seed leaf.
      if (const auto* il = std::get_if<InteriorLeaf>(&seed.through)) {
        f.base_lo = rat_max(Rat(0), il->y - c);
        f.base_hi = rat_min(Rat(1), il->y + c);
      }
    } else {
      f.eps = c;
    }
  }
  return SectionTower{std::move(f)};
}

// --- half-leaf tails ----------------------------------------------------------

std::pair<HalfLeafTail, HalfLeafTail> half_leaf_tails(const StripModel& m,
                                                      const std::vector<CrossSection>& sections,
                                                      const LeafDescriptor& leaf,
                                                      const Rat& margin) {
  if (!(margin > 0)) throw std::invalid_argument("half_leaf_tails: margin must be positive");
  std::vector<Rat> coords;
  for (const CrossSection& sec : sections) {
    auto u = sec.frame.u_of_leaf(leaf);
    if (u) coords.push_back(point_x(sec.eval(*u)));
  }
  if (coords.empty()) throw std::invalid_argument("half_leaf_tails: leaf not met by any section");

  ExtRat lo = ExtRat::neg_inf(), hi = ExtRat::pos_inf();
  if (const auto* al = std::get_if<ArcLeaf>(&leaf)) {
    const Arc& arc = m.arc(m.gluings.at(al->gluing).a);
    lo = arc.lo;
    hi = arc.hi;
  }
  Rat lo_c = *std::min_element(coords.begin(), coords.end());
  Rat hi_c = *std::max_element(coords.begin(), coords.end());
  Rat left_cut =
      lo.is_finite() ? Rat(lo_c - rat_min(margin, (lo_c - lo.finite()) / 2)) : Rat(lo_c - margin);
  Rat right_cut =
      hi.is_finite() ? Rat(hi_c + rat_min(margin, (hi.finite() - hi_c) / 2)) : Rat(hi_c + margin);
  return {HalfLeafTail{leaf, TailSide::Left, left_cut},
          HalfLeafTail{leaf, TailSide::Right, right_cut}};
}

}  // namespace stripfold

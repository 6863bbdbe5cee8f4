#include "stripfold/model.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace stripfold {

int StripModel::strip_index(std::string_view name) const {
  for (size_t i = 0; i < strips.size(); ++i)
    if (strips[i].name == name) return static_cast<int>(i);
  return -1;
}

const Side& StripModel::side(int strip, SideName which) const {
  const Strip& s = strips.at(strip);
  return which == SideName::Bottom ? s.bottom : s.top;
}

const Arc& StripModel::arc(const ArcRef& ref) const {
  return side(ref.strip, ref.side).arcs.at(ref.index);
}

Rat StripModel::default_collar() const {
  Rat least{1};
  for (const Strip& s : strips) {
    for (const Side* sd : {&s.bottom, &s.top}) {
      if (sd->kind != SideKind::Glued) continue;
      // Consecutive endpoint sequence lo0, hi0, lo1, hi1, ... along the side;
      // every finite positive difference between neighbours counts as a gap.
      std::vector<ExtRat> seq;
      for (const Arc& a : sd->arcs) {
        seq.push_back(a.lo);
        seq.push_back(a.hi);
      }
      for (size_t i = 0; i + 1 < seq.size(); ++i) {
        if (!seq[i].is_finite() || !seq[i + 1].is_finite()) continue;
        Rat d = seq[i + 1].finite() - seq[i].finite();
        if (d > 0) least = rat_min(least, d);
      }
    }
  }
  return least / 2;
}

std::string leaf_to_string(const StripModel& m, const LeafDescriptor& leaf) {
  std::ostringstream out;
  if (const auto* il = std::get_if<InteriorLeaf>(&leaf))
    out << "interior(" << m.strips.at(il->strip).name << ", " << to_string(il->y) << ")";
  else if (const auto* al = std::get_if<ArcLeaf>(&leaf))
    out << "arc(g" << al->gluing << ")";
  else {
    const auto& bl = std::get<BoundaryLeaf>(leaf);
    out << "boundary(" << m.strips.at(bl.strip).name << "." << side_name_str(bl.side) << ")";
  }
  return out.str();
}

std::string point_to_string(const StripModel& m, const ModelPoint& pt) {
  std::ostringstream out;
  if (const auto* p = std::get_if<InStrip>(&pt))
    out << m.strips.at(p->strip).name << ":(" << to_string(p->x) << ", " << to_string(p->y) << ")";
  else if (const auto* p2 = std::get_if<OnArc>(&pt))
    out << "g" << p2->gluing << ":" << to_string(p2->x);
  else {
    const auto& p3 = std::get<OnBoundary>(pt);
    out << m.strips.at(p3.strip).name << "." << side_name_str(p3.side) << ":" << to_string(p3.x);
  }
  return out.str();
}

// --- parsing ----------------------------------------------------------------

namespace {

std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

SideName parse_side_name(const std::string& tok, int line) {
  if (tok == "bottom") return SideName::Bottom;
  if (tok == "top") return SideName::Top;
  throw ParseError(line, "expected 'bottom' or 'top', got '" + tok + "'");
}

Arc parse_arc_token(const std::string& tok, int line) {
  if (tok.size() < 2 || tok.front() != '(' || tok.back() != ')')
    throw ParseError(line, "malformed arc '" + tok + "' (expected (p,q))");
  std::string inner = tok.substr(1, tok.size() - 2);
  auto comma = inner.find(',');
  if (comma == std::string::npos)
    throw ParseError(line, "malformed arc '" + tok + "' (expected (p,q))");
  try {
    return Arc{parse_ext_rational(inner.substr(0, comma)), parse_ext_rational(inner.substr(comma + 1))};
  } catch (const std::invalid_argument& e) {
    throw ParseError(line, e.what());
  }
}

// <strip>.<bottom|top>.<index>
ArcRef parse_arc_ref(const StripModel& m, const std::string& tok, int line) {
  auto d1 = tok.find('.');
  auto d2 = tok.rfind('.');
  if (d1 == std::string::npos || d2 == d1)
    throw ParseError(line, "malformed arc reference '" + tok + "'");
  std::string strip_name = tok.substr(0, d1);
  std::string side_tok = tok.substr(d1 + 1, d2 - d1 - 1);
  std::string idx_tok = tok.substr(d2 + 1);
  int strip = m.strip_index(strip_name);
  if (strip < 0) throw ParseError(line, "unknown strip reference '" + strip_name + "'");
  SideName side = parse_side_name(side_tok, line);
  int idx = -1;
  try {
    size_t pos = 0;
    idx = std::stoi(idx_tok, &pos);
    if (pos != idx_tok.size()) idx = -1;
  } catch (...) {
    idx = -1;
  }
  const Side& sd = m.side(strip, side);
  if (idx < 0 || sd.kind != SideKind::Glued || idx >= static_cast<int>(sd.arcs.size()))
    throw ParseError(line, "unknown arc reference '" + tok + "'");
  return ArcRef{strip, side, idx};
}

}  // namespace

StripModel parse_model(std::string_view text) {
  StripModel m;
  struct GlueLine {
    int line;
    std::vector<std::string> toks;
  };
  std::vector<GlueLine> glue_lines;
  std::set<std::pair<int, SideName>> declared_sides;

  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    auto toks = tokenize(line);
    if (toks.empty()) continue;
    const std::string& kw = toks[0];

    if (kw == "strip") {
      if (toks.size() != 2 && toks.size() != 4)
        throw ParseError(line_no, "expected 'strip <id>' or 'strip <id> <lo> <hi>'");
      if (toks[1].find('.') != std::string::npos)
        throw ParseError(line_no, "strip id must not contain '.'");
      if (m.strip_index(toks[1]) >= 0) throw ParseError(line_no, "duplicate strip '" + toks[1] + "'");
      if (toks.size() == 4) {
        // Declared transversal interval; normalized to (0,1) on the spot, so
        // only its well-formedness survives parsing.
        Rat lo, hi;
        try {
          lo = parse_rational(toks[2]);
          hi = parse_rational(toks[3]);
        } catch (const std::invalid_argument& e) {
          throw ParseError(line_no, e.what());
        }
        if (!(lo < hi)) throw ParseError(line_no, "transversal interval must satisfy lo < hi");
      }
      m.strips.push_back(Strip{toks[1], {}, {}});
    } else if (kw == "side") {
      if (toks.size() < 4) throw ParseError(line_no, "expected 'side <id> <bottom|top> <spec>'");
      int strip = m.strip_index(toks[1]);
      if (strip < 0) throw ParseError(line_no, "unknown strip reference '" + toks[1] + "'");
      SideName which = parse_side_name(toks[2], line_no);
      if (!declared_sides.insert({strip, which}).second)
        throw ParseError(line_no, "duplicate side declaration for " + toks[1] + "." + toks[2]);
      Side sd;
      if (toks[3] == "open" && toks.size() == 4) {
        sd.kind = SideKind::Open;
      } else if (toks[3] == "boundary" && toks.size() == 4) {
        sd.kind = SideKind::Boundary;
      } else if (toks[3] == "arcs") {
        if (toks.size() < 5) throw ParseError(line_no, "'arcs' requires at least one interval");
        sd.kind = SideKind::Glued;
        for (size_t i = 4; i < toks.size(); ++i) sd.arcs.push_back(parse_arc_token(toks[i], line_no));
      } else {
        throw ParseError(line_no, "expected side spec 'open', 'boundary' or 'arcs ...'");
      }
      (which == SideName::Bottom ? m.strips[strip].bottom : m.strips[strip].top) = std::move(sd);
    } else if (kw == "glue") {
      glue_lines.push_back({line_no, toks});  // resolved after all sides exist
    } else {
      throw ParseError(line_no, "unknown directive '" + kw + "'");
    }
  }

  for (const auto& gl : glue_lines) {
    if (gl.toks.size() != 4) throw ParseError(gl.line, "expected 'glue <ref> <ref> <keep|flip>'");
    ArcRef a = parse_arc_ref(m, gl.toks[1], gl.line);
    ArcRef b = parse_arc_ref(m, gl.toks[2], gl.line);
    if (a.strip == b.strip && a.side == b.side) throw ParseError(gl.line, "same-side gluing");
    GlueOrient orient;
    if (gl.toks[3] == "keep")
      orient = GlueOrient::Keep;
    else if (gl.toks[3] == "flip")
      orient = GlueOrient::Flip;
    else
      throw ParseError(gl.line, "expected 'keep' or 'flip', got '" + gl.toks[3] + "'");
    m.gluings.push_back(Gluing{a, b, orient});
  }
  return m;
}

static std::string arc_to_text(const Arc& a) {
  return "(" + to_string(a.lo) + "," + to_string(a.hi) + ")";
}

static std::string arc_ref_to_text(const StripModel& m, const ArcRef& r) {
  return m.strips.at(r.strip).name + "." + side_name_str(r.side) + "." + std::to_string(r.index);
}

std::string model_to_text(const StripModel& m) {
  std::ostringstream out;
  for (const Strip& s : m.strips) out << "strip " << s.name << "\n";
  for (const Strip& s : m.strips) {
    for (SideName which : {SideName::Bottom, SideName::Top}) {
      const Side& sd = which == SideName::Bottom ? s.bottom : s.top;
      if (sd.kind == SideKind::Open) continue;
      out << "side " << s.name << " " << side_name_str(which) << " ";
      if (sd.kind == SideKind::Boundary) {
        out << "boundary";
      } else {
        out << "arcs";
        for (const Arc& a : sd.arcs) out << " " << arc_to_text(a);
      }
      out << "\n";
    }
  }
  for (const Gluing& g : m.gluings)
    out << "glue " << arc_ref_to_text(m, g.a) << " " << arc_ref_to_text(m, g.b) << " "
        << (g.orient == GlueOrient::Keep ? "keep" : "flip") << "\n";
  return out.str();
}

// --- validation -------------------------------------------------------------

namespace {

bool endpoint_types_compatible(const Arc& a, const Arc& b, GlueOrient orient) {
  // Left ends are finite or -inf, right ends finite or +inf.  Keep matches
  // left-to-left and right-to-right; Flip matches left-to-right, where -inf
  // can only pair with +inf.
  bool a_lo_fin = a.lo.is_finite(), a_hi_fin = a.hi.is_finite();
  bool b_lo_fin = b.lo.is_finite(), b_hi_fin = b.hi.is_finite();
  if (orient == GlueOrient::Keep) return a_lo_fin == b_lo_fin && a_hi_fin == b_hi_fin;
  return a_lo_fin == b_hi_fin && a_hi_fin == b_lo_fin;
}

}  // namespace

ValidationReport validate_model(const StripModel& m) {
  ValidationReport rep;
  auto issue = [&rep](std::string code, std::string msg) {
    rep.issues.push_back({std::move(code), std::move(msg)});
  };

  for (size_t i = 0; i < m.strips.size(); ++i) {
    const Strip& s = m.strips[i];
    for (SideName which : {SideName::Bottom, SideName::Top}) {
      const Side& sd = which == SideName::Bottom ? s.bottom : s.top;
      std::string where = s.name + "." + side_name_str(which);
      if (sd.kind != SideKind::Glued) {
        if (!sd.arcs.empty()) issue("non-glued side with arcs", where + " carries arcs but is not glued");
        continue;
      }
      if (sd.arcs.empty()) {
        issue("empty glued side", where + " is glued but lists no arcs");
        continue;
      }
      for (size_t k = 0; k < sd.arcs.size(); ++k) {
        const Arc& a = sd.arcs[k];
        if (!(a.lo < a.hi))
          issue("empty arc interval", where + " arc " + std::to_string(k) + " " + arc_to_text(a));
      }
      for (size_t k = 0; k + 1 < sd.arcs.size(); ++k) {
        const Arc& a = sd.arcs[k];
        const Arc& b = sd.arcs[k + 1];
        if (b.lo < a.lo)
          issue("arcs not sorted", where + " arcs " + std::to_string(k) + "," + std::to_string(k + 1));
        else if (b.lo < a.hi)
          issue("overlapping arcs", where + " arcs " + arc_to_text(a) + " and " + arc_to_text(b));
      }
    }
  }

  // Reference validity and the exactly-once matching of arcs.
  std::map<std::tuple<int, SideName, int>, int> used;
  for (size_t gi = 0; gi < m.gluings.size(); ++gi) {
    const Gluing& g = m.gluings[gi];
    bool refs_ok = true;
    for (const ArcRef* r : {&g.a, &g.b}) {
      bool ok = r->strip >= 0 && r->strip < static_cast<int>(m.strips.size());
      if (ok) {
        const Side& sd = m.side(r->strip, r->side);
        ok = sd.kind == SideKind::Glued && r->index >= 0 && r->index < static_cast<int>(sd.arcs.size());
      }
      if (!ok) {
        issue("unknown arc reference", "gluing " + std::to_string(gi));
        refs_ok = false;
      }
    }
    if (!refs_ok) continue;
    if (g.a.strip == g.b.strip && g.a.side == g.b.side)
      issue("same-side gluing", "gluing " + std::to_string(gi) + " at " + arc_ref_to_text(m, g.a));
    if (!endpoint_types_compatible(m.arc(g.a), m.arc(g.b), g.orient))
      issue("incompatible endpoint types",
            "gluing " + std::to_string(gi) + ": " + arc_to_text(m.arc(g.a)) + " vs " +
                arc_to_text(m.arc(g.b)) + (g.orient == GlueOrient::Keep ? " keep" : " flip"));
    ++used[{g.a.strip, g.a.side, g.a.index}];
    ++used[{g.b.strip, g.b.side, g.b.index}];
  }
  for (size_t i = 0; i < m.strips.size(); ++i) {
    for (SideName which : {SideName::Bottom, SideName::Top}) {
      const Side& sd = m.side(static_cast<int>(i), which);
      if (sd.kind != SideKind::Glued) continue;
      for (size_t k = 0; k < sd.arcs.size(); ++k) {
        int n = 0;
        auto it = used.find({static_cast<int>(i), which, static_cast<int>(k)});
        if (it != used.end()) n = it->second;
        std::string where =
            m.strips[i].name + "." + std::string(side_name_str(which)) + "." + std::to_string(k);
        if (n == 0) issue("unmatched arc", where);
        if (n > 1) issue("arc glued twice", where);
      }
    }
  }
  return rep;
}

// --- gluing maps ------------------------------------------------------------

AffineMap affine_gluing_map(const StripModel& m, int gluing) {
  const Gluing& g = m.gluings.at(gluing);
  const Arc& a = m.arc(g.a);
  const Arc& b = m.arc(g.b);
  if (!endpoint_types_compatible(a, b, g.orient))
    throw std::invalid_argument("affine_gluing_map: incompatible endpoint types");

  if (g.orient == GlueOrient::Keep) {
    if (a.lo.is_finite() && a.hi.is_finite()) {
      Rat slope = (b.hi.finite() - b.lo.finite()) / (a.hi.finite() - a.lo.finite());
      return {slope, b.lo.finite() - slope * a.lo.finite()};
    }
    if (a.lo.is_finite()) return {Rat(1), b.lo.finite() - a.lo.finite()};  // (a,+inf) -> (b,+inf)
    if (a.hi.is_finite()) return {Rat(1), b.hi.finite() - a.hi.finite()};  // (-inf,a) -> (-inf,b)
    return {Rat(1), Rat(0)};                                               // full line
  }
  // Flip.
  if (a.lo.is_finite() && a.hi.is_finite()) {
    Rat slope = -(b.hi.finite() - b.lo.finite()) / (a.hi.finite() - a.lo.finite());
    return {slope, b.hi.finite() - slope * a.lo.finite()};
  }
  if (a.hi.is_finite()) return {Rat(-1), a.hi.finite() + b.lo.finite()};  // (-inf,a) -> (b,+inf)
  if (a.lo.is_finite()) return {Rat(-1), a.lo.finite() + b.hi.finite()};  // (a,+inf) -> (-inf,b)
  return {Rat(-1), Rat(0)};                                               // full line
}

// --- point / leaf queries ---------------------------------------------------

void check_point(const StripModel& m, const ModelPoint& pt) {
  if (const auto* p = std::get_if<InStrip>(&pt)) {
    if (p->strip < 0 || p->strip >= static_cast<int>(m.strips.size()))
      throw std::invalid_argument("point references unknown strip");
    if (!(p->y > 0 && p->y < 1)) throw std::invalid_argument("interior height outside (0,1)");
  } else if (const auto* p2 = std::get_if<OnArc>(&pt)) {
    if (p2->gluing < 0 || p2->gluing >= static_cast<int>(m.gluings.size()))
      throw std::invalid_argument("point references unknown gluing");
    const Arc& a = m.arc(m.gluings[p2->gluing].a);
    ExtRat x{p2->x};
    if (!(a.lo < x && x < a.hi)) throw std::invalid_argument("arc coordinate outside the arc interval");
  } else {
    const auto& p3 = std::get<OnBoundary>(pt);
    if (p3.strip < 0 || p3.strip >= static_cast<int>(m.strips.size()))
      throw std::invalid_argument("point references unknown strip");
    if (m.side(p3.strip, p3.side).kind != SideKind::Boundary)
      throw std::invalid_argument("boundary point on a non-boundary side");
  }
}

LeafDescriptor leaf_of(const StripModel& m, const ModelPoint& pt) {
  check_point(m, pt);
  if (const auto* p = std::get_if<InStrip>(&pt)) return InteriorLeaf{p->strip, p->y};
  if (const auto* p2 = std::get_if<OnArc>(&pt)) return ArcLeaf{p2->gluing};
  const auto& p3 = std::get<OnBoundary>(pt);
  return BoundaryLeaf{p3.strip, p3.side};
}

Certified is_properly_embedded(const StripModel& m, const LeafDescriptor& leaf) {
  Certified c;
  c.value = true;
  if (const auto* il = std::get_if<InteriorLeaf>(&leaf)) {
    c.certificate = "horizontal line x -> (x, " + to_string(il->y) + ") in strip " +
                    m.strips.at(il->strip).name +
                    "; preimages of compacta are compact and the complement is a union of open "
                    "height slabs, so the leaf is closed";
  } else if (const auto* al = std::get_if<ArcLeaf>(&leaf)) {
    const Arc& a = m.arc(m.gluings.at(al->gluing).a);
    c.certificate = "glued arc " + arc_to_text(a) +
                    "; its endpoints are removed from the surface, so escaping parameter sequences "
                    "leave every compact set and the arc is closed";
  } else {
    const auto& bl = std::get<BoundaryLeaf>(leaf);
    c.certificate = "boundary line of " + m.strips.at(bl.strip).name + "." + side_name_str(bl.side) +
                    "; closed as the full frontier line of a single strip";
  }
  return c;
}

// --- doubling ---------------------------------------------------------------

ModelPoint Involution::apply(const ModelPoint& pt) const {
  if (const auto* p = std::get_if<InStrip>(&pt)) return InStrip{strip_map.at(p->strip), p->x, p->y};
  if (const auto* p2 = std::get_if<OnArc>(&pt)) return OnArc{gluing_map.at(p2->gluing), p2->x};
  const auto& p3 = std::get<OnBoundary>(pt);
  return OnBoundary{strip_map.at(p3.strip), p3.side, p3.x};
}

LeafDescriptor Involution::apply(const LeafDescriptor& leaf) const {
  if (const auto* il = std::get_if<InteriorLeaf>(&leaf)) return InteriorLeaf{strip_map.at(il->strip), il->y};
  if (const auto* al = std::get_if<ArcLeaf>(&leaf)) return ArcLeaf{gluing_map.at(al->gluing)};
  const auto& bl = std::get<BoundaryLeaf>(leaf);
  return BoundaryLeaf{strip_map.at(bl.strip), bl.side};
}

int DoubledModel::join_of_boundary(int orig_strip, SideName side) const {
  for (int j : joins) {
    const Gluing& g = model.gluings.at(j);
    if (g.a.strip == orig_strip && g.a.side == side) return j;
  }
  throw std::invalid_argument("no join gluing for that side (was it Boundary in the original?)");
}

DoubledModel double_model(const StripModel& m) {
  DoubledModel out;
  const int n = static_cast<int>(m.strips.size());
  const int ng = static_cast<int>(m.gluings.size());

  std::set<std::string> taken;
  auto unique_name = [&taken](std::string base) {
    while (taken.count(base)) base += "_";
    taken.insert(base);
    return base;
  };

  auto copy_side = [](const Side& sd) {
    if (sd.kind != SideKind::Boundary) return sd;
    Side g;
    g.kind = SideKind::Glued;
    g.arcs.push_back(Arc{ExtRat::neg_inf(), ExtRat::pos_inf()});
    return g;
  };

  for (int copy = 0; copy < 2; ++copy) {
    for (int i = 0; i < n; ++i) {
      Strip s;
      s.name = unique_name(m.strips[i].name + (copy == 0 ? "_1" : "_2"));
      s.bottom = copy_side(m.strips[i].bottom);
      s.top = copy_side(m.strips[i].top);
      out.model.strips.push_back(std::move(s));
    }
  }
  out.involution.strip_map.resize(2 * n);
  for (int i = 0; i < n; ++i) {
    out.involution.strip_map[i] = i + n;
    out.involution.strip_map[i + n] = i;
  }

  for (int copy = 0; copy < 2; ++copy) {
    for (const Gluing& g : m.gluings) {
      Gluing h = g;
      h.a.strip += copy * n;
      h.b.strip += copy * n;
      out.model.gluings.push_back(h);
    }
  }
  out.involution.gluing_map.resize(2 * ng);
  for (int i = 0; i < ng; ++i) {
    out.involution.gluing_map[i] = i + ng;
    out.involution.gluing_map[i + ng] = i;
  }

  // One Keep gluing per former Boundary side, joining the two copies along the
  // full line; these are the fixed gluings of the involution.
  for (int i = 0; i < n; ++i) {
    for (SideName which : {SideName::Bottom, SideName::Top}) {
      const Side& sd = m.side(i, which);
      if (sd.kind != SideKind::Boundary) continue;
      int gi = static_cast<int>(out.model.gluings.size());
      out.model.gluings.push_back(
          Gluing{ArcRef{i, which, 0}, ArcRef{i + n, which, 0}, GlueOrient::Keep});
      out.involution.gluing_map.push_back(gi);
      out.joins.push_back(gi);
    }
  }
  return out;
}

}  // namespace stripfold

#pragma once

#include "stripfold/rational.hpp"

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace stripfold {

// A striped model: finitely many strips R x (0,1) foliated by horizontal
// lines, glued along open arcs of their horizontal boundary lines y=0 / y=1.
// The transversal is always normalized to (0,1); arc coordinates live on the
// horizontal axis and may be half-infinite or full-line.

enum class SideName { Bottom, Top };
enum class SideKind { Open, Boundary, Glued };
enum class GlueOrient { Keep, Flip };

inline const char* side_name_str(SideName s) { return s == SideName::Bottom ? "bottom" : "top"; }

struct Arc {
  ExtRat lo, hi;  // open interval (lo, hi)
};

struct Side {
  SideKind kind = SideKind::Open;
  std::vector<Arc> arcs;  // populated only when kind == Glued; sorted by lo
};

struct Strip {
  std::string name;
  Side bottom, top;
};

// Names one arc: <strip>.<side>.<index into that side's arc list>.
struct ArcRef {
  int strip = -1;
  SideName side = SideName::Bottom;
  int index = -1;
  friend bool operator==(const ArcRef&, const ArcRef&) = default;
};

struct Gluing {
  ArcRef a, b;          // never the same strip side
  GlueOrient orient = GlueOrient::Keep;
};

struct StripModel {
  std::vector<Strip> strips;
  std::vector<Gluing> gluings;

  int strip_index(std::string_view name) const;  // -1 if absent
  const Side& side(int strip, SideName which) const;
  const Arc& arc(const ArcRef& ref) const;

  // Half the minimum of 1 and every finite positive gap between consecutive
  // arc endpoints along glued sides.  Collar heights at or below this value
  // keep top and bottom collars of any strip disjoint.
  Rat default_collar() const;
};

// --- leaves and points ------------------------------------------------------

struct InteriorLeaf {
  int strip;
  Rat y;  // in (0,1)
  friend bool operator==(const InteriorLeaf&, const InteriorLeaf&) = default;
};
struct ArcLeaf {
  int gluing;
  friend bool operator==(const ArcLeaf&, const ArcLeaf&) = default;
};
struct BoundaryLeaf {
  int strip;
  SideName side;
  friend bool operator==(const BoundaryLeaf&, const BoundaryLeaf&) = default;
};
using LeafDescriptor = std::variant<InteriorLeaf, ArcLeaf, BoundaryLeaf>;

std::string leaf_to_string(const StripModel& m, const LeafDescriptor& leaf);

struct InStrip {
  int strip;
  Rat x, y;  // y in (0,1)
  friend bool operator==(const InStrip&, const InStrip&) = default;
};
struct OnArc {
  int gluing;
  Rat x;  // in arc_a coordinates, strictly inside the arc interval
  friend bool operator==(const OnArc&, const OnArc&) = default;
};
struct OnBoundary {
  int strip;
  SideName side;
  Rat x;
  friend bool operator==(const OnBoundary&, const OnBoundary&) = default;
};
using ModelPoint = std::variant<InStrip, OnArc, OnBoundary>;

std::string point_to_string(const StripModel& m, const ModelPoint& pt);

// --- parsing and validation -------------------------------------------------

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

// Line-oriented format:
//   strip <id> [<lo> <hi>]
//   side <id> <bottom|top> <open | boundary | arcs (p,q) ...>
//   glue <id>.<side>.<idx> <id>.<side>.<idx> <keep|flip>
// '#' starts a comment; undeclared sides are open.  A declared transversal
// interval <lo> <hi> is normalized to (0,1) on the spot.
StripModel parse_model(std::string_view text);

// Canonical serialization; parse_model(model_to_text(m)) reproduces m.
std::string model_to_text(const StripModel& m);

struct ValidationIssue {
  std::string code;     // stable machine-readable tag, e.g. "overlapping arcs"
  std::string message;  // human-readable location + detail
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

ValidationReport validate_model(const StripModel& m);

// --- gluing maps ------------------------------------------------------------

// x -> slope*x + offset with nonzero rational slope (positive for Keep,
// negative for Flip).
struct AffineMap {
  Rat slope{1}, offset{0};
  Rat operator()(const Rat& x) const { return slope * x + offset; }
  AffineMap inverse() const { return {Rat(1) / slope, Rat(-offset / slope)}; }
};

// The unique affine identification of arc_a with arc_b compatible with the
// orientation and matching endpoint types.
AffineMap affine_gluing_map(const StripModel& m, int gluing);

// --- point / leaf queries ---------------------------------------------------

// Throws std::invalid_argument when the point is outside the model's domain
// (height outside (0,1), arc coordinate outside the arc, side not Boundary).
void check_point(const StripModel& m, const ModelPoint& pt);

LeafDescriptor leaf_of(const StripModel& m, const ModelPoint& pt);

struct Certified {
  bool value = false;
  std::string certificate;
};

// Every leaf of a valid striped model is a properly embedded line; the
// certificate names the closed parametrization witnessing it.
Certified is_properly_embedded(const StripModel& m, const LeafDescriptor& leaf);

// --- doubling ---------------------------------------------------------------

// The copy swap of a doubled model.  Fixed points are exactly the gluings
// created from former Boundary sides.
struct Involution {
  std::vector<int> strip_map;   // strip i of the double -> its mirror strip
  std::vector<int> gluing_map;  // gluing i -> its mirror gluing

  ModelPoint apply(const ModelPoint& pt) const;
  LeafDescriptor apply(const LeafDescriptor& leaf) const;
};

struct DoubledModel {
  StripModel model;
  Involution involution;
  int join_of_boundary(int orig_strip, SideName side) const;  // gluing index
  std::vector<int> joins;  // gluings created from Boundary sides
};

// Two copies of every strip; every Boundary side becomes a full-line Keep
// gluing between the copies; Open sides stay open.
DoubledModel double_model(const StripModel& m);

}  // namespace stripfold

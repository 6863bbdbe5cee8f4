#pragma once

#include "stripfold/saturation.hpp"

#include <functional>
#include <optional>

namespace stripfold {

inline AffineMap affine_compose(const AffineMap& f, const AffineMap& g) {
  return AffineMap{f.slope * g.slope, f.slope * g.offset + f.offset};  // f after g
}

// Strictly increasing map of the integer line into the interval (lo, hi),
// anchored at x0 = g(0) and advancing by `spacing` toward infinite ends,
// hyperbolically toward finite ones.  Defined for every rational index.
Rat end_sigmoid(const ExtRat& lo, const ExtRat& hi, const Rat& x0, const Rat& spacing,
                const Rat& i);

// Interior anchor for an interval: midpoint when finite, one spacing unit in
// from a finite end, 0 on the full line.
Rat default_anchor(const ExtRat& lo, const ExtRat& hi);

// Proper parametrization of an open interval: strictly increasing onto
// (-inf, +inf), the identity on the full line.  Used by exhaustion checks to
// measure how far along a leaf a point sits.
Rat proper_param(const ExtRat& lo, const ExtRat& hi, const Rat& x);

enum class FrameKind { Strip, Vertex, Boundary, Chain };

// One strip of a chain component, with the affine change of coordinates from
// chain coordinates (those of the first strip) and the height orientation.
struct ChainLink {
  int strip;
  AffineMap to_strip;  // chain x -> this strip's x
  bool up;             // true: height = u - t; false: height = 1 - (u - t)
};

struct ChainJoin {
  int gluing;
  int arc_link;    // link index whose strip carries the gluing's arc_a coords
  ExtRat lo, hi;   // the join arc, in chain coordinates
};

// The common kernel behind cross sections, towers and trivializing charts.
// A frame names a family of leaves indexed by a base interval of Y-chart
// coordinates u, a global "chain" coordinate on those leaves, and the section
// positions pos(i, u): where the i-th parallel section crosses the leaf over
// u.  All data is exact-rational; evaluation is deterministic.
struct FiberedFrame {
  FrameKind kind = FrameKind::Strip;
  StripModel model;

  Rat eps{1, 2};    // collar width (Vertex/Boundary), blend width (Chain)
  Rat spacing{1};   // section spacing along free directions
  Rat x0{0};        // anchor position in chain coordinates

  // Strip / Boundary
  int strip = -1;
  SideName side = SideName::Bottom;   // Boundary only
  Rat base_lo{0}, base_hi{1};         // Strip only: height window

  // Vertex
  int gluing = -1;

  // Chain
  std::vector<ChainLink> links;
  std::vector<ChainJoin> joins;  // joins[t] sits between links[t] and links[t+1]

  // --- base interval -------------------------------------------------------
  std::pair<Rat, Rat> base_range() const;
  bool base_includes_lo() const { return kind == FrameKind::Boundary; }
  bool base_contains(const Rat& u) const;
  Rat base_center() const;

  // --- leaves --------------------------------------------------------------
  LeafDescriptor leaf_at(const Rat& u) const;
  std::optional<Rat> u_of_leaf(const LeafDescriptor& leaf) const;
  // Chain-coordinate interval the leaf over u occupies.
  std::pair<ExtRat, ExtRat> leaf_interval(const Rat& u) const;
  Rat leaf_param(const Rat& u, const Rat& chain_x) const {
    auto [lo, hi] = leaf_interval(u);
    return proper_param(lo, hi, chain_x);
  }

  // --- section positions ---------------------------------------------------
  Rat pos_block(const Rat& i, const Rat& u) const;  // i integer-valued
  Rat pos_at(const Rat& t, const Rat& u) const;     // affine between blocks

  // --- between chain coordinates and model points --------------------------
  ModelPoint materialize(const Rat& u, const Rat& chain_x) const;
  std::optional<std::pair<Rat, Rat>> locate(const ModelPoint& pt) const;  // (u, chain_x)
  std::optional<Rat> fiber_from_pos(const Rat& chain_x, const Rat& u) const;

  ModelPoint eval(const Rat& t, const Rat& u) const { return materialize(u, pos_at(t, u)); }
  std::optional<std::pair<Rat, Rat>> invert(const ModelPoint& pt) const;  // (t, u)

  // Leaves the frame parametrizes, as a saturated set.
  SaturatedSet saturation() const;
};

FiberedFrame strip_frame(const StripModel& m, int strip, const Rat& lo, const Rat& hi,
                         const Rat& spacing = Rat(1), const Rat& x0 = Rat(0));
FiberedFrame vertex_frame(const StripModel& m, int gluing, const Rat& eps, const Rat& spacing = Rat(1));
FiberedFrame boundary_frame(const StripModel& m, int strip, SideName side, const Rat& eps,
                            const Rat& spacing = Rat(1));

// --- cross sections ----------------------------------------------------------

// A cross section: u -> point of X, meeting each leaf at most once; its image
// projects injectively to Y.  `fiber` names which parallel copy this is.
struct CrossSection {
  FiberedFrame frame;
  Rat fiber{0};
  LeafDescriptor through;  // the leaf at the frame's central parameter
  Rat anchor{0};           // chain coordinate of the section on that leaf

  ModelPoint eval(const Rat& u) const { return frame.eval(fiber, u); }
  std::pair<Rat, Rat> base() const { return frame.base_range(); }
};

// Canonical section through a leaf: vertical segment at the anchor position,
// crossing the collar(s) around the leaf.  Interior leaves get a strip
// segment, arc leaves a vertex star, boundary leaves a one-sided star.
CrossSection cross_section_through(const StripModel& m, const LeafDescriptor& leaf);

// --- towers ------------------------------------------------------------------

struct TowerParams {
  Rat spacing{1};
  std::optional<Rat> collar;  // default: the model's collar
};

// The family of parallel sections gamma_i generated from a seed section by the
// sigmoid/linear blend; sections interleave strictly and exhaust every leaf.
struct SectionTower {
  FiberedFrame frame;
  CrossSection section(const Rat& i) const;
};

SectionTower parallel_tower(const StripModel& m, const CrossSection& seed,
                            const TowerParams& params = {});

// --- half-leaf tails ---------------------------------------------------------

enum class TailSide { Left, Right };

// Closed half-leaf beyond a cutoff, in the leaf's own coordinates.
struct HalfLeafTail {
  LeafDescriptor leaf;
  TailSide side;
  Rat cutoff;
};

// The two closed half-leaves beyond every section crossing, pushed out by
// `margin` (shrunk to stay inside a finite leaf interval).  Throws
// std::invalid_argument when no section meets the leaf.
std::pair<HalfLeafTail, HalfLeafTail> half_leaf_tails(const StripModel& m,
                                                      const std::vector<CrossSection>& sections,
                                                      const LeafDescriptor& leaf,
                                                      const Rat& margin = Rat(1));

}  // namespace stripfold

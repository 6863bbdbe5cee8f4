#pragma once

#include "stripfold/model.hpp"

#include <map>
#include <set>
#include <variant>

namespace stripfold {

// Basic open sets of the glued surface.  Saturating one produces a union of
// whole leaves that is again open; these are the building blocks for every
// neighborhood argument in the library.

// Open rectangle (x_lo,x_hi) x (y_lo,y_hi) inside one strip.
struct RectBox {
  int strip;
  ExtRat x_lo{ExtRat::neg_inf()}, x_hi{ExtRat::pos_inf()};
  Rat y_lo, y_hi;
};

// Open sub-arc of a gluing (in arc_a coordinates) together with height
// collars reaching into both glued strips.
struct ArcCollarBox {
  int gluing;
  ExtRat s_lo, s_hi;
  Rat collar_a, collar_b;  // in (0,1]
};

// Open interval of a Boundary side together with a one-sided height collar.
struct BoundaryCollarBox {
  int strip;
  SideName side;
  ExtRat x_lo{ExtRat::neg_inf()}, x_hi{ExtRat::pos_inf()};
  Rat collar;  // in (0,1]
};

using BasicBox = std::variant<RectBox, ArcCollarBox, BoundaryCollarBox>;

// A saturated open set, stored by leaf descriptors: per strip a normalized
// union of open height intervals, plus whole arc and boundary leaves.  When an
// arc or boundary leaf belongs to the set, the adjacent height collars do too
// (that is what keeps the set open); saturate_basic guarantees it.
struct SaturatedSet {
  std::map<int, std::vector<std::pair<Rat, Rat>>> heights;  // strip -> sorted disjoint intervals
  std::set<int> arc_leaves;
  std::set<std::pair<int, SideName>> boundary_leaves;

  bool empty() const { return heights.empty() && arc_leaves.empty() && boundary_leaves.empty(); }
  bool contains_leaf(const LeafDescriptor& leaf) const;
  bool contains_point(const StripModel& m, const ModelPoint& pt) const;

  // Sort, merge overlapping intervals (touching open intervals stay apart),
  // drop empty ones.
  void normalize();

  friend bool operator==(const SaturatedSet&, const SaturatedSet&) = default;
};

// Union of the leaves meeting the box.  Throws std::invalid_argument on a
// degenerate box (empty interior, sub-arc outside the arc, collar <= 0).
SaturatedSet saturate_basic(const StripModel& m, const BasicBox& box);

// Saturation of an already saturated set: the identity, modulo normalization.
SaturatedSet saturate_set(const StripModel& m, const SaturatedSet& s);

SaturatedSet sat_union(const SaturatedSet& a, const SaturatedSet& b);
bool sets_intersect(const SaturatedSet& a, const SaturatedSet& b);
bool set_contains(const SaturatedSet& outer, const SaturatedSet& inner);

// Openness witness: a basic box around pt whose saturation stays inside the
// set.  Empty when the set is not a neighborhood of pt (e.g. an arc leaf
// without its collars).
std::optional<BasicBox> contained_basic_neighborhood(const StripModel& m, const SaturatedSet& s,
                                                     const ModelPoint& pt);

struct OpennessCheck {
  bool ok = true;
  int points_checked = 0;
  std::vector<std::string> failures;
};

// Samples boundary-adjacent points of every piece of the set (interval ends,
// arc ends, far tails) and asks each for a contained basic neighborhood.
OpennessCheck check_openness_by_sampling(const StripModel& m, const SaturatedSet& s,
                                         int target_points);

}  // namespace stripfold

#pragma once

#include "stripfold/report.hpp"
#include "stripfold/section.hpp"

namespace stripfold {

// Trivializing chart: a fibered homeomorphism Phi : R x V -> X onto a
// saturated open set, with V an interval of Y-chart coordinates.  Phi(., u)
// parametrizes exactly the leaf over u; integer fiber values land on the
// parallel sections of the underlying tower.
struct TrivChart {
  FiberedFrame frame;
  SaturatedSet saturation;
  std::optional<std::pair<Rat, Rat>> fiber_bounds;  // restricted charts only
  // Test hook: perturbs the fiber coordinate before evaluation, so planted
  // faults are visible to the verification harness.  Never serialized.
  std::function<Rat(const Rat&)> fiber_reparam;

  ModelPoint eval(const Rat& t, const Rat& u) const {
    return frame.eval(fiber_reparam ? fiber_reparam(t) : t, u);
  }
  std::optional<std::pair<Rat, Rat>> invert(const ModelPoint& pt) const {
    return frame.invert(pt);
  }
  std::pair<Rat, Rat> base() const { return frame.base_range(); }
};

// Tube around one leaf: runs the canonical section, spans the parallel tower,
// and assembles the block map.
TrivChart trivialize_leaf_neighborhood(const StripModel& m, const LeafDescriptor& leaf);

// The fiber-s slice of a chart.  Throws when s leaves declared fiber bounds.
CrossSection section_from_chart(const TrivChart& chart, const Rat& s);

struct TrivAtlas {
  std::vector<TrivChart> charts;
};

// One slab chart per strip plus one tube per gluing and per boundary side;
// bases cover Y.  The collar sets the tube half-width (and the slab inset,
// half of it); it must stay within the model's safe default so tubes remain
// disjoint from neighbouring arc ends.
TrivAtlas build_atlas(const StripModel& m);
TrivAtlas build_atlas(const StripModel& m, const Rat& collar, const Rat& spacing);

// Grid certification of one chart: domain validity, saturation membership,
// leaf constancy along fibers, strict fiber monotonicity, base injectivity,
// exact inverse round-trips, and leaf exhaustion beyond |1000| in proper leaf
// coordinates.
GridReport verify_trivialization(const StripModel& m, const TrivChart& chart, int grid_n = 101);

// Atlas certification: every chart verified, chart bases cover Y, and all
// overlapping chart pairs have fiber-preserving exact transitions.
GridReport verify_atlas(const StripModel& m, const TrivAtlas& atlas, int grid_n = 101,
                        int transition_n = 7);

// JSON round trip; the model text is embedded so a serialized atlas is
// self-contained.
std::string atlas_to_json(const StripModel& m, const TrivAtlas& atlas);
std::pair<StripModel, TrivAtlas> atlas_from_json(const std::string& text);

// --- Kaplan decomposition ----------------------------------------------------

struct KaplanComponent {
  std::vector<int> strips;  // in chain order
  std::vector<int> joins;   // gluings merged inside the component
  TrivChart chart;          // certificate: component is a trivial (0,k)-chain
};

struct KaplanDecomposition {
  std::vector<LeafDescriptor> special_leaves;
  std::vector<LeafDescriptor> boundary_cuts;  // boundary leaves, always cut
  std::vector<int> extra_cuts;                // joins cut to break chain cycles
  std::vector<KaplanComponent> components;
};

// Cut the surface along all special leaves (and boundary leaves); merge the
// remaining strips across non-special gluings into chain components, each
// certified trivial by its chart.
KaplanDecomposition kaplan_decomposition(const StripModel& m);

}  // namespace stripfold

#pragma once

#include "stripfold/saturation.hpp"

namespace stripfold {

// Finite presentation of the leaf space Y: the quotient of the glued surface
// by its partition into leaves.  Each strip contributes one open edge (its
// height interval), each gluing one vertex (the arc leaf) and each Boundary
// side one vertex (the boundary leaf).  Y is a 1-manifold except at branch
// points, and generally non-Hausdorff.

enum class VertexKind { Arc, Boundary };

struct LeafVertex {
  VertexKind kind;
  int gluing = -1;                  // Arc: index into model.gluings
  int strip = -1;                   // Boundary: the side end it closes off
  SideName side = SideName::Bottom;

  friend bool operator==(const LeafVertex&, const LeafVertex&) = default;
};

using SideEnd = std::pair<int, SideName>;  // (strip, side)

struct LeafSpaceGraph {
  std::vector<std::string> edges;  // edge i = strip i, labeled by strip name
  std::vector<LeafVertex> vertices;
  // Every non-Open side end, with the vertices attached there in arc order
  // (left to right along the side; a Boundary end carries its single vertex).
  std::map<SideEnd, std::vector<int>> attachments;
  std::set<std::pair<int, int>> nonseparated;  // vertex pairs, first < second

  std::vector<SideEnd> ends_of(int v) const;  // 2 for arc vertices, 1 for boundary
  std::vector<int> nonseparated_with(int v) const;
  bool is_special(int v) const { return !nonseparated_with(v).empty(); }
  int vertex_of(const LeafDescriptor& leaf) const;  // -1 for interior leaves

  friend bool operator==(const LeafSpaceGraph&, const LeafSpaceGraph&) = default;
};

// Vertices in gluing order, then boundary vertices in (strip, side) order;
// nonseparated(v,w) holds iff v != w and they share an attached side end.
LeafSpaceGraph build_leaf_space(const StripModel& m);

// --- points of Y -------------------------------------------------------------

struct EdgePoint {
  int strip;
  Rat y;  // in (0,1)
  friend bool operator==(const EdgePoint&, const EdgePoint&) = default;
};
struct VertexPoint {
  int vertex;
  friend bool operator==(const VertexPoint&, const VertexPoint&) = default;
};
using YPoint = std::variant<EdgePoint, VertexPoint>;

YPoint project_leaf(const LeafSpaceGraph& g, const LeafDescriptor& leaf);

// Edge-interior points are their own closure; a vertex adds its non-separated
// partners.  Throws std::invalid_argument on a point outside the graph.
std::vector<YPoint> hausdorff_closure(const LeafSpaceGraph& g, const YPoint& u);

// Vertices where Y fails to be Hausdorff.
std::vector<int> special_points(const LeafSpaceGraph& g);

// --- the shrinking-neighborhood oracle ---------------------------------------

// Basic saturated neighborhood of a leaf with the given collar width
// (interior leaves get the height band (y-collar, y+collar)).
SaturatedSet leaf_neighborhood(const StripModel& m, const LeafDescriptor& leaf, const Rat& collar);

// Brute-force non-separation test straight from the definition: shrink
// matched basic neighborhoods geometrically (collar/2^k, k = 1..depth) and
// intersect.  Separation is detected exactly; surviving every round reports
// non-separation.  Independent of the combinatorial rule in build_leaf_space.
bool nonseparated_oracle(const StripModel& m, const LeafDescriptor& A, const LeafDescriptor& B,
                         int depth = 20);

// The complement of a single leaf, as a saturated set; its openness (checkable
// by sampling) certifies that leaves are closed, i.e. Y is T1.
SaturatedSet leaf_complement(const StripModel& m, const LeafDescriptor& leaf);

// --- images in Y -------------------------------------------------------------

// Open subset of Y presented as edge subintervals plus vertices.
struct YOpenSet {
  std::map<int, std::vector<std::pair<Rat, Rat>>> edge_intervals;
  std::set<int> vertices;
  friend bool operator==(const YOpenSet&, const YOpenSet&) = default;
};

// Image of a saturated set under the quotient projection.
YOpenSet project_saturated(const LeafSpaceGraph& g, const SaturatedSet& s);

// The image is open iff every vertex in it carries a height collar on each of
// its attached side ends; this is the finite check behind "p is open".
bool y_image_is_open(const LeafSpaceGraph& g, const SaturatedSet& s);

// --- hypothesis verification -------------------------------------------------

struct HypothesisReport {
  Certified all_leaves_noncompact;
  Certified special_family_locally_finite;
  Certified t1;
  bool hausdorff = false;  // informative; not required by the fibration theorem
  Certified locally_euclidean;

  bool ok() const {
    return all_leaves_noncompact.value && special_family_locally_finite.value && t1.value &&
           locally_euclidean.value;
  }
};

HypothesisReport hypothesis_report(const StripModel& m, const LeafSpaceGraph& g);

// --- export ------------------------------------------------------------------

// format: "dot" | "json".  Deterministic; throws std::invalid_argument on an
// unknown format.
std::string export_graph(const LeafSpaceGraph& g, const std::string& format);
LeafSpaceGraph graph_from_json(const std::string& text);

}  // namespace stripfold

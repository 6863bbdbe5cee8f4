#pragma once

#include "stripfold/chart.hpp"

#include <functional>
#include <memory>
#include <optional>

namespace stripfold {

// Floating-point kernels: slab straightening, chart normalization and
// concatenation, partition-of-unity gluing, and a grid harness certifying
// fibered homeomorphisms numerically.  Everything here evaluates in double
// precision; exactness claims are limited to dyadic fixed points (interval
// ends, identity degeneracies).

// Point of the numeric plane: fiber value s over base value z.
struct NumPoint {
  double s = 0, z = 0;
};

// An evaluable fibered map (t, u) -> (s, z) on a closed domain rectangle.
// The base is preserved up to reparametrization: z depends only on u.  When
// the map lands in a striped model, `model` and `eval_model` expose the exact
// point for leaf-preservation checks.
struct EmbeddingEvaluator {
  double t_lo = 0, t_hi = 1;  // fiber domain
  double u_lo = 0, u_hi = 1;  // base domain
  double s_lo = 0, s_hi = 1;  // codomain fiber interval (used when fixes_ends)
  bool fixes_ends = false;    // declared: s(t_lo, u) = s_lo and s(t_hi, u) = s_hi

  std::function<NumPoint(double t, double u)> eval;  // throws std::domain_error outside
  std::function<std::optional<NumPoint>(double s, double z)> inverse;  // optional

  std::shared_ptr<const StripModel> model;  // optional exact codomain
  std::function<ModelPoint(double t, double u)> eval_model;
};

EmbeddingEvaluator identity_evaluator(double t_lo, double t_hi, double u_lo, double u_hi);
// Same map on a narrower fiber interval (must be inside the old one).
EmbeddingEvaluator restrict_fiber(const EmbeddingEvaluator& e, double t_lo, double t_hi);
// Same image, fiber coordinate shifted by delta: result(t, u) = e(t - delta, u).
EmbeddingEvaluator shift_fiber(const EmbeddingEvaluator& e, double delta);

// Double-precision view of an exact trivializing chart, on the fiber window
// [-fiber_span, fiber_span] and the chart's base slightly inset (closed base
// ends are kept).  Carries the model for leaf checks; the inverse goes through
// the chart's exact fiber solve.
EmbeddingEvaluator numeric_view(const TrivChart& chart, double fiber_span = 5.0);

// --- graph straightening ------------------------------------------------------

// k disjoint graphs over a sampled base segment, with the levels they should
// be straightened to.  Between samples the graphs are interpolated linearly,
// which preserves their ordering.
struct GraphSample {
  std::vector<double> z;                    // sorted base samples
  std::vector<std::vector<double>> values;  // values[i][j] = f_i(z[j]); f_0 < f_1 < ...
  double a = 0, b = 1;                      // fiber interval (a, b)
  std::vector<double> targets;              // c_0 < c_1 < ... in (a, b)
};

std::string graph_sample_to_json(const GraphSample& gs);
GraphSample graph_sample_from_json(const std::string& text);

// Self-homeomorphism h of [a,b] x Z, fixing every line [a,b] x {z} as a set
// and both its ends pointwise, with h(f_i(z), z) = (c_i, z) at every sample.
// One power map s -> s^E per slab between already-placed levels, applied
// bottom-up.  Lines where every f_i(z) = c_i come out as the identity.
// Throws std::invalid_argument on ordering violations or graph/target values
// touching the interval ends.
EmbeddingEvaluator straighten_graphs(const GraphSample& gs);

// --- chart normalization ------------------------------------------------------

// A sampled cross section through a chart's image, in codomain coordinates.
struct SectionSamples {
  std::vector<double> x;         // sorted section parameters
  std::vector<NumPoint> points;  // gamma(x[j])
};

// Reparametrizes `chart` so the level-c slice runs along the section:
// result(c, x) = gamma(x) at every sample, and lines where the section
// already sits at level c are untouched.  Base reparametrization by the
// section's base projection, then a single-graph straightening along fibers.
// Throws std::invalid_argument when the section leaves the chart or c leaves
// the fiber interval.
EmbeddingEvaluator normalize_chart(const SectionSamples& sec, double c,
                                   const EmbeddingEvaluator& chart);

// --- chart concatenation ------------------------------------------------------

struct OverlapSpec {
  double seam = 0;    // fiber value where the charts are spliced
  double tol = 1e-9;  // allowed base drift across the seam
};

// Splices two overlapping fibered charts along the line t = seam: below it,
// phi1 with each fiber affinely squeezed onto [t_lo, w(u)] where
// w(u) = phi1^-1(phi2(seam, u)); above it, phi2 unchanged.  Throws
// std::invalid_argument when the domains do not overlap and std::runtime_error
// when the seam transition drifts in the base beyond tol.
EmbeddingEvaluator concat_charts(const EmbeddingEvaluator& phi1, const EmbeddingEvaluator& phi2,
                                 const OverlapSpec& overlap);

// --- partition-of-unity gluing ------------------------------------------------

// One piece of a fiberwise partition of unity along a leaf segment
// parametrized by sigma in [0, 1]: a support window, sampled weights
// (vanishing outside the support) and the sampled local fiber coordinate.
struct POUPiece {
  double lo = 0, hi = 1;
  std::vector<double> weight;
  std::vector<double> local;
};

struct POUSpec {
  std::vector<double> sigma;  // sorted, from 0 to 1 inclusive
  std::vector<POUPiece> pieces;
  double tol = 1e-9;
};

struct POUResult {
  std::vector<double> f;  // glued fiber coordinate per sample
  GridReport report;
};

// f(sigma) = sum_i weight_i(sigma) * local_i(sigma).  The report checks that
// weights sum to one and respect their supports, that every weighted piece and
// the glued function are strictly increasing, and that f runs from 0 to 1.
// Structural defects (sizes, unsorted samples) throw std::invalid_argument;
// semantic faults land in the report.
POUResult pou_glue(const POUSpec& spec);

// --- verification harness -----------------------------------------------------

// Grid certification of a numeric fibered map: base preserved along fibers,
// fibers strictly monotone, base injective, declared end fixing, inverse
// round-trips within tol, and (with a model codomain) every fiber line inside
// one leaf.
GridReport check_fibered_homeo(const EmbeddingEvaluator& e, int grid_n = 101, double tol = 1e-9);

// One CSV row per check: name, samples, failures, worst residual.
std::string residuals_csv(const GridReport& report);

}  // namespace stripfold

#pragma once

#include "stripfold/model.hpp"
#include "stripfold/numeric.hpp"

#include <cstdint>

namespace testsupport {

// Seeded generator of valid striped models: up to max_strips strips, at most
// 4 arcs per side, every arc finite with integer endpoints (so any pairing and
// orientation is compatible), no same-side gluings.  Deterministic per seed.
stripfold::StripModel random_model(std::uint64_t seed, int max_strips = 6);

// Up to 3 stacked graphs over up to 5 base samples.  Targets sit on the 1/64
// grid well inside (0, 1); each graph wanders within a quarter of the gap to
// its neighbours (dyadic offsets), which keeps the slab exponents of the
// straightening map moderate — strict monotonicity then survives double
// rounding and is certifiable at tolerance 1e-9.
stripfold::GraphSample random_graph_sample(std::uint64_t seed);

// Two affine pieces overlapping on a window of width >= 0.2 inside [0.3, 0.7],
// slopes within 5% of 1 — a band where the convex glue is provably strictly
// increasing.  101 samples.
stripfold::POUSpec random_pou_spec(std::uint64_t seed);

}  // namespace testsupport

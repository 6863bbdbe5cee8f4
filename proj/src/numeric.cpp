#include "stripfold/numeric.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace stripfold {

using ordered_json = nlohmann::ordered_json;

namespace {

double domain_slack(double lo, double hi) { return 1e-12 * (1 + std::fabs(lo) + std::fabs(hi)); }

void check_rect(double t, double u, const double lo[4]) {
  double st = domain_slack(lo[0], lo[1]), su = domain_slack(lo[2], lo[3]);
  if (t < lo[0] - st || t > lo[1] + st || u < lo[2] - su || u > lo[3] + su)
    throw std::domain_error("evaluator: point outside the domain rectangle");
}

// Value of the polyline (xs, ys) at x; xs strictly increasing, x inside.
double polyline(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  auto it = std::lower_bound(xs.begin(), xs.end(), x);
  size_t hi = static_cast<size_t>(it - xs.begin());
  if (xs[hi] == x) return ys[hi];
  size_t lo = hi - 1;
  double w = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + w * (ys[hi] - ys[lo]);
}

CheckResult make_check(const char* name) {
  CheckResult c;
  c.name = name;
  return c;
}

}  // namespace

// --- basic evaluators ---------------------------------------------------------

EmbeddingEvaluator identity_evaluator(double t_lo, double t_hi, double u_lo, double u_hi) {
  if (!(t_lo < t_hi) || !(u_lo <= u_hi))
    throw std::invalid_argument("identity_evaluator: bad rectangle");
  EmbeddingEvaluator e;
  e.t_lo = t_lo;
  e.t_hi = t_hi;
  e.u_lo = u_lo;
  e.u_hi = u_hi;
  e.s_lo = t_lo;
  e.s_hi = t_hi;
  e.fixes_ends = true;
  double rect[4] = {t_lo, t_hi, u_lo, u_hi};
  e.eval = [=](double t, double u) {
    check_rect(t, u, rect);
    return NumPoint{t, u};
  };
  e.inverse = [=](double s, double z) -> std::optional<NumPoint> {
    if (s < rect[0] - domain_slack(rect[0], rect[1]) ||
        s > rect[1] + domain_slack(rect[0], rect[1]))
      return std::nullopt;
    return NumPoint{s, z};
  };
  return e;
}

EmbeddingEvaluator restrict_fiber(const EmbeddingEvaluator& e, double t_lo, double t_hi) {
  double slack = domain_slack(e.t_lo, e.t_hi);
  if (!(t_lo < t_hi) || t_lo < e.t_lo - slack || t_hi > e.t_hi + slack)
    throw std::invalid_argument("restrict_fiber: window not inside the chart");
  EmbeddingEvaluator r = e;
  r.t_lo = t_lo;
  r.t_hi = t_hi;
  r.fixes_ends = false;
  return r;
}

EmbeddingEvaluator shift_fiber(const EmbeddingEvaluator& e, double delta) {
  EmbeddingEvaluator r;
  r.t_lo = e.t_lo + delta;
  r.t_hi = e.t_hi + delta;
  r.u_lo = e.u_lo;
  r.u_hi = e.u_hi;
  r.s_lo = e.s_lo;
  r.s_hi = e.s_hi;
  r.fixes_ends = e.fixes_ends;
  r.eval = [e, delta](double t, double u) { return e.eval(t - delta, u); };
  if (e.inverse)
    r.inverse = [e, delta](double s, double z) {
      auto inv = e.inverse(s, z);
      if (inv) inv->s += delta;
      return inv;
    };
  r.model = e.model;
  if (e.eval_model)
    r.eval_model = [e, delta](double t, double u) { return e.eval_model(t - delta, u); };
  return r;
}

EmbeddingEvaluator numeric_view(const TrivChart& chart, double fiber_span) {
  if (!(fiber_span > 0)) throw std::invalid_argument("numeric_view: span must be positive");
  auto ch = std::make_shared<const TrivChart>(chart);
  auto [blo, bhi] = chart.frame.base_range();
  Rat inset = (bhi - blo) / 64;
  Rat ulo = chart.frame.base_includes_lo() ? blo : blo + inset;
  Rat uhi = bhi - inset;

  EmbeddingEvaluator e;
  e.t_lo = -fiber_span;
  e.t_hi = fiber_span;
  e.u_lo = to_double(ulo);
  e.u_hi = to_double(uhi);
  e.model = std::shared_ptr<const StripModel>(ch, &ch->frame.model);
  e.eval = [ch](double t, double u) {
    Rat ru = rat_from_double(u);
    if (!ch->frame.base_contains(ru)) throw std::domain_error("numeric_view: u outside the base");
    Rat rt = rat_from_double(t);
    if (ch->fiber_reparam) rt = ch->fiber_reparam(rt);
    return NumPoint{to_double(ch->frame.pos_at(rt, ru)), u};
  };
  e.eval_model = [ch](double t, double u) {
    return ch->eval(rat_from_double(t), rat_from_double(u));
  };
  e.inverse = [ch](double s, double z) -> std::optional<NumPoint> {
    Rat rz = rat_from_double(z);
    if (!ch->frame.base_contains(rz)) return std::nullopt;
    auto t = ch->frame.fiber_from_pos(rat_from_double(s), rz);
    if (!t) return std::nullopt;
    return NumPoint{to_double(*t), z};
  };
  return e;
}

// --- graph straightening ------------------------------------------------------

namespace {

void validate_graph_sample(const GraphSample& gs) {
  if (gs.z.empty()) throw std::invalid_argument("graph sample: no base samples");
  for (size_t j = 1; j < gs.z.size(); ++j)
    if (!(gs.z[j - 1] < gs.z[j]))
      throw std::invalid_argument("graph sample: base samples not strictly increasing");
  if (!std::isfinite(gs.a) || !std::isfinite(gs.b) || !(gs.a < gs.b))
    throw std::invalid_argument("graph sample: bad fiber interval");
  if (gs.values.size() != gs.targets.size())
    throw std::invalid_argument("graph sample: graph and target counts differ");
  for (size_t i = 0; i < gs.values.size(); ++i) {
    if (gs.values[i].size() != gs.z.size())
      throw std::invalid_argument("graph sample: sample count mismatch");
    for (double v : gs.values[i])
      if (!(gs.a < v && v < gs.b))
        throw std::invalid_argument("graph sample: graph value touches the fiber interval ends");
    if (i > 0)
      for (size_t j = 0; j < gs.z.size(); ++j)
        if (!(gs.values[i - 1][j] < gs.values[i][j]))
          throw std::invalid_argument("graph sample: graph ordering violation at sample " +
                                      std::to_string(j));
  }
  for (size_t i = 0; i < gs.targets.size(); ++i) {
    if (!(gs.a < gs.targets[i] && gs.targets[i] < gs.b))
      throw std::invalid_argument("graph sample: target outside the fiber interval");
    if (i > 0 && !(gs.targets[i - 1] < gs.targets[i]))
      throw std::invalid_argument("graph sample: targets not strictly increasing");
  }
}

// One slab power map on [lo, b], the identity below lo and at both ends.
double slab_pow(double v, double lo, double b, double E) {
  if (E == 1.0 || v <= lo || v >= b) return v;
  return lo + (b - lo) * std::pow((v - lo) / (b - lo), E);
}

std::vector<double> graphs_at(const GraphSample& gs, double z) {
  std::vector<double> f(gs.values.size());
  auto it = std::lower_bound(gs.z.begin(), gs.z.end(), z);
  if (it == gs.z.end()) {
    for (size_t i = 0; i < f.size(); ++i) f[i] = gs.values[i].back();
    return f;
  }
  size_t hi = static_cast<size_t>(it - gs.z.begin());
  if (gs.z[hi] == z || hi == 0) {
    for (size_t i = 0; i < f.size(); ++i) f[i] = gs.values[i][hi];
    return f;
  }
  double w = (z - gs.z[hi - 1]) / (gs.z[hi] - gs.z[hi - 1]);
  for (size_t i = 0; i < f.size(); ++i)
    f[i] = gs.values[i][hi - 1] + w * (gs.values[i][hi] - gs.values[i][hi - 1]);
  return f;
}

struct SlabTable {
  std::vector<double> lo, exponent;
};

// The per-slab exponents at base point z: each slab sends the current position
// of its graph to the target while fixing everything already placed.
SlabTable slab_table(const GraphSample& gs, double z) {
  std::vector<double> f = graphs_at(gs, z);
  SlabTable t;
  double floor = gs.a;
  for (size_t i = 0; i < gs.targets.size(); ++i) {
    double width = gs.b - floor;
    double fhat = (f[i] - floor) / width;
    double chat = (gs.targets[i] - floor) / width;
    double E = fhat == chat ? 1.0 : std::log(chat) / std::log(fhat);
    t.lo.push_back(floor);
    t.exponent.push_back(E);
    for (size_t j = i + 1; j < f.size(); ++j) f[j] = slab_pow(f[j], floor, gs.b, E);
    floor = gs.targets[i];
  }
  return t;
}

}  // namespace

EmbeddingEvaluator straighten_graphs(const GraphSample& gs) {
  validate_graph_sample(gs);
  auto data = std::make_shared<const GraphSample>(gs);

  EmbeddingEvaluator e;
  e.t_lo = gs.a;
  e.t_hi = gs.b;
  e.u_lo = gs.z.front();
  e.u_hi = gs.z.back();
  e.s_lo = gs.a;
  e.s_hi = gs.b;
  e.fixes_ends = true;
  double rect[4] = {e.t_lo, e.t_hi, e.u_lo, e.u_hi};
  e.eval = [data, rect](double t, double u) {
    check_rect(t, u, rect);
    SlabTable tab = slab_table(*data, u);
    double s = t;
    for (size_t i = 0; i < tab.lo.size(); ++i)
      s = slab_pow(s, tab.lo[i], data->b, tab.exponent[i]);
    return NumPoint{s, u};
  };
  e.inverse = [data, rect](double s, double z) -> std::optional<NumPoint> {
    double st = domain_slack(rect[0], rect[1]), su = domain_slack(rect[2], rect[3]);
    if (s < rect[0] - st || s > rect[1] + st || z < rect[2] - su || z > rect[3] + su)
      return std::nullopt;
    SlabTable tab = slab_table(*data, z);
    double t = s;
    for (size_t i = tab.lo.size(); i-- > 0;)
      t = slab_pow(t, tab.lo[i], data->b, 1.0 / tab.exponent[i]);
    return NumPoint{t, z};
  };
  return e;
}

std::string graph_sample_to_json(const GraphSample& gs) {
  ordered_json j;
  j["z"] = gs.z;
  j["values"] = gs.values;
  j["a"] = gs.a;
  j["b"] = gs.b;
  j["targets"] = gs.targets;
  return j.dump(2) + "\n";
}

GraphSample graph_sample_from_json(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  GraphSample gs;
  gs.z = j.at("z").get<std::vector<double>>();
  gs.values = j.at("values").get<std::vector<std::vector<double>>>();
  gs.a = j.at("a").get<double>();
  gs.b = j.at("b").get<double>();
  gs.targets = j.at("targets").get<std::vector<double>>();
  return gs;
}

// --- chart normalization ------------------------------------------------------

EmbeddingEvaluator normalize_chart(const SectionSamples& sec, double c,
                                   const EmbeddingEvaluator& chart) {
  if (sec.x.empty() || sec.x.size() != sec.points.size())
    throw std::invalid_argument("normalize_chart: bad section sampling");
  for (size_t j = 1; j < sec.x.size(); ++j)
    if (!(sec.x[j - 1] < sec.x[j]))
      throw std::invalid_argument("normalize_chart: section parameters not strictly increasing");
  if (!chart.inverse) throw std::invalid_argument("normalize_chart: chart has no inverse");
  if (!(chart.t_lo < c && c < chart.t_hi))
    throw std::invalid_argument("normalize_chart: c outside the fiber interval");

  std::vector<double> tj, uj;
  for (const NumPoint& p : sec.points) {
    auto inv = chart.inverse(p.s, p.z);
    if (!inv || !(chart.t_lo < inv->s && inv->s < chart.t_hi))
      throw std::invalid_argument("normalize_chart: section not within chart");
    tj.push_back(inv->s);
    uj.push_back(inv->z);
  }
  if (uj.size() > 1) {
    bool inc = uj.back() > uj.front();
    for (size_t j = 1; j < uj.size(); ++j)
      if (inc ? !(uj[j - 1] < uj[j]) : !(uj[j - 1] > uj[j]))
        throw std::invalid_argument("normalize_chart: section base not injective");
  }

  GraphSample graph;
  graph.z = sec.x;
  graph.values = {tj};
  graph.a = chart.t_lo;
  graph.b = chart.t_hi;
  graph.targets = {c};
  EmbeddingEvaluator h = straighten_graphs(graph);

  auto xs = std::make_shared<const std::vector<double>>(sec.x);
  auto us = std::make_shared<const std::vector<double>>(uj);
  // The base map u = q(x) and its inverse, as polylines.
  std::vector<double> u_sorted = uj, x_for_u = sec.x;
  if (uj.size() > 1 && uj.back() < uj.front()) {
    std::reverse(u_sorted.begin(), u_sorted.end());
    std::reverse(x_for_u.begin(), x_for_u.end());
  }
  auto usort = std::make_shared<const std::vector<double>>(u_sorted);
  auto xback = std::make_shared<const std::vector<double>>(x_for_u);

  EmbeddingEvaluator e;
  e.t_lo = chart.t_lo;
  e.t_hi = chart.t_hi;
  e.u_lo = sec.x.front();
  e.u_hi = sec.x.back();
  e.s_lo = chart.s_lo;
  e.s_hi = chart.s_hi;
  e.fixes_ends = chart.fixes_ends;
  e.eval = [chart, h, xs, us](double t, double x) {
    auto t0 = h.inverse(t, x);
    if (!t0) throw std::domain_error("normalize_chart: fiber value outside the chart");
    return chart.eval(t0->s, polyline(*xs, *us, x));
  };
  e.inverse = [chart, h, usort, xback](double s, double z) -> std::optional<NumPoint> {
    auto inv = chart.inverse(s, z);
    if (!inv) return std::nullopt;
    double x = polyline(*usort, *xback, inv->z);
    return NumPoint{h.eval(inv->s, x).s, x};
  };
  e.model = chart.model;
  if (chart.eval_model)
    e.eval_model = [chart, h, xs, us](double t, double x) {
      auto t0 = h.inverse(t, x);
      if (!t0) throw std::domain_error("normalize_chart: fiber value outside the chart");
      return chart.eval_model(t0->s, polyline(*xs, *us, x));
    };
  return e;
}

// --- chart concatenation ------------------------------------------------------

EmbeddingEvaluator concat_charts(const EmbeddingEvaluator& phi1, const EmbeddingEvaluator& phi2,
                                 const OverlapSpec& overlap) {
  double u_lo = std::max(phi1.u_lo, phi2.u_lo), u_hi = std::min(phi1.u_hi, phi2.u_hi);
  if (!(std::max(phi1.t_lo, phi2.t_lo) < std::min(phi1.t_hi, phi2.t_hi)) || !(u_lo <= u_hi))
    throw std::invalid_argument("concat_charts: overlap empty");
  double b = overlap.seam;
  if (!(phi1.t_lo < b && b < phi1.t_hi && phi2.t_lo < b && b < phi2.t_hi))
    throw std::invalid_argument("concat_charts: seam outside the overlap");
  if (!phi1.inverse) throw std::invalid_argument("concat_charts: first chart has no inverse");

  double a1 = phi1.t_lo;
  auto w_of = [phi1, phi2, b, a1](double u) {
    NumPoint p = phi2.eval(b, u);
    auto inv = phi1.inverse(p.s, p.z);
    if (!inv) throw std::runtime_error("concat_charts: seam mismatch: seam line leaves the first chart");
    if (!(inv->s > a1))
      throw std::runtime_error("concat_charts: seam mismatch: seam collapses the first chart");
    return *inv;
  };

  // The seam must look the same from both charts: same base point, and the
  // pullback strictly inside the first fiber interval.
  for (int j = 0; j < 17; ++j) {
    double u = u_lo + (u_hi - u_lo) * j / 16.0;
    NumPoint w = w_of(u);
    if (std::fabs(w.z - u) > overlap.tol)
      throw std::runtime_error("concat_charts: seam mismatch: base drift " +
                               std::to_string(std::fabs(w.z - u)));
  }

  EmbeddingEvaluator e;
  e.t_lo = phi1.t_lo;
  e.t_hi = phi2.t_hi;
  e.u_lo = u_lo;
  e.u_hi = u_hi;
  e.s_lo = phi1.s_lo;
  e.s_hi = phi2.s_hi;
  auto squeeze = [a1, b, w_of](double t, double u) {
    double w = w_of(u).s;
    return a1 + (w - a1) * (t - a1) / (b - a1);
  };
  e.eval = [phi1, phi2, b, squeeze](double t, double u) {
    if (t <= b) return phi1.eval(squeeze(t, u), u);
    return phi2.eval(t, u);
  };
  if (phi2.inverse)
    e.inverse = [phi1, phi2, a1, b, w_of](double s, double z) -> std::optional<NumPoint> {
      if (auto i2 = phi2.inverse(s, z); i2 && i2->s >= b) return i2;
      auto i1 = phi1.inverse(s, z);
      if (!i1) return std::nullopt;
      NumPoint w = w_of(i1->z);
      return NumPoint{a1 + (b - a1) * (i1->s - a1) / (w.s - a1), i1->z};
    };
  e.model = phi1.model ? phi1.model : phi2.model;
  if (phi1.eval_model && phi2.eval_model)
    e.eval_model = [phi1, phi2, b, squeeze](double t, double u) {
      if (t <= b) return phi1.eval_model(squeeze(t, u), u);
      return phi2.eval_model(t, u);
    };
  return e;
}

// --- partition-of-unity gluing ------------------------------------------------

POUResult pou_glue(const POUSpec& spec) {
  size_t n = spec.sigma.size();
  if (n < 2) throw std::invalid_argument("pou_glue: need at least two samples");
  for (size_t j = 1; j < n; ++j)
    if (!(spec.sigma[j - 1] < spec.sigma[j]))
      throw std::invalid_argument("pou_glue: samples not strictly increasing");
  if (spec.sigma.front() != 0 || spec.sigma.back() != 1)
    throw std::invalid_argument("pou_glue: samples must span [0, 1]");
  if (spec.pieces.empty()) throw std::invalid_argument("pou_glue: no pieces");
  for (const POUPiece& p : spec.pieces)
    if (p.weight.size() != n || p.local.size() != n)
      throw std::invalid_argument("pou_glue: piece sampling mismatch");
  if (!(spec.tol > 0)) throw std::invalid_argument("pou_glue: tol must be positive");

  CheckResult wsum = make_check("weights sum to one");
  CheckResult support = make_check("weights supported in their pieces");
  CheckResult piecemono = make_check("local pieces strictly increasing");
  CheckResult gluemono = make_check("glued function strictly increasing");
  CheckResult pinned = make_check("ends at 0 and 1");

  POUResult out;
  out.f.resize(n, 0.0);
  for (size_t j = 0; j < n; ++j) {
    double total = 0;
    for (const POUPiece& p : spec.pieces) {
      total += p.weight[j];
      if (p.weight[j] != 0) out.f[j] += p.weight[j] * p.local[j];
    }
    ++wsum.samples;
    double dev = std::fabs(total - 1);
    wsum.worst_residual = std::max(wsum.worst_residual, dev);
    if (dev > spec.tol)
      record_failure(wsum, "sigma=" + std::to_string(spec.sigma[j]) + " weight sum " +
                               std::to_string(total));
  }

  for (size_t i = 0; i < spec.pieces.size(); ++i) {
    const POUPiece& p = spec.pieces[i];
    for (size_t j = 0; j < n; ++j) {
      ++support.samples;
      if (spec.sigma[j] < p.lo || spec.sigma[j] > p.hi) {
        double stray = std::fabs(p.weight[j]);
        support.worst_residual = std::max(support.worst_residual, stray);
        if (stray > spec.tol)
          record_failure(support, "piece " + std::to_string(i) + " weighted outside its window at sigma=" +
                                      std::to_string(spec.sigma[j]));
      }
    }
    for (size_t j = 1; j < n; ++j) {
      if (!(p.weight[j - 1] > spec.tol && p.weight[j] > spec.tol)) continue;
      ++piecemono.samples;
      double gap = p.local[j] - p.local[j - 1];
      if (!(gap > 0)) {
        piecemono.worst_residual = std::max(piecemono.worst_residual, -gap);
        record_failure(piecemono, "piece " + std::to_string(i) + " not increasing at sigma=" +
                                      std::to_string(spec.sigma[j]));
      }
    }
  }

  for (size_t j = 1; j < n; ++j) {
    ++gluemono.samples;
    double gap = out.f[j] - out.f[j - 1];
    if (!(gap > 0)) {
      gluemono.worst_residual = std::max(gluemono.worst_residual, -gap);
      record_failure(gluemono, "glued value not increasing at sigma=" +
                                   std::to_string(spec.sigma[j]));
    }
  }

  pinned.samples = 2;
  pinned.worst_residual = std::max(std::fabs(out.f.front()), std::fabs(out.f.back() - 1));
  if (std::fabs(out.f.front()) > spec.tol)
    record_failure(pinned, "f(0) = " + std::to_string(out.f.front()));
  if (std::fabs(out.f.back() - 1) > spec.tol)
    record_failure(pinned, "f(1) = " + std::to_string(out.f.back()));

  out.report.checks = {wsum, support, piecemono, gluemono, pinned};
  return out;
}

// --- verification harness -----------------------------------------------------

GridReport check_fibered_homeo(const EmbeddingEvaluator& e, int grid_n, double tol) {
  if (grid_n < 2) throw std::invalid_argument("check_fibered_homeo: grid too small");
  if (!(tol > 0)) throw std::invalid_argument("check_fibered_homeo: tol must be positive");
  if (!e.eval) throw std::invalid_argument("check_fibered_homeo: evaluator has no eval");

  auto grid = [grid_n](double lo, double hi) {
    std::vector<double> g(grid_n);
    for (int k = 0; k < grid_n; ++k)
      g[k] = k == grid_n - 1 ? hi : lo + (hi - lo) * k / (grid_n - 1);
    return g;
  };
  std::vector<double> ts = grid(e.t_lo, e.t_hi), us = grid(e.u_lo, e.u_hi);

  CheckResult evals = make_check("evaluations succeed");
  CheckResult fibered = make_check("base preserved along fibers");
  CheckResult mono = make_check("strictly monotone fibers");
  CheckResult baseinj = make_check("injective base");
  CheckResult ends = make_check("interval ends fixed");
  CheckResult roundtrip = make_check("inverse round-trip");
  CheckResult leaves = make_check("fiber lines stay in one leaf");

  std::vector<double> zbar;
  for (double u : us) {
    bool row_started = false;
    double z0 = 0, prev_s = 0;
    bool have_prev = false;
    std::string row_leaf;
    for (double t : ts) {
      ++evals.samples;
      NumPoint p;
      try {
        p = e.eval(t, u);
      } catch (const std::exception& ex) {
        record_failure(evals, "t=" + std::to_string(t) + " u=" + std::to_string(u) + ": " +
                                  ex.what());
        have_prev = false;
        continue;
      }
      if (!row_started) {
        z0 = p.z;
        row_started = true;
      }

      ++fibered.samples;
      double drift = std::fabs(p.z - z0);
      fibered.worst_residual = std::max(fibered.worst_residual, drift);
      if (drift > tol)
        record_failure(fibered, "t=" + std::to_string(t) + " u=" + std::to_string(u) +
                                    ": base drift " + std::to_string(drift));

      ++mono.samples;
      if (have_prev && !(p.s > prev_s)) {
        mono.worst_residual = std::max(mono.worst_residual, prev_s - p.s);
        record_failure(mono, "t=" + std::to_string(t) + " u=" + std::to_string(u) +
                                 ": fiber value did not advance");
      }
      prev_s = p.s;
      have_prev = true;

      if (e.fixes_ends && (t == e.t_lo || t == e.t_hi)) {
        ++ends.samples;
        double want = t == e.t_lo ? e.s_lo : e.s_hi;
        double dev = std::fabs(p.s - want);
        ends.worst_residual = std::max(ends.worst_residual, dev);
        if (dev > tol)
          record_failure(ends, "t=" + std::to_string(t) + " u=" + std::to_string(u) +
                                   ": end moved by " + std::to_string(dev));
      }

      if (e.inverse) {
        ++roundtrip.samples;
        auto back = e.inverse(p.s, p.z);
        double dev = back ? std::max(std::fabs(back->s - t), std::fabs(back->z - u))
                          : std::numeric_limits<double>::infinity();
        roundtrip.worst_residual = std::max(roundtrip.worst_residual, dev);
        if (!(dev <= tol))
          record_failure(roundtrip, "t=" + std::to_string(t) + " u=" + std::to_string(u) +
                                        (back ? ": residual " + std::to_string(dev)
                                              : ": inverse failed"));
      }

      if (e.model && e.eval_model) {
        ++leaves.samples;
        try {
          std::string leaf = leaf_to_string(*e.model, leaf_of(*e.model, e.eval_model(t, u)));
          if (row_leaf.empty()) row_leaf = leaf;
          if (leaf != row_leaf)
            record_failure(leaves, "t=" + std::to_string(t) + " u=" + std::to_string(u) +
                                       ": left the leaf " + row_leaf);
        } catch (const std::exception& ex) {
          record_failure(leaves, "t=" + std::to_string(t) + " u=" + std::to_string(u) + ": " +
                                     ex.what());
        }
      }
    }
    if (row_started) zbar.push_back(z0);
  }

  baseinj.samples = static_cast<long>(zbar.size());
  if (zbar.size() > 1) {
    bool inc = zbar.back() > zbar.front();
    for (size_t j = 1; j < zbar.size(); ++j) {
      double gap = inc ? zbar[j] - zbar[j - 1] : zbar[j - 1] - zbar[j];
      if (!(gap > 0)) {
        baseinj.worst_residual = std::max(baseinj.worst_residual, -gap);
        record_failure(baseinj, "base value repeats near u index " + std::to_string(j));
      }
    }
  }

  GridReport report;
  report.checks = {evals, fibered, mono, baseinj};
  if (e.fixes_ends) report.checks.push_back(ends);
  if (e.inverse) report.checks.push_back(roundtrip);
  if (e.model && e.eval_model) report.checks.push_back(leaves);
  return report;
}

std::string residuals_csv(const GridReport& report) {
  std::string out = "check,samples,failures,worst_residual\n";
  for (const CheckResult& c : report.checks) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", c.worst_residual);
    out += c.name + "," + std::to_string(c.samples) + "," + std::to_string(c.failure_count) +
           "," + buf + "\n";
  }
  return out;
}

}  // namespace stripfold

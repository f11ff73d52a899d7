#include "cms/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "cms/errors.hpp"

namespace cms {

double contraction_ratio(const MarkovSystem& sys, const Point& x, const Point& y) {
  int vx = sys.vertex_of_or_throw(x);
  int vy = sys.vertex_of_or_throw(y);
  if (vx != vy) throw VertexMismatch("pair spans vertex sets " + std::to_string(vx) + " and " +
                                     std::to_string(vy));
  double d0 = distance(sys.metric(), x, y);
  if (d0 == 0.0) throw InvalidParams("contraction ratio needs distinct points");
  double num = 0.0;
  for (int e : sys.graph().out_edges(vx))
    num += sys.edge_prob(e, x) * distance(sys.metric(), sys.apply_map(e, x), sys.apply_map(e, y));
  return num / d0;
}

namespace {

struct RateTracker {
  RateReport rep;

  void consider(const MarkovSystem& sys, const Point& x, const Point& y, int vertex,
                bool deterministic) {
    double r = contraction_ratio(sys, x, y);
    ++rep.pairs;
    auto& pv = rep.per_vertex_max[static_cast<std::size_t>(vertex - 1)];
    pv = std::max(pv, r);
    if (deterministic) rep.deterministic_max = std::max(rep.deterministic_max, r);
    if (r > rep.max_ratio) {
      rep.max_ratio = r;
      rep.argmax_x = x;
      rep.argmax_y = y;
      rep.argmax_vertex = vertex;
    }
  }
};

constexpr double kScales[3] = {1e-3, 1e-2, 1e-1};

void deterministic_stratum(const MarkovSystem& sys, RateTracker& tr) {
  const auto& g = sys.graph();
  if (sys.kind() == MarkovSystem::Kind::Sequence) {
    // Ratios are scale-free here; one distinct same-part pair per vertex
    // suffices and needs no randomness: extend the representative's loop by
    // any two-step return path.
    for (int v = 1; v <= g.vertex_count(); ++v) {
      const Point& rep = sys.representative(v);
      for (int e1 : g.out_edges(v)) {
        bool found = false;
        for (int e2 : g.out_edges(g.target(e1))) {
          if (g.target(e2) != v) continue;
          Point y = sys.apply_map(e2, sys.apply_map(e1, rep));
          if (distance(sys.metric(), rep, y) > 0.0) {
            tr.consider(sys, rep, y, v, true);
            found = true;
            break;
          }
        }
        if (found) break;
      }
    }
    return;
  }
  int d = sys.dimension();
  double diam = 2.0 * sys.sampling_radius();
  for (int v = 1; v <= g.vertex_count(); ++v) {
    std::vector<Point> anchors{sys.representative(v)};
    EuclideanPoint origin{std::vector<double>(static_cast<std::size_t>(d), 0.0)};
    if (sys.in_vertex_set(v, origin)) anchors.emplace_back(origin);
    for (const Point& a : anchors) {
      const auto& ac = std::get<EuclideanPoint>(a).coords;
      for (int j = 0; j < d; ++j)
        for (double s : kScales)
          for (double sign : {1.0, -1.0}) {
            EuclideanPoint y{ac};
            y.coords[static_cast<std::size_t>(j)] += sign * s * diam;
            if (sys.in_vertex_set(v, y)) tr.consider(sys, a, Point(y), v, true);
          }
    }
  }
}

}  // namespace

RateReport estimate_contraction_rate(const MarkovSystem& sys, std::uint64_t pair_budget,
                                     std::uint64_t master_seed) {
  if (pair_budget < 1) throw InvalidParams("pair budget must be positive");
  const auto& g = sys.graph();
  RateTracker tr;
  tr.rep.budget = pair_budget;
  tr.rep.master_seed = master_seed;
  tr.rep.per_vertex_max.assign(static_cast<std::size_t>(g.vertex_count()), 0.0);
  tr.rep.argmax_x = sys.representative(1);
  tr.rep.argmax_y = sys.representative(1);

  deterministic_stratum(sys, tr);

  std::uint64_t nv = static_cast<std::uint64_t>(g.vertex_count());
  RngStream rng(master_seed, 0);
  double diam = 2.0 * sys.sampling_radius();
  std::uint64_t remaining = pair_budget > tr.rep.pairs ? pair_budget - tr.rep.pairs : 0;
  for (std::uint64_t k = 0; k < remaining; ++k) {
    int v = static_cast<int>(k % nv) + 1;
    if (sys.kind() == MarkovSystem::Kind::Sequence) {
      Point x = sys.sample_state(v, rng);
      Point y = sys.sample_state(v, rng);
      if (distance(sys.metric(), x, y) == 0.0) continue;
      tr.consider(sys, x, y, v, false);
      continue;
    }
    bool axis = (k / nv) % 2 == 0;  // alternate axis-offset and uniform pairs
    Point x = sys.sample_state(v, rng);
    if (axis) {
      const auto& xc = std::get<EuclideanPoint>(x).coords;
      int j = static_cast<int>(rng.next_index(static_cast<std::uint64_t>(sys.dimension())));
      double sign = rng.next_unit() < 0.5 ? -1.0 : 1.0;
      double s = kScales[(k / (2 * nv)) % 3];
      double u = 1.0 - rng.next_unit();  // (0, 1]
      EuclideanPoint y{xc};
      y.coords[static_cast<std::size_t>(j)] += sign * u * s * diam;
      if (!sys.in_vertex_set(v, y)) continue;
      Point py(y);
      if (distance(sys.metric(), x, py) == 0.0) continue;
      tr.consider(sys, x, py, v, false);
    } else {
      Point y = sys.sample_state(v, rng);
      if (distance(sys.metric(), x, y) == 0.0) continue;
      tr.consider(sys, x, y, v, false);
    }
  }
  return tr.rep;
}

double ModulusProfile::scale(std::size_t n) const {
  return b * std::pow(c, static_cast<double>(n));
}

ModulusProfile modulus_profile(const std::function<double(const Point&)>& fn, int vertex,
                               const MarkovSystem& sys, double b, double c, std::size_t n_scales,
                               std::uint64_t pair_budget, std::uint64_t master_seed) {
  if (!(b > 0.0) || !(c > 0.0) || !(c < 1.0)) throw InvalidParams("need b > 0 and c in (0, 1)");
  if (n_scales < 1) throw InvalidParams("need at least one scale");
  if (sys.kind() != MarkovSystem::Kind::Euclidean)
    throw InvalidParams("modulus sampling needs a Euclidean system");
  ModulusProfile prof;
  prof.b = b;
  prof.c = c;
  prof.mode = ModulusProfile::Mode::SampledLowerBound;
  prof.phi.assign(n_scales, 0.0);
  int d = sys.dimension();
  for (std::size_t n = 1; n <= n_scales; ++n) {
    double t = prof.scale(n);
    if (!(t > 0.0)) break;  // below representable spacing; the bound stays 0
    // One stream per scale: enlarging the budget extends each stream, so a
    // bigger run only refines (never shrinks) every phi entry.
    RngStream rng(master_seed, n);
    double& phi = prof.phi[n - 1];
    for (std::uint64_t k = 0; k < pair_budget; ++k) {
      Point x = sys.sample_state(vertex, rng);
      const auto& xc = std::get<EuclideanPoint>(x).coords;
      int j = static_cast<int>(rng.next_index(static_cast<std::uint64_t>(d)));
      double sign = rng.next_unit() < 0.5 ? -1.0 : 1.0;
      double u = 1.0 - rng.next_unit();
      EuclideanPoint y{xc};
      y.coords[static_cast<std::size_t>(j)] += sign * u * t;
      if (!sys.in_vertex_set(vertex, y)) continue;
      phi = std::max(phi, std::fabs(fn(x) - fn(Point(y))));
    }
  }
  // Monotone in the scale: a coarser scale dominates every finer one.
  for (std::size_t i = n_scales - 1; i-- > 0;)
    prof.phi[i] = std::max(prof.phi[i], prof.phi[i + 1]);
  return prof;
}

ModulusProfile envelope_profile(const MarkovSystem& sys, double b, double c,
                                std::size_t n_scales) {
  if (!(b > 0.0) || !(c > 0.0) || !(c < 1.0)) throw InvalidParams("need b > 0 and c in (0, 1)");
  if (n_scales < 1) throw InvalidParams("need at least one scale");
  if (!sys.modulus_envelope()) throw MissingModulus("system has no registered modulus envelope");
  const auto& env = *sys.modulus_envelope();
  ModulusProfile prof;
  prof.b = b;
  prof.c = c;
  prof.mode = ModulusProfile::Mode::ExactClosedForm;
  prof.phi.assign(n_scales, 0.0);
  for (std::size_t n = 1; n <= n_scales; ++n) prof.phi[n - 1] = env(prof.scale(n));
  return prof;
}

double jo_modulus(double alpha, double delta, std::size_t n) {
  if (!(alpha > 0.0)) throw InvalidParams("alpha must be positive");
  if (!(delta > 0.0)) throw InvalidParams("delta must be positive");
  if (!(alpha + delta <= 1.0)) throw InvalidParams("alpha + delta must not exceed 1");
  if (n < 1) throw InvalidParams("scale index must be positive");
  return alpha / static_cast<double>(n);
}

ModulusProfile jo_profile(double alpha, std::size_t n_scales) {
  if (!(alpha > 0.0)) throw InvalidParams("alpha must be positive");
  if (n_scales < 1) throw InvalidParams("need at least one scale");
  ModulusProfile prof;
  prof.b = 1.0;
  prof.c = std::exp(-1.0);
  prof.mode = ModulusProfile::Mode::ExactClosedForm;
  prof.phi.assign(n_scales, 0.0);
  for (std::size_t n = 1; n <= n_scales; ++n) prof.phi[n - 1] = alpha / static_cast<double>(n);
  return prof;
}

const char* variation_class_name(VariationClass c) {
  switch (c) {
    case VariationClass::Dini: return "dini";
    case VariationClass::SquareSummableNotDini: return "square_summable_not_dini";
    case VariationClass::NeitherDetected: return "neither_detected";
    case VariationClass::Inconclusive: return "inconclusive";
  }
  return "?";
}

VariationReport variation_class(const ModulusProfile& profile, std::size_t n_partial,
                                double tail_threshold) {
  if (!(tail_threshold > 0.0)) throw InvalidParams("tail threshold must be positive");
  std::size_t n = std::min(n_partial, profile.size());
  if (n < 1) throw InvalidParams("profile classification needs at least one term");
  VariationReport rep;
  rep.n_terms = n;
  rep.tail_threshold = tail_threshold;

  std::size_t n10 = n / 10, n100 = n / 100;
  double s1 = 0.0, c1 = 0.0, s2 = 0.0, c2 = 0.0;
  double s1_at10 = 0.0, s1_at100 = 0.0, s2_at10 = 0.0, s2_at100 = 0.0;
  auto kahan = [](double& sum, double& comp, double v) {
    double y = v - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  };
  for (std::size_t i = 0; i < n; ++i) {
    double phi = profile.phi[i];
    kahan(s1, c1, phi);
    kahan(s2, c2, phi * phi);
    if (i + 1 == n100) {
      s1_at100 = s1;
      s2_at100 = s2;
    }
    if (i + 1 == n10) {
      s1_at10 = s1;
      s2_at10 = s2;
    }
  }
  rep.s1 = s1;
  rep.s2 = s2;
  rep.s1_last_increment = s1 - s1_at10;
  rep.s1_prev_increment = s1_at10 - s1_at100;
  rep.s2_last_increment = s2 - s2_at10;
  rep.s2_prev_increment = s2_at10 - s2_at100;
  // Converged: the last decade added at most the threshold and at most half
  // of what the decade before it added.
  rep.s1_converged = rep.s1_last_increment <= tail_threshold &&
                     rep.s1_last_increment <= rep.s1_prev_increment / 2.0;
  rep.s2_converged = rep.s2_last_increment <= tail_threshold &&
                     rep.s2_last_increment <= rep.s2_prev_increment / 2.0;

  if (rep.s1_converged)
    rep.cls = VariationClass::Dini;
  else if (profile.mode == ModulusProfile::Mode::ExactClosedForm)
    rep.cls = rep.s2_converged ? VariationClass::SquareSummableNotDini
                               : VariationClass::NeitherDetected;
  else
    rep.cls = VariationClass::Inconclusive;  // a sampled lower bound cannot certify divergence
  return rep;
}

MomentBoundReport moment_bound(const MarkovSystem& sys) {
  if (!sys.rate()) throw MissingRate("moment bound needs a declared contraction rate");
  MomentBoundReport rep;
  rep.rate = *sys.rate();
  const auto& g = sys.graph();
  for (int e = 0; e < g.edge_count(); ++e) {
    double d = distance(sys.metric(), sys.apply_map(e, sys.representative(g.source(e))),
                        sys.representative(g.target(e)));
    if (d > rep.c_max) {
      rep.c_max = d;
      rep.argmax_edge = e;
    }
  }
  rep.bound = rep.c_max / (1.0 - rep.rate);
  return rep;
}

}  // namespace cms

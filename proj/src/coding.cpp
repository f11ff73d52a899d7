#include "cms/coding.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "cms/errors.hpp"
#include "cms/estimators.hpp"
#include "cms/simulate.hpp"

namespace cms {

Point code_word(const MarkovSystem& sys, const BackwardWord& w, std::optional<Point> start) {
  if (w.edges.empty()) {
    if (start) return *start;
    throw InvalidParams("empty word has no source part to take a representative from");
  }
  const auto& g = sys.graph();
  int v = g.source(w.edges.front());
  Point p = start ? *start : sys.representative(v);
  if (!sys.in_vertex_set(v, p))
    throw InadmissibleWord("start state lies outside part " + std::to_string(v));
  for (std::size_t k = 0; k < w.edges.size(); ++k) {
    int e = w.edges[k];
    if (g.source(e) != v)
      throw InadmissibleWord("word breaks the graph at position " + std::to_string(k));
    p = sys.apply_map(e, p);
    v = g.target(e);
  }
  return p;
}

namespace {

double nearest_rank(std::vector<double>& vals, double q) {
  if (vals.empty()) return 0.0;
  std::sort(vals.begin(), vals.end());
  std::size_t rank = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(vals.size())));
  if (rank < 1) rank = 1;
  return vals[rank - 1];
}

// A same-part state deliberately different from the representative, used to
// probe how fast the coding forgets its start.
Point perturbed_start(const MarkovSystem& sys, int v, std::uint64_t master_seed) {
  if (sys.kind() == MarkovSystem::Kind::Sequence) {
    const auto& g = sys.graph();
    for (int e_in = 0; e_in < g.edge_count(); ++e_in) {
      if (g.target(e_in) != v) continue;
      int j = g.source(e_in);
      if (j == v) continue;
      for (int loop : g.out_edges(j))
        if (g.target(loop) == j)
          return seq_append(make_anchor_point({loop}), e_in);
    }
    return sys.representative(v);  // single-part graph: no distinct start exists
  }
  const auto& rep = std::get<EuclideanPoint>(sys.representative(v));
  int d = sys.dimension();
  std::vector<int> pattern(static_cast<std::size_t>(d), 0);
  // Walk sign patterns {-1, 0, +1}^d in a fixed order, skipping all-zero.
  std::uint64_t total = 1;
  for (int i = 0; i < d; ++i) total *= 3;
  for (std::uint64_t code = 1; code < total; ++code) {
    std::uint64_t c = code;
    EuclideanPoint cand{rep.coords};
    for (int i = 0; i < d; ++i, c /= 3) {
      int s = static_cast<int>(c % 3) - 1;
      cand.coords[static_cast<std::size_t>(i)] += 0.25 * s;
    }
    if (sys.in_vertex_set(v, cand) &&
        distance(sys.metric(), sys.representative(v), cand) > 0.0)
      return cand;
  }
  RngStream rng(master_seed, 0x9000u + static_cast<std::uint64_t>(v));
  return sys.sample_state(v, rng);
}

}  // namespace

CodingReport coding_convergence(const MarkovSystem& sys, std::uint64_t master_seed,
                                const std::vector<std::size_t>& depth_grid,
                                std::size_t word_count) {
  if (depth_grid.empty()) throw InvalidParams("empty depth grid");
  if (word_count < 1) throw InvalidParams("need at least one word");
  std::vector<std::size_t> grid = depth_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.front() < 1) throw InvalidParams("grid depths must be positive");

  CodingReport rep;
  rep.words = word_count;
  rep.horizon = 2 * grid.back();
  rep.master_seed = master_seed;

  const auto& g = sys.graph();
  std::vector<Point> perturbed;
  perturbed.reserve(static_cast<std::size_t>(g.vertex_count()));
  for (int v = 1; v <= g.vertex_count(); ++v)
    perturbed.push_back(perturbed_start(sys, v, master_seed));

  // Pasts are drawn as forward runs started from a stationary-ish state, so
  // the sampled words carry the chain's own statistics.
  std::size_t measure_n = 20000;
  EmpiricalMeasure mu =
      empirical_measure(sys, sys.representative(1), measure_n, kDefaultBurnin, master_seed, 0);

  std::size_t ng = grid.size();
  std::vector<std::vector<double>> succ(ng), startdep(ng);
  for (std::size_t j = 0; j < word_count; ++j) {
    RngStream rng(master_seed, 1 + j);
    const Point& start = mu.support[static_cast<std::size_t>(
        rng.next_index(static_cast<std::uint64_t>(mu.support.size())))];
    Point cur = start;
    std::vector<int> word;
    word.reserve(rep.horizon);
    for (std::size_t k = 0; k < rep.horizon; ++k) {
      StepResult s = step(sys, cur, rng);
      word.push_back(s.edge);
      cur = std::move(s.state);
    }
    auto code_suffix = [&](std::size_t m, bool use_perturbed) {
      BackwardWord w{std::vector<int>(word.end() - static_cast<std::ptrdiff_t>(m), word.end())};
      if (!use_perturbed) return code_word(sys, w);
      int v0 = g.source(w.edges.front());
      return code_word(sys, w, perturbed[static_cast<std::size_t>(v0 - 1)]);
    };
    for (std::size_t gi = 0; gi < ng; ++gi) {
      std::size_t m = grid[gi];
      std::size_t next = gi + 1 < ng ? grid[gi + 1] : rep.horizon;
      Point at_m = code_suffix(m, false);
      succ[gi].push_back(distance(sys.metric(), at_m, code_suffix(next, false)));
      startdep[gi].push_back(distance(sys.metric(), at_m, code_suffix(m, true)));
    }
  }

  for (std::size_t gi = 0; gi < ng; ++gi) {
    CodingDepthRow row;
    row.depth = grid[gi];
    row.succ_max = *std::max_element(succ[gi].begin(), succ[gi].end());
    row.start_max = *std::max_element(startdep[gi].begin(), startdep[gi].end());
    row.succ_median = nearest_rank(succ[gi], 0.5);
    row.succ_p90 = nearest_rank(succ[gi], 0.9);
    row.start_median = nearest_rank(startdep[gi], 0.5);
    row.start_p90 = nearest_rank(startdep[gi], 0.9);
    rep.rows.push_back(row);
  }
  return rep;
}

double energy_u(const MarkovSystem& sys, const BackwardWord& w, int next_edge) {
  Point p = code_word(sys, w);
  const auto& g = sys.graph();
  if (g.source(next_edge) != g.target(w.edges.back()))
    throw InadmissibleWord("edge does not continue the word");
  return std::log(sys.edge_prob(next_edge, p));
}

std::vector<long long> y_drift(const std::vector<int>& word) {
  std::vector<long long> drift(word.size(), 0);
  long long acc = 0;
  for (std::size_t i = word.size(); i-- > 0;) {
    int s = word[i];
    if (s != 0 && s != 1) throw WrongAlphabet("drift needs symbols in {0, 1}");
    acc += s == 1 ? 1 : -1;
    drift[word.size() - 1 - i] = acc;
  }
  return drift;
}

HolderFitReport holder_diagnostic(const MarkovSystem& sys, std::uint64_t master_seed,
                                  std::size_t depth,
                                  const std::vector<std::size_t>& suffix_lengths,
                                  std::size_t pairs_per_length) {
  if (depth < 2) throw InvalidParams("depth must be at least 2");
  const auto& g = sys.graph();
  HolderFitReport rep;
  rep.depth = depth;

  std::vector<double> log_dw, log_dc;
  for (std::size_t k : suffix_lengths) {
    if (k + 1 >= depth) continue;
    for (std::size_t p = 0; p < pairs_per_length; ++p) {
      RngStream rng(master_seed, k * 131071u + p + 1);
      // Word A: a free run of `depth` steps.
      Point cur = sys.sample_state(1, rng);
      std::vector<int> a;
      a.reserve(depth);
      for (std::size_t s = 0; s < depth; ++s) {
        StepResult st = step(sys, cur, rng);
        a.push_back(st.edge);
        cur = std::move(st.state);
      }
      std::size_t split = depth - k;  // suffix a[split..] is shared
      int branch = a[split - 1];      // B must disagree exactly here
      int vstar = g.target(branch);   // entry vertex of the shared suffix
      // Word B: a fresh prefix forced to re-enter the suffix through a
      // different edge, so the word distance is exactly 2^-k.
      bool built = false;
      std::vector<int> b;
      for (int attempt = 0; attempt < 200 && !built; ++attempt) {
        b.clear();
        Point bc = sys.sample_state(1, rng);
        for (std::size_t s = 0; s + 1 < split; ++s) {
          StepResult st = step(sys, bc, rng);
          b.push_back(st.edge);
          bc = std::move(st.state);
        }
        int vcur = split > 1 ? g.target(b.back()) : sys.vertex_of_or_throw(bc);
        for (int e : g.out_edges(vcur)) {
          if (e == branch || g.target(e) != vstar) continue;
          b.push_back(e);
          b.insert(b.end(), a.begin() + static_cast<std::ptrdiff_t>(split), a.end());
          built = true;
          break;
        }
      }
      if (!built) continue;  // no alternative entry into this suffix exists
      double dc = distance(sys.metric(), code_word(sys, BackwardWord{a}),
                           code_word(sys, BackwardWord{b}));
      if (!(dc > 0.0)) continue;  // contracted below resolution; nothing to fit
      log_dw.push_back(-static_cast<double>(k) * std::log(2.0));
      log_dc.push_back(std::log(dc));
    }
  }
  rep.pairs = log_dw.size();
  if (rep.pairs < 2) return rep;

  double n = static_cast<double>(rep.pairs);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < log_dw.size(); ++i) {
    sx += log_dw[i];
    sy += log_dc[i];
    sxx += log_dw[i] * log_dw[i];
    sxy += log_dw[i] * log_dc[i];
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) return rep;  // a single suffix length: slope undefined
  rep.alpha = (n * sxy - sx * sy) / denom;
  std::vector<double> resid;
  resid.reserve(log_dw.size());
  for (std::size_t i = 0; i < log_dw.size(); ++i)
    resid.push_back(log_dc[i] - rep.alpha * log_dw[i]);
  std::vector<double> sorted = resid;
  rep.log_c = nearest_rank(sorted, 0.95);
  std::size_t under = 0;
  for (double r : resid)
    if (r <= rep.log_c) ++under;
  rep.coverage = static_cast<double>(under) / n;
  return rep;
}

}  // namespace cms

#include "cms/system.hpp"

#include <cmath>
#include <cstdio>

#include "cms/errors.hpp"

namespace cms {

namespace {

std::span<const double> coords_of(const Point& p) {
  const auto* e = std::get_if<EuclideanPoint>(&p);
  if (!e) throw KindMismatch("expected a Euclidean point");
  return e->coords;
}

}  // namespace

MarkovSystem MarkovSystem::from_spec(const SystemSpec& spec) {
  MarkovSystem sys;
  sys.name_ = spec.name;
  sys.identity_ = "spec:" + spec.name;
  sys.kind_ = Kind::Euclidean;
  sys.metric_ = spec.metric;
  sys.dim_ = spec.dim;
  sys.delta_ = spec.delta;
  sys.rate_ = spec.rate;

  std::vector<Edge> edges;
  edges.reserve(spec.edges.size());
  for (const EdgeDecl& e : spec.edges) edges.push_back({e.id, e.source, e.target});
  sys.graph_ = std::make_shared<const DirectedMultigraph>(spec.vertices, std::move(edges));

  sys.predicates_ = spec.vertex_sets;
  for (const EdgeDecl& e : spec.edges) {
    sys.maps_.push_back(e.map);
    sys.probs_.push_back(e.prob);
  }
  for (int v = 1; v <= spec.vertices; ++v) {
    const auto& rep = spec.representatives[static_cast<std::size_t>(v - 1)];
    if (!eval_predicate(spec.vertex_sets[static_cast<std::size_t>(v - 1)], rep))
      throw SemanticError("representative of vertex " + std::to_string(v) +
                          " lies outside its vertex set");
    sys.representatives_.emplace_back(EuclideanPoint{rep});
  }
  return sys;
}

MarkovSystem MarkovSystem::gmarkov(const std::vector<std::vector<double>>& P) {
  std::size_t n = P.size();
  if (n == 0) throw InvalidStochasticMatrix("matrix is empty");
  double min_entry = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (P[i].size() != n) throw InvalidStochasticMatrix("matrix is not square");
    double row = 0.0;
    for (double v : P[i]) {
      if (!(v > 0.0)) throw InvalidStochasticMatrix("entries must be strictly positive");
      row += v;
      min_entry = std::min(min_entry, v);
    }
    if (std::fabs(row - 1.0) > 1e-12)
      throw InvalidStochasticMatrix("row " + std::to_string(i + 1) + " sums to " +
                                    std::to_string(row));
  }

  MarkovSystem sys;
  sys.name_ = "gmarkov";
  sys.kind_ = Kind::Sequence;
  sys.metric_ = Metric::Seq2k;
  sys.dim_ = 0;
  sys.delta_ = min_entry;
  sys.rate_ = 0.5;  // appending one symbol halves any sequence distance

  std::vector<Edge> edges;
  std::string id_params;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      edges.push_back({"e" + std::to_string(i + 1) + "_" + std::to_string(j + 1),
                       static_cast<int>(i + 1), static_cast<int>(j + 1)});
      sys.edge_const_prob_.push_back(P[i][j]);
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", P[i][j]);
      id_params += (id_params.empty() ? "" : ",") + std::string(buf);
    }
  sys.identity_ = "builtin:gmarkov:" + id_params;
  sys.graph_ = std::make_shared<const DirectedMultigraph>(static_cast<int>(n), std::move(edges));

  // Representative of part i: the constant past looping on i.
  for (std::size_t i = 0; i < n; ++i) {
    int loop = static_cast<int>(i * n + i);  // edge (i -> i), row-major
    sys.representatives_.emplace_back(make_anchor_point({loop}));
  }
  // Probabilities depend only on the current part, so they are locally
  // constant: points closer than 1 share their most recent symbol.
  sys.modulus_envelope_ = [](double) { return 0.0; };
  return sys;
}

const Point& MarkovSystem::representative(int vertex) const {
  if (vertex < 1 || vertex > graph_->vertex_count())
    throw InvalidParams("vertex " + std::to_string(vertex) + " out of range");
  return representatives_[static_cast<std::size_t>(vertex - 1)];
}

bool MarkovSystem::in_vertex_set(int vertex, const Point& p) const {
  if (vertex < 1 || vertex > graph_->vertex_count())
    throw InvalidParams("vertex " + std::to_string(vertex) + " out of range");
  if (kind_ == Kind::Sequence) {
    const auto* s = std::get_if<SequencePoint>(&p);
    if (!s) throw KindMismatch("sequence system expects sequence points");
    return graph_->target(s->last_symbol()) == vertex;
  }
  return eval_predicate(predicates_[static_cast<std::size_t>(vertex - 1)], coords_of(p));
}

std::optional<int> MarkovSystem::vertex_of(const Point& p) const {
  if (kind_ == Kind::Sequence) {
    const auto* s = std::get_if<SequencePoint>(&p);
    if (!s) throw KindMismatch("sequence system expects sequence points");
    return graph_->target(s->last_symbol());
  }
  for (int v = 1; v <= graph_->vertex_count(); ++v)
    if (in_vertex_set(v, p)) return v;
  return std::nullopt;
}

int MarkovSystem::vertex_of_or_throw(const Point& p) const {
  auto v = vertex_of(p);
  if (!v) throw OrphanPoint("point lies in no vertex set");
  return *v;
}

Point MarkovSystem::apply_map(int edge, const Point& p) const {
  if (edge < 0 || edge >= graph_->edge_count()) throw InvalidParams("edge index out of range");
  if (kind_ == Kind::Sequence) {
    const auto* s = std::get_if<SequencePoint>(&p);
    if (!s) throw KindMismatch("sequence system expects sequence points");
    if (graph_->target(s->last_symbol()) != graph_->source(edge))
      throw InadmissibleWord("edge '" + graph_->edge(edge).id +
                             "' does not continue this sequence");
    return seq_append(*s, edge);
  }
  auto coords = coords_of(p);
  std::vector<double> out(static_cast<std::size_t>(dim_));
  const auto& comps = maps_[static_cast<std::size_t>(edge)];
  for (int k = 0; k < dim_; ++k) out[static_cast<std::size_t>(k)] = eval_expr(*comps[static_cast<std::size_t>(k)], coords);
  return EuclideanPoint{std::move(out)};
}

double MarkovSystem::edge_prob(int edge, const Point& p) const {
  if (edge < 0 || edge >= graph_->edge_count()) throw InvalidParams("edge index out of range");
  if (kind_ == Kind::Sequence) {
    const auto* s = std::get_if<SequencePoint>(&p);
    if (!s) throw KindMismatch("sequence system expects sequence points");
    if (graph_->target(s->last_symbol()) != graph_->source(edge)) return 0.0;
    return edge_const_prob_[static_cast<std::size_t>(edge)];
  }
  return eval_expr(*probs_[static_cast<std::size_t>(edge)], coords_of(p));
}

std::vector<double> MarkovSystem::out_probs(int vertex, const Point& p) const {
  const auto& out = graph_->out_edges(vertex);
  std::vector<double> probs(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) probs[i] = edge_prob(out[i], p);
  return probs;
}

Point MarkovSystem::sample_state(int vertex, RngStream& rng) const {
  if (vertex < 1 || vertex > graph_->vertex_count())
    throw InvalidParams("vertex " + std::to_string(vertex) + " out of range");
  if (kind_ == Kind::Sequence) {
    // Random admissible past: start at a uniformly chosen representative
    // anchor, walk 64 uniform admissible steps, then steer back to the
    // requested part with a direct edge (the graph is complete).
    int start = static_cast<int>(rng.next_index(static_cast<std::uint64_t>(graph_->vertex_count()))) + 1;
    Point p = representative(start);
    for (int k = 0; k < 64; ++k) {
      const auto& out = graph_->out_edges(*vertex_of(p));
      int e = out[rng.next_index(out.size())];
      p = apply_map(e, p);
    }
    int at = *vertex_of(p);
    if (at != vertex) {
      for (int e : graph_->out_edges(at))
        if (graph_->target(e) == vertex) return apply_map(e, p);
      throw SamplerExhausted("no edge into vertex " + std::to_string(vertex));
    }
    return p;
  }
  double r = sampling_radius_;
  std::vector<double> c(static_cast<std::size_t>(dim_));
  const std::uint64_t attempts_cap = 100000;
  for (std::uint64_t a = 0; a < attempts_cap; ++a) {
    for (int k = 0; k < dim_; ++k) c[static_cast<std::size_t>(k)] = rng.next_in(-r, r);
    if (eval_predicate(predicates_[static_cast<std::size_t>(vertex - 1)], c))
      return EuclideanPoint{c};
  }
  throw SamplerExhausted("no state of vertex " + std::to_string(vertex) + " found in [-" +
                         std::to_string(r) + ", " + std::to_string(r) + "]^" +
                         std::to_string(dim_));
}

int MarkovSystem::edge_index(const std::string& id) const {
  auto e = graph_->find_edge(id);
  if (!e) throw InvalidParams("no edge with id '" + id + "'");
  return *e;
}

ValidationReport validate(const MarkovSystem& sys, std::uint64_t sample_budget,
                          std::uint64_t master_seed) {
  if (sample_budget < 1) throw InvalidParams("sample budget must be positive");
  const auto& g = sys.graph();
  int nv = g.vertex_count();
  ValidationReport rep;
  rep.delta = sys.delta();
  rep.budget = sample_budget;
  rep.master_seed = master_seed;
  rep.per_vertex_samples.assign(static_cast<std::size_t>(nv), 0);

  std::uint64_t per_vertex = std::max<std::uint64_t>(1, sample_budget / static_cast<std::uint64_t>(nv));
  for (int v = 1; v <= nv; ++v) {
    RngStream rng(master_seed, static_cast<std::uint64_t>(v));
    for (std::uint64_t s = 0; s < per_vertex; ++s) {
      Point x = sys.sample_state(v, rng);
      // Representatives are checked implicitly: the first sampled state
      // exercises the same membership predicate they satisfied at build.
      auto probs = sys.out_probs(v, x);
      double sum = 0.0;
      for (double p : probs) {
        sum += p;
        rep.min_prob = std::min(rep.min_prob, p);
      }
      rep.max_sum_deviation = std::max(rep.max_sum_deviation, std::fabs(sum - 1.0));
      const auto& out = g.out_edges(v);
      for (int e : out) {
        Point y = sys.apply_map(e, x);
        if (!sys.in_vertex_set(g.target(e), y)) ++rep.target_violations;
      }
      ++rep.per_vertex_samples[static_cast<std::size_t>(v - 1)];
    }
  }
  rep.pass = rep.max_sum_deviation <= 1e-12 && rep.min_prob >= sys.delta() &&
             rep.target_violations == 0;
  return rep;
}

}  // namespace cms

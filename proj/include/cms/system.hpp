#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cms/graph.hpp"
#include "cms/point.hpp"
#include "cms/rng.hpp"
#include "cms/sysdsl.hpp"

namespace cms {

// A Markov system over a directed multigraph: one state-space part per
// vertex, and per edge a map between parts and a place-dependent transition
// probability bounded below by delta on its source part.
class MarkovSystem {
 public:
  enum class Kind { Euclidean, Sequence };

  // Compiles a parsed spec into callable form. Performs construction-time
  // checks (graph validity, representatives inside their vertex sets); no
  // sampling happens here.
  static MarkovSystem from_spec(const SystemSpec& spec);

  // Sequence-space system over the complete graph of transition_matrix's
  // dimension: edge (i -> j) appends its own symbol and carries constant
  // probability P[i][j]. Throws InvalidStochasticMatrix unless P is strictly
  // positive with unit row sums (tolerance 1e-12 on the sums).
  static MarkovSystem gmarkov(const std::vector<std::vector<double>>& transition_matrix);

  const DirectedMultigraph& graph() const { return *graph_; }
  Kind kind() const { return kind_; }
  Metric metric() const { return metric_; }
  int dimension() const { return dim_; }
  double delta() const { return delta_; }
  const std::optional<double>& rate() const { return rate_; }
  const std::string& name() const { return name_; }

  // Stable identity for run manifests; see set_identity.
  const std::string& identity() const { return identity_; }
  void set_identity(std::string id) { identity_ = std::move(id); }

  const Point& representative(int vertex) const;

  bool in_vertex_set(int vertex, const Point& p) const;

  // First vertex whose set contains p, in vertex order.
  std::optional<int> vertex_of(const Point& p) const;
  int vertex_of_or_throw(const Point& p) const;

  // Image of p under the edge map. For sequence systems p must lie in the
  // edge's source part (InadmissibleWord otherwise).
  Point apply_map(int edge, const Point& p) const;

  // Probability attached to the edge, evaluated at p. Zero when p is outside
  // the edge's source part for sequence systems.
  double edge_prob(int edge, const Point& p) const;

  // Probabilities of all out-edges of `vertex` at p, declaration order.
  std::vector<double> out_probs(int vertex, const Point& p) const;

  // A state of the given vertex part: rejection sampling against the vertex
  // predicate inside [-R, R]^d for Euclidean systems, a random admissible
  // word of depth 64 grown from a uniformly chosen representative anchor for
  // sequence systems. Throws SamplerExhausted when the attempt cap runs out.
  Point sample_state(int vertex, RngStream& rng) const;

  double sampling_radius() const { return sampling_radius_; }
  void set_sampling_radius(double r) { sampling_radius_ = r; }

  // Registered closed-form upper envelope for the probabilities' modulus of
  // continuity, when one is known.
  const std::optional<std::function<double(double)>>& modulus_envelope() const {
    return modulus_envelope_;
  }
  void set_modulus_envelope(std::function<double(double)> env) {
    modulus_envelope_ = std::move(env);
  }

  // Edge index for an id, InvalidParams when absent.
  int edge_index(const std::string& id) const;

 private:
  MarkovSystem() = default;

  std::string name_;
  std::string identity_;
  Kind kind_ = Kind::Euclidean;
  Metric metric_ = Metric::L1;
  int dim_ = 0;
  double delta_ = 0.0;
  std::optional<double> rate_;
  std::shared_ptr<const DirectedMultigraph> graph_;
  std::vector<Point> representatives_;

  // Euclidean compiled form.
  std::vector<Predicate> predicates_;
  std::vector<std::vector<ExprPtr>> maps_;
  std::vector<ExprPtr> probs_;

  // Sequence compiled form.
  std::vector<double> edge_const_prob_;

  std::optional<std::function<double(double)>> modulus_envelope_;
  double sampling_radius_ = 10.0;
};

// Sanity report for a compiled system, from sampled states: probability
// rows must sum to one, never fall below delta, and every edge map must land
// in its target part.
struct ValidationReport {
  bool pass = false;
  double max_sum_deviation = 0.0;  // max |sum_e p_e(x) - 1|
  double min_prob = 1.0;           // min over sampled states and out-edges
  std::uint64_t target_violations = 0;
  std::vector<std::uint64_t> per_vertex_samples;
  double delta = 0.0;
  std::uint64_t budget = 0;
  std::uint64_t master_seed = 0;
};

// Samples ~budget states spread over the vertex parts (seeded, reproducible)
// and checks the axioms above. Tolerance on row sums is 1e-12; the delta
// floor is strict.
ValidationReport validate(const MarkovSystem& sys, std::uint64_t sample_budget,
                          std::uint64_t master_seed);

// Builtin systems by name: "example_r1", "example_r2", or
// "gmarkov:p11,p12,...,pnn" (row-major square matrix). Throws UnknownBuiltin
// for anything else.
MarkovSystem make_builtin(const std::string& name_and_params);

// The bundled text of a builtin's system file, when it has one.
std::string builtin_source(const std::string& name);

}  // namespace cms

#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cms/analysis.hpp"
#include "cms/coding.hpp"
#include "cms/errors.hpp"
#include "cms/estimators.hpp"
#include "cms/expr.hpp"
#include "cms/martingale.hpp"
#include "cms/point.hpp"
#include "cms/simulate.hpp"
#include "cms/system.hpp"

namespace cms {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

struct Common {
  std::string system_file;
  std::string builtin;
  std::uint64_t seed = 0;
  std::string out_path;
  std::string format = "json";
  unsigned jobs = 1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--system", c.system_file, "system definition file");
  cmd->add_option("--builtin", c.builtin, "builtin system name, e.g. gmarkov:0.7,0.3,0.4,0.6");
  cmd->add_option("--seed", c.seed, "master seed; equal seeds replay bit-identically");
  cmd->add_option("--out", c.out_path, "write the result here instead of stdout");
  cmd->add_option("--format", c.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--jobs", c.jobs, "worker threads; the result does not depend on it");
}

std::string fnv64_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

MarkovSystem load_system(const Common& c) {
  if (!c.system_file.empty() && !c.builtin.empty())
    throw InvalidParams("give either --system or --builtin, not both");
  if (!c.builtin.empty()) return make_builtin(c.builtin);
  if (c.system_file.empty()) throw InvalidParams("a system is required: --system or --builtin");
  std::ifstream in(c.system_file, std::ios::binary);
  if (!in) throw InvalidParams("cannot open " + c.system_file);
  std::stringstream ss;
  ss << in.rdbuf();
  MarkovSystem sys = MarkovSystem::from_spec(parse_system(ss.str()));
  sys.set_identity("file:" + c.system_file + ":fnv64:" + fnv64_hex(ss.str()));
  return sys;
}

std::vector<int> parse_word(const MarkovSystem& sys, const std::string& text) {
  std::vector<int> word;
  std::stringstream ss(text);
  std::string id;
  while (std::getline(ss, id, ','))
    if (!id.empty()) word.push_back(sys.edge_index(id));
  return word;
}

Point parse_point(const MarkovSystem& sys, const std::string& text, int default_vertex = 1) {
  if (text.empty()) return sys.representative(default_vertex);
  if (sys.kind() == MarkovSystem::Kind::Sequence) {
    // A comma list of edge ids: the source representative's past extended by
    // that admissible word.
    std::vector<int> word = parse_word(sys, text);
    if (word.empty()) return sys.representative(default_vertex);
    Point p = sys.representative(sys.graph().source(word.front()));
    for (int e : word) p = sys.apply_map(e, p);
    return p;
  }
  std::vector<double> coords;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) coords.push_back(std::stod(part));
  if (static_cast<int>(coords.size()) != sys.dimension())
    throw InvalidParams("point needs " + std::to_string(sys.dimension()) + " coordinates");
  return EuclideanPoint{std::move(coords)};
}

json point_json(const MarkovSystem& sys, const Point& p) {
  if (const auto* ep = std::get_if<EuclideanPoint>(&p)) return json(ep->coords);
  const auto& sp = std::get<SequencePoint>(p);
  json j;
  json anchor = json::array();
  for (int e : *sp.anchor) anchor.push_back(sys.graph().edge(e).id);
  j["anchor"] = std::move(anchor);
  j["depth"] = sp.stored_depth();
  json recent = json::array();
  std::uint64_t shown = std::min<std::uint64_t>(sp.stored_depth(), 64);
  for (std::uint64_t k = 0; k < shown; ++k)
    recent.push_back(sys.graph().edge(sp.symbol_at(k)).id);
  j["recent"] = std::move(recent);  // most recent symbol first
  return j;
}

json word_json(const MarkovSystem& sys, const std::vector<int>& word) {
  json j = json::array();
  for (int e : word) j.push_back(sys.graph().edge(e).id);
  return j;
}

void write_csv(std::ostream& os, const json& payload) {
  if (payload.contains("rows") && payload["rows"].is_array() && !payload["rows"].empty() &&
      payload["rows"][0].is_object()) {
    const json& rows = payload["rows"];
    bool first = true;
    for (auto it = rows[0].begin(); it != rows[0].end(); ++it) {
      if (!first) os << ",";
      os << it.key();
      first = false;
    }
    os << "\n";
    for (const json& row : rows) {
      first = true;
      for (auto it = row.begin(); it != row.end(); ++it) {
        if (!first) os << ",";
        os << it.value().dump();
        first = false;
      }
      os << "\n";
    }
    return;
  }
  os << "key,value\n";
  for (auto it = payload.begin(); it != payload.end(); ++it)
    if (it.value().is_primitive()) os << it.key() << "," << it.value().dump() << "\n";
}

// The payload itself carries no clocks or hostnames, so equal inputs produce
// byte-identical files; wall time lives in the manifest sidecar.
void emit(const Common& c, const json& payload, const std::vector<std::string>& argv,
          const std::string& system_identity, double wall_time_s, std::ostream& out) {
  std::string body;
  if (c.format == "csv") {
    std::stringstream ss;
    write_csv(ss, payload);
    body = ss.str();
  } else {
    body = payload.dump(2) + "\n";
  }
  if (c.out_path.empty()) {
    out << body;
    return;
  }
  std::ofstream f(c.out_path, std::ios::binary);
  if (!f) throw InvalidParams("cannot write " + c.out_path);
  f << body;
  json manifest;
  manifest["argv"] = argv;
  manifest["out"] = c.out_path;
  manifest["system"] = system_identity.empty() ? json() : json(system_identity);
  manifest["version"] = kVersion;
  manifest["wall_time_s"] = wall_time_s;
  std::ofstream mf(c.out_path + ".manifest.json", std::ios::binary);
  mf << manifest.dump(2) << "\n";
}

json estimate_json(const EstimateWithError& e) {
  json j;
  j["value"] = e.value;
  j["std_error"] = e.std_error;
  j["n"] = e.n;
  j["batches"] = e.batches;
  j["clipped"] = e.clipped;
  return j;
}

StateFn coordinate_fn(const MarkovSystem& sys, const std::string& expr_text) {
  if (sys.kind() != MarkovSystem::Kind::Euclidean)
    throw InvalidParams("--f applies to Euclidean systems; use --f-vertex here");
  ExprPtr expr = parse_expr_text(expr_text, sys.dimension());
  return [expr](const Point& p) {
    const auto& c = std::get<EuclideanPoint>(p).coords;
    return eval_expr(*expr, std::span<const double>(c.data(), c.size()));
  };
}

StateFn vertex_indicator_fn(const MarkovSystem* sys, int vertex) {
  return [sys, vertex](const Point& p) { return sys->in_vertex_set(vertex, p) ? 1.0 : 0.0; };
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"contractive Markov system toolkit"};
  app.require_subcommand(1);

  Common c;
  int exit_code = 0;
  json payload;
  std::string system_identity;
  std::function<void()> handler;

  // graph-check
  auto* cmd_graph = app.add_subcommand("graph-check", "irreducibility and aperiodicity");
  add_common(cmd_graph, c);
  cmd_graph->callback([&] {
    MarkovSystem sys = load_system(c);
    system_identity = sys.identity();
    const auto& g = sys.graph();
    bool irr = is_irreducible(g);
    int period = irr ? graph_period(g) : 0;
    payload["op"] = "graph-check";
    payload["system"] = sys.name();
    payload["vertices"] = g.vertex_count();
    payload["edges"] = g.edge_count();
    payload["irreducible"] = irr;
    payload["aperiodic"] = irr && period == 1;
    payload["period"] = period;
    payload["pass"] = irr && period == 1;
    if (!payload["pass"].get<bool>()) exit_code = 1;
  });

  // validate
  std::uint64_t validate_budget = 10000;
  auto* cmd_validate = app.add_subcommand("validate", "probability and target-part axioms");
  add_common(cmd_validate, c);
  cmd_validate->add_option("--budget", validate_budget, "sampled states across parts");
  cmd_validate->callback([&] {
    MarkovSystem sys = load_system(c);
    system_identity = sys.identity();
    ValidationReport r = validate(sys, validate_budget, c.seed);
    payload["op"] = "validate";
    payload["system"] = sys.name();
    payload["seed"] = c.seed;
    payload["budget"] = r.budget;
    payload["max_sum_deviation"] = r.max_sum_deviation;
    payload["min_prob"] = r.min_prob;
    payload["delta"] = r.delta;
    payload["target_violations"] = r.target_violations;
    payload["pass"] = r.pass;
    if (!r.pass) exit_code = 1;
  });

  // rate
  std::uint64_t rate_budget = 100000;
  auto* cmd_rate = app.add_subcommand("rate", "average contraction ratio over sampled pairs");
  add_common(cmd_rate, c);
  cmd_rate->add_option("--budget", rate_budget, "pair budget");
  cmd_rate->callback([&] {
    MarkovSystem sys = load_system(c);
    system_identity = sys.identity();
    RateReport r = estimate_contraction_rate(sys, rate_budget, c.seed);
    payload["op"] = "rate";
    payload["system"] = sys.name();
    payload["seed"] = c.seed;
    payload["budget"] = r.budget;
    payload["pairs"] = r.pairs;
    payload["max_ratio"] = r.max_ratio;
    payload["deterministic_max"] = r.deterministic_max;
    payload["per_vertex_max"] = r.per_vertex_max;
    payload["argmax_vertex"] = r.argmax_vertex;
    payload["argmax_x"] = point_json(sys, r.argmax_x);
    payload["argmax_y"] = point_json(sys, r.argmax_y);
    payload["declared_rate"] = sys.rate() ? json(*sys.rate()) : json();
    bool pass = sys.rate() ? r.max_ratio <= *sys.rate() + 1e-9 : r.max_ratio < 1.0;
    payload["pass"] = pass;
    if (!pass) exit_code = 1;
  });

  // moduli
  std::string mod_source = "envelope";
  double jo_alpha = 0.0, mod_b = 1.0, mod_c = 0.5, mod_threshold = 1e-3;
  std::size_t mod_scales = 0, mod_partial = 0;
  std::uint64_t mod_budget = 500;
  std::string mod_edge;
  auto* cmd_moduli = app.add_subcommand("moduli", "modulus profile and summability class");
  add_common(cmd_moduli, c);
  cmd_moduli->add_option("--source", mod_source, "envelope, jo, or sample")
      ->check(CLI::IsMember({"envelope", "jo", "sample"}));
  cmd_moduli->add_option("--jo-alpha", jo_alpha, "alpha of the slowly varying family");
  cmd_moduli->add_option("--b", mod_b, "scale grid base");
  cmd_moduli->add_option("--c", mod_c, "scale grid ratio in (0,1)");
  cmd_moduli->add_option("--scales", mod_scales, "grid length (0: source default)");
  cmd_moduli->add_option("--n-partial", mod_partial, "terms for the partial sums");
  cmd_moduli->add_option("--budget", mod_budget, "pairs per scale for sampled profiles");
  cmd_moduli->add_option("--edge", mod_edge, "edge id whose probability to profile");
  cmd_moduli->add_option("--threshold", mod_threshold, "decade convergence threshold");
  cmd_moduli->callback([&] {
    ModulusProfile prof;
    std::string sys_name;
    if (mod_source == "jo") {
      if (!(jo_alpha > 0.0)) throw InvalidParams("--source jo needs --jo-alpha > 0");
      if (mod_scales == 0) mod_scales = 1000000;
      prof = jo_profile(jo_alpha, mod_scales);
    } else {
      MarkovSystem sys = load_system(c);
      system_identity = sys.identity();
      sys_name = sys.name();
      if (mod_scales == 0) mod_scales = mod_source == "sample" ? 60 : 200;
      if (mod_source == "envelope") {
        prof = envelope_profile(sys, mod_b, mod_c, mod_scales);
      } else {
        if (mod_edge.empty()) throw InvalidParams("--source sample needs --edge");
        int e = sys.edge_index(mod_edge);
        int v = sys.graph().source(e);
        auto fn = [&sys, e](const Point& p) { return sys.edge_prob(e, p); };
        prof = modulus_profile(fn, v, sys, mod_b, mod_c, mod_scales, mod_budget, c.seed);
      }
    }
    if (mod_partial == 0) mod_partial = prof.size();
    VariationReport vr = variation_class(prof, mod_partial, mod_threshold);
    payload["op"] = "moduli";
    if (!sys_name.empty()) payload["system"] = sys_name;
    payload["source"] = mod_source;
    payload["b"] = prof.b;
    payload["c"] = prof.c;
    payload["scales"] = prof.size();
    payload["mode"] =
        prof.mode == ModulusProfile::Mode::ExactClosedForm ? "exact" : "sampled_lower_bound";
    payload["class"] = variation_class_name(vr.cls);
    payload["s1"] = vr.s1;
    payload["s2"] = vr.s2;
    payload["s1_converged"] = vr.s1_converged;
    payload["s2_converged"] = vr.s2_converged;
    payload["s1_last_increment"] = vr.s1_last_increment;
    payload["s2_last_increment"] = vr.s2_last_increment;
    payload["n_terms"] = vr.n_terms;
    if (prof.size() <= 1000) {
      json rows = json::array();
      for (std::size_t i = 0; i < prof.size(); ++i) {
        json row;
        row["n"] = i + 1;
        row["scale"] = prof.scale(i + 1);
        row["phi"] = prof.phi[i];
        rows.push_back(std::move(row));
      }
      payload["rows"] = std::move(rows);
    }
  });

  // simulate
  std::string sim_x;
  std::size_t sim_n = 10;
  std::uint64_t sim_stream = 0;
  auto* cmd_sim = app.add_subcommand("simulate", "run the chain and print the trajectory");
  add_common(cmd_sim, c);
  cmd_sim->add_option("--x", sim_x, "start state (coords, or edge ids for sequence spaces)");
  cmd_sim->add_option("--n", sim_n, "steps");
  cmd_sim->add_option("--stream", sim_stream, "rng stream id");
  cmd_sim->callback([&] {
    MarkovSystem sys = load_system(c);
    system_identity = sys.identity();
    Point x0 = parse_point(sys, sim_x);
    Trajectory t = run(sys, x0, sim_n, c.seed, sim_stream);
    payload["op"] = "simulate";
    payload["system"] = sys.name();
    payload["seed"] = c.seed;
    payload["stream"] = sim_stream;
    payload["n"] = sim_n;
    payload["start"] = point_json(sys, t.start);
    payload["word"] = word_json(sys, t.word);
    json rows = json::array();
    for (std::size_t k = 0; k < t.states.size(); ++k) {
      json row;
      row["step"] = k;
      row["edge"] = k == 0 ? json() : json(sys.graph().edge(t.word[k - 1]).id);
      row["state"] = point_json(sys, t.states[k]);
      rows.push_back(std::move(row));
    }
    payload["rows"] = std::move(rows);
  });

  // ergodic
  std::string erg_f, erg_x;
  int erg_f_vertex = 0;
  std::size_t erg_n = 100000, erg_batches = 30;
  std::uint64_t erg_stream = 0;
  auto* cmd_erg = app.add_subcommand("ergodic", "time average of an observable");
  add_common(cmd_erg, c);
  cmd_erg->add_option("--f", erg_f, "observable over coordinates, e.g. min(norm1(x,y),10)");
  cmd_erg->add_option("--f-vertex", erg_f_vertex, "observable: indicator of this vertex part");
  cmd_erg->add_option("--x", erg_x, "start state");
  cmd_erg->add_option("--n", erg_n, "steps");
  cmd_erg->add_option("--stream", erg_stream, "rng stream id");
  cmd_erg->add_option("--batches", erg_batches, "batch count for the error bar");
  cmd_erg->callback([&] {
    MarkovSystem sys = load_system(c);
    system_identity = sys.identity();
    if (erg_f.empty() == (erg_f_vertex == 0))
      throw InvalidParams("give exactly one of --f or --f-vertex");
    StateFn f = erg_f.empty() ? vertex_indicator_fn(&sys, erg_f_vertex)
                              : coordinate_fn(sys, erg_f);
    Point x0 = parse_point(sys, erg_x);
    EstimateWithError e =
        ergodic_average(sys, x0, uniform_edge_fn(f), erg_n, c.seed, erg_stream, erg_batches);
    payload = estimate_json(e);
    payload["op"] = "ergodic";
    payload["system"] = sys.name();
    payload["seed"] = c.seed;
    payload["stream"] = erg_stream;
  });

  // entropy
  std::string ent_method = "both", ent_x;
  std::size_t ent_n = 100000, ent_traj = 8;
  bool ent_bits = false;
  auto* cmd_ent = app.add_subcommand("entropy", "entropy rate estimates in nats");
  add_common(cmd_ent, c);
  cmd_ent->add_option("--method", ent_method, "lyapunov, integral, or both")
      ->check(CLI::IsMember({"lyapunov", "integral", "both"}));
  cmd_ent->add_option("--x", ent_x, "start state");
  cmd_ent->add_option("--n", ent_n, "steps per trajectory");
  cmd_ent->add_option("--trajectories", ent_traj, "trajectories for the word-decay estimate");
  cmd_ent->add_flag("--bits", ent_bits, "also report values in bits");
  cmd_ent->callback([&] {
    MarkovSystem sys = load_system(c);
    system_identity = sys.identity();
    Point x0 = parse_point(sys, ent_x);
    payload["op"] = "entropy";
    payload["system"] = sys.name();
    payload["seed"] = c.seed;
    payload["n"] = ent_n;
    payload["unit"] = "nats";
    if (ent_method != "integral") {
      EstimateWithError e =
          estimate_entropy_lyapunov(sys, x0, ent_n, ent_traj, c.seed, 0, c.jobs);
      payload["lyapunov"] = estimate_json(e);
      if (ent_bits) payload["lyapunov"]["value_bits"] = e.value / std::log(2.0);
    }
    if (ent_method != "lyapunov") {
      EstimateWithError e = estimate_entropy_integral(sys, x0, ent_n, c.seed, 0x10000);
      payload["integral"] = estimate_json(e);
      if (ent_bits) payload["integral"]["value_bits"] = e.value / std::log(2.0);
    }
  });

  // measure
  std::string mea_x, mea_f;
  std::size_t mea_n = 100000, mea_burnin = kDefaultBurnin;
  std::uint64_t mea_stream = 0;
  int mea_stat_depth = -1;
  bool mea_check_moment = false, mea_dump = false;
  auto* cmd_mea = app.add_subcommand("measure", "empirical invariant measure and diagnostics");
  add_common(cmd_mea, c);
  cmd_mea->add_option("--x", mea_x, "start state");
  cmd_mea->add_option("--n", mea_n, "chain steps");
  cmd_mea->add_option("--burnin", mea_burnin, "discarded prefix (default n/10)");
  cmd_mea->add_option("--stream", mea_stream, "rng stream id");
  cmd_mea->add_option("--f", mea_f, "also integrate this observable");
  cmd_mea->add_option("--stationarity-depth", mea_stat_depth,
                      "check shift-invariance on words up to this length");
  cmd_mea->add_flag("--check-moment", mea_check_moment,
                    "compare mean distance-to-representative with its a-priori bound");
  cmd_mea->add_flag("--dump-support", mea_dump, "include all support points");
  cmd_mea->callback([&] {
    MarkovSystem sys = load_system(c);
    system_identity = sys.identity();
    Point x0 = parse_point(sys, mea_x);
    EmpiricalMeasure mu = empirical_measure(sys, x0, mea_n, mea_burnin, c.seed, mea_stream);
    payload["op"] = "measure";
    payload["system"] = sys.name();
    payload["seed"] = c.seed;
    payload["stream"] = mea_stream;
    payload["n"] = mu.n;
    payload["burnin"] = mu.burnin;
    payload["support"] = mu.support.size();
    if (!mea_f.empty())
      payload["integral"] = measure_integral(mu, coordinate_fn(sys, mea_f));
    if (mea_stat_depth >= 0) {
      std::vector<std::vector<int>> words{{}};
      for (int len = 1; len <= mea_stat_depth; ++len)
        for (auto& w : admissible_words(sys.graph(), len)) words.push_back(w);
      if (words.size() > 200) words.resize(200);
      auto rows = stationarity_check(sys, mu, words);
      json jr = json::array();
      double worst = 0.0;
      for (const auto& r : rows) {
        json row;
        row["word"] = word_json(sys, r.word);
        row["measure"] = r.measure;
        row["extended"] = r.extended;
        row["discrepancy"] = r.discrepancy;
        jr.push_back(std::move(row));
        worst = std::max(worst, r.discrepancy);
      }
      payload["stationarity"] = std::move(jr);
      payload["max_discrepancy"] = worst;
    }
    if (mea_check_moment) {
      MomentBoundReport mb = moment_bound(sys);
      std::vector<double> series;
      series.reserve(mu.support.size());
      for (const Point& p : mu.support)
        series.push_back(
            distance(sys.metric(), p, sys.representative(sys.vertex_of_or_throw(p))));
      MeanWithError m = batch_means(series);
      json jm;
      jm["c_max"] = mb.c_max;
      jm["bound"] = mb.bound;
      jm["rate"] = mb.rate;
      jm["mean_distance"] = m.mean;
      jm["std_error"] = m.std_error;
      bool ok = m.mean <= mb.bound + 3.0 * m.std_error;
      jm["pass"] = ok;
      payload["moment"] = std::move(jm);
      if (!ok) exit_code = 1;
    }
    if (mea_dump) {
      json rows = json::array();
      for (std::size_t i = 0; i < mu.support.size(); ++i) {
        json row;
        row["index"] = i;
        row["state"] = point_json(sys, mu.support[i]);
        rows.push_back(std::move(row));
      }
      payload["rows"] = std::move(rows);
    }
  });

  // cylinder
  std::string cyl_word, cyl_x;
  std::size_t cyl_measure_n = 0;
  auto* cmd_cyl = app.add_subcommand("cylinder", "word probabilities from a state or a measure");
  add_common(cmd_cyl, c);
  cmd_cyl->add_option("--word", cyl_word, "comma-separated edge ids")->required();
  cmd_cyl->add_option("--x", cyl_x, "state to evaluate from");
  cmd_cyl->add_option("--measure-n", cyl_measure_n,
                      "average over an empirical measure of this many steps");
  cmd_cyl->callback([&] {
    MarkovSystem sys = load_system(c);
    system_identity = sys.identity();
    std::vector<int> word = parse_word(sys, cyl_word);
    if (word.empty()) throw InvalidParams("--word must name at least one edge");
    Point x0 = parse_point(sys, cyl_x, sys.graph().source(word.front()));
    payload["op"] = "cylinder";
    payload["system"] = sys.name();
    payload["word"] = word_json(sys, word);
    payload["x"] = point_json(sys, x0);
    payload["prob"] = cylinder_prob(sys, x0, word);
    payload["log_prob"] = log_cylinder_prob(sys, x0, word);
    if (cyl_measure_n > 0) {
      EmpiricalMeasure mu =
          empirical_measure(sys, x0, cyl_measure_n, kDefaultBurnin, c.seed, 0);
      EstimateWithError e = markov_measure_cylinder(sys, mu, word);
      payload["measure"] = estimate_json(e);
      payload["seed"] = c.seed;
    }
  });

  // code
  std::string code_word_text;
  std::vector<std::size_t> code_depths;
  std::size_t code_words = 200, code_depth = 2000;
  std::string code_next;
  bool code_holder = false, code_drift = false;
  auto* cmd_code = app.add_subcommand("code", "word-to-state coding diagnostics");
  add_common(cmd_code, c);
  cmd_code->add_option("--word", code_word_text, "backward word, oldest edge first");
  cmd_code->add_option("--edge", code_next, "continuation edge for the energy value");
  cmd_code->add_option("--depths", code_depths, "grid depths for the convergence table");
  cmd_code->add_option("--words", code_words, "sampled words for the convergence table");
  cmd_code->add_option("--depth", code_depth, "common word length for the regularity fit");
  cmd_code->add_flag("--holder", code_holder, "fit coded distance against word distance");
  cmd_code->add_flag("--drift", code_drift, "symbol-count drift of a binary word");
  cmd_code->callback([&] {
    MarkovSystem sys = load_system(c);
    system_identity = sys.identity();
    payload["op"] = "code";
    payload["system"] = sys.name();
    if (code_drift) {
      if (code_word_text.empty()) throw InvalidParams("--drift needs --word");
      std::vector<int> word = parse_word(sys, code_word_text);
      auto drift = y_drift(word);
      payload["word"] = word_json(sys, word);
      json rows = json::array();
      for (std::size_t i = 0; i < drift.size(); ++i) {
        json row;
        row["suffix_len"] = i + 1;
        row["drift"] = drift[i];
        rows.push_back(std::move(row));
      }
      payload["rows"] = std::move(rows);
      return;
    }
    if (code_holder) {
      HolderFitReport r = holder_diagnostic(sys, c.seed, code_depth);
      payload["seed"] = c.seed;
      payload["alpha"] = r.alpha;
      payload["log_c"] = r.log_c;
      payload["coverage"] = r.coverage;
      payload["pairs"] = r.pairs;
      payload["depth"] = r.depth;
      return;
    }
    if (!code_depths.empty()) {
      CodingReport r = coding_convergence(sys, c.seed, code_depths, code_words);
      payload["seed"] = c.seed;
      payload["words"] = r.words;
      payload["horizon"] = r.horizon;
      json rows = json::array();
      for (const auto& row : r.rows) {
        json jr;
        jr["depth"] = row.depth;
        jr["succ_median"] = row.succ_median;
        jr["succ_p90"] = row.succ_p90;
        jr["succ_max"] = row.succ_max;
        jr["start_median"] = row.start_median;
        jr["start_p90"] = row.start_p90;
        jr["start_max"] = row.start_max;
        rows.push_back(std::move(jr));
      }
      payload["rows"] = std::move(rows);
      return;
    }
    if (code_word_text.empty())
      throw InvalidParams("give --word, --depths, --holder, or --drift");
    BackwardWord w{parse_word(sys, code_word_text)};
    payload["word"] = word_json(sys, w.edges);
    payload["state"] = point_json(sys, code_word(sys, w));
    if (!code_next.empty())
      payload["energy"] = energy_u(sys, w, sys.edge_index(code_next));
  });

  // martingale
  std::string mar_x, mar_y, mar_check = "exact", mar_word;
  std::size_t mar_n = 5;
  std::uint64_t mar_budget = 10000;
  double mar_tol = 1e-10;
  std::vector<double> mar_thresholds{1.0, 2.0, 5.0, 10.0};
  auto* cmd_mar = app.add_subcommand("martingale", "likelihood-ratio checks for a state pair");
  add_common(cmd_mar, c);
  cmd_mar->add_option("--x", mar_x, "first state")->required();
  cmd_mar->add_option("--y", mar_y, "second state, same vertex part")->required();
  cmd_mar->add_option("--check", mar_check, "exact, y-exact, variance, tail, path, or ui")
      ->check(CLI::IsMember({"exact", "y-exact", "variance", "tail", "path", "ui"}));
  cmd_mar->add_option("--n", mar_n, "depth / steps");
  cmd_mar->add_option("--budget", mar_budget, "paths for the sampled checks");
  cmd_mar->add_option("--tol", mar_tol, "tolerance for the exact checks");
  cmd_mar->add_option("--word", mar_word, "edge word for --check path");
  cmd_mar->add_option("--thresholds", mar_thresholds, "grid for --check ui");
  cmd_mar->callback([&] {
    MarkovSystem sys = load_system(c);
    system_identity = sys.identity();
    Point x = parse_point(sys, mar_x);
    Point y = parse_point(sys, mar_y);
    payload["op"] = "martingale";
    payload["system"] = sys.name();
    payload["check"] = mar_check;
    payload["x"] = point_json(sys, x);
    payload["y"] = point_json(sys, y);
    if (mar_check == "exact" || mar_check == "y-exact") {
      double disc = mar_check == "exact" ? martingale_check_exact(sys, x, y, mar_n)
                                         : y_martingale_check_exact(sys, x, y, mar_n);
      payload["n"] = mar_n;
      payload["max_discrepancy"] = disc;
      payload["tol"] = mar_tol;
      payload["pass"] = disc <= mar_tol;
      if (disc > mar_tol) exit_code = 1;
    } else if (mar_check == "variance") {
      VarianceBoundReport r =
          variance_bound_check(sys, x, y, mar_n, mar_budget, c.seed, c.jobs);
      payload["seed"] = c.seed;
      payload["n"] = r.n;
      payload["paths"] = r.paths;
      payload["estimate"] = r.estimate;
      payload["std_error"] = r.std_error;
      payload["bound"] = r.bound;
      payload["pass"] = r.within;
      if (!r.within) exit_code = 1;
    } else if (mar_check == "tail") {
      auto rows = tail_bound_check(sys, x, y, mar_n, mar_budget, c.seed, c.jobs);
      payload["seed"] = c.seed;
      payload["paths"] = mar_budget;
      bool any = false;
      json jr = json::array();
      for (const auto& r : rows) {
        json row;
        row["i"] = r.i;
        row["freq"] = r.freq;
        row["bound"] = r.bound;
        row["std_error"] = r.std_error;
        row["flagged"] = r.flagged;
        jr.push_back(std::move(row));
        any = any || r.flagged;
      }
      payload["rows"] = std::move(jr);
      payload["pass"] = !any;
      if (any) exit_code = 1;
    } else if (mar_check == "path") {
      if (mar_word.empty()) throw InvalidParams("--check path needs --word");
      std::vector<int> word = parse_word(sys, mar_word);
      MartingalePath p = likelihood_path(sys, x, y, word);
      payload["word"] = word_json(sys, word);
      bool all_ok = true;
      json rows = json::array();
      for (std::size_t k = 0; k < p.x_ratio.size(); ++k) {
        json row;
        row["k"] = k;
        row["x_ratio"] = p.x_ratio[k];
        row["y_part"] = p.y_part[k];
        row["z_part"] = p.z_part[k];
        bool ok = p.x_ratio[k] <= 0.0 ||
                  std::log(p.x_ratio[k]) <= p.y_part[k] + p.z_part[k] + 1e-12;
        row["log_bound_ok"] = ok;
        rows.push_back(std::move(row));
        all_ok = all_ok && ok;
      }
      payload["rows"] = std::move(rows);
      payload["pass"] = all_ok;
      if (!all_ok) exit_code = 1;
    } else {
      auto rows =
          uniform_integrability_table(sys, x, y, mar_n, mar_thresholds, mar_budget, c.seed);
      payload["seed"] = c.seed;
      payload["paths"] = mar_budget;
      json jr = json::array();
      for (const auto& r : rows) {
        json row;
        row["threshold"] = r.threshold;
        row["sup_freq"] = r.sup_freq;
        jr.push_back(std::move(row));
      }
      payload["rows"] = std::move(jr);
    }
  });

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("cms");
  for (const auto& a : args) argv.push_back(a.c_str());

  auto start_time = std::chrono::steady_clock::now();
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const CmsError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();

  try {
    emit(c, payload, args, system_identity, wall, out);
  } catch (const CmsError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}

}  // namespace cms

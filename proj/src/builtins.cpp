#include <sstream>

#include "cms/errors.hpp"
#include "cms/system.hpp"

namespace cms {

namespace {

// Bundled system files; data/*.cms carries the same text for CLI use.
const char* kExampleR1 = R"(# One-part system on the line: halving and doubling maps with
# oscillating probabilities.
system example_r1
dim 1
metric l1
vertices 1
representative 1 = (1)
edge 0 : 1 -> 1 map (0.5 * x) prob (1/6) * sin(x)^2 + 17/24
edge 1 : 1 -> 1 map (2 * x) prob (1/6) * cos(x)^2 + 1/8
delta 0.125
rate 0.9375
)";

const char* kExampleR2 = R"(# Two-part planar system with four affine maps; probabilities depend
# on the taxicab norm of the state.
system example_r2
dim 2
metric l1
vertices 2
vertexset 1 = y >= 1
vertexset 2 = y <= -1
representative 1 = (0, 1)
representative 2 = (0, -1)
edge e1 : 1 -> 2 map (-0.5 * x - 1, -1.5 * y + 0.5) prob (1/15) * sin(norm1(x, y))^2 + 53/105
edge e2 : 1 -> 1 map (-1.5 * x + 1, 0.25 * y + 0.75) prob (1/15) * cos(norm1(x, y))^2 + 3/7
edge e3 : 2 -> 1 map (-0.5 * abs(x) + 1, -1.5 * y - 0.5) prob (1/15) * sin(norm1(x, y))^2 + 53/105
edge e4 : 2 -> 1 map (1.5 * abs(x) - 1, -0.25 * y + 0.75) prob (1/15) * cos(norm1(x, y))^2 + 3/7
delta 0.42857142857142855
rate 0.99523809523809526
)";

std::vector<std::vector<double>> parse_matrix_params(const std::string& params) {
  std::vector<double> entries;
  std::stringstream ss(params);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw InvalidParams("empty matrix entry");
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InvalidParams("bad matrix entry '" + item + "'");
    }
    if (used != item.size()) throw InvalidParams("bad matrix entry '" + item + "'");
    entries.push_back(v);
  }
  std::size_t n = 0;
  while (n * n < entries.size()) ++n;
  if (n == 0 || n * n != entries.size())
    throw InvalidStochasticMatrix("need a square number of entries, got " +
                                  std::to_string(entries.size()));
  std::vector<std::vector<double>> p(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p[i][j] = entries[i * n + j];
  return p;
}

}  // namespace

std::string builtin_source(const std::string& name) {
  if (name == "example_r1") return kExampleR1;
  if (name == "example_r2") return kExampleR2;
  throw UnknownBuiltin("no bundled source for '" + name + "'");
}

MarkovSystem make_builtin(const std::string& name_and_params) {
  std::string name = name_and_params;
  std::string params;
  if (auto colon = name_and_params.find(':'); colon != std::string::npos) {
    name = name_and_params.substr(0, colon);
    params = name_and_params.substr(colon + 1);
  }
  if (name == "example_r1") {
    if (!params.empty()) throw InvalidParams("example_r1 takes no parameters");
    MarkovSystem sys = MarkovSystem::from_spec(parse_system(kExampleR1));
    sys.set_identity("builtin:example_r1");
    // Probabilities vary through sin^2 and cos^2 of the coordinate with
    // factor 1/6; t/3 is a safe closed-form envelope.
    sys.set_modulus_envelope([](double t) { return t / 3.0; });
    return sys;
  }
  if (name == "example_r2") {
    if (!params.empty()) throw InvalidParams("example_r2 takes no parameters");
    MarkovSystem sys = MarkovSystem::from_spec(parse_system(kExampleR2));
    sys.set_identity("builtin:example_r2");
    // Probabilities vary through sin^2 and cos^2 of the taxicab norm with
    // factor 1/15, and the norm is 1-Lipschitz.
    sys.set_modulus_envelope([](double t) { return t / 15.0; });
    return sys;
  }
  if (name == "gmarkov") {
    if (params.empty())
      throw InvalidParams("gmarkov needs matrix parameters, e.g. gmarkov:0.7,0.3,0.4,0.6");
    return MarkovSystem::gmarkov(parse_matrix_params(params));
  }
  throw UnknownBuiltin("unknown builtin system '" + name + "'");
}

}  // namespace cms

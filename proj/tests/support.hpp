#pragma once

// Shared fixtures for the unit tests. Expensive upstream objects are built
// once per process.

#include <filesystem>
#include <map>
#include <memory>
#include <random>
#include <string>

#include "spall/equilibrium.hpp"
#include "spall/manifold.hpp"

namespace spall::testing {

struct Upstream {
  Equilibrium eq;
  EigenPair pair;
  ManifoldExpansion expansion;
};

inline const Upstream& upstream(int n) {
  static std::map<int, std::unique_ptr<Upstream>> cache;
  auto& slot = cache[n];
  if (!slot) {
    SpatialGrid grid(n);
    Equilibrium eq = find_equilibrium(grid);
    EigenPair pair = leading_eigenpairs(eq, 1).front();
    ManifoldExpansion e = expand_graph(eq, pair, 8);
    slot = std::make_unique<Upstream>(Upstream{eq, pair, e});
  }
  return *slot;
}

inline StateField random_field(const SpatialGrid& g, std::mt19937_64& rng, bool complex = true) {
  std::normal_distribution<double> nd;
  ComplexVector v(g.size());
  for (int j = 0; j < g.size(); ++j) v(j) = Complex(nd(rng), complex ? nd(rng) : 0.0);
  return StateField(g, v);
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("spall-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace spall::testing

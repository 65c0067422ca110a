#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "a2rlab/assemble.hpp"
#include "a2rlab/model.hpp"
#include "a2rlab/random.hpp"

namespace fixture {

using namespace a2rlab;

/// 1D grid with unit spacing and the given node values.
inline PotentialField line(const std::vector<double>& values) {
  const int n = static_cast<int>(values.size());
  return PotentialField::from_values(GridSpec::cube(1, 0.0, n - 1.0, n), values);
}

/// Spherical (or disk) well of radius 1 in [-half, half]^dim.
inline PotentialField ball_well(int dim, int nodes, double depth = 2.0, double half = 2.0, double radius = 1.0) {
  return build_potential(BallWell{{0.0, 0.0, 0.0}, radius, depth}, GridSpec::cube(dim, -half, half, nodes));
}

inline AssembledPencil pencil_of(const PotentialField& v, double e) {
  return assemble_pencil(classify_nodes(v, e), v, e);
}

/// The 1D pencil with I = {2}, B = {1, 3}: V = -1 at the middle node, e = -0.5,
/// so that M_22 = 0.5.
inline AssembledPencil three_node() { return pencil_of(line({0.0, 0.0, -1.0, 0.0, 0.0}), -0.5); }

struct RandomScenario {
  PotentialField v;
  double e = 0.0;
  std::uint64_t seed = 0;
};

/// Random 2D or 3D well configuration with a nonempty sublevel set.
inline RandomScenario random_scenario(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  for (;;) {
    const int dim = uniform01(gen) < 0.5 ? 2 : 3;
    const int nodes = dim == 2 ? 13 + 2 * static_cast<int>(uniform_index(gen, 8))
                               : 7 + 2 * static_cast<int>(uniform_index(gen, 3));
    const GridSpec grid = GridSpec::cube(dim, -2.0, 2.0, nodes);
    auto centre = [&] {
      Point c{0.0, 0.0, 0.0};
      for (int a = 0; a < dim; ++a) c[a] = 0.8 * uniform_symmetric(gen);
      return c;
    };
    PotentialFamily family;
    const auto kind = uniform_index(gen, 4);
    double depth = 0.5 + 3.0 * uniform01(gen);
    if (kind == 0) {
      family = BallWell{centre(), 0.6 + 0.6 * uniform01(gen), depth};
    } else if (kind == 1) {
      family = GaussianWell{centre(), 0.3 + 0.4 * uniform01(gen), depth};
    } else if (kind == 2) {
      MultiWell m;
      m.wells.push_back(BallWell{centre(), 0.4 + 0.4 * uniform01(gen), depth});
      m.wells.push_back(GaussianWell{centre(), 0.3 + 0.3 * uniform01(gen), 0.5 + 2.0 * uniform01(gen)});
      family = m;
    } else {
      depth = 1.0 + 2.0 * uniform01(gen);
      family = BandLimitedRandom{gen(), 2 + static_cast<int>(uniform_index(gen, 3)), depth};
    }
    RandomScenario s;
    s.v = build_potential(family, grid);
    s.e = -(0.05 + 0.5 * uniform01(gen)) * depth;
    s.seed = seed;
    bool nonempty = false;
    for (double x : s.v.values) nonempty = nonempty || x < s.e;
    if (nonempty) return s;
  }
}

}  // namespace fixture

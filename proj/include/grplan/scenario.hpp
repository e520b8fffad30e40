#pragma once

#include <cstdint>
#include <string>

#include "grplan/instance.hpp"

namespace grplan {

enum class ObstaclePattern { None, CenterHole };
enum class Scenario { Random, Squares, Blocks };

struct InstanceSpec {
  int m1 = 0, m2 = 0, m3 = 0;  // m3 == 0 for 2D
  double density = 1.0 / 3.0;
  ObstaclePattern obstacles = ObstaclePattern::None;
  Scenario scenario = Scenario::Random;
  uint64_t seed = 0;

  std::string canonical() const;
};

/// Deterministic instance generation. Random samples starts and goals
/// uniformly without replacement; squares places robots on concentric
/// rings with centrosymmetric goals; blocks splits the grid into 3x3-
/// multiple square blocks and permutes block assignments uniformly.
Instance generate(const InstanceSpec& spec);

/// Short stable digest of the spec, for benchmark rows.
std::string spec_digest(const InstanceSpec& spec);

}  // namespace grplan

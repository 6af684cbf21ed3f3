#pragma once

#include "sparseopt/core.hpp"

#include <string>

namespace sparseopt {

struct PlantedInstance {
  DenseMatrix a;
  DenseVector b;
  DenseVector x_star;
  int s_star = 0;
  double noise_level = 0.0;
  std::uint64_t seed = 0;
  // Nonempty for constructions that prescribe a starting support.
  SupportSet initial_support;
  std::string kind;
};

// A: m x n with i.i.d. standard normal entries, columns scaled to unit norm;
// x* has s_star random +-1 entries; b = A x* + noise_level * g, g standard
// normal. Fixed seed gives a bit-identical instance.
PlantedInstance gaussian_planted(int m, int n, int s_star, double noise_level,
                                 std::uint64_t seed);

// Diagonal design on n = s*(1 + kappa + kappa^2) coordinates split into
// intervals I1, I2, I3, built so that replacement-style greedy runs started
// inside I3 cycle through I2 without ever reaching I1. kappa must be an even
// integer >= 2 and delta must lie in (0, 1/8).
PlantedInstance ompr_adversarial(int s_star, int kappa, double delta);

struct AdversarialIntervals {
  int i1_begin = 0, i1_end = 0;  // [i1_begin, i1_end)
  int i2_end = 0;                // I2 = [i1_end, i2_end)
  int n = 0;                     // I3 = [i2_end, n)
};

AdversarialIntervals adversarial_intervals(int s_star, int kappa);

std::string instance_to_json(const PlantedInstance& inst);
PlantedInstance instance_from_json(const std::string& text);
void save_instance(const PlantedInstance& inst, const std::string& path);
PlantedInstance load_instance(const std::string& path);

}  // namespace sparseopt

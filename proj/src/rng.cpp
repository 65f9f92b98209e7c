#include "errdyn/rng.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace errdyn {

namespace {

// splitmix64 finalizer; good avalanche, cheap, and stable across platforms
uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

uint64_t derive_seed(uint64_t master_seed, uint64_t path_index, uint64_t salt) {
  uint64_t h = mix64(master_seed);
  h = mix64(h ^ path_index);
  h = mix64(h ^ salt);
  return h;
}

BrownianPath BrownianPath::generate(uint64_t master_seed, uint64_t path_index,
                                    double dt, int steps, int d,
                                    uint64_t salt) {
  if (dt <= 0.0) throw std::invalid_argument("BrownianPath: dt must be > 0");
  if (steps < 1 || d < 1)
    throw std::invalid_argument("BrownianPath: steps and d must be >= 1");
  BrownianPath p;
  p.seed = derive_seed(master_seed, path_index, salt);
  p.dt = dt;
  p.increments.resize(steps, d);
  std::mt19937_64 eng(p.seed);
  std::normal_distribution<double> nd(0.0, std::sqrt(dt));
  // step-outer fill order is part of the reproducibility contract
  for (int k = 0; k < steps; ++k)
    for (int j = 0; j < d; ++j) p.increments(k, j) = nd(eng);
  return p;
}

}  // namespace errdyn

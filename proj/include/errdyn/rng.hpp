#pragma once

#include <cstdint>
#include <vector>

#include "errdyn/types.hpp"

namespace errdyn {

// Mixes (master_seed, path_index, salt) into one stream seed. Distinct salts
// give statistically independent ensembles from the same master seed; equal
// salts let two schemes consume identical increments.
uint64_t derive_seed(uint64_t master_seed, uint64_t path_index, uint64_t salt);

// One sampled Brownian path on a uniform grid. increments.row(k) holds the
// d-dimensional step over [t_k, t_k + dt], drawn N(0, dt I).
struct BrownianPath {
  uint64_t seed = 0;  // stream seed actually used (post-mixing)
  double dt = 0.0;
  Mat increments;  // steps x d

  int steps() const { return static_cast<int>(increments.rows()); }
  int dim() const { return static_cast<int>(increments.cols()); }

  // Reconstructible from scratch: identical arguments give identical bytes,
  // regardless of how many paths exist or which threads generate them.
  static BrownianPath generate(uint64_t master_seed, uint64_t path_index,
                               double dt, int steps, int d, uint64_t salt = 0);
};

}  // namespace errdyn

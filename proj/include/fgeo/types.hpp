#pragma once

#include <Eigen/Dense>
#include <random>

namespace fgeo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

using Rng = std::mt19937_64;

/// Standard-normal probe vector, deterministic for a given generator state.
inline Vec random_vec(Rng& rng, int dim) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = dist(rng);
  return v;
}

}  // namespace fgeo

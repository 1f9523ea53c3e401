#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fgeo/types.hpp"

namespace fgeo {

/// One finite-dimensional stage of a projective system. The seminorm weights
/// define the stage norm p_i(x) = sqrt(sum_k w_k x_k^2).
struct Level {
  int index = 0;
  int dim = 0;
  Vec seminorm_weights;  // size dim, entries >= 0
};

/// Finite projective system: levels plus one connecting map per adjacent pair.
/// Non-adjacent maps are always derived by composition, never stored, so the
/// composition axiom holds by construction for everything this class hands out.
class Tower {
 public:
  /// adjacent[k] maps level k+1 down to level k.
  Tower(std::vector<Level> levels, std::vector<Mat> adjacent);

  int depth() const { return static_cast<int>(levels_.size()); }
  const Level& level(int i) const;

  /// rho_{ji}: level j -> level i, i <= j. Identity when i == j.
  Mat connecting(int j, int i) const;

  /// Applies rho_{ji} to a level-j vector.
  Vec project(const Vec& x, int j, int i) const;

  /// Weighted Euclidean seminorm of a level-i vector.
  double seminorm(const Vec& x, int i) const;

 private:
  std::vector<Level> levels_;
  std::vector<Mat> adjacent_;
  void check_level(int i) const;
};

struct CoherenceEntry {
  int k, j, i;
  double residual;
};

struct CoherenceReport {
  std::vector<CoherenceEntry> entries;
  double max_residual = 0.0;
  bool pass = true;
};

/// Residual ||rho_{ji} rho_{kj} - rho_{ki}|| over all triples k >= j >= i.
/// `overrides` substitutes an externally supplied matrix for a (from, to)
/// pair, which is how foreign map data gets validated against the tower.
CoherenceReport check_composition_coherence(
    const Tower& tower, double tol,
    const std::map<std::pair<int, int>, Mat>& overrides = {});

/// Per-level maps f_i : E_i -> E_i, compatibility checked, never assumed.
struct LevelFamilyMap {
  std::vector<std::function<Vec(const Vec&)>> at;
};

/// Per-level bilinear maps B_i : E_i x E_i -> E_i.
struct LevelFamilyBilinear {
  std::vector<std::function<Vec(const Vec&, const Vec&)>> at;
};

struct CompatibilityResult {
  bool compatible = false;
  double max_residual = 0.0;
};

/// Probes rho_{ji}(f_j(x)) == f_i(rho_{ji}(x)) at seeded random points.
CompatibilityResult is_compatible_map(const LevelFamilyMap& f,
                                      const Tower& tower, int probes,
                                      double tol, unsigned long long seed = 42);

/// Probes rho_{ji}(B_j(x, y)) == B_i(rho_{ji} x, rho_{ji} y).
CompatibilityResult is_compatible_bilinear(const LevelFamilyBilinear& b,
                                           const Tower& tower, int probes,
                                           double tol,
                                           unsigned long long seed = 42);

}  // namespace fgeo

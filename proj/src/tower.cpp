#include "fgeo/tower.hpp"

#include <cmath>

namespace fgeo {

Tower::Tower(std::vector<Level> levels, std::vector<Mat> adjacent)
    : levels_(std::move(levels)), adjacent_(std::move(adjacent)) {
  if (levels_.empty()) throw std::invalid_argument("tower: needs at least one level");
  if (adjacent_.size() + 1 != levels_.size())
    throw std::invalid_argument("tower: need one adjacent map per level pair");
  for (size_t i = 0; i < levels_.size(); ++i) {
    const Level& lv = levels_[i];
    if (lv.dim < 1) throw std::invalid_argument("tower: level dim must be >= 1");
    if (lv.seminorm_weights.size() != lv.dim)
      throw std::invalid_argument("tower: seminorm weight count != dim");
    if ((lv.seminorm_weights.array() < 0).any() ||
        !lv.seminorm_weights.allFinite())
      throw std::invalid_argument("tower: seminorm weights must be finite and >= 0");
    if (i > 0 && lv.index <= levels_[i - 1].index)
      throw std::invalid_argument("tower: level indices must be strictly increasing");
  }
  for (size_t k = 0; k < adjacent_.size(); ++k) {
    if (adjacent_[k].rows() != levels_[k].dim ||
        adjacent_[k].cols() != levels_[k + 1].dim)
      throw std::invalid_argument("tower: adjacent map shape mismatch");
  }
}

void Tower::check_level(int i) const {
  if (i < 0 || i >= depth()) throw std::out_of_range("tower: level index out of range");
}

const Level& Tower::level(int i) const {
  check_level(i);
  return levels_[i];
}

Mat Tower::connecting(int j, int i) const {
  check_level(i);
  check_level(j);
  if (i > j) throw std::invalid_argument("tower: connecting map requires i <= j");
  Mat m = Mat::Identity(levels_[j].dim, levels_[j].dim);
  for (int k = j; k > i; --k) m = adjacent_[k - 1] * m;
  return m;
}

Vec Tower::project(const Vec& x, int j, int i) const {
  check_level(j);
  if (x.size() != levels_[j].dim)
    throw std::invalid_argument("tower: vector dim does not match level");
  if (i > j) throw std::invalid_argument("tower: cannot project upward (i > j)");
  check_level(i);
  Vec out = x;
  for (int k = j; k > i; --k) out = adjacent_[k - 1] * out;
  return out;
}

double Tower::seminorm(const Vec& x, int i) const {
  check_level(i);
  if (x.size() != levels_[i].dim)
    throw std::invalid_argument("tower: vector dim does not match level");
  return std::sqrt((levels_[i].seminorm_weights.array() * x.array().square()).sum());
}

CoherenceReport check_composition_coherence(
    const Tower& tower, double tol,
    const std::map<std::pair<int, int>, Mat>& overrides) {
  auto map_for = [&](int from, int to) -> Mat {
    auto it = overrides.find({from, to});
    if (it != overrides.end()) return it->second;
    return tower.connecting(from, to);
  };
  CoherenceReport report;
  for (int k = 2; k < tower.depth(); ++k)
    for (int j = 1; j < k; ++j)
      for (int i = 0; i < j; ++i) {
        Mat composed = map_for(j, i) * map_for(k, j);
        double res = (composed - map_for(k, i)).norm();
        report.entries.push_back({k, j, i, res});
        report.max_residual = std::max(report.max_residual, res);
      }
  report.pass = report.max_residual <= tol;
  return report;
}

namespace {

template <typename Apply>
CompatibilityResult check_family(const Tower& tower, int probes, double tol,
                                 unsigned long long seed, Apply&& probe_residual) {
  if (probes < 1) throw std::invalid_argument("compatibility: probes must be >= 1");
  Rng rng(seed);
  CompatibilityResult result;
  for (int p = 0; p < probes; ++p)
    for (int j = 0; j < tower.depth(); ++j)
      for (int i = 0; i <= j; ++i) {
        double res = probe_residual(rng, j, i);
        result.max_residual = std::max(result.max_residual, res);
      }
  result.compatible = result.max_residual <= tol;
  return result;
}

}  // namespace

CompatibilityResult is_compatible_map(const LevelFamilyMap& f, const Tower& tower,
                                      int probes, double tol,
                                      unsigned long long seed) {
  if (static_cast<int>(f.at.size()) != tower.depth())
    throw std::invalid_argument("is_compatible_map: one map per level required");
  return check_family(tower, probes, tol, seed, [&](Rng& rng, int j, int i) {
    Vec x = random_vec(rng, tower.level(j).dim);
    Vec fj = f.at[j](x);
    if (fj.size() != tower.level(j).dim)
      throw std::invalid_argument("is_compatible_map: f_j output dim mismatch");
    Vec lhs = tower.project(fj, j, i);
    Vec rhs = f.at[i](tower.project(x, j, i));
    return (lhs - rhs).norm();
  });
}

CompatibilityResult is_compatible_bilinear(const LevelFamilyBilinear& b,
                                           const Tower& tower, int probes,
                                           double tol, unsigned long long seed) {
  if (static_cast<int>(b.at.size()) != tower.depth())
    throw std::invalid_argument("is_compatible_bilinear: one map per level required");
  return check_family(tower, probes, tol, seed, [&](Rng& rng, int j, int i) {
    Vec x = random_vec(rng, tower.level(j).dim);
    Vec y = random_vec(rng, tower.level(j).dim);
    Vec bj = b.at[j](x, y);
    if (bj.size() != tower.level(j).dim)
      throw std::invalid_argument("is_compatible_bilinear: B_j output dim mismatch");
    Vec lhs = tower.project(bj, j, i);
    Vec rhs = b.at[i](tower.project(x, j, i), tower.project(y, j, i));
    return (lhs - rhs).norm();
  });
}

}  // namespace fgeo

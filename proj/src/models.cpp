#include "fgeo/models.hpp"

#include <cmath>
#include <functional>

#include "fgeo/ode.hpp"
#include <numbers>
#include <stdexcept>

namespace fgeo {

namespace {
constexpr double kPi = std::numbers::pi;
}

ChristoffelField flat_christoffel(int dim) {
  if (dim < 1) throw std::invalid_argument("flat_christoffel: dim must be >= 1");
  ChristoffelField gamma;
  gamma.chart_id = "flat";
  gamma.dim = dim;
  gamma.symmetric = true;
  gamma.gamma = [dim](const Vec&, const Vec&, const Vec&) -> Vec {
    return Vec::Zero(dim);
  };
  return gamma;
}

Vec flatten_matrix(const Mat& m) {
  Vec v(m.size());
  int idx = 0;
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) v[idx++] = m(r, c);
  return v;
}

Mat unflatten_matrix(const Vec& v, int n) {
  if (v.size() != n * n)
    throw std::invalid_argument("unflatten_matrix: size mismatch");
  Mat m(n, n);
  int idx = 0;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = v[idx++];
  return m;
}

ChristoffelField direct_christoffel(const MatrixGroupModel& model) {
  const int n = model.n;
  if (n < 1) throw std::invalid_argument("direct_christoffel: n must be >= 1");
  ChristoffelField gamma;
  gamma.chart_id = "matrix-entries";
  gamma.dim = n * n;
  gamma.symmetric = false;
  gamma.gamma = [n](const Vec& x, const Vec& a, const Vec& b) -> Vec {
    Mat xm = unflatten_matrix(x, n);
    Eigen::FullPivLU<Mat> lu(xm);
    if (!lu.isInvertible())
      throw std::runtime_error("direct_christoffel: point is a singular matrix");
    Mat result = unflatten_matrix(a, n) * lu.inverse() * unflatten_matrix(b, n);
    return flatten_matrix(result);
  };
  return gamma;
}

SpectralState SpectralState::zero(int n) {
  SpectralState s;
  s.modes = n;
  s.coeffs = Vec::Zero(2 * n + 1);
  return s;
}

double ak_multiplier(int k, int m) {
  if (m < 0) throw std::invalid_argument("ak_multiplier: mode must be >= 0");
  double sum = 1.0;
  double power = 1.0;
  const double m2 = static_cast<double>(m) * m;
  for (int j = 1; j <= k; ++j) {
    power *= m2;
    sum += power;
  }
  return sum;
}

namespace {
SpectralState scale_modes(const SpectralState& u,
                          const std::function<double(int)>& factor) {
  SpectralState out = u;
  out.coeffs[0] *= factor(0);
  for (int m = 1; m <= u.modes; ++m) {
    double f = factor(m);
    out.coeffs[2 * m - 1] *= f;
    out.coeffs[2 * m] *= f;
  }
  return out;
}
}  // namespace

SpectralState ak_apply(const SpectralState& u, int k) {
  return scale_modes(u, [k](int m) { return ak_multiplier(k, m); });
}

SpectralState ak_inverse(const SpectralState& u, int k) {
  return scale_modes(u, [k](int m) { return 1.0 / ak_multiplier(k, m); });
}

SpectralState spectral_derivative(const SpectralState& u) {
  SpectralState out = SpectralState::zero(u.modes);
  for (int m = 1; m <= u.modes; ++m) {
    out.coeffs[2 * m - 1] = m * u.coeffs[2 * m];       // a'_m = m b_m
    out.coeffs[2 * m] = -m * u.coeffs[2 * m - 1];      // b'_m = -m a_m
  }
  return out;
}

SpectralState resize_modes(const SpectralState& u, int new_modes) {
  SpectralState out = SpectralState::zero(new_modes);
  int keep = std::min(u.modes, new_modes);
  out.coeffs.head(2 * keep + 1) = u.coeffs.head(2 * keep + 1);
  return out;
}

namespace {

/// Evaluates several same-size states on the uniform grid in one sweep,
/// sharing the trig recurrences. Columns of the result index the states.
Mat grid_eval_many(const std::vector<const SpectralState*>& states, int points) {
  const int n = states[0]->modes;
  const int cnt = static_cast<int>(states.size());
  Mat out(points, cnt);
  for (int p = 0; p < points; ++p) {
    const double x = 2.0 * kPi * p / points;
    const double c1 = std::cos(x), s1 = std::sin(x);
    double cm = 1.0, sm = 0.0;  // cos(0), sin(0)
    for (int q = 0; q < cnt; ++q) out(p, q) = states[q]->coeffs[0];
    for (int m = 1; m <= n; ++m) {
      const double cn = cm * c1 - sm * s1;
      const double sn = sm * c1 + cm * s1;
      cm = cn;
      sm = sn;
      for (int q = 0; q < cnt; ++q)
        out(p, q) += states[q]->coeffs[2 * m - 1] * cm + states[q]->coeffs[2 * m] * sm;
    }
  }
  return out;
}

}  // namespace

Vec evaluate_on_grid(const SpectralState& u, int points) {
  return grid_eval_many({&u}, points).col(0);
}

SpectralState state_from_samples(const Vec& samples, int n) {
  const int points = static_cast<int>(samples.size());
  if (points <= 2 * n)
    throw std::invalid_argument("state_from_samples: need more than 2n samples");
  SpectralState out = SpectralState::zero(n);
  Vec acc_a = Vec::Zero(n + 1), acc_b = Vec::Zero(n + 1);
  for (int p = 0; p < points; ++p) {
    const double x = 2.0 * kPi * p / points;
    const double c1 = std::cos(x), s1 = std::sin(x);
    double cm = 1.0, sm = 0.0;
    acc_a[0] += samples[p];
    for (int m = 1; m <= n; ++m) {
      const double cn = cm * c1 - sm * s1;
      const double sn = sm * c1 + cm * s1;
      cm = cn;
      sm = sn;
      acc_a[m] += samples[p] * cm;
      acc_b[m] += samples[p] * sm;
    }
  }
  out.coeffs[0] = acc_a[0] / points;
  for (int m = 1; m <= n; ++m) {
    out.coeffs[2 * m - 1] = 2.0 * acc_a[m] / points;
    out.coeffs[2 * m] = 2.0 * acc_b[m] / points;
  }
  return out;
}

SpectralState bk_apply(const SpectralState& u, const SpectralState& v,
                       const ChModel& model) {
  if (u.modes != v.modes || u.modes != model.modes)
    throw std::invalid_argument("bk_apply: mode counts must agree");
  const int n = model.modes;
  const int points = 4 * n + 1;

  SpectralState vx = spectral_derivative(v);
  SpectralState w = ak_apply(u, model.k);                        // A_k u
  SpectralState wx = ak_apply(spectral_derivative(u), model.k);  // A_k u_x

  Mat grids = grid_eval_many({&vx, &w, &v, &wx}, points);
  Vec product = 2.0 * grids.col(0).cwiseProduct(grids.col(1)) +
                grids.col(2).cwiseProduct(grids.col(3));

  SpectralState g = state_from_samples(product, n);
  const int cutoff = (2 * n) / 3;
  for (int m = cutoff + 1; m <= n; ++m) {
    g.coeffs[2 * m - 1] = 0.0;
    g.coeffs[2 * m] = 0.0;
  }
  return ak_inverse(g, model.k);
}

SpectralState ch_rhs(const SpectralState& u, const ChModel& model) {
  return bk_apply(u, u, model);
}

double sobolev_seminorm(const SpectralState& u, int n) {
  if (n < 0) throw std::invalid_argument("sobolev_seminorm: n must be >= 0");
  double sum = 2.0 * kPi * u.coeffs[0] * u.coeffs[0];
  for (int m = 1; m <= u.modes; ++m) {
    double am = u.coeffs[2 * m - 1], bm = u.coeffs[2 * m];
    sum += ak_multiplier(n, m) * kPi * (am * am + bm * bm);
  }
  return std::sqrt(sum);
}

double ch_energy(const SpectralState& u, int k) {
  double sum = 2.0 * kPi * u.coeffs[0] * u.coeffs[0];
  for (int m = 1; m <= u.modes; ++m) {
    double am = u.coeffs[2 * m - 1], bm = u.coeffs[2 * m];
    sum += ak_multiplier(k, m) * kPi * (am * am + bm * bm);
  }
  return sum;
}

std::pair<std::vector<double>, std::vector<SpectralState>> ch_solve(
    const ChModel& model, const SpectralState& u0, double t_end, int steps) {
  auto f = [&model](double, const Vec& coeffs) -> Vec {
    SpectralState u{coeffs, model.modes};
    return ch_rhs(u, model).coeffs;
  };
  Trajectory flat = rk4_first_order(f, 0.0, u0.coeffs, t_end, steps);
  std::vector<SpectralState> states;
  states.reserve(flat.pos.size());
  for (const Vec& c : flat.pos) states.push_back({c, model.modes});
  return {flat.times, std::move(states)};
}

Vec sobolev_weights(int modes, int n) {
  Vec w(2 * modes + 1);
  w[0] = 2.0 * kPi;
  for (int m = 1; m <= modes; ++m) {
    double mult = ak_multiplier(n, m) * kPi;
    w[2 * m - 1] = mult;
    w[2 * m] = mult;
  }
  return w;
}

ChTower ch_tower(int k, const std::vector<std::pair<int, int>>& depths) {
  if (depths.empty()) throw std::invalid_argument("ch_tower: depth list is empty");
  for (size_t i = 1; i < depths.size(); ++i)
    if (depths[i].first >= depths[i - 1].first)
      throw std::invalid_argument("ch_tower: mode counts must be strictly decreasing");

  // Tower levels run lowest resolution first.
  std::vector<Level> levels;
  std::vector<Mat> adjacent;
  std::vector<ChModel> models;
  const int count = static_cast<int>(depths.size());
  for (int i = 0; i < count; ++i) {
    auto [n_modes, sob] = depths[count - 1 - i];
    Level lv;
    lv.index = i;
    lv.dim = 2 * n_modes + 1;
    lv.seminorm_weights = sobolev_weights(n_modes, sob);
    levels.push_back(lv);
    models.push_back(ChModel{k, n_modes, sob});
  }
  for (int i = 0; i + 1 < count; ++i) {
    Mat trunc = Mat::Zero(levels[i].dim, levels[i + 1].dim);
    trunc.topLeftCorner(levels[i].dim, levels[i].dim).setIdentity();
    adjacent.push_back(trunc);
  }

  ChTower out{Tower(std::move(levels), std::move(adjacent)), {}, models};
  for (int i = 0; i < count; ++i) {
    ChModel m = models[i];
    out.bk.at.push_back([m](const Vec& a, const Vec& b) -> Vec {
      return bk_apply({a, m.modes}, {b, m.modes}, m).coeffs;
    });
  }
  return out;
}

}  // namespace fgeo

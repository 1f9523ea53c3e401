#include "fgeo/ode.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace fgeo {

double probe_lipschitz(const SecondOrderRHS& rhs, double t0, double radius,
                       int probes, unsigned long long seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> tdist(t0 - radius, t0 + radius);
  double worst = 0.0;
  for (int p = 0; p < probes; ++p) {
    double t = tdist(rng);
    Vec x1 = random_vec(rng, rhs.dim), y1 = random_vec(rng, rhs.dim);
    Vec x2 = random_vec(rng, rhs.dim), y2 = random_vec(rng, rhs.dim);
    double dz = std::sqrt((x1 - x2).squaredNorm() + (y1 - y2).squaredNorm());
    if (dz == 0.0) continue;
    double dphi = (rhs.phi(t, x1, y1) - rhs.phi(t, x2, y2)).norm();
    worst = std::max(worst, dphi / dz);
  }
  return worst;
}

double existence_interval(const SecondOrderRHS& rhs, double t0, const Vec& x0,
                          const Vec& y0, double tau,
                          const std::vector<std::function<double(const Vec&)>>& seminorms,
                          int grid_points) {
  if (tau <= 0.0) throw std::invalid_argument("existence_interval: tau must be > 0");
  if (seminorms.empty())
    throw std::invalid_argument("existence_interval: seminorm list is empty");
  if (grid_points < 2) grid_points = 2;
  double m = 0.0;
  for (int g = 0; g < grid_points; ++g) {
    double t = t0 - tau + 2.0 * tau * g / (grid_points - 1);
    Vec phi = rhs.phi(t, x0, y0);
    for (const auto& p : seminorms) {
      double py = p(y0);
      double pphi = p(phi);
      m = std::max(m, std::sqrt(py * py + pphi * pphi));
    }
  }
  if (!std::isfinite(m))
    throw std::runtime_error("existence_interval: unbounded data (M is not finite)");
  return std::min(tau, 1.0 / (m + rhs.lipschitz_k));
}

PicardResult picard_solve(const SecondOrderRHS& rhs, double t0, const Vec& x0,
                          const Vec& y0, double a, int iters, double tol,
                          int grid) {
  if (iters < 1) throw std::invalid_argument("picard_solve: iters must be >= 1");
  if (a <= 0.0) throw std::invalid_argument("picard_solve: interval radius must be > 0");
  if (grid < 2) grid = 2;
  if (grid % 2 != 0) ++grid;  // keep t0 on the grid
  const int nodes = grid + 1;
  const int center = grid / 2;
  const double dt = 2.0 * a / grid;
  const int d = rhs.dim;

  Vec z0(2 * d);
  z0 << x0, y0;
  std::vector<Vec> z(nodes, z0), znew(nodes), f(nodes);
  auto phi_tilde = [&](double t, const Vec& zk) -> Vec {
    Vec out(2 * d);
    out.head(d) = zk.tail(d);
    out.tail(d) = rhs.phi(t, zk.head(d), zk.tail(d));
    return out;
  };
  auto time_at = [&](int k) { return t0 - a + k * dt; };

  double residual = 0.0;
  int done = 0;
  for (int it = 0; it < iters; ++it) {
    for (int k = 0; k < nodes; ++k) f[k] = phi_tilde(time_at(k), z[k]);
    znew[center] = z0;
    for (int k = center; k < nodes - 1; ++k)
      znew[k + 1] = znew[k] + 0.5 * dt * (f[k] + f[k + 1]);
    for (int k = center; k > 0; --k)
      znew[k - 1] = znew[k] - 0.5 * dt * (f[k] + f[k - 1]);
    residual = 0.0;
    for (int k = 0; k < nodes; ++k)
      residual = std::max(residual, (znew[k] - z[k]).norm());
    z.swap(znew);
    done = it + 1;
    if (residual < tol) break;
  }
  if (residual >= tol) throw PicardNonConvergence(residual);

  PicardResult result;
  result.residual = residual;
  result.iterations = done;
  result.trajectory.times.reserve(nodes);
  for (int k = 0; k < nodes; ++k) {
    result.trajectory.times.push_back(time_at(k));
    result.trajectory.pos.push_back(z[k].head(d));
    result.trajectory.vel.push_back(z[k].tail(d));
  }
  return result;
}

Trajectory rk4_first_order(const std::function<Vec(double, const Vec&)>& f,
                           double t0, const Vec& u0, double t_end, int steps) {
  if (steps < 1) throw std::invalid_argument("rk4: steps must be >= 1");
  const double dt = (t_end - t0) / steps;
  Trajectory traj;
  traj.times.reserve(steps + 1);
  traj.pos.reserve(steps + 1);
  Vec u = u0;
  traj.times.push_back(t0);
  traj.pos.push_back(u);
  for (int s = 0; s < steps; ++s) {
    double t = t0 + s * dt;
    Vec k1 = f(t, u);
    Vec k2 = f(t + 0.5 * dt, u + 0.5 * dt * k1);
    Vec k3 = f(t + 0.5 * dt, u + 0.5 * dt * k2);
    Vec k4 = f(t + dt, u + dt * k3);
    u += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!u.allFinite()) throw BlowUpError(t);
    traj.times.push_back(t0 + (s + 1) * dt);
    traj.pos.push_back(u);
  }
  return traj;
}

Trajectory rk4_integrate(const SecondOrderRHS& rhs, double t0, const Vec& x0,
                         const Vec& y0, double t_end, int steps) {
  const int d = rhs.dim;
  Vec z0(2 * d);
  z0 << x0, y0;
  auto f = [&rhs, d](double t, const Vec& z) -> Vec {
    Vec out(2 * d);
    out.head(d) = z.tail(d);
    out.tail(d) = rhs.phi(t, z.head(d), z.tail(d));
    return out;
  };
  Trajectory flat = rk4_first_order(f, t0, z0, t_end, steps);
  Trajectory traj;
  traj.times = std::move(flat.times);
  traj.pos.reserve(traj.times.size());
  traj.vel.reserve(traj.times.size());
  for (const Vec& z : flat.pos) {
    traj.pos.push_back(z.head(d));
    traj.vel.push_back(z.tail(d));
  }
  return traj;
}

Trajectory geodesic(const ChristoffelField& gamma, const Vec& x0, const Vec& y0,
                    double t_end, int steps) {
  SecondOrderRHS rhs;
  rhs.dim = gamma.dim;
  rhs.phi = [gamma](double, const Vec& x, const Vec& y) -> Vec {
    return gamma(x, y, y);
  };
  return rk4_integrate(rhs, 0.0, x0, y0, t_end, steps);
}

Curve curve_from_samples(const std::vector<double>& times,
                         const std::vector<Vec>& points) {
  if (times.size() < 2 || times.size() != points.size())
    throw std::invalid_argument("curve_from_samples: need matching times/points, >= 2");
  auto locate = [times](double t) -> size_t {
    auto it = std::upper_bound(times.begin(), times.end(), t);
    size_t k = static_cast<size_t>(std::distance(times.begin(), it));
    if (k == 0) return 0;
    if (k >= times.size()) return times.size() - 2;
    return k - 1;
  };
  Curve c;
  c.pos = [times, points, locate](double t) -> Vec {
    size_t k = locate(t);
    double w = (t - times[k]) / (times[k + 1] - times[k]);
    return (1.0 - w) * points[k] + w * points[k + 1];
  };
  c.vel = [times, points, locate](double t) -> Vec {
    size_t k = locate(t);
    size_t lo = (k == 0) ? 0 : k - 1;
    size_t hi = std::min(k + 1, times.size() - 1);
    if (lo == hi) hi = lo + 1;
    return (points[hi] - points[lo]) / (times[hi] - times[lo]);
  };
  return c;
}

Trajectory parallel_transport(const ChristoffelField& gamma, const Curve& c,
                              const Vec& u0, double t0, double t_end, int steps) {
  auto f = [&gamma, &c](double t, const Vec& w) -> Vec {
    return gamma(c.pos(t), c.vel(t), w);
  };
  return rk4_first_order(f, t0, u0, t_end, steps);
}

namespace {

TowerTrajectory run_tower(
    const Tower& tower,
    const std::function<Trajectory(int, const Vec&)>& integrate_level,
    const std::function<Vec(int)>& init_at) {
  std::vector<std::future<Trajectory>> futures;
  futures.reserve(tower.depth());
  for (int i = 0; i < tower.depth(); ++i)
    futures.push_back(std::async(std::launch::async, integrate_level, i, init_at(i)));
  TowerTrajectory out;
  out.levels.resize(tower.depth());
  for (int i = 0; i < tower.depth(); ++i) {
    out.levels[i] = futures[i].get();
    out.levels[i].level = i;
  }
  const auto& times = out.levels[0].times;
  for (int j = 1; j < tower.depth(); ++j)
    for (int i = 0; i < j; ++i) {
      Mat rho = tower.connecting(j, i);
      for (size_t s = 0; s < times.size(); ++s) {
        double res = (rho * out.levels[j].pos[s] - out.levels[i].pos[s]).norm();
        out.residuals.push_back({times[s], j, i, res});
        out.max_residual = std::max(out.max_residual, res);
      }
    }
  return out;
}

}  // namespace

TowerTrajectory tower_geodesic(const std::vector<ChristoffelField>& family,
                               const Tower& tower, const Vec& x0, const Vec& y0,
                               double t_end, int steps, double compat_tol) {
  if (static_cast<int>(family.size()) != tower.depth())
    throw std::invalid_argument("tower_geodesic: one Christoffel field per level");
  const int top = tower.depth() - 1;
  if (x0.size() != tower.level(top).dim || y0.size() != tower.level(top).dim)
    throw std::invalid_argument("tower_geodesic: initial data must live at the top level");

  // Pointwise compatibility probe of the Gamma family against the tower.
  Rng rng(42);
  double compat = 0.0;
  for (int p = 0; p < 8; ++p)
    for (int j = 1; j < tower.depth(); ++j)
      for (int i = 0; i < j; ++i) {
        Vec x = random_vec(rng, tower.level(j).dim);
        Vec av = random_vec(rng, tower.level(j).dim);
        Vec bv = random_vec(rng, tower.level(j).dim);
        Vec lhs = tower.project(family[j](x, av, bv), j, i);
        Vec rhs = family[i](tower.project(x, j, i), tower.project(av, j, i),
                            tower.project(bv, j, i));
        compat = std::max(compat, (lhs - rhs).norm());
      }

  auto integrate_level = [&family, &tower, t_end, steps](int i, const Vec& init) {
    int d = tower.level(i).dim;
    return geodesic(family[i], init.head(d), init.tail(d), t_end, steps);
  };
  // project the (x0, y0) pair half by half; the stacked vector is not itself
  // a tower element
  auto init_at = [&tower, &x0, &y0, top](int i) -> Vec {
    Vec xi = tower.project(x0, top, i);
    Vec yi = tower.project(y0, top, i);
    Vec init(xi.size() + yi.size());
    init << xi, yi;
    return init;
  };
  TowerTrajectory out = run_tower(tower, integrate_level, init_at);
  out.compatibility_warning = compat > compat_tol;
  return out;
}

TowerTrajectory tower_evolve(
    const std::vector<std::function<Vec(const Vec&)>>& rhs_family,
    const Tower& tower, const Vec& u0, double t_end, int steps) {
  if (static_cast<int>(rhs_family.size()) != tower.depth())
    throw std::invalid_argument("tower_evolve: one RHS per level");
  const int top = tower.depth() - 1;
  if (u0.size() != tower.level(top).dim)
    throw std::invalid_argument("tower_evolve: initial data must live at the top level");
  auto integrate_level = [&rhs_family, t_end, steps](int i, const Vec& init) {
    auto f = [&rhs_family, i](double, const Vec& u) { return rhs_family[i](u); };
    return rk4_first_order(f, 0.0, init, t_end, steps);
  };
  auto init_at = [&tower, &u0, top](int i) { return tower.project(u0, top, i); };
  return run_tower(tower, integrate_level, init_at);
}

}  // namespace fgeo

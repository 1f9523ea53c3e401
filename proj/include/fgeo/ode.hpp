#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "fgeo/structures.hpp"
#include "fgeo/tower.hpp"
#include "fgeo/types.hpp"

namespace fgeo {

/// Right-hand side of x'' = Phi(t, x, x') with a user-declared Lipschitz bound.
struct SecondOrderRHS {
  std::function<Vec(double, const Vec&, const Vec&)> phi;
  double lipschitz_k = 0.0;
  int dim = 0;
};

/// Thrown when an integration produces a non-finite state. Carries the last
/// finite time reached.
struct BlowUpError : std::runtime_error {
  double t_last;
  explicit BlowUpError(double t)
      : std::runtime_error("integration blew up (non-finite state)"), t_last(t) {}
};

struct PicardNonConvergence : std::runtime_error {
  double residual;
  explicit PicardNonConvergence(double r)
      : std::runtime_error("Picard iteration did not converge"), residual(r) {}
};

/// Time-stamped states at one level. `vel` is empty for first-order flows.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> pos;
  std::vector<Vec> vel;
  int level = -1;  // -1 marks a stand-alone ("limit") trajectory
};

/// Spot check of the declared Lipschitz constant on seeded random pairs;
/// returns the largest observed ratio ||dPhi|| / ||dz||.
double probe_lipschitz(const SecondOrderRHS& rhs, double t0, double radius,
                       int probes, unsigned long long seed = 42);

/// a = min(tau, 1 / (M + k)) with
/// M = sup_i sup_t sqrt(p_i(y0)^2 + p_i(Phi(t, x0, y0))^2), t sampled on a
/// uniform grid over [t0 - tau, t0 + tau].
double existence_interval(const SecondOrderRHS& rhs, double t0, const Vec& x0,
                          const Vec& y0, double tau,
                          const std::vector<std::function<double(const Vec&)>>& seminorms,
                          int grid_points = 65);

struct PicardResult {
  Trajectory trajectory;
  double residual = 0.0;
  int iterations = 0;
};

/// Successive approximation on the first-order reduction over [t0-a, t0+a],
/// composite trapezoid on a uniform grid. Throws PicardNonConvergence if the
/// sup distance between iterates stays above tol.
PicardResult picard_solve(const SecondOrderRHS& rhs, double t0, const Vec& x0,
                          const Vec& y0, double a, int iters, double tol,
                          int grid = 128);

/// Classical fixed-step RK4 on the first-order reduction.
Trajectory rk4_integrate(const SecondOrderRHS& rhs, double t0, const Vec& x0,
                         const Vec& y0, double t_end, int steps);

/// First-order fixed-step RK4 for u' = f(t, u).
Trajectory rk4_first_order(const std::function<Vec(double, const Vec&)>& f,
                           double t0, const Vec& u0, double t_end, int steps);

/// Integrates gamma'' = Gamma(gamma)(gamma', gamma').
Trajectory geodesic(const ChristoffelField& gamma, const Vec& x0, const Vec& y0,
                    double t_end, int steps);

/// Base curve for parallel transport.
struct Curve {
  std::function<Vec(double)> pos;
  std::function<Vec(double)> vel;
};

/// Piecewise-linear curve through samples; velocities by central differences.
Curve curve_from_samples(const std::vector<double>& times,
                         const std::vector<Vec>& points);

/// Solves w' = Gamma(c(t))(c'(t), w), w(t0) = u0 along the curve.
Trajectory parallel_transport(const ChristoffelField& gamma, const Curve& c,
                              const Vec& u0, double t0, double t_end, int steps);

struct LevelResidual {
  double t;
  int j, i;
  double value;
};

struct TowerTrajectory {
  std::vector<Trajectory> levels;
  std::vector<LevelResidual> residuals;
  double max_residual = 0.0;
  bool compatibility_warning = false;
};

/// Integrates the geodesic equation independently at every level from
/// projected initial data and reports the projection residuals
/// ||rho_{ji}(gamma_j(t)) - gamma_i(t)|| on the shared time grid.
TowerTrajectory tower_geodesic(const std::vector<ChristoffelField>& family,
                               const Tower& tower, const Vec& x0, const Vec& y0,
                               double t_end, int steps, double compat_tol = 1e-8);

/// Same machinery for first-order per-level flows u' = f_i(u) (the spectral
/// evolution model integrates this way).
TowerTrajectory tower_evolve(
    const std::vector<std::function<Vec(const Vec&)>>& rhs_family,
    const Tower& tower, const Vec& u0, double t_end, int steps);

}  // namespace fgeo

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fgeo/models.hpp"
#include "fgeo/ode.hpp"

using namespace fgeo;

namespace {

Vec scalar(double x) {
  Vec v(1);
  v[0] = x;
  return v;
}

std::function<double(const Vec&)> abs_norm() {
  return [](const Vec& x) { return x.norm(); };
}

SecondOrderRHS zero_rhs(int dim, double k) {
  SecondOrderRHS rhs;
  rhs.dim = dim;
  rhs.lipschitz_k = k;
  rhs.phi = [dim](double, const Vec&, const Vec&) { return Vec(Vec::Zero(dim)); };
  return rhs;
}

SecondOrderRHS oscillator_rhs() {
  SecondOrderRHS rhs;
  rhs.dim = 1;
  rhs.lipschitz_k = 1.0;
  rhs.phi = [](double, const Vec& x, const Vec&) { return Vec(-x); };
  return rhs;
}

double sup_error_vs(const Trajectory& traj, std::function<double(double)> exact) {
  double worst = 0.0;
  for (size_t i = 0; i < traj.times.size(); ++i)
    worst = std::max(worst, std::abs(traj.pos[i][0] - exact(traj.times[i])));
  return worst;
}

}  // namespace

TEST_CASE("existence interval with zero data is capped by 1/k") {
  double a = existence_interval(zero_rhs(1, 2.0), 0.0, scalar(0.0), scalar(0.0),
                                1.0, {abs_norm()});
  CHECK(a == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("existence interval for phi = x from (1,0)") {
  SecondOrderRHS rhs;
  rhs.dim = 1;
  rhs.lipschitz_k = 1.0;
  rhs.phi = [](double, const Vec& x, const Vec&) { return x; };
  // M = sqrt(0 + 1) = 1, a = min(2, 1/(1+1)) = 1/2
  double a = existence_interval(rhs, 0.0, scalar(1.0), scalar(0.0), 2.0,
                                {abs_norm()});
  CHECK(a == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("existence interval is capped by tau when data is small") {
  double a = existence_interval(zero_rhs(1, 1.0), 0.0, scalar(0.0), scalar(0.0),
                                0.1, {abs_norm()});
  CHECK(a == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("existence interval shrinks as k or the data grows") {
  double a1 = existence_interval(zero_rhs(1, 1.0), 0.0, scalar(0.0), scalar(0.0),
                                 10.0, {abs_norm()});
  double a2 = existence_interval(zero_rhs(1, 3.0), 0.0, scalar(0.0), scalar(0.0),
                                 10.0, {abs_norm()});
  CHECK(a2 < a1);
  double a3 = existence_interval(zero_rhs(1, 1.0), 0.0, scalar(0.0), scalar(4.0),
                                 10.0, {abs_norm()});
  CHECK(a3 < a1);
}

TEST_CASE("existence interval rejects non-finite data") {
  SecondOrderRHS rhs = zero_rhs(1, 1.0);
  rhs.phi = [](double, const Vec&, const Vec&) {
    return scalar(std::numeric_limits<double>::infinity());
  };
  CHECK_THROWS(existence_interval(rhs, 0.0, scalar(0.0), scalar(0.0), 1.0,
                                  {abs_norm()}));
}

TEST_CASE("lipschitz probe stays at or below the declared bound") {
  double observed = probe_lipschitz(oscillator_rhs(), 0.0, 2.0, 64);
  CHECK(observed <= 1.0 + 1e-9);
}

TEST_CASE("picard solves x''=0 exactly") {
  SecondOrderRHS rhs = zero_rhs(1, 1.0);
  PicardResult r = picard_solve(rhs, 0.0, scalar(0.0), scalar(1.0), 0.5, 5, 1e-12, 64);
  CHECK(sup_error_vs(r.trajectory, [](double t) { return t; }) <= 1e-14);
  CHECK(r.iterations <= 3);
}

TEST_CASE("picard reproduces the cosine on its existence interval") {
  PicardResult r =
      picard_solve(oscillator_rhs(), 0.0, scalar(1.0), scalar(0.0), 0.5, 40, 1e-12, 256);
  CHECK(sup_error_vs(r.trajectory, [](double t) { return std::cos(t); }) <= 1e-6);
}

TEST_CASE("picard keeps the zero solution at zero") {
  PicardResult r = picard_solve(zero_rhs(1, 1.0), 0.0, scalar(0.0), scalar(0.0),
                                0.5, 5, 1e-12, 32);
  for (const Vec& p : r.trajectory.pos) CHECK(p.norm() == 0.0);
}

TEST_CASE("picard reports non-convergence") {
  CHECK_THROWS_AS(
      picard_solve(oscillator_rhs(), 0.0, scalar(1.0), scalar(0.0), 0.5, 1, 1e-14, 64),
      PicardNonConvergence);
}

TEST_CASE("rk4 integrates x''=0 exactly") {
  Trajectory t = rk4_integrate(zero_rhs(1, 1.0), 0.0, scalar(0.0), scalar(1.0), 1.0, 10);
  CHECK(t.pos.back()[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(t.times.back() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("rk4 hits the cosine at pi to 1e-9") {
  Trajectory t = rk4_integrate(oscillator_rhs(), 0.0, scalar(1.0), scalar(0.0),
                               M_PI, 1000);
  CHECK(std::abs(t.pos.back()[0] + 1.0) <= 1e-9);
}

TEST_CASE("rk4 error falls by about sixteen per halving") {
  auto run = [](int steps) {
    Trajectory t = rk4_integrate(oscillator_rhs(), 0.0, scalar(1.0), scalar(0.0),
                                 M_PI, steps);
    return std::abs(t.pos.back()[0] + 1.0);
  };
  double e1 = run(50), e2 = run(100);
  double order = std::log2(e1 / e2);
  CHECK(order >= 3.8);
}

TEST_CASE("rk4 flags blow-up with the last finite time") {
  SecondOrderRHS rhs;
  rhs.dim = 1;
  rhs.lipschitz_k = 1.0;
  // x'' = x^3 from large data explodes quickly
  rhs.phi = [](double, const Vec& x, const Vec&) {
    return scalar(x[0] * x[0] * x[0]);
  };
  CHECK_THROWS_AS(rk4_integrate(rhs, 0.0, scalar(10.0), scalar(10.0), 50.0, 200),
                  BlowUpError);
}

TEST_CASE("picard and rk4 agree on the oscillator") {
  PicardResult p =
      picard_solve(oscillator_rhs(), 0.0, scalar(1.0), scalar(0.0), 0.5, 60, 1e-12, 256);
  Trajectory r = rk4_integrate(oscillator_rhs(), 0.0, scalar(1.0), scalar(0.0), 0.5, 256);
  // compare at the right endpoint, shared by both grids
  CHECK(std::abs(p.trajectory.pos.back()[0] - r.pos.back()[0]) <= 1e-6);
}

TEST_CASE("flat geodesics are straight lines") {
  Vec p(2), v(2);
  p << 1.0, 2.0;
  v << 0.5, -1.0;
  Trajectory t = geodesic(flat_christoffel(2), p, v, 1.0, 100);
  for (size_t i = 0; i < t.times.size(); ++i)
    CHECK((t.pos[i] - (p + t.times[i] * v)).norm() <= 1e-13);
}

TEST_CASE("matrix-group geodesic through a nilpotent direction") {
  ChristoffelField g = direct_christoffel(MatrixGroupModel{2});
  Mat y0(2, 2);
  y0 << 0, 1, 0, 0;
  Trajectory t = geodesic(g, flatten_matrix(Mat::Identity(2, 2)),
                          flatten_matrix(y0), 1.0, 1000);
  Mat expect(2, 2);
  expect << 1, 1, 0, 1;
  CHECK((unflatten_matrix(t.pos.back(), 2) - expect).norm() <= 1e-9);
}

TEST_CASE("zero initial velocity stays at rest") {
  Trajectory t = geodesic(flat_christoffel(3), Vec::Ones(3), Vec::Zero(3), 2.0, 50);
  for (const Vec& p : t.pos) CHECK((p - Vec::Ones(3)).norm() == 0.0);
}

TEST_CASE("flat parallel transport is the identity") {
  Curve c;
  c.pos = [](double t) { return scalar(t); };
  c.vel = [](double) { return scalar(1.0); };
  Trajectory t = parallel_transport(flat_christoffel(1), c, scalar(2.5), 0.0, 1.0, 100);
  for (const Vec& w : t.pos) CHECK(std::abs(w[0] - 2.5) <= 1e-12);
}

TEST_CASE("product-field transport grows exponentially") {
  ChristoffelField g;
  g.dim = 1;
  g.symmetric = true;
  g.gamma = [](const Vec&, const Vec& a, const Vec& b) { return scalar(a[0] * b[0]); };
  Curve c;
  c.pos = [](double t) { return scalar(t); };
  c.vel = [](double) { return scalar(1.0); };
  Trajectory t = parallel_transport(g, c, scalar(1.0), 0.0, 1.0, 1000);
  CHECK(std::abs(t.pos.back()[0] - std::exp(1.0)) <= 1e-8);
}

TEST_CASE("transport of the zero vector is zero") {
  ChristoffelField g;
  g.dim = 1;
  g.symmetric = true;
  g.gamma = [](const Vec&, const Vec& a, const Vec& b) { return scalar(a[0] * b[0]); };
  Curve c;
  c.pos = [](double t) { return scalar(t); };
  c.vel = [](double) { return scalar(1.0); };
  Trajectory t = parallel_transport(g, c, scalar(0.0), 0.0, 1.0, 100);
  for (const Vec& w : t.pos) CHECK(w.norm() == 0.0);
}

TEST_CASE("transport is linear in the initial vector") {
  ChristoffelField g;
  g.dim = 2;
  g.symmetric = false;
  g.gamma = [](const Vec& u, const Vec& a, const Vec& b) {
    Vec out(2);
    out[0] = 0.3 * a[0] * b[1] + 0.1 * u[0] * a[1] * b[0];
    out[1] = -0.2 * a[1] * b[1];
    return out;
  };
  Curve c;
  c.pos = [](double t) {
    Vec p(2);
    p << std::cos(t), std::sin(t);
    return p;
  };
  c.vel = [](double t) {
    Vec v(2);
    v << -std::sin(t), std::cos(t);
    return v;
  };
  Vec u(2), v(2);
  u << 1.0, -0.5;
  v << 0.2, 0.8;
  const double al = 1.3, be = -0.7;
  auto last = [&](const Vec& w0) {
    return parallel_transport(g, c, w0, 0.0, 1.0, 500).pos.back();
  };
  Vec lhs = last(al * u + be * v);
  Vec rhs = al * last(u) + be * last(v);
  CHECK((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
}

TEST_CASE("curve from samples reproduces a line and its velocity") {
  std::vector<double> times{0.0, 0.5, 1.0, 1.5};
  std::vector<Vec> pts;
  for (double t : times) pts.push_back(scalar(2.0 * t + 1.0));
  Curve c = curve_from_samples(times, pts);
  CHECK(std::abs(c.pos(0.75)[0] - 2.5) <= 1e-12);
  CHECK(std::abs(c.vel(0.75)[0] - 2.0) <= 1e-10);
}

namespace {

Tower drop_last_tower_2_3() {
  std::vector<Level> levels(2);
  levels[0] = {0, 2, Vec::Ones(2)};
  levels[1] = {1, 3, Vec::Ones(3)};
  Mat rho = Mat::Zero(2, 3);
  rho(0, 0) = rho(1, 1) = 1.0;
  return Tower(levels, {rho});
}

ChristoffelField coordinatewise_christoffel(int dim) {
  ChristoffelField g;
  g.dim = dim;
  g.symmetric = true;
  g.gamma = [](const Vec&, const Vec& a, const Vec& b) {
    return Vec((0.2 * a.cwiseProduct(b)));
  };
  return g;
}

}  // namespace

TEST_CASE("flat tower geodesics project exactly") {
  Tower t = drop_last_tower_2_3();
  std::vector<ChristoffelField> fam{flat_christoffel(2), flat_christoffel(3)};
  Vec x0(3), y0(3);
  x0 << 1, 2, 3;
  y0 << 0.5, -1, 0.25;
  TowerTrajectory tt = tower_geodesic(fam, t, x0, y0, 1.0, 200);
  CHECK(tt.max_residual <= 1e-12);
  CHECK(!tt.compatibility_warning);
  CHECK(!tt.residuals.empty());
}

TEST_CASE("coordinatewise tower geodesics stay consistent") {
  Tower t = drop_last_tower_2_3();
  std::vector<ChristoffelField> fam{coordinatewise_christoffel(2),
                                    coordinatewise_christoffel(3)};
  Vec x0(3), y0(3);
  x0 << 0.3, -0.2, 0.1;
  y0 << 0.4, 0.1, -0.3;
  TowerTrajectory tt = tower_geodesic(fam, t, x0, y0, 1.0, 400);
  CHECK(tt.max_residual <= 1e-9);
  CHECK(!tt.compatibility_warning);
}

TEST_CASE("incompatible families produce a warning but still run") {
  Tower t = drop_last_tower_2_3();
  ChristoffelField skew;
  skew.dim = 2;
  skew.symmetric = true;
  skew.gamma = [](const Vec&, const Vec& a, const Vec& b) {
    Vec out(2);
    out[0] = a[1] * b[1];
    out[1] = a[0] * b[0];
    return out;
  };
  std::vector<ChristoffelField> fam{skew, coordinatewise_christoffel(3)};
  Vec x0(3), y0(3);
  x0 << 0.3, -0.2, 0.1;
  y0 << 0.4, 0.1, -0.3;
  TowerTrajectory tt = tower_geodesic(fam, t, x0, y0, 0.5, 100);
  CHECK(tt.compatibility_warning);
  CHECK(tt.max_residual > 1e-6);
}

TEST_CASE("tower trajectories share the time grid") {
  Tower t = drop_last_tower_2_3();
  std::vector<ChristoffelField> fam{flat_christoffel(2), flat_christoffel(3)};
  TowerTrajectory tt = tower_geodesic(fam, t, Vec::Ones(3), Vec::Ones(3), 1.0, 64);
  REQUIRE(tt.levels.size() == 2);
  REQUIRE(tt.levels[0].times.size() == tt.levels[1].times.size());
  for (size_t i = 0; i < tt.levels[0].times.size(); ++i)
    CHECK(tt.levels[0].times[i] == tt.levels[1].times[i]);
}

TEST_CASE("geodesics are chart covariant under an analytic transition") {
  // push the flat geodesic through F(x) = x + x^2/2 and compare with
  // integrating under the transformed field from transformed initial data
  ChartTransition t;
  t.forward.domain_dim = t.forward.codomain_dim = 1;
  t.forward.eval = [](const Vec& x) { return scalar(x[0] + 0.5 * x[0] * x[0]); };
  t.forward.d1 = [](const Vec& x, const Vec& v) { return scalar((1.0 + x[0]) * v[0]); };
  t.forward.d2 = [](const Vec&, const Vec& v, const Vec& w) { return scalar(v[0] * w[0]); };
  SmoothMap inv;
  inv.domain_dim = inv.codomain_dim = 1;
  inv.eval = [](const Vec& y) { return scalar(-1.0 + std::sqrt(1.0 + 2.0 * y[0])); };
  t.inverse = inv;

  ChristoffelField psi = transform_christoffel_field(flat_christoffel(1), t);
  const double x0 = 0.2, v0 = 0.4;
  Trajectory base = geodesic(flat_christoffel(1), scalar(x0), scalar(v0), 1.0, 1000);
  Vec z0 = t.forward.eval(scalar(x0));
  Vec w0 = t.forward.d1(scalar(x0), scalar(v0));
  Trajectory pushed = geodesic(psi, z0, w0, 1.0, 1000);
  double worst = 0.0;
  for (size_t i = 0; i < base.times.size(); ++i)
    worst = std::max(worst,
                     std::abs(t.forward.eval(base.pos[i])[0] - pushed.pos[i][0]));
  CHECK(worst <= 1e-6);
}

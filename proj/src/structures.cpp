#include "fgeo/structures.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace fgeo {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();

double df_along(const ScalarField& f, const Vec& u, const Vec& v) {
  return directional_derivative(f.f, u, v)[0];
}
}  // namespace

Vec covariant_derivative(const ChristoffelField& gamma, const VectorField& x,
                         const VectorField& y, const Vec& u) {
  Vec xv = x.principal.eval(u);
  Vec yv = y.principal.eval(u);
  return directional_derivative(y.principal, u, xv) - gamma(u, xv, yv);
}

double hessian_apply(const ChristoffelField& gamma, const ScalarField& f,
                     const VectorField& x, const VectorField& y, const Vec& u) {
  Vec xv = x.principal.eval(u);
  Vec yv = y.principal.eval(u);
  double second = second_derivative(f.f, u, xv, yv)[0];
  return second + df_along(f, u, gamma(u, xv, yv));
}

double hessian_via_connection(const ChristoffelField& gamma, const ScalarField& f,
                              const VectorField& x, const VectorField& y,
                              const Vec& u) {
  // g = Y(f) as a scalar function of the chart point.
  auto g = [&](const Vec& p) { return df_along(f, p, y.principal.eval(p)); };
  Vec xv = x.principal.eval(u);
  // Outer derivative by central difference, one relaxation coarser than the
  // first-derivative step since g itself already carries differencing noise.
  const double h =
      f.f.fd_scale * std::max(1.0, u.norm()) * std::pow(kEps, 0.25);
  double xyf = (g(u + h * xv) - g(u - h * xv)) / (2.0 * h);
  Vec nab = covariant_derivative(gamma, x, y, u);
  return xyf - df_along(f, u, nab);
}

std::pair<Vec, Vec> spray_eval(const ChristoffelField& gamma, const Vec& u,
                               const Vec& v) {
  if (!gamma.symmetric)
    throw std::invalid_argument("spray_eval: Christoffel field must be symmetric");
  return {v, gamma(u, v, v)};
}

ChristoffelField christoffel_from_spray(
    const std::function<Vec(const Vec&, const Vec&)>& quadratic, int dim,
    int probes, unsigned long long seed) {
  Rng rng(seed);
  for (int p = 0; p < probes; ++p) {
    Vec u = random_vec(rng, dim);
    Vec v = random_vec(rng, dim);
    Vec qv = quadratic(u, v);
    double res = (quadratic(u, 2.0 * v) - 4.0 * qv).norm();
    if (res > 1e-6 * (1.0 + qv.norm()))
      throw std::invalid_argument(
          "christoffel_from_spray: fiber part is not homogeneous quadratic");
  }
  ChristoffelField gamma;
  gamma.dim = dim;
  gamma.symmetric = true;
  gamma.gamma = [quadratic](const Vec& u, const Vec& v, const Vec& w) -> Vec {
    return 0.5 * (quadratic(u, v + w) - quadratic(u, v) - quadratic(u, w));
  };
  return gamma;
}

TwoJet dissection_eval(const ChristoffelField& gamma, const Vec& alpha,
                       const Vec& u) {
  if (!gamma.symmetric)
    throw std::invalid_argument("dissection_eval: Christoffel field must be symmetric");
  if (alpha.size() != gamma.dim)
    throw std::invalid_argument("dissection_eval: covector dim mismatch");
  TwoJet jet;
  jet.alpha = alpha;
  jet.form = [gamma, alpha, u](const Vec& v, const Vec& w) {
    return alpha.dot(gamma(u, v, w));
  };
  return jet;
}

ChristoffelField christoffel_from_dissection(
    const std::function<TwoJet(const Vec& alpha, const Vec& u)>& dissection,
    int dim) {
  ChristoffelField gamma;
  gamma.dim = dim;
  gamma.symmetric = true;
  gamma.gamma = [dissection, dim](const Vec& u, const Vec& v, const Vec& w) -> Vec {
    Vec out(dim);
    for (int l = 0; l < dim; ++l)
      out[l] = dissection(Vec::Unit(dim, l), u).form(v, w);
    return out;
  };
  return gamma;
}

namespace {

struct TransitionFrame {
  Mat df;
  Eigen::FullPivLU<Mat> lu;
};

std::shared_ptr<TransitionFrame> frame_at(const SmoothMap& forward, const Vec& u) {
  auto frame = std::make_shared<TransitionFrame>();
  frame->df = jacobian(forward, u);
  if (frame->df.rows() != frame->df.cols())
    throw std::invalid_argument("chart transition must map between equal dims");
  Eigen::JacobiSVD<Mat> svd(frame->df);
  double smin = svd.singularValues().minCoeff();
  double smax = svd.singularValues().maxCoeff();
  if (smin <= 0.0 || smax / smin > 1e12)
    throw std::runtime_error("chart transition derivative is singular at this point");
  frame->lu.compute(frame->df);
  return frame;
}

}  // namespace

BilinearMap transform_christoffel(const ChristoffelField& gamma_phi,
                                  const ChartTransition& t, const Vec& u) {
  auto frame = frame_at(t.forward, u);
  SmoothMap forward = t.forward;
  BilinearMap out;
  out.dim_in = gamma_phi.dim;
  out.dim_out = gamma_phi.dim;
  out.symmetric = gamma_phi.symmetric;
  out.apply = [gamma_phi, forward, frame, u](const Vec& w1, const Vec& w2) -> Vec {
    Vec e1 = frame->lu.solve(w1);
    Vec e2 = frame->lu.solve(w2);
    return frame->df * gamma_phi(u, e1, e2) + second_derivative(forward, u, e1, e2);
  };
  return out;
}

ChristoffelField transform_christoffel_field(const ChristoffelField& gamma_phi,
                                             const ChartTransition& t) {
  if (!t.inverse)
    throw std::invalid_argument(
        "transform_christoffel_field: inverse chart map required");
  SmoothMap forward = t.forward;
  SmoothMap inverse = *t.inverse;
  ChristoffelField gamma_psi;
  gamma_psi.chart_id = gamma_phi.chart_id + "_pushed";
  gamma_psi.dim = gamma_phi.dim;
  gamma_psi.symmetric = gamma_phi.symmetric;
  gamma_psi.gamma = [gamma_phi, forward, inverse](const Vec& x, const Vec& w1,
                                                  const Vec& w2) -> Vec {
    Vec u = inverse.eval(x);
    auto frame = frame_at(forward, u);
    Vec e1 = frame->lu.solve(w1);
    Vec e2 = frame->lu.solve(w2);
    return frame->df * gamma_phi(u, e1, e2) + second_derivative(forward, u, e1, e2);
  };
  return gamma_psi;
}

double check_transformation_law(const ChristoffelField& gamma_phi,
                                const ChristoffelField& gamma_psi,
                                const ChartTransition& t, const Vec& u,
                                int probes, unsigned long long seed) {
  if (probes < 1) throw std::invalid_argument("check_transformation_law: probes >= 1");
  auto frame = frame_at(t.forward, u);
  Vec v = t.forward.eval(u);
  Rng rng(seed);
  double worst = 0.0;
  for (int p = 0; p < probes; ++p) {
    Vec e1 = random_vec(rng, gamma_phi.dim);
    Vec e2 = random_vec(rng, gamma_phi.dim);
    Vec lhs = gamma_psi(v, frame->df * e1, frame->df * e2);
    Vec rhs = frame->df * gamma_phi(u, e1, e2) +
              second_derivative(t.forward, u, e1, e2);
    worst = std::max(worst, (lhs - rhs).norm());
  }
  return worst;
}

TwoJet transform_twojet(const TwoJet& s, const ChartTransition& t, const Vec& u) {
  if (!t.inverse)
    throw std::invalid_argument("transform_twojet: inverse chart map required");
  SmoothMap forward = t.forward;
  SmoothMap inverse = *t.inverse;
  Vec v = forward.eval(u);
  Mat dg = jacobian(inverse, v);
  TwoJet out;
  out.alpha = dg.transpose() * s.alpha;
  Vec alpha_phi = s.alpha;
  auto base = s.form;
  out.form = [base, alpha_phi, dg, forward, u](const Vec& w1, const Vec& w2) {
    Vec g1 = dg * w1;
    Vec g2 = dg * w2;
    return base(g1, g2) + alpha_phi.dot(second_derivative(forward, u, g1, g2));
  };
  return out;
}

}  // namespace fgeo

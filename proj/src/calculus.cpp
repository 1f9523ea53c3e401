#include "fgeo/calculus.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fgeo {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();

double step(const SmoothMap& f, const Vec& x, double exponent) {
  return f.fd_scale * std::max(1.0, x.norm()) * std::pow(kEps, exponent);
}
}  // namespace

SmoothMap linear_map(const Mat& a) {
  SmoothMap f;
  f.domain_dim = static_cast<int>(a.cols());
  f.codomain_dim = static_cast<int>(a.rows());
  f.eval = [a](const Vec& x) -> Vec { return a * x; };
  f.d1 = [a](const Vec&, const Vec& v) -> Vec { return a * v; };
  f.d2 = [a](const Vec&, const Vec&, const Vec&) -> Vec {
    return Vec::Zero(a.rows());
  };
  return f;
}

SmoothMap identity_map(int dim) { return linear_map(Mat::Identity(dim, dim)); }

Vec directional_derivative(const SmoothMap& f, const Vec& x, const Vec& v) {
  if (!f.eval) throw std::invalid_argument("smooth map has no evaluator");
  if (f.d1) return f.d1(x, v);
  const double h = step(f, x, 1.0 / 3.0);
  return (f.eval(x + h * v) - f.eval(x - h * v)) / (2.0 * h);
}

Vec second_derivative(const SmoothMap& f, const Vec& x, const Vec& v, const Vec& w) {
  if (f.d2) return 0.5 * (f.d2(x, v, w) + f.d2(x, w, v));
  if (!f.eval) throw std::invalid_argument("smooth map has no evaluator");
  const double h = step(f, x, 0.25);
  // Sum/difference stencil: D2f(v,w) = [D2f(s,s) - D2f(d,d)] / 4 with
  // s = v + w, d = v - w. Swapping v and w negates d bitwise, so the four
  // evaluation points are identical and the result is exactly symmetric.
  Vec hs = h * (v + w);
  Vec hd = h * (v - w);
  return (f.eval(x + hs) + f.eval(x - hs) - f.eval(x + hd) - f.eval(x - hd)) /
         (4.0 * h * h);
}

Mat jacobian(const SmoothMap& f, const Vec& x) {
  const int n = static_cast<int>(x.size());
  Vec probe = directional_derivative(f, x, Vec::Unit(n, 0));
  Mat j(probe.size(), n);
  j.col(0) = probe;
  for (int c = 1; c < n; ++c)
    j.col(c) = directional_derivative(f, x, Vec::Unit(n, c));
  return j;
}

Vec polarize(const std::function<Vec(const Vec&)>& q, const Vec& v, const Vec& w) {
  return 0.5 * (q(v + w) - q(v) - q(w));
}

}  // namespace fgeo

#pragma once

#include <functional>

#include "fgeo/types.hpp"

namespace fgeo {

/// A function bundled with optional analytic directional derivatives. When a
/// derivative closure is absent the operations below fall back to central
/// finite differences scaled by fd_scale.
struct SmoothMap {
  std::function<Vec(const Vec&)> eval;
  std::function<Vec(const Vec&, const Vec&)> d1;               // DF(x).v
  std::function<Vec(const Vec&, const Vec&, const Vec&)> d2;   // D2F(x)(v,w)
  int domain_dim = 0;
  int codomain_dim = 0;
  double fd_scale = 1.0;
};

SmoothMap linear_map(const Mat& a);
SmoothMap identity_map(int dim);

/// DF(x).v — analytic closure if present, otherwise central difference with
/// h = fd_scale * max(1, |x|) * eps^{1/3}.
Vec directional_derivative(const SmoothMap& f, const Vec& x, const Vec& v);

/// D2F(x)(v,w), symmetrized in (v,w). Finite-difference fallback uses the
/// four-point mixed stencil with h = fd_scale * max(1, |x|) * eps^{1/4}.
Vec second_derivative(const SmoothMap& f, const Vec& x, const Vec& v, const Vec& w);

/// Jacobian matrix assembled column by column from directional derivatives.
Mat jacobian(const SmoothMap& f, const Vec& x);

/// For Q(v) = B(v,v) with B symmetric, recovers B(v,w) as
/// (Q(v+w) - Q(v) - Q(w)) / 2.
Vec polarize(const std::function<Vec(const Vec&)>& q, const Vec& v, const Vec& w);

struct BilinearMap {
  std::function<Vec(const Vec&, const Vec&)> apply;
  int dim_in = 0;
  int dim_out = 0;
  bool symmetric = false;
};

}  // namespace fgeo

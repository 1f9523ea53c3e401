#pragma once

#include <vector>

#include "fgeo/structures.hpp"
#include "fgeo/types.hpp"

namespace fgeo {

// Seeded random polynomial instances (degree <= 2) used by the conversion
// check command and the verification suites.

/// f(u) = c + g.u + u^T H u with analytic derivatives.
inline ScalarField random_polynomial_scalar_field(Rng& rng, int dim) {
  double c = random_vec(rng, 1)[0];
  Vec g = random_vec(rng, dim);
  Mat h0 = random_vec(rng, dim * dim).reshaped(dim, dim);
  Mat h = 0.5 * (h0 + h0.transpose());
  ScalarField f;
  f.f.domain_dim = dim;
  f.f.codomain_dim = 1;
  f.f.eval = [c, g, h](const Vec& u) -> Vec {
    Vec out(1);
    out[0] = c + g.dot(u) + u.dot(h * u);
    return out;
  };
  f.f.d1 = [g, h](const Vec& u, const Vec& v) -> Vec {
    Vec out(1);
    out[0] = g.dot(v) + 2.0 * u.dot(h * v);
    return out;
  };
  f.f.d2 = [h](const Vec&, const Vec& v, const Vec& w) -> Vec {
    Vec out(1);
    out[0] = 2.0 * v.dot(h * w);
    return out;
  };
  return f;
}

/// V(u)_l = v0_l + (A u)_l + u^T Q_l u with analytic derivatives.
inline VectorField random_polynomial_vector_field(Rng& rng, int dim) {
  Vec v0 = random_vec(rng, dim);
  Mat a = 0.5 * random_vec(rng, dim * dim).reshaped(dim, dim);
  std::vector<Mat> q(dim);
  for (int l = 0; l < dim; ++l) {
    Mat q0 = random_vec(rng, dim * dim).reshaped(dim, dim);
    q[l] = 0.15 * (q0 + q0.transpose());
  }
  VectorField x;
  x.principal.domain_dim = dim;
  x.principal.codomain_dim = dim;
  x.principal.eval = [v0, a, q, dim](const Vec& u) -> Vec {
    Vec out = v0 + a * u;
    for (int l = 0; l < dim; ++l) out[l] += u.dot(q[l] * u);
    return out;
  };
  x.principal.d1 = [a, q, dim](const Vec& u, const Vec& v) -> Vec {
    Vec out = a * v;
    for (int l = 0; l < dim; ++l) out[l] += 2.0 * u.dot(q[l] * v);
    return out;
  };
  x.principal.d2 = [q, dim](const Vec&, const Vec& v, const Vec& w) -> Vec {
    Vec out(dim);
    for (int l = 0; l < dim; ++l) out[l] = 2.0 * v.dot(q[l] * w);
    return out;
  };
  return x;
}

/// Gamma(u)(a,b)_l = a^T (G0_l + (d_l . u) G1_l + (e_l . u)(f_l . u) G2_l) b,
/// symmetric in (a, b) when requested.
inline ChristoffelField random_polynomial_christoffel(Rng& rng, int dim,
                                                      bool symmetric = true) {
  struct Entry {
    Mat g0, g1, g2;
    Vec d, e, f;
  };
  std::vector<Entry> entries(dim);
  auto rand_form = [&](double scale) -> Mat {
    Mat m = random_vec(rng, dim * dim).reshaped(dim, dim);
    if (symmetric) {
      Mat sym = 0.5 * (m + m.transpose());
      return scale * sym;
    }
    return scale * m;
  };
  for (int l = 0; l < dim; ++l) {
    entries[l].g0 = rand_form(0.5);
    entries[l].g1 = rand_form(0.3);
    entries[l].g2 = rand_form(0.1);
    entries[l].d = random_vec(rng, dim);
    entries[l].e = random_vec(rng, dim);
    entries[l].f = random_vec(rng, dim);
  }
  ChristoffelField gamma;
  gamma.chart_id = "random-polynomial";
  gamma.dim = dim;
  gamma.symmetric = symmetric;
  gamma.gamma = [entries, dim](const Vec& u, const Vec& a, const Vec& b) -> Vec {
    Vec out(dim);
    for (int l = 0; l < dim; ++l) {
      const Entry& en = entries[l];
      Mat form = en.g0 + en.d.dot(u) * en.g1 + en.e.dot(u) * en.f.dot(u) * en.g2;
      out[l] = a.dot(form * b);
    }
    return out;
  };
  return gamma;
}

}  // namespace fgeo

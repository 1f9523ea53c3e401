#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "fgeo/calculus.hpp"
#include "fgeo/types.hpp"

namespace fgeo {

/// Chart-local assignment u |-> Gamma(u), a bilinear map on the model space.
/// This is the canonical representation; connection, Hessian, spray and
/// dissection views below are all derived from it.
struct ChristoffelField {
  std::string chart_id = "phi";
  int dim = 0;
  bool symmetric = false;
  std::function<Vec(const Vec& u, const Vec& a, const Vec& b)> gamma;

  Vec operator()(const Vec& u, const Vec& a, const Vec& b) const {
    return gamma(u, a, b);
  }
};

struct VectorField {
  SmoothMap principal;  // chart domain -> model space
};

struct ScalarField {
  SmoothMap f;  // chart domain -> R (codomain_dim == 1)
};

/// Chart change F = psi o phi^{-1}; the inverse G = phi o psi^{-1} is only
/// required by the operations that pull data back (dissection transforms,
/// whole-field transforms).
struct ChartTransition {
  SmoothMap forward;
  std::optional<SmoothMap> inverse;
};

/// Local 2-jet representation alpha (+) B.
struct TwoJet {
  Vec alpha;
  std::function<double(const Vec&, const Vec&)> form;
};

/// Koszul local formula: DY(u).X(u) - Gamma(u)(X(u), Y(u)).
Vec covariant_derivative(const ChristoffelField& gamma, const VectorField& x,
                         const VectorField& y, const Vec& u);

/// D2f(u)(X,Y) + Df(u).Gamma(u)(X,Y).
double hessian_apply(const ChristoffelField& gamma, const ScalarField& f,
                     const VectorField& x, const VectorField& y, const Vec& u);

/// The connection route to the same number: X(Y(f))(u) - Df(u).(nabla_X Y)(u),
/// with the outer derivative taken by nested finite differencing.
double hessian_via_connection(const ChristoffelField& gamma, const ScalarField& f,
                              const VectorField& x, const VectorField& y,
                              const Vec& u);

/// Fiber part of the second-order vector field: (v, Gamma(u)(v,v)).
/// Requires the symmetric flag.
std::pair<Vec, Vec> spray_eval(const ChristoffelField& gamma, const Vec& u,
                               const Vec& v);

/// Recovers a symmetric Christoffel field from a spray's quadratic part by
/// polarization. Rejects non-quadratic input via a homogeneity probe.
ChristoffelField christoffel_from_spray(
    const std::function<Vec(const Vec&, const Vec&)>& quadratic, int dim,
    int probes = 8, unsigned long long seed = 42);

/// Dissection value at u for a covector alpha: alpha (+) alpha o Gamma(u).
TwoJet dissection_eval(const ChristoffelField& gamma, const Vec& alpha,
                       const Vec& u);

/// Recovers Gamma from the dissection by letting alpha run over the covector
/// basis: Gamma(u)(v,w)_l = B_{e_l}(v,w).
ChristoffelField christoffel_from_dissection(
    const std::function<TwoJet(const Vec& alpha, const Vec& u)>& dissection,
    int dim);

/// Value of the transformed field at F(u): solves e_k = DF(u)^{-1} w_k and
/// returns DF(u).Gamma(u)(e1,e2) + D2F(u)(e1,e2). Throws on near-singular DF.
BilinearMap transform_christoffel(const ChristoffelField& gamma_phi,
                                  const ChartTransition& t, const Vec& u);

/// Whole-field version: Gamma_psi as a ChristoffelField on the psi chart.
/// Needs the inverse chart to locate u = G(x).
ChristoffelField transform_christoffel_field(const ChristoffelField& gamma_phi,
                                             const ChartTransition& t);

/// Max residual of the transformation law over seeded probe directions:
/// ||Gamma_psi(F(u))(DF e1, DF e2) - DF.Gamma_phi(u)(e1,e2) - D2F(u)(e1,e2)||.
double check_transformation_law(const ChristoffelField& gamma_phi,
                                const ChristoffelField& gamma_psi,
                                const ChartTransition& t, const Vec& u,
                                int probes, unsigned long long seed = 42);

/// 2-jet chart change: alpha_psi = alpha_phi o DG(v),
/// B_psi = B_phi o (DG x DG) + alpha_phi o DG o D2F(u) o (DG x DG).
TwoJet transform_twojet(const TwoJet& s, const ChartTransition& t, const Vec& u);

}  // namespace fgeo

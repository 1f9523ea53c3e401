#pragma once

#include <utility>
#include <vector>

#include "fgeo/structures.hpp"
#include "fgeo/tower.hpp"
#include "fgeo/types.hpp"

namespace fgeo {

/// Gamma identically zero on R^dim.
ChristoffelField flat_christoffel(int dim);

/// n x n matrix entries as a global chart near the invertibles.
struct MatrixGroupModel {
  int n = 2;
};

/// Gamma(x)(a, b) = a x^{-1} b on flattened (row-major) matrices. Geodesics
/// through (x0, y0) are x0 exp(t x0^{-1} y0). Not symmetric.
ChristoffelField direct_christoffel(const MatrixGroupModel& model);

Vec flatten_matrix(const Mat& m);
Mat unflatten_matrix(const Vec& v, int n);

/// Real Fourier coefficients (a0, a1, b1, ..., aN, bN) of
/// u(x) = a0 + sum_m (a_m cos mx + b_m sin mx).
struct SpectralState {
  Vec coeffs;
  int modes = 0;

  static SpectralState zero(int n);
  double a(int m) const { return m == 0 ? coeffs[0] : coeffs[2 * m - 1]; }
  double b(int m) const { return coeffs[2 * m]; }
  double& a(int m) { return m == 0 ? coeffs[0] : coeffs[2 * m - 1]; }
  double& b(int m) { return coeffs[2 * m]; }
};

struct ChModel {
  int k = 1;         // order of the A_k multiplier
  int modes = 32;    // N
  int sobolev_n = 1; // level exponent for seminorms
};

/// Fourier symbol of A_k at mode m: sum_{j=0}^{k} m^{2j}. Always >= 1.
double ak_multiplier(int k, int m);

SpectralState ak_apply(const SpectralState& u, int k);
SpectralState ak_inverse(const SpectralState& u, int k);

/// Spectral d/dx.
SpectralState spectral_derivative(const SpectralState& u);

/// Truncates (or zero-pads) to a new mode count.
SpectralState resize_modes(const SpectralState& u, int new_modes);

/// Samples u on the uniform grid x_p = 2 pi p / points.
Vec evaluate_on_grid(const SpectralState& u, int points);

/// Least-squares-exact trig transform of samples on the uniform grid back to
/// n modes (requires points > 2n).
SpectralState state_from_samples(const Vec& samples, int n);

/// B_k(u, v) = A_k^{-1}(2 v_x A_k u + v A_k u_x). Products are formed on a
/// collocation grid of 4N+1 points and the result is dealiased by the 2/3
/// rule (modes above floor(2N/3) zeroed).
SpectralState bk_apply(const SpectralState& u, const SpectralState& v,
                       const ChModel& model);

/// u_t = B_k(u, u).
SpectralState ch_rhs(const SpectralState& u, const ChModel& model);

/// Parseval form of ||f||_n: sqrt(2 pi a0^2 + sum_m pi [sum_{i<=n} m^{2i}]
/// (a_m^2 + b_m^2)).
double sobolev_seminorm(const SpectralState& u, int n);

/// A_k-weighted Parseval sum, the conserved quantity of u_t = B_k(u, u).
double ch_energy(const SpectralState& u, int k);

/// RK4 evolution of u_t = B_k(u, u).
std::pair<std::vector<double>, std::vector<SpectralState>> ch_solve(
    const ChModel& model, const SpectralState& u0, double t_end, int steps);

/// Seminorm weight vector for a 2N+1 coefficient state at Sobolev order n.
Vec sobolev_weights(int modes, int n);

struct ChTower {
  Tower tower;
  LevelFamilyBilinear bk;
  std::vector<ChModel> models;
};

/// Tower of mode truncations: `depths` lists (N, sobolev_n) with N strictly
/// decreasing; level order in the tower is lowest resolution first.
ChTower ch_tower(int k, const std::vector<std::pair<int, int>>& depths);

}  // namespace fgeo

// SPDX-License-Identifier: Apache-2.0
//
// The inverse relative permittivity 1/eps_r on the cell (0,2pi)^2 x (0,h):
// profile families, non-trapping condition checks, and per-mode Fourier
// slices of the profile (functions of x3) consumed by the assembly.
#pragma once

#include "qpmax/fourier.hpp"
#include "qpmax/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace qpmax {

struct MaterialProfile {
  std::function<double(const Vec3d&)> inv_eps;
  std::function<Vec3d(const Vec3d&)> grad_inv_eps;
  double h = 1.0;       // cell height
  double collar = 0.0;  // inv_eps == 1 on (h - collar, h)
  double inf_inv_eps = 1.0;
  double sup_inv_eps = 1.0;
  bool laterally_uniform = true;
  std::vector<double> interface_points; // x3 kinks worth aligning mesh nodes to
  std::string family = "uniform";

  double operator()(const Vec3d& x) const { return inv_eps(x); }
};

/// inv_eps == 1 everywhere (zero contrast).
MaterialProfile uniform_profile(double h);

/// C1 tensor-product cutoff used by the bump-profile family: cubic smoothstep
/// ramps, compact support inside (0,2pi)^2, identically 1 on (pi/2,3pi/2)^2.
double default_cutoff(double x1, double x2);
Vec2d default_cutoff_grad(double x1, double x2);

/// Decreasing bump profile: inv_eps = lambda*chi + 1 below h1, a linear ramp
/// from lambda*chi + 1 down to 1 across (h1,h2), and 1 above h2.
/// Requires 0 < h1 < h2 < h. Collar is h - h2.
MaterialProfile bump_profile(double lambda, double h1, double h2, double h);

/// Smooth variant of bump_profile for quadrature-convergence studies:
/// C3 septic-smoothstep cutoff and a C2 quintic-smoothstep vertical ramp.
MaterialProfile smoothed_bump_profile(double lambda, double h1, double h2, double h);

/// Laterally invariant profile from a closure a(x3) with derivative da(x3).
MaterialProfile layered_profile_from(std::function<double(double)> a,
                                     std::function<double(double)> da, double h,
                                     double collar, std::string family = "layered");

/// Uniform dielectric slab eps_r = eps on (0, t), vacuum above; t < h.
MaterialProfile slab_profile(double eps_r, double t, double h);

/// inv_eps ramps linearly from a0 at the plate to 1 at zeta, then 1 up to h.
MaterialProfile graded_linear_profile(double a0, double zeta, double h);

/// High-index slab strictly inside the cell: vacuum below z0 and above z1,
/// eps_r = eps on (z0, z1). inv_eps increases across z1, so the monotonicity
/// condition fails by construction; used as the guided-wave control case.
MaterialProfile trapping_slab_profile(double eps_r, double z0, double z1, double h);

/// Trilinear-interpolated grid profile (periodic in x1, x2). values are
/// row-major with x1 fastest: values[(i3*g2 + i2)*g1 + i1], vertical nodes
/// uniformly spanning [0,h] inclusive. Gradients by one-sided/central
/// differences of the interpolant.
MaterialProfile grid_profile(int g1, int g2, int g3, double h, double collar,
                             std::vector<double> values);

/// Parse the grid-profile text format: a header line "g1 g2 g3 h collar"
/// followed by g1*g2*g3 whitespace-separated samples of inv_eps.
MaterialProfile load_grid_profile(const std::string& path);

struct ConditionReport {
  bool cond_a = false;       // d3 inv_eps <= 0 everywhere (sampled)
  double max_d3 = 0.0;       // worst-case value of d3 inv_eps
  bool cond_b = false;       // d3 inv_eps < -margin in some open ball
  Vec3d ball_center{0, 0, 0};
  double ball_radius = 0.0;
  double margin_b = 1e-8;
  bool cond_c = false;       // exists delta > 1/2 with the smallness bound
  double best_delta = 0.0;
  double lhs_c = 0.0;        // minimized left-hand side of the bound
  double rhs_c = 0.0;        // 2/h^2
  double sup_grad_T = 0.0;   // sup |transverse gradient of inv_eps|
  double sup_d3 = 0.0;       // sup |d3 inv_eps|
  double min_inv_eps = 0.0;  // sampled minimum (>= 1 expected when (a) holds)

  bool all_pass() const { return cond_a && cond_b && cond_c; }
};

struct ConditionCheckOptions {
  int samples_1d = 48;        // sample grid per direction (cell-centered)
  double margin_b = 1e-8;     // strictness margin for the open-ball condition
  double delta_max = 100.0;   // delta searched over a log grid in (1/2, delta_max]
  int delta_count = 200;
};

ConditionReport check_conditions(const MaterialProfile& m,
                                 const ConditionCheckOptions& opt = {});

/// Fourier slices ahat_p(x3) of inv_eps for all difference modes
/// max(|p1|,|p2|) <= 2N, evaluated at the given x3 points.
struct SliceTable {
  int max_mode = 0;          // P = 2N
  std::vector<double> x3;    // evaluation points
  MatXc values;              // x3 points x (2P+1)^2 slice modes
  bool diagonal = false;     // laterally uniform: only p = 0 is nonzero

  int mode_index(int p1, int p2) const {
    const int w = 2 * max_mode + 1;
    if (std::abs(p1) > max_mode || std::abs(p2) > max_mode) return -1;
    return (p1 + max_mode) * w + (p2 + max_mode);
  }
  cplx value(int x3_idx, int p1, int p2) const {
    const int j = mode_index(p1, p2);
    return j < 0 ? cplx(0.0) : values(x3_idx, j);
  }
};

SliceTable fourier_slices(const MaterialProfile& m, const ModeLattice& lattice,
                          const std::vector<double>& x3_points, int resolution = 0);

/// Slices of an arbitrary scalar function of x (same band and layout).
SliceTable slice_function(const std::function<cplx(const Vec3d&)>& f, int max_mode,
                          const std::vector<double>& x3_points, int resolution);

// Smoothstep ramps shared by the profile factories (0 at t<=0, 1 at t>=1).
double smoothstep3(double t);        // cubic, C1
double smoothstep3_d(double t);
double smoothstep5(double t);        // quintic, C2
double smoothstep5_d(double t);
double smoothstep7(double t);        // septic, C3
double smoothstep7_d(double t);

} // namespace qpmax

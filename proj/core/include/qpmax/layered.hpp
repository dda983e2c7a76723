// SPDX-License-Identifier: Apache-2.0
//
// Independent reference solver for laterally invariant materials: the
// excited transverse mode satisfies a 3-component second-order ODE system in
// x3, discretized here with a fine conservative finite-difference scheme
// (deliberately different numerics from the variational solver). A classic
// transfer-matrix routine for piecewise-constant stacks provides a further
// closed-form cross-check.
#pragma once

#include "qpmax/incident.hpp"
#include "qpmax/material.hpp"
#include "qpmax/postprocess.hpp"

namespace qpmax {

struct LayeredProfile {
  std::function<double(double)> a; // inv_eps as a function of x3
  double h = 1.0;
  double collar = 0.0;
  std::string family = "layered";
};

/// Restriction of a laterally uniform MaterialProfile to its x3 dependence.
LayeredProfile layered_from(const MaterialProfile& m);

struct OracleResult {
  ModeLattice lattice;
  MatXc scattered_at_h;  // 3 x modes, nonzero only at the excited mode
  EnergyReport energy;   // total-field fluxes, specular contribution included
  int grid_points = 0;
};

/// Solve the per-mode total-field two-point boundary value problem on a fine
/// uniform grid (second order; >= 1e4 points recommended) and report the
/// scattered Rayleigh coefficient at x3 = h plus the flux table.
OracleResult layered_solve(const LayeredProfile& profile, const PlaneWaveSource& source,
                           int grid_points = 10000, int lattice_order = 1);

enum class Polarization { TE, TM };

struct Layer {
  double eps_r;
  double thickness;
};

/// Reflection coefficient (ratio of upgoing to downgoing amplitude referenced
/// at the plate plane z = 0) of a perfectly conducting backed stack under a
/// propagating plane wave with transverse wavenumber |kappa| < k.
/// TE propagates (psi, psi') of the tangential electric field; TM propagates
/// (psi, a psi') of the tangential magnetic field.
cplx pec_stack_reflection(const std::vector<Layer>& layers, double k, double kappa_norm,
                          Polarization pol);

} // namespace qpmax

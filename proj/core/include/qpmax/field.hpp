// SPDX-License-Identifier: Apache-2.0
//
// Discrete magnetic field: per mode and per component a piecewise-linear
// nodal function of x3 on the vertical mesh. The essential constraint of the
// tangential space (third component vanishing at the plate) is maintained by
// every constructor.
#pragma once

#include "qpmax/fourier.hpp"
#include "qpmax/mesh.hpp"
#include "qpmax/types.hpp"

#include <random>

namespace qpmax {

struct DiscreteField {
  ModeLattice lattice;
  VerticalMesh mesh;
  VecXc coeffs; // indexed ((mode*3)+comp)*(M+1)+node, H3 at node 0 kept zero

  DiscreteField() = default;
  DiscreteField(const ModeLattice& lat, const VerticalMesh& msh);

  int node_count() const { return mesh.node_count(); }
  Eigen::Index idx(int mode, int comp, int node) const {
    return (static_cast<Eigen::Index>(mode) * 3 + comp) * node_count() + node;
  }
  cplx& at(int mode, int comp, int node) { return coeffs(idx(mode, comp, node)); }
  cplx at(int mode, int comp, int node) const { return coeffs(idx(mode, comp, node)); }

  /// Nodal coefficient vector Hhat_n(z) inside element e at local coordinate t.
  Vec3c mode_value(int mode, int element, double t) const;
  /// Elementwise x3-derivative of Hhat_n (constant per element).
  Vec3c mode_deriv(int mode, int element) const;
  /// Trace coefficients at the top boundary.
  TraceCoefficients top_trace() const;
  /// One-sided x3-derivative of the trace at the top boundary.
  TraceCoefficients top_trace_deriv() const;

  void enforce_essential() ;
};

/// Per-mode quasi-periodic curl symbol applied to a coefficient function:
/// (i kappa_n + e3 d/dx3) x Hhat_n given the value and the derivative.
Vec3c mode_curl(const ModeLattice& lat, int mode, const Vec3c& value, const Vec3c& deriv);
/// Per-mode divergence i kappa_n . Hhat_T + dHhat_3/dx3.
cplx mode_div(const ModeLattice& lat, int mode, const Vec3c& value, const Vec3c& deriv);

/// Exact squared L2(cell x (0,h)) norm of the piecewise-linear field.
double l2_norm_sq(const DiscreteField& H);
/// Exact squared norm of the quasi-periodic gradient.
double grad_alpha_norm_sq(const DiscreteField& H);
/// Exact squared L2 norm of the quasi-periodic divergence.
double div_alpha_norm_sq(const DiscreteField& H);

/// Uniformly random nodal coefficients in the unit box, essential constraint applied.
DiscreteField random_field(const ModeLattice& lat, const VerticalMesh& mesh,
                           std::mt19937_64& rng);

/// Sample the (alpha-shifted) field on a transverse grid at height x3.
void synthesize_field_plane(const DiscreteField& H, double x3, std::array<CellGrid, 3>& out);

} // namespace qpmax

// SPDX-License-Identifier: Apache-2.0
//
// Assembly of the magnetic-field sesquilinear form over the tensor basis
// {Fourier mode} x {P1 nodal element on (0,h)} x {component}, with the
// transparent-boundary blocks at the top and the divergence penalty rho.
// Matrix rows are test dofs, columns are trial dofs: A(i,j) = B(phi_j, phi_i).
//
// For laterally uniform materials the mode coupling collapses and the system
// is stored as independent per-mode blocks; otherwise a dense matrix is used.
#pragma once

#include "qpmax/field.hpp"
#include "qpmax/incident.hpp"
#include "qpmax/material.hpp"

#include <optional>

namespace qpmax {

/// Flat dof indexing with the essential constraint (third component at the
/// plate) eliminated. Mode-major so per-mode blocks are contiguous.
struct DofMap {
  int modes = 0;
  int nodes = 0; // M+1

  int block_size() const { return 3 * nodes - 1; }
  int total() const { return modes * block_size(); }
  /// -1 for the constrained dof (comp 2, node 0).
  int index(int mode, int comp, int node) const {
    if (comp == 2 && node == 0) return -1;
    const int local = comp < 2 ? comp * nodes + node : 2 * nodes + (node - 1);
    return mode * block_size() + local;
  }
  int local_index(int comp, int node) const {
    if (comp == 2 && node == 0) return -1;
    return comp < 2 ? comp * nodes + node : 2 * nodes + (node - 1);
  }
};

struct DiscreteSystem {
  ModeLattice lattice;
  VerticalMesh mesh;
  cplx rho{1.0, -1.0};
  DofMap dofs;
  bool block_diagonal = false;
  MatXc dense;                // used when !block_diagonal
  std::vector<MatXc> blocks;  // used when block_diagonal, one per mode
  VecXc rhs;

  int dim() const { return dofs.total(); }
  VecXc apply(const VecXc& x) const;
  MatXc to_dense() const;
};

struct RhoRule {
  enum class Kind { Default, Explicit } kind = Kind::Default;
  cplx value{0.0, 0.0};

  /// Default ties Re(rho) to inf inv_eps and mirrors it into -Im(rho).
  cplx resolve(const MaterialProfile& m) const {
    if (kind == Kind::Explicit) return value;
    return cplx(m.inf_inv_eps, -m.inf_inv_eps);
  }
};

/// Assemble the system matrix (rhs left zero). Requires Re(rho) > 0 and
/// Im(rho) < 0, and a mesh node on the collar boundary h - eta.
DiscreteSystem assemble_system(const MaterialProfile& m, const ModeLattice& lattice,
                               const VerticalMesh& mesh, cplx rho);

/// Right-hand side driven by the incident field G = curl_alpha H^{ir}_alpha:
/// entries (1 - inv_eps) G paired against the test-function curls. The
/// source's quasi-momentum must match the lattice's.
VecXc assemble_rhs(const PlaneWaveSource& source, const MaterialProfile& m,
                   const ModeLattice& lattice, const VerticalMesh& mesh);

/// Quadrature evaluation of the form on two discrete fields, independent of
/// the assembled matrix (grid synthesis + pointwise material samples).
cplx evaluate_B(const DiscreteField& H, const DiscreteField& F, const MaterialProfile& m,
                cplx rho, int resolution = 0);

/// Scatter a solved dof vector into a field (constrained entries zero).
DiscreteField field_from_dofs(const DiscreteSystem& sys, const VecXc& x);
/// Gather a field's free coefficients into a dof vector.
VecXc dofs_from_field(const DiscreteSystem& sys, const DiscreteField& H);

} // namespace qpmax

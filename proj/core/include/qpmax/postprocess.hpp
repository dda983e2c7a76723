// SPDX-License-Identifier: Apache-2.0
//
// Extraction of outgoing-mode data from a solved field: Rayleigh
// coefficients at the top boundary, propagating/evanescent classification,
// energy fluxes, and physical-field sampling for export.
#pragma once

#include "qpmax/field.hpp"
#include "qpmax/incident.hpp"

namespace qpmax {

struct ModeFlags {
  bool propagating = false; // beta real and positive
  bool threshold = false;   // |beta| below the anomaly tolerance
};

inline ModeFlags classify_mode(const cplx& beta) {
  ModeFlags f;
  f.threshold = std::abs(beta) < 1e-8;
  f.propagating = !f.threshold && std::abs(beta.imag()) < 1e-14 && beta.real() > 0.0;
  return f;
}

/// Per-mode trace values at the top node, with mode classification flags.
TraceCoefficients rayleigh_coefficients(const DiscreteField& H);

struct FluxRow {
  Vec2i n;
  cplx beta;
  Vec3c amplitude; // outgoing amplitude referenced at x3 = h
  double flux = 0.0; // Re(beta) |amplitude|^2
  ModeFlags flags;
};

struct EnergyReport {
  std::vector<FluxRow> rows;
  double incident_flux = 0.0; // |beta_inc| |p|^2
  double reflected_flux = 0.0;
  double balance_ratio = 0.0;
};

/// Energy bookkeeping from total outgoing amplitudes (3 x modes, at x3 = h).
EnergyReport energy_from_amplitudes(const ModeLattice& lattice, const MatXc& amplitudes,
                                    const PlaneWaveSource& source);

/// Total-field energy report for a solved scattered field: the specular
/// reflection of the incident wave is added to the scattered coefficient at
/// the matching lattice mode before fluxes are formed.
EnergyReport energy_report(const DiscreteField& H, const PlaneWaveSource& source);

struct FieldGrid {
  int nx = 0, ny = 0, nz = 0;
  double z0 = 0.0, z1 = 0.0;
  Vec2d alpha{0.0, 0.0};
  std::vector<cplx> values; // [comp][iz][iy][ix], x fastest

  size_t index(int comp, int iz, int iy, int ix) const {
    return ((static_cast<size_t>(comp) * nz + iz) * ny + iy) * nx + ix;
  }
};

/// Physical (un-phase-shifted) field e^{i alpha.x} H_alpha sampled on a
/// uniform grid: x1, x2 over [0,2pi) and x3 over [z0,z1] inclusive.
FieldGrid field_export(const DiscreteField& H, int nx, int ny, int nz, double z0 = 0.0,
                       double z1 = -1.0);

} // namespace qpmax

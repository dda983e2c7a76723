// SPDX-License-Identifier: Apache-2.0
#include "qpmax/postprocess.hpp"

#include <stdexcept>

namespace qpmax {

TraceCoefficients rayleigh_coefficients(const DiscreteField& H) { return H.top_trace(); }

EnergyReport energy_from_amplitudes(const ModeLattice& lattice, const MatXc& amplitudes,
                                    const PlaneWaveSource& source) {
  if (amplitudes.rows() != 3 || amplitudes.cols() != lattice.count())
    throw std::invalid_argument("energy_from_amplitudes: amplitude table shape mismatch");

  EnergyReport rep;
  rep.incident_flux = std::abs(source.d.z()) * source.p.squaredNorm();
  for (int m = 0; m < lattice.count(); ++m) {
    FluxRow row;
    row.n = lattice.modes[static_cast<size_t>(m)];
    row.beta = lattice.beta[static_cast<size_t>(m)];
    row.amplitude = amplitudes.col(m);
    row.flags = classify_mode(row.beta);
    row.flux = row.beta.real() * row.amplitude.squaredNorm();
    rep.reflected_flux += row.flux;
    rep.rows.push_back(std::move(row));
  }
  rep.balance_ratio = rep.incident_flux > 0.0 ? rep.reflected_flux / rep.incident_flux : 0.0;
  return rep;
}

EnergyReport energy_report(const DiscreteField& H, const PlaneWaveSource& source) {
  if ((source.alpha - H.lattice.alpha).norm() > 1e-12)
    throw std::invalid_argument("energy_report: source quasi-momentum does not match the field");
  MatXc amps = H.top_trace().values;
  const int specular = H.lattice.index_of(0, 0);
  // The reflected part of the incident wave rides on the zero lattice mode;
  // referenced at x3 = h it contributes ptilde e^{i beta_0 h}.
  const cplx beta0 = H.lattice.beta[static_cast<size_t>(specular)];
  const Vec3c specular_amp =
      mirrored(source.p).cast<cplx>() * std::exp(iu * beta0 * H.mesh.h());
  amps.col(specular) += specular_amp;
  return energy_from_amplitudes(H.lattice, amps, source);
}

FieldGrid field_export(const DiscreteField& H, int nx, int ny, int nz, double z0, double z1) {
  if (nx < 1 || ny < 1 || nz < 2)
    throw std::invalid_argument("field_export: need nx, ny >= 1 and nz >= 2");
  const double h = H.mesh.h();
  if (z1 < 0.0) z1 = h;
  if (z0 < 0.0 || z1 > h || !(z0 < z1))
    throw std::invalid_argument("field_export: sampling range outside [0, h]");

  FieldGrid grid;
  grid.nx = nx;
  grid.ny = ny;
  grid.nz = nz;
  grid.z0 = z0;
  grid.z1 = z1;
  grid.alpha = H.lattice.alpha;
  grid.values.resize(static_cast<size_t>(3) * nx * ny * nz);

  const ModeLattice& lat = H.lattice;
  std::vector<Vec3c> mode_vals(static_cast<size_t>(lat.count()));
  for (int iz = 0; iz < nz; ++iz) {
    const double z = z0 + (z1 - z0) * iz / (nz - 1);
    int e = 0;
    while (e + 1 < H.mesh.elements() && z > H.mesh.nodes[static_cast<size_t>(e) + 1]) ++e;
    const double t = (z - H.mesh.nodes[static_cast<size_t>(e)]) / H.mesh.dz(e);
    for (int m = 0; m < lat.count(); ++m) mode_vals[static_cast<size_t>(m)] = H.mode_value(m, e, t);

    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix) {
        const double x1 = 2.0 * pi * ix / nx, x2 = 2.0 * pi * iy / ny;
        Vec3c v = Vec3c::Zero();
        for (int m = 0; m < lat.count(); ++m) {
          const Vec2i n = lat.modes[static_cast<size_t>(m)];
          v += mode_vals[static_cast<size_t>(m)] * std::exp(iu * (n.x() * x1 + n.y() * x2));
        }
        // Undo the quasi-periodic shift to export the physical field.
        v *= std::exp(iu * (lat.alpha.x() * x1 + lat.alpha.y() * x2));
        for (int c = 0; c < 3; ++c) grid.values[grid.index(c, iz, iy, ix)] = v(c);
      }
  }
  return grid;
}

} // namespace qpmax

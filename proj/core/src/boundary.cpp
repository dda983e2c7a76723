// SPDX-License-Identifier: Apache-2.0
#include "qpmax/boundary.hpp"

#include <stdexcept>

namespace qpmax {

namespace {
void require_vector(const TraceCoefficients& F, const char* who) {
  if (F.components() != 3)
    throw std::invalid_argument(std::string(who) + ": expected a 3-component trace");
}
} // namespace

TraceCoefficients apply_T_alpha(const TraceCoefficients& f) {
  TraceCoefficients out = f;
  for (int m = 0; m < f.lattice.count(); ++m)
    out.values.col(m) *= iu * f.lattice.beta[static_cast<size_t>(m)];
  return out;
}

TraceCoefficients apply_R_alpha_cross(const TraceCoefficients& F) {
  require_vector(F, "apply_R_alpha_cross");
  TraceCoefficients out = F;
  for (int m = 0; m < F.lattice.count(); ++m) {
    const Vec3c r = F.lattice.dtn[static_cast<size_t>(m)];
    out.values.col(m) = iu * cross3(r, Vec3c(F.values.col(m)));
  }
  return out;
}

TraceCoefficients apply_R_alpha_dot(const TraceCoefficients& F) {
  require_vector(F, "apply_R_alpha_dot");
  TraceCoefficients out;
  out.lattice = F.lattice;
  out.values = MatXc::Zero(1, F.lattice.count());
  for (int m = 0; m < F.lattice.count(); ++m) {
    const Vec3c r = F.lattice.dtn[static_cast<size_t>(m)];
    // Symbol dot product, no conjugation.
    out.values(0, m) = iu * (r.transpose() * Vec3c(F.values.col(m)))(0);
  }
  return out;
}

TraceCoefficients apply_Q(const TraceCoefficients& F) {
  require_vector(F, "apply_Q");
  const double k2 = F.lattice.k * F.lattice.k;
  TraceCoefficients out = F;
  for (int m = 0; m < F.lattice.count(); ++m) {
    const cplx beta = F.lattice.beta[static_cast<size_t>(m)];
    if (std::abs(beta) < 1e-14 * std::max(1.0, F.lattice.k))
      throw std::runtime_error("apply_Q: Rayleigh-Wood anomaly, beta_n = 0 at mode (" +
                               std::to_string(F.lattice.modes[static_cast<size_t>(m)].x()) + "," +
                               std::to_string(F.lattice.modes[static_cast<size_t>(m)].y()) + ")");
    const Vec2d kap = F.lattice.kappa[static_cast<size_t>(m)];
    const Vec3c Fn = F.values.col(m);
    Vec3c tangential(Fn.x(), Fn.y(), cplx(0.0));
    const cplx kap_dot_F = kap.x() * Fn.x() + kap.y() * Fn.y();
    const Vec3c kap3(cplx(kap.x(), 0.0), cplx(kap.y(), 0.0), cplx(0.0));
    out.values.col(m) = -(1.0 / (iu * beta)) * (k2 * tangential - kap_dot_F * kap3);
  }
  return out;
}

Vec3c e3_cross_R_cross_symbol(const ModeLattice& lat, int mode, const Vec3c& Hhat) {
  const Vec3c r = lat.dtn[static_cast<size_t>(mode)];
  const cplx beta = lat.beta[static_cast<size_t>(mode)];
  return iu * (r * Hhat.z() - beta * Hhat);
}

cplx boundary_pairing(const TraceCoefficients& H) {
  require_vector(H, "boundary_pairing");
  cplx acc(0.0);
  for (int m = 0; m < H.lattice.count(); ++m) {
    const Vec3c Hn = H.values.col(m);
    const Vec3c v = e3_cross_R_cross_symbol(H.lattice, m, Hn);
    // Pair plainly against conj(Hn); Eigen's dot would conjugate the left factor.
    acc += v.x() * std::conj(Hn.x()) + v.y() * std::conj(Hn.y()) + v.z() * std::conj(Hn.z());
  }
  return cell_area * acc;
}

} // namespace qpmax

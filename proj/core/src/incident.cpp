// SPDX-License-Identifier: Apache-2.0
#include "qpmax/incident.hpp"

#include <cmath>
#include <stdexcept>

namespace qpmax {

PlaneWaveSource make_source(const Vec3d& d, const Vec3d& p, double omega,
                            double eps0, double mu0) {
  if (!d.allFinite() || !p.allFinite() || !std::isfinite(omega))
    throw std::invalid_argument("make_source: non-finite input");
  if (!(omega > 0.0) || !(eps0 > 0.0) || !(mu0 > 0.0))
    throw std::invalid_argument("make_source: omega, eps0, mu0 must be positive");
  if (!(d.z() < 0.0))
    throw std::invalid_argument("make_source: wave vector must point downward (d3 < 0)");

  const double k2 = omega * omega * eps0 * mu0;
  if (std::abs(d.squaredNorm() - k2) > 1e-10 * k2)
    throw std::invalid_argument("make_source: dispersion relation d.d = omega^2 eps0 mu0 violated");
  const double scale = std::max(1.0, p.norm() * d.norm());
  if (std::abs(p.dot(d)) > 1e-10 * scale)
    throw std::invalid_argument("make_source: polarization must satisfy p.d = 0");

  PlaneWaveSource s;
  s.d = d;
  s.p = p;
  s.q = p.cross(d) / (omega * eps0);
  s.omega = omega;
  s.eps0 = eps0;
  s.mu0 = mu0;
  s.k = omega * std::sqrt(eps0 * mu0);
  s.alpha = Vec2d(d.x(), d.y());
  return s;
}

namespace {
inline cplx phase(const Vec3d& wave, const Vec2d& alpha, const Vec3d& x) {
  const Vec3d shifted(wave.x() - alpha.x(), wave.y() - alpha.y(), wave.z());
  return std::exp(iu * shifted.dot(x));
}
} // namespace

Vec3c eval_Hir_alpha(const CombinedIncidentField& f, const Vec3d& x) {
  return f.source.p.cast<cplx>() * phase(f.source.d, f.source.alpha, x) +
         f.tilde_p.cast<cplx>() * phase(f.tilde_d, f.source.alpha, x);
}

Vec3c eval_curl_alpha_Hir(const CombinedIncidentField& f, const Vec3d& x) {
  // curl commutes with the phase shift: e^{-i a.x} curl(p e^{i d.x}) = i(d x p) e^{i(d-a).x}.
  const Vec3d dp = f.source.d.cross(f.source.p);
  const Vec3d dtpt = f.tilde_d.cross(f.tilde_p);
  return iu * (dp.cast<cplx>() * phase(f.source.d, f.source.alpha, x) +
               dtpt.cast<cplx>() * phase(f.tilde_d, f.source.alpha, x));
}

Vec3c eval_Eir_alpha(const CombinedIncidentField& f, const Vec3d& x) {
  return f.source.q.cast<cplx>() * phase(f.source.d, f.source.alpha, x) -
         f.tilde_q.cast<cplx>() * phase(f.tilde_d, f.source.alpha, x);
}

} // namespace qpmax

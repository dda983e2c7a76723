// SPDX-License-Identifier: Apache-2.0
//
// Incident plane wave, its reflection at the perfectly conducting plate,
// and the quasi-periodic (alpha-shifted) combined field with its analytic
// curl. All evaluations are closed-form complex exponentials.
#pragma once

#include "qpmax/types.hpp"

namespace qpmax {

struct PlaneWaveSource {
  Vec3d d;       // wave vector, d3 < 0, |d|^2 = omega^2 eps0 mu0
  Vec3d p;       // magnetic polarization, p.d = 0
  Vec3d q;       // electric polarization, q = (p x d)/(omega eps0)
  double omega = 0.0;
  double eps0 = 1.0;
  double mu0 = 1.0;
  double k = 0.0;          // omega sqrt(eps0 mu0)
  Vec2d alpha{0.0, 0.0};   // (d1, d2)
};

/// Validating constructor. Rejects (rather than repairs) an upward-pointing
/// d, a dispersion-relation violation, or a non-orthogonal polarization.
PlaneWaveSource make_source(const Vec3d& d, const Vec3d& p, double omega,
                            double eps0 = 1.0, double mu0 = 1.0);

/// a with the third component negated.
inline Vec3d mirrored(const Vec3d& a) { return Vec3d(a.x(), a.y(), -a.z()); }

struct CombinedIncidentField {
  PlaneWaveSource source;
  Vec3d tilde_d, tilde_p, tilde_q;

  explicit CombinedIncidentField(const PlaneWaveSource& s)
      : source(s), tilde_d(mirrored(s.d)), tilde_p(mirrored(s.p)), tilde_q(mirrored(s.q)) {}
};

/// H^{ir}_alpha(x) = p e^{i(d-alpha).x} + ptilde e^{i(dtilde-alpha).x};
/// 2pi-periodic in x1, x2, with vanishing third component on the plate.
Vec3c eval_Hir_alpha(const CombinedIncidentField& f, const Vec3d& x);

/// curl_alpha H^{ir}_alpha, evaluated analytically:
/// i(d x p) e^{i(d-alpha).x} + i(dtilde x ptilde) e^{i(dtilde-alpha).x}.
Vec3c eval_curl_alpha_Hir(const CombinedIncidentField& f, const Vec3d& x);

/// E^{ir}_alpha(x) = q e^{i(d-alpha).x} - qtilde e^{i(dtilde-alpha).x}.
Vec3c eval_Eir_alpha(const CombinedIncidentField& f, const Vec3d& x);

} // namespace qpmax

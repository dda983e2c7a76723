// SPDX-License-Identifier: Apache-2.0
//
// Mode-wise transparent boundary operators on the top trace. All three act
// purely in coefficient space with the exact per-mode symbols
//   T_alpha   : fhat_n -> i beta_n fhat_n
//   R_alpha x : Fhat_n -> i r_n x Fhat_n,   r_n = (n1+a1, n2+a2, beta_n)
//   R_alpha . : Fhat_n -> i r_n . Fhat_n
// plus the tangential-trace operator Q used by curl-space formulations,
// which is undefined at Rayleigh-Wood anomalies (any beta_n = 0).
#pragma once

#include "qpmax/fourier.hpp"

namespace qpmax {

TraceCoefficients apply_T_alpha(const TraceCoefficients& f);
TraceCoefficients apply_R_alpha_cross(const TraceCoefficients& F);
TraceCoefficients apply_R_alpha_dot(const TraceCoefficients& F);

/// Q Fhat_n = -(1/(i beta_n)) { k^2 Fhat_{T,n} - [(n+alpha).Fhat_n](n+alpha) }.
/// Throws at a Rayleigh-Wood anomaly, where the symbol divides by beta_n.
TraceCoefficients apply_Q(const TraceCoefficients& F);

/// <e3 x (R_alpha x H), H> over the top boundary, computed mode-wise
/// (cell-area factor included). For traces with i r_n . Hhat_n = 0 the
/// imaginary part is -sum Re(beta_n)|Hhat_n|^2 and the real part is
/// sum Im(conj(beta_n))|Hhat_{3,n}|^2 + Im(beta_n)|Hhat_{T,n}|^2.
cplx boundary_pairing(const TraceCoefficients& H);

/// Per-mode contribution of e3 x (R_alpha x H) at mode n: i (r_n Hhat_3 - beta_n Hhat).
Vec3c e3_cross_R_cross_symbol(const ModeLattice& lat, int mode, const Vec3c& Hhat);

} // namespace qpmax

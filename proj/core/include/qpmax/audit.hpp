// SPDX-License-Identifier: Apache-2.0
//
// Numerical audits of the integral and algebraic identities behind the
// solver: the pointwise curl decomposition, the two integration-by-parts
// lemmas, the Poincare bound, the Rellich combination for homogeneous
// solutions, the non-trapping solution estimate, and the coercivity
// (Garding) fit for the assembled form.
#pragma once

#include "qpmax/assembly.hpp"
#include "qpmax/manufactured.hpp"

#include <string>

namespace qpmax {

struct AuditResult {
  std::string identity;
  cplx left{0.0};
  cplx right{0.0};
  double residual = 0.0; // |L - R| / max(1, |L|, |R|)
  std::string resolution;
  bool pass(double tol) const { return residual <= tol; }
};

double normalized_residual(const cplx& left, const cplx& right);

struct AuditQuadrature {
  int elements = 32;   // vertical subdivisions of (0,h)
  int resolution = 32; // transverse equispaced points per direction
  int gauss_order = 2; // per-element Gauss rule
};

/// Pointwise decomposition of |curl_alpha F|^2 into transverse/vertical
/// parts; exact for any differentiable field, so the residual is roundoff.
AuditResult audit_curl_decomposition(const TrigField& F, double h, int samples = 8);

/// Five-term identity moving x3 d3H against curl(inv_eps curl H).
AuditResult audit_lemma_weighted_curl(const TrigField& H, const MaterialProfile& m,
                                      const AuditQuadrature& quad = {});

/// Six-term identity for the vertical-shear pairing with the weighted curl.
AuditResult audit_lemma_vertical_shear(const TrigField& H, const MaterialProfile& m,
                                       const AuditQuadrature& quad = {});

/// Vertical Poincare bound 2||u||^2 <= h^2 ||d3 u||^2 for u vanishing at the
/// plate. Analytic overload uses high-order quadrature; the nodal overload
/// integrates the piecewise-linear field exactly. Ratio 0 when u = 0.
AuditResult audit_poincare(const std::function<double(double)>& u,
                           const std::function<double(double)>& du, double h,
                           int elements = 64);
AuditResult audit_poincare(const std::vector<cplx>& nodal, const VerticalMesh& mesh);

/// Volumetric-plus-boundary combination that vanishes on homogeneous
/// solutions; reported as |L(H)| / ||H||^2.
AuditResult rellich_residual(const DiscreteField& H, const MaterialProfile& m,
                             int resolution = 0);

struct EstimateReport {
  bool conditions_pass = false;
  double constant = 0.0;    // bound constant from the non-trapping margins
  double delta = 0.0;       // the delta realizing it
  double lhs = 0.0;         // constant * int |d3 H|^2
  double rhs = 0.0;         // int x3 d3(inv_eps) |curl_alpha H|^2
  bool satisfied = false;   // lhs <= rhs (only meaningful for near-solutions)
  double margin = 0.0;      // rhs - lhs
};

/// Both sides of the non-trapping solution estimate. Refuses (throws) when
/// the material fails the non-trapping conditions, since the bound is only
/// claimed under them.
EstimateReport estimate_lhs_bound(const DiscreteField& H, const MaterialProfile& m,
                                  const ConditionReport& report, int resolution = 0);

struct GardingSample {
  double re_b = 0.0;  // Re B(H,H)
  double grad2 = 0.0; // ||grad_alpha H||^2
  double l2 = 0.0;    // ||H||^2
};

struct GardingFit {
  double c1 = 0.0;
  double c2 = 0.0;
  double worst_margin = 0.0; // min over samples of re_b + c2 l2 - c1 grad2
  bool pass = false;         // a positive c1 exists
};

/// Fit constants c1 > 0, c2 >= 0 with Re B >= c1 ||grad||^2 - c2 ||H||^2
/// across the sample set (c2 searched on a log grid).
GardingFit fit_garding(const std::vector<GardingSample>& samples);

/// Convenience: Re B(H,H) via the assembled matrix plus the exact discrete
/// norms, for a batch of random fields.
std::vector<GardingSample> garding_samples(const DiscreteSystem& sys, int count,
                                           std::mt19937_64& rng);

} // namespace qpmax

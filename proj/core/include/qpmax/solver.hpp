// SPDX-License-Identifier: Apache-2.0
//
// Direct solves of the assembled system, smallest-singular-value
// diagnostics, and wave-number sweeps probing uniqueness / guided modes.
#pragma once

#include "qpmax/assembly.hpp"

namespace qpmax {

struct SolveReport {
  DiscreteField field;
  double linear_residual = 0.0; // ||Ax-b|| / ||b|| (0 when b = 0)
  double div_residual = 0.0;    // ||div_alpha H|| / ||grad_alpha H||
  double dtn_residual = 0.0;    // max_n |d3 Hhat_n(h) - i beta_n Hhat_n(h)|, normalized
  std::string method;
  int dim = 0;
};

/// Direct factorization solve. Throws if the factorization breaks down on a
/// numerically singular matrix; a zero right-hand side short-circuits to the
/// zero field.
SolveReport solve(const DiscreteSystem& sys);

/// Smallest singular value: dense SVD at small dimensions, LU-based inverse
/// iteration on A^H A above the threshold. Optionally returns the (right)
/// near-null vector. A singular-to-working-precision matrix reports 0.
double min_singular_value(const DiscreteSystem& sys, VecXc* near_null = nullptr,
                          int svd_threshold = 768);

struct ScanCurve {
  std::vector<double> k;
  std::vector<double> sigma_min;
  std::vector<int> threshold_flag; // within 1e-6 of a Rayleigh-Wood anomaly
};

struct ScanOptions {
  Vec2d alpha{0.0, 0.0};
  RhoRule rho{};
  int threads = 1;
  double threshold_offset = 1e-6;
};

/// Rebuilds lattice and system per wave number and records sigma_min.
/// Sample points within the threshold offset of some |n+alpha| are nudged
/// past the anomaly and flagged.
ScanCurve scan_k(double k_min, double k_max, int count, const MaterialProfile& m, int order,
                 int elements, const ScanOptions& opt = {});

/// Rayleigh-Wood thresholds |n+alpha| of the lattice of the given order.
std::vector<double> rayleigh_wood_thresholds(int order, const Vec2d& alpha);

struct DipResult {
  double k = 0.0;
  double sigma = 0.0;
  DiscreteField near_null;
};

/// Ternary-search refinement of a sigma_min dip in (k_lo, k_hi); hands back
/// the re-normalized near-null vector at the refined wave number.
DipResult refine_dip(const MaterialProfile& m, int order, int elements, double k_lo,
                     double k_hi, const ScanOptions& opt = {}, int iterations = 60);

} // namespace qpmax

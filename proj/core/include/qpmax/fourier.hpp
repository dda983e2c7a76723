// SPDX-License-Identifier: Apache-2.0
//
// Transverse Fourier machinery: the truncated mode lattice with vertical
// wavenumbers beta_n, trace analysis/synthesis between uniform cell grids
// and Fourier coefficients, and the quasi-periodic phase shift.
//
// Conventions (used consistently across the project):
//   * cell (0,2pi)^2; a periodic trace f expands as f = sum_n fhat_n e^{i n.x}
//   * forward coefficients carry the 1/(4pi^2) integral normalization, so on
//     a uniform g1 x g2 grid the forward map is a plain DFT scaled by 1/(g1 g2)
//   * beta_n = sqrt(k^2 - |n+alpha|^2) on the propagating branch and
//     i*sqrt(|n+alpha|^2 - k^2) on the evanescent branch; the threshold
//     |n+alpha| = k belongs to the real branch (beta_n = 0)
#pragma once

#include "qpmax/types.hpp"

#include <vector>

namespace qpmax {

struct ModeLattice {
  int order = 0;            // truncation N; modes are max(|n1|,|n2|) <= N
  Vec2d alpha{0.0, 0.0};    // quasi-momentum
  double k = 0.0;           // wave number
  std::vector<Vec2i> modes; // (2N+1)^2 entries, n1-major from -N to N
  std::vector<Vec2d> kappa; // n + alpha (transverse wave vector per mode)
  std::vector<cplx> beta;   // vertical wavenumbers
  std::vector<Vec3c> dtn;   // DtN symbol r_n = (n1+a1, n2+a2, beta_n)

  int count() const { return static_cast<int>(modes.size()); }
  int index_of(int n1, int n2) const;
  bool has(int n1, int n2) const {
    return std::abs(n1) <= order && std::abs(n2) <= order;
  }
  /// Index of the negated mode -n.
  int negated(int idx) const;
  bool same_discretization(const ModeLattice& o) const;
};

/// beta for a single transverse wave vector (two-branch formula).
cplx beta_of(double k, const Vec2d& kappa);

ModeLattice build_lattice(int order, const Vec2d& alpha, double k);

/// Complex samples on a uniform grid over the cell; x2-major storage,
/// v[i2*n1 + i1] with x1 = 2pi i1/n1, x2 = 2pi i2/n2.
struct CellGrid {
  int n1 = 0, n2 = 0;
  std::vector<cplx> v;

  CellGrid() = default;
  CellGrid(int g1, int g2) : n1(g1), n2(g2), v(static_cast<size_t>(g1) * g2) {}
  cplx& at(int i1, int i2) { return v[static_cast<size_t>(i2) * n1 + i1]; }
  const cplx& at(int i1, int i2) const { return v[static_cast<size_t>(i2) * n1 + i1]; }
  double x1(int i1) const { return 2.0 * pi * i1 / n1; }
  double x2(int i2) const { return 2.0 * pi * i2 / n2; }
};

/// Fourier coefficients of a (scalar or 3-vector) field restricted to a
/// horizontal plane. values is components x modes.
struct TraceCoefficients {
  ModeLattice lattice;
  MatXc values;                    // 1 x m (scalar) or 3 x m (vector)
  double out_of_band_fraction = 0; // grid energy outside the retained band

  int components() const { return static_cast<int>(values.rows()); }
  bool scalar() const { return values.rows() == 1; }
};

/// Default analysis/synthesis grid resolution for a lattice of order N.
int default_grid_resolution(int order);

/// Grid samples -> Fourier coefficients on the lattice (FFT based).
/// Requires resolution >= 2(2N+1) per direction; if strict_bandlimit is set,
/// throws when a nonzero fraction of the grid energy lies outside the band.
TraceCoefficients analyze_trace(const CellGrid& samples, const ModeLattice& lattice,
                                bool strict_bandlimit = false);
TraceCoefficients analyze_trace(const std::array<CellGrid, 3>& samples,
                                const ModeLattice& lattice,
                                bool strict_bandlimit = false);

/// Inverse of analyze_trace on band-limited data.
CellGrid synthesize_trace(const TraceCoefficients& coeffs, int g1, int g2, int component = 0);

enum class PhaseDirection { Forward, Inverse };

/// Pointwise multiplication by e^{-i alpha.x} (Forward) or e^{+i alpha.x}.
CellGrid phase_shift(const CellGrid& samples, const Vec2d& alpha, PhaseDirection dir);

/// Fourier-weighted trace norm ||f||_{H^s}: sum over modes of (1+|n|^2)^s |fhat_n|^2.
double sobolev_trace_norm(const TraceCoefficients& coeffs, double s);

/// In-place 2D DFT over the cell grid; sign -1 is the forward transform
/// (no scaling applied). Thread-safe.
void fft2_inplace(CellGrid& grid, int sign);

} // namespace qpmax

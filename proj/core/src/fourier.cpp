// SPDX-License-Identifier: Apache-2.0
#include "qpmax/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace qpmax {

namespace {
// FFTW's planner is not thread-safe; execution of a created plan is.
std::mutex fftw_planner_mutex;
} // namespace

void fft2_inplace(CellGrid& grid, int sign) {
  if (grid.n1 <= 0 || grid.n2 <= 0)
    throw std::invalid_argument("fft2_inplace: empty grid");
  auto* data = reinterpret_cast<fftw_complex*>(grid.v.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex);
    // Row-major: first dimension is the slow index x2.
    plan = fftw_plan_dft_2d(grid.n2, grid.n1, data, data,
                            sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex);
    fftw_destroy_plan(plan);
  }
}

cplx beta_of(double k, const Vec2d& kappa) {
  const double gap = k * k - kappa.squaredNorm();
  if (gap >= 0.0) return cplx(std::sqrt(gap), 0.0);
  return cplx(0.0, std::sqrt(-gap));
}

int ModeLattice::index_of(int n1, int n2) const {
  if (!has(n1, n2)) return -1;
  const int w = 2 * order + 1;
  return (n1 + order) * w + (n2 + order);
}

int ModeLattice::negated(int idx) const {
  const Vec2i n = modes[static_cast<size_t>(idx)];
  return index_of(-n.x(), -n.y());
}

bool ModeLattice::same_discretization(const ModeLattice& o) const {
  return order == o.order && (alpha - o.alpha).norm() < 1e-14 &&
         std::abs(k - o.k) < 1e-14 * std::max(1.0, k);
}

ModeLattice build_lattice(int order, const Vec2d& alpha, double k) {
  if (order < 0) throw std::invalid_argument("build_lattice: order must be >= 0");
  if (!(k > 0.0) || !std::isfinite(k))
    throw std::invalid_argument("build_lattice: wave number must be positive and finite");
  if (!alpha.allFinite())
    throw std::invalid_argument("build_lattice: alpha must be finite");

  ModeLattice lat;
  lat.order = order;
  lat.alpha = alpha;
  lat.k = k;
  const int w = 2 * order + 1;
  lat.modes.reserve(static_cast<size_t>(w) * w);
  for (int n1 = -order; n1 <= order; ++n1)
    for (int n2 = -order; n2 <= order; ++n2) {
      Vec2i n(n1, n2);
      Vec2d kap = n.cast<double>() + alpha;
      cplx b = beta_of(k, kap);
      lat.modes.push_back(n);
      lat.kappa.push_back(kap);
      lat.beta.push_back(b);
      lat.dtn.push_back(Vec3c(cplx(kap.x(), 0.0), cplx(kap.y(), 0.0), b));
    }
  return lat;
}

int default_grid_resolution(int order) { return 4 * (2 * order + 1); }

namespace {

int wrap(int n, int g) {
  int r = n % g;
  return r < 0 ? r + g : r;
}

TraceCoefficients analyze_components(const CellGrid* comps, int ncomp,
                                     const ModeLattice& lattice, bool strict) {
  const int need = 2 * (2 * lattice.order + 1);
  for (int c = 0; c < ncomp; ++c)
    if (comps[c].n1 < need || comps[c].n2 < need)
      throw std::invalid_argument("analyze_trace: grid resolution below 2(2N+1), "
                                  "retained modes would alias");

  TraceCoefficients out;
  out.lattice = lattice;
  out.values = MatXc::Zero(ncomp, lattice.count());

  double in_band = 0.0, total = 0.0;
  for (int c = 0; c < ncomp; ++c) {
    CellGrid work = comps[c];
    fft2_inplace(work, -1);
    const double scale = 1.0 / (static_cast<double>(work.n1) * work.n2);
    for (auto& z : work.v) z *= scale;

    for (auto& z : work.v) total += std::norm(z);
    for (int m = 0; m < lattice.count(); ++m) {
      const Vec2i n = lattice.modes[static_cast<size_t>(m)];
      const cplx z = work.at(wrap(n.x(), work.n1), wrap(n.y(), work.n2));
      out.values(c, m) = z;
      in_band += std::norm(z);
    }
  }
  out.out_of_band_fraction = total > 0.0 ? std::max(0.0, (total - in_band) / total) : 0.0;
  if (strict && out.out_of_band_fraction > 1e-10)
    throw std::runtime_error("analyze_trace: input has out-of-band content "
                             "(fraction " + std::to_string(out.out_of_band_fraction) + ")");
  return out;
}

} // namespace

TraceCoefficients analyze_trace(const CellGrid& samples, const ModeLattice& lattice,
                                bool strict_bandlimit) {
  return analyze_components(&samples, 1, lattice, strict_bandlimit);
}

TraceCoefficients analyze_trace(const std::array<CellGrid, 3>& samples,
                                const ModeLattice& lattice, bool strict_bandlimit) {
  return analyze_components(samples.data(), 3, lattice, strict_bandlimit);
}

CellGrid synthesize_trace(const TraceCoefficients& coeffs, int g1, int g2, int component) {
  const ModeLattice& lat = coeffs.lattice;
  const int need = 2 * (2 * lat.order + 1);
  if (g1 < need || g2 < need)
    throw std::invalid_argument("synthesize_trace: grid resolution below 2(2N+1)");
  if (component < 0 || component >= coeffs.components())
    throw std::invalid_argument("synthesize_trace: component out of range");

  CellGrid grid(g1, g2);
  for (int m = 0; m < lat.count(); ++m) {
    const Vec2i n = lat.modes[static_cast<size_t>(m)];
    grid.at(wrap(n.x(), g1), wrap(n.y(), g2)) = coeffs.values(component, m);
  }
  fft2_inplace(grid, +1);
  return grid;
}

CellGrid phase_shift(const CellGrid& samples, const Vec2d& alpha, PhaseDirection dir) {
  CellGrid out = samples;
  const double sign = (dir == PhaseDirection::Forward) ? -1.0 : 1.0;
  for (int i2 = 0; i2 < out.n2; ++i2)
    for (int i1 = 0; i1 < out.n1; ++i1)
      out.at(i1, i2) *= std::exp(iu * (sign * (alpha.x() * out.x1(i1) + alpha.y() * out.x2(i2))));
  return out;
}

double sobolev_trace_norm(const TraceCoefficients& coeffs, double s) {
  double acc = 0.0;
  for (int m = 0; m < coeffs.lattice.count(); ++m) {
    const double n2 = coeffs.lattice.modes[static_cast<size_t>(m)].cast<double>().squaredNorm();
    const double w = std::pow(1.0 + n2, s);
    for (int c = 0; c < coeffs.components(); ++c) acc += w * std::norm(coeffs.values(c, m));
  }
  return std::sqrt(acc);
}

} // namespace qpmax

// SPDX-License-Identifier: Apache-2.0
#include "qpmax/solver.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

namespace qpmax {

namespace {

VecXc direct_solve(const DiscreteSystem& sys, const VecXc& b) {
  if (!sys.block_diagonal) {
    Eigen::PartialPivLU<MatXc> lu(sys.dense);
    VecXc x = lu.solve(b);
    if (!x.allFinite())
      throw std::runtime_error("solve: factorization broke down (matrix singular to working precision)");
    return x;
  }
  VecXc x(sys.dim());
  const int bsz = sys.dofs.block_size();
  for (int m = 0; m < sys.dofs.modes; ++m) {
    Eigen::PartialPivLU<MatXc> lu(sys.blocks[static_cast<size_t>(m)]);
    x.segment(m * bsz, bsz) = lu.solve(b.segment(m * bsz, bsz));
  }
  if (!x.allFinite())
    throw std::runtime_error("solve: factorization broke down (matrix singular to working precision)");
  return x;
}

double dense_sigma_min(const MatXc& A, VecXc* near_null) {
  Eigen::JacobiSVD<MatXc> svd(A, near_null ? Eigen::ComputeThinV : 0);
  const auto& s = svd.singularValues();
  const double sigma = s(s.size() - 1);
  if (near_null) *near_null = svd.matrixV().col(s.size() - 1);
  return sigma;
}

// Inverse power iteration on (A^H A)^{-1} reusing a single LU of A; the
// iterate converges to the right singular vector of the smallest sigma, and
// ||A v|| gives an upper bound that is quadratically accurate in the
// subspace angle. Clustered small singular values slow the iteration down,
// so this is a diagnostic with a few reliable digits, not a full SVD.
double iterative_sigma_min(const MatXc& A, VecXc* near_null) {
  Eigen::PartialPivLU<MatXc> lu(A);
  std::mt19937_64 rng(0x5eed5eedULL);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  VecXc v(A.rows());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(uni(rng), uni(rng));
  v.normalize();

  double sigma = std::numeric_limits<double>::infinity();
  int stall = 0;
  for (int it = 0; it < 300; ++it) {
    VecXc y = lu.adjoint().solve(v);
    VecXc w = lu.solve(y);
    if (!w.allFinite()) {
      if (near_null) *near_null = v;
      return 0.0;
    }
    const double lambda = w.norm();
    if (!(lambda > 0.0)) {
      if (near_null) *near_null = v;
      return 0.0;
    }
    v = w / lambda;
    const double estimate = (A * v).norm();
    stall = std::abs(estimate - sigma) <= 1e-10 * std::max(estimate, 1e-300) ? stall + 1 : 0;
    sigma = estimate;
    if (it > 3 && stall >= 2) break;
  }
  if (near_null) *near_null = v;
  return sigma;
}

double matrix_sigma_min(const MatXc& A, VecXc* near_null, int svd_threshold) {
  return A.rows() <= svd_threshold ? dense_sigma_min(A, near_null)
                                   : iterative_sigma_min(A, near_null);
}

} // namespace

SolveReport solve(const DiscreteSystem& sys) {
  SolveReport rep;
  rep.dim = sys.dim();
  rep.method = sys.block_diagonal ? "block_lu" : "dense_lu";

  const double bnorm = sys.rhs.norm();
  VecXc x;
  if (bnorm == 0.0) {
    x = VecXc::Zero(sys.dim());
    rep.linear_residual = 0.0;
  } else {
    x = direct_solve(sys, sys.rhs);
    rep.linear_residual = (sys.apply(x) - sys.rhs).norm() / bnorm;
  }
  rep.field = field_from_dofs(sys, x);

  const double grad = std::sqrt(grad_alpha_norm_sq(rep.field));
  rep.div_residual = grad > 0.0 ? std::sqrt(div_alpha_norm_sq(rep.field)) / grad : 0.0;

  const TraceCoefficients tr = rep.field.top_trace();
  const TraceCoefficients dtr = rep.field.top_trace_deriv();
  double worst = 0.0, scale = 0.0;
  for (int m = 0; m < sys.lattice.count(); ++m) {
    const cplx ib = iu * sys.lattice.beta[static_cast<size_t>(m)];
    for (int c = 0; c < 3; ++c) {
      worst = std::max(worst, std::abs(dtr.values(c, m) - ib * tr.values(c, m)));
      scale = std::max(scale, std::abs(tr.values(c, m)));
    }
  }
  rep.dtn_residual = worst / std::max(1.0, scale);
  return rep;
}

double min_singular_value(const DiscreteSystem& sys, VecXc* near_null, int svd_threshold) {
  if (!sys.block_diagonal) return matrix_sigma_min(sys.dense, near_null, svd_threshold);

  double best = std::numeric_limits<double>::infinity();
  int best_mode = 0;
  VecXc best_vec;
  const int bsz = sys.dofs.block_size();
  for (int m = 0; m < sys.dofs.modes; ++m) {
    VecXc v;
    const double s = matrix_sigma_min(sys.blocks[static_cast<size_t>(m)],
                                      near_null ? &v : nullptr, svd_threshold);
    if (s < best) {
      best = s;
      best_mode = m;
      if (near_null) best_vec = v;
    }
  }
  if (near_null) {
    *near_null = VecXc::Zero(sys.dim());
    near_null->segment(best_mode * bsz, bsz) = best_vec;
  }
  return best;
}

std::vector<double> rayleigh_wood_thresholds(int order, const Vec2d& alpha) {
  std::vector<double> ts;
  for (int n1 = -order; n1 <= order; ++n1)
    for (int n2 = -order; n2 <= order; ++n2)
      ts.push_back((Vec2d(n1, n2) + alpha).norm());
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end(),
                       [](double a, double b) { return std::abs(a - b) < 1e-12; }),
           ts.end());
  return ts;
}

ScanCurve scan_k(double k_min, double k_max, int count, const MaterialProfile& m, int order,
                 int elements, const ScanOptions& opt) {
  ScanCurve curve;
  if (count <= 0) return curve;
  if (!(k_min > 0.0)) throw std::invalid_argument("scan_k: k_min must be positive");
  if (count > 1 && !(k_max > k_min))
    throw std::invalid_argument("scan_k: k_max must exceed k_min");

  const auto thresholds = rayleigh_wood_thresholds(order, opt.alpha);
  auto nearest_threshold = [&](double k) {
    double best = std::numeric_limits<double>::infinity();
    for (double t : thresholds) best = std::min(best, std::abs(k - t));
    return best;
  };

  curve.k.resize(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    double k = count == 1 ? k_min : k_min + (k_max - k_min) * i / (count - 1);
    // Nudge samples off exact anomalies; beta branch switches make sigma_min
    //non-smooth there while the form itself stays well-defined.
    for (double t : thresholds)
      if (std::abs(k - t) < opt.threshold_offset) k = t + opt.threshold_offset;
    curve.k[static_cast<size_t>(i)] = k;
  }
  for (size_t i = 1; i < curve.k.size(); ++i)
    if (!(curve.k[i] > curve.k[i - 1]))
      throw std::runtime_error("scan_k: threshold offsets broke strict monotonicity of the k grid");

  curve.sigma_min.assign(static_cast<size_t>(count), 0.0);
  curve.threshold_flag.assign(static_cast<size_t>(count), 0);

  std::vector<double> req = m.interface_points;
  if (m.collar < m.h) req.push_back(m.h - m.collar);
  const VerticalMesh mesh = make_vertical_mesh(elements, m.h, req);
  const cplx rho = opt.rho.resolve(m);

  auto work = [&](int i) {
    const double k = curve.k[static_cast<size_t>(i)];
    const ModeLattice lat = build_lattice(order, opt.alpha, k);
    const DiscreteSystem sys = assemble_system(m, lat, mesh, rho);
    curve.sigma_min[static_cast<size_t>(i)] = min_singular_value(sys);
    curve.threshold_flag[static_cast<size_t>(i)] =
        nearest_threshold(k) <= 1.0000001 * opt.threshold_offset ? 1 : 0;
  };

  const int nthreads = std::max(1, opt.threads);
  if (nthreads == 1) {
    for (int i = 0; i < count; ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < nthreads; ++t)
      pool.emplace_back([&]() {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) work(i);
      });
    for (auto& th : pool) th.join();
  }
  return curve;
}

DipResult refine_dip(const MaterialProfile& m, int order, int elements, double k_lo,
                     double k_hi, const ScanOptions& opt, int iterations) {
  std::vector<double> req = m.interface_points;
  if (m.collar < m.h) req.push_back(m.h - m.collar);
  const VerticalMesh mesh = make_vertical_mesh(elements, m.h, req);
  const cplx rho = opt.rho.resolve(m);

  auto sigma_at = [&](double k, VecXc* vec) {
    const ModeLattice lat = build_lattice(order, opt.alpha, k);
    const DiscreteSystem sys = assemble_system(m, lat, mesh, rho);
    return min_singular_value(sys, vec);
  };

  double lo = k_lo, hi = k_hi;
  for (int it = 0; it < iterations; ++it) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (sigma_at(m1, nullptr) < sigma_at(m2, nullptr))
      hi = m2;
    else
      lo = m1;
  }

  DipResult dip;
  dip.k = 0.5 * (lo + hi);
  VecXc vec;
  dip.sigma = sigma_at(dip.k, &vec);
  const ModeLattice lat = build_lattice(order, opt.alpha, dip.k);
  const DiscreteSystem sys = assemble_system(m, lat, mesh, rho);
  vec.normalize();
  dip.near_null = field_from_dofs(sys, vec);
  return dip;
}

} // namespace qpmax

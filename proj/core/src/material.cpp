// SPDX-License-Identifier: Apache-2.0
#include "qpmax/material.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <stdexcept>

namespace qpmax {

double smoothstep3(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * (3.0 - 2.0 * t);
}
double smoothstep3_d(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 6.0 * t * (1.0 - t);
}
double smoothstep5(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}
double smoothstep5_d(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double u = t * (1.0 - t);
  return 30.0 * u * u;
}
double smoothstep7(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * t * t * (35.0 + t * (-84.0 + t * (70.0 - 20.0 * t)));
}
double smoothstep7_d(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double u = t * (1.0 - t);
  return 140.0 * u * u * u;
}

namespace {

// Ramp profile on (0,2pi): 0 outside (m0, 2pi-m0), 1 on (pi/2, 3pi/2).
constexpr double ramp_margin = pi / 8.0;

template <double S(double), double Sd(double)>
double ramp_value(double x) {
  if (x < pi) return S((x - ramp_margin) / (pi / 2.0 - ramp_margin));
  return S((2.0 * pi - ramp_margin - x) / (pi / 2.0 - ramp_margin));
}
template <double S(double), double Sd(double)>
double ramp_deriv(double x) {
  const double w = pi / 2.0 - ramp_margin;
  if (x < pi) return Sd((x - ramp_margin) / w) / w;
  return -Sd((2.0 * pi - ramp_margin - x) / w) / w;
}

double wrap_cell(double x) {
  x = std::fmod(x, 2.0 * pi);
  return x < 0.0 ? x + 2.0 * pi : x;
}

} // namespace

double default_cutoff(double x1, double x2) {
  return ramp_value<smoothstep3, smoothstep3_d>(wrap_cell(x1)) *
         ramp_value<smoothstep3, smoothstep3_d>(wrap_cell(x2));
}

Vec2d default_cutoff_grad(double x1, double x2) {
  x1 = wrap_cell(x1);
  x2 = wrap_cell(x2);
  const double r1 = ramp_value<smoothstep3, smoothstep3_d>(x1);
  const double r2 = ramp_value<smoothstep3, smoothstep3_d>(x2);
  return Vec2d(ramp_deriv<smoothstep3, smoothstep3_d>(x1) * r2,
               r1 * ramp_deriv<smoothstep3, smoothstep3_d>(x2));
}

MaterialProfile uniform_profile(double h) {
  if (!(h > 0.0)) throw std::invalid_argument("uniform_profile: h must be positive");
  MaterialProfile m;
  m.inv_eps = [](const Vec3d&) { return 1.0; };
  m.grad_inv_eps = [](const Vec3d&) { return Vec3d::Zero().eval(); };
  m.h = h;
  m.collar = h;
  m.inf_inv_eps = m.sup_inv_eps = 1.0;
  m.laterally_uniform = true;
  m.family = "uniform";
  return m;
}

namespace {

template <double S(double), double Sd(double)>
MaterialProfile make_bump(double lambda, double h1, double h2, double h, bool smooth_vertical,
                          const char* family) {
  if (!(0.0 < h1 && h1 < h2 && h2 < h))
    throw std::invalid_argument("bump_profile: need 0 < h1 < h2 < h");
  if (!(lambda > 0.0)) throw std::invalid_argument("bump_profile: lambda must be positive");

  auto vertical = [=](double z) -> double {
    if (z <= h1) return 1.0;
    if (z >= h2) return 0.0;
    const double t = (z - h1) / (h2 - h1);
    return smooth_vertical ? 1.0 - smoothstep5(t) : 1.0 - t;
  };
  auto vertical_d = [=](double z) -> double {
    if (z <= h1 || z >= h2) return 0.0;
    const double t = (z - h1) / (h2 - h1);
    return smooth_vertical ? -smoothstep5_d(t) / (h2 - h1) : -1.0 / (h2 - h1);
  };
  auto chi = [](double x1, double x2) {
    return ramp_value<S, Sd>(wrap_cell(x1)) * ramp_value<S, Sd>(wrap_cell(x2));
  };
  auto chi_grad = [](double x1, double x2) {
    x1 = wrap_cell(x1);
    x2 = wrap_cell(x2);
    const double r1 = ramp_value<S, Sd>(x1), r2 = ramp_value<S, Sd>(x2);
    return Vec2d(ramp_deriv<S, Sd>(x1) * r2, r1 * ramp_deriv<S, Sd>(x2));
  };

  MaterialProfile m;
  m.inv_eps = [=](const Vec3d& x) { return lambda * chi(x.x(), x.y()) * vertical(x.z()) + 1.0; };
  m.grad_inv_eps = [=](const Vec3d& x) {
    const Vec2d g = chi_grad(x.x(), x.y());
    const double v = vertical(x.z());
    return Vec3d(lambda * g.x() * v, lambda * g.y() * v,
                 lambda * chi(x.x(), x.y()) * vertical_d(x.z()));
  };
  m.h = h;
  m.collar = h - h2;
  m.inf_inv_eps = 1.0;
  m.sup_inv_eps = 1.0 + lambda;
  m.laterally_uniform = false;
  m.interface_points = {h1, h2};
  m.family = family;
  return m;
}

} // namespace

MaterialProfile bump_profile(double lambda, double h1, double h2, double h) {
  return make_bump<smoothstep3, smoothstep3_d>(lambda, h1, h2, h, false, "bump");
}

MaterialProfile smoothed_bump_profile(double lambda, double h1, double h2, double h) {
  return make_bump<smoothstep7, smoothstep7_d>(lambda, h1, h2, h, true, "smoothed_bump");
}

MaterialProfile layered_profile_from(std::function<double(double)> a,
                                     std::function<double(double)> da, double h,
                                     double collar, std::string family) {
  if (!(h > 0.0) || !(collar >= 0.0) || collar > h)
    throw std::invalid_argument("layered_profile_from: bad h or collar");
  MaterialProfile m;
  m.inv_eps = [a](const Vec3d& x) { return a(x.z()); };
  m.grad_inv_eps = [da](const Vec3d& x) { return Vec3d(0.0, 0.0, da(x.z())); };
  m.h = h;
  m.collar = collar;
  m.laterally_uniform = true;
  m.family = std::move(family);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int i = 0; i < 2048; ++i) {
    const double v = a((i + 0.5) * h / 2048.0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  m.inf_inv_eps = lo;
  m.sup_inv_eps = hi;
  return m;
}

MaterialProfile slab_profile(double eps_r, double t, double h) {
  if (!(eps_r > 0.0) || !(0.0 < t && t < h))
    throw std::invalid_argument("slab_profile: need eps_r > 0 and 0 < t < h");
  const double a_in = 1.0 / eps_r;
  auto m = layered_profile_from([=](double z) { return z < t ? a_in : 1.0; },
                                [](double) { return 0.0; }, h, h - t, "slab");
  m.inf_inv_eps = std::min(a_in, 1.0);
  m.sup_inv_eps = std::max(a_in, 1.0);
  m.interface_points = {t};
  return m;
}

MaterialProfile graded_linear_profile(double a0, double zeta, double h) {
  if (!(a0 > 0.0) || !(0.0 < zeta && zeta < h))
    throw std::invalid_argument("graded_linear_profile: need a0 > 0 and 0 < zeta < h");
  auto m = layered_profile_from(
      [=](double z) { return z < zeta ? a0 + (1.0 - a0) * z / zeta : 1.0; },
      [=](double z) { return z < zeta ? (1.0 - a0) / zeta : 0.0; }, h, h - zeta,
      "graded_linear");
  m.inf_inv_eps = std::min(a0, 1.0);
  m.sup_inv_eps = std::max(a0, 1.0);
  m.interface_points = {zeta};
  return m;
}

MaterialProfile trapping_slab_profile(double eps_r, double z0, double z1, double h) {
  if (!(eps_r > 1.0) || !(0.0 < z0 && z0 < z1 && z1 < h))
    throw std::invalid_argument("trapping_slab_profile: need eps_r > 1 and 0 < z0 < z1 < h");
  // Thin smoothstep edges keep the gradient honest: inv_eps rises across z1,
  // which is exactly the monotonicity violation this profile exists to provide.
  const double w = 0.05 * (z1 - z0);
  const double a_in = 1.0 / eps_r;
  auto a = [=](double z) {
    if (z < z0 - w || z > z1 + w) return 1.0;
    if (z < z0 + w) return 1.0 + (a_in - 1.0) * smoothstep5((z - z0 + w) / (2.0 * w));
    if (z > z1 - w) return a_in + (1.0 - a_in) * smoothstep5((z - z1 + w) / (2.0 * w));
    return a_in;
  };
  auto da = [=](double z) {
    if (z < z0 - w || z > z1 + w) return 0.0;
    if (z < z0 + w) return (a_in - 1.0) * smoothstep5_d((z - z0 + w) / (2.0 * w)) / (2.0 * w);
    if (z > z1 - w) return (1.0 - a_in) * smoothstep5_d((z - z1 + w) / (2.0 * w)) / (2.0 * w);
    return 0.0;
  };
  auto m = layered_profile_from(a, da, h, h - z1 - w, "trapping_slab");
  m.inf_inv_eps = a_in;
  m.sup_inv_eps = 1.0;
  m.interface_points = {z0 - w, z0 + w, z1 - w, z1 + w};
  return m;
}

MaterialProfile grid_profile(int g1, int g2, int g3, double h, double collar,
                             std::vector<double> values) {
  if (g1 < 2 || g2 < 2 || g3 < 2)
    throw std::invalid_argument("grid_profile: need at least 2 samples per direction");
  if (values.size() != static_cast<size_t>(g1) * g2 * g3)
    throw std::invalid_argument("grid_profile: value count does not match dimensions");
  if (!(h > 0.0)) throw std::invalid_argument("grid_profile: h must be positive");
  for (double v : values)
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("grid_profile: inv_eps samples must be positive and finite");

  auto shared = std::make_shared<std::vector<double>>(std::move(values));
  const double dx1 = 2.0 * pi / g1, dx2 = 2.0 * pi / g2, dz = h / (g3 - 1);

  auto sample = [=](int i1, int i2, int i3) {
    i1 = ((i1 % g1) + g1) % g1;
    i2 = ((i2 % g2) + g2) % g2;
    i3 = std::clamp(i3, 0, g3 - 1);
    return (*shared)[(static_cast<size_t>(i3) * g2 + i2) * g1 + i1];
  };
  // Trilinear interpolation; returns value and the interpolant's gradient
  // (one-sided at the top/bottom faces by construction).
  auto interp = [=](const Vec3d& x, Vec3d* grad) {
    const double f1 = wrap_cell(x.x()) / dx1, f2 = wrap_cell(x.y()) / dx2;
    const double f3 = std::clamp(x.z(), 0.0, h) / dz;
    const int i1 = static_cast<int>(std::floor(f1));
    const int i2 = static_cast<int>(std::floor(f2));
    const int i3 = std::min(static_cast<int>(std::floor(f3)), g3 - 2);
    const double t1 = f1 - i1, t2 = f2 - i2, t3 = f3 - i3;
    double c[2][2][2];
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int cc = 0; cc < 2; ++cc) c[a][b][cc] = sample(i1 + a, i2 + b, i3 + cc);
    auto lerp = [](double u, double v, double t) { return u + (v - u) * t; };
    const double c00 = lerp(c[0][0][0], c[1][0][0], t1), c10 = lerp(c[0][1][0], c[1][1][0], t1);
    const double c01 = lerp(c[0][0][1], c[1][0][1], t1), c11 = lerp(c[0][1][1], c[1][1][1], t1);
    const double v0 = lerp(c00, c10, t2), v1 = lerp(c01, c11, t2);
    if (grad) {
      const double d1_0 = lerp(c[1][0][0] - c[0][0][0], c[1][1][0] - c[0][1][0], t2);
      const double d1_1 = lerp(c[1][0][1] - c[0][0][1], c[1][1][1] - c[0][1][1], t2);
      (*grad)(0) = lerp(d1_0, d1_1, t3) / dx1;
      (*grad)(1) = lerp(c10 - c00, c11 - c01, t3) / dx2;
      (*grad)(2) = (v1 - v0) / dz;
    }
    return lerp(v0, v1, t3);
  };

  MaterialProfile m;
  m.inv_eps = [interp](const Vec3d& x) { return interp(x, nullptr); };
  m.grad_inv_eps = [interp](const Vec3d& x) {
    Vec3d g;
    interp(x, &g);
    return g;
  };
  m.h = h;
  m.collar = std::clamp(collar, 0.0, h);
  m.inf_inv_eps = *std::min_element(shared->begin(), shared->end());
  m.sup_inv_eps = *std::max_element(shared->begin(), shared->end());
  m.family = "grid";

  m.laterally_uniform = true;
  for (int i3 = 0; i3 < g3 && m.laterally_uniform; ++i3) {
    const double v0 = sample(0, 0, i3);
    for (int i2 = 0; i2 < g2 && m.laterally_uniform; ++i2)
      for (int i1 = 0; i1 < g1; ++i1)
        if (sample(i1, i2, i3) != v0) {
          m.laterally_uniform = false;
          break;
        }
  }
  return m;
}

MaterialProfile load_grid_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_grid_profile: cannot open " + path);
  int g1 = 0, g2 = 0, g3 = 0;
  double h = 0.0, collar = 0.0;
  if (!(in >> g1 >> g2 >> g3 >> h >> collar))
    throw std::runtime_error("load_grid_profile: bad header in " + path);
  std::vector<double> values;
  values.reserve(static_cast<size_t>(g1) * g2 * g3);
  double v;
  while (in >> v) values.push_back(v);
  return grid_profile(g1, g2, g3, h, collar, std::move(values));
}

ConditionReport check_conditions(const MaterialProfile& m, const ConditionCheckOptions& opt) {
  ConditionReport rep;
  rep.margin_b = opt.margin_b;
  const int n = std::max(4, opt.samples_1d);

  struct Sample {
    Vec3d x;
    double d3;
  };
  std::vector<Sample> samples;
  samples.reserve(static_cast<size_t>(n) * n * n);

  double max_d3 = -std::numeric_limits<double>::infinity();
  double sup_d3 = 0.0, sup_gt = 0.0;
  double min_a = std::numeric_limits<double>::infinity();
  // Cell-centered sampling avoids landing exactly on profile kinks.
  for (int i3 = 0; i3 < n; ++i3)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i1 = 0; i1 < n; ++i1) {
        const Vec3d x((i1 + 0.5) * 2.0 * pi / n, (i2 + 0.5) * 2.0 * pi / n,
                      (i3 + 0.5) * m.h / n);
        const Vec3d g = m.grad_inv_eps(x);
        max_d3 = std::max(max_d3, g.z());
        sup_d3 = std::max(sup_d3, std::abs(g.z()));
        sup_gt = std::max(sup_gt, std::hypot(g.x(), g.y()));
        min_a = std::min(min_a, m.inv_eps(x));
        samples.push_back({x, g.z()});
      }

  rep.max_d3 = max_d3;
  rep.sup_d3 = sup_d3;
  rep.sup_grad_T = sup_gt;
  rep.min_inv_eps = min_a;
  rep.cond_a = max_d3 <= 1e-12;

  // Open-ball strict-decrease condition: locate the most negative sample and
  // the largest ball around it that stays below -margin on all samples.
  const auto best = std::min_element(samples.begin(), samples.end(),
                                     [](const Sample& a, const Sample& b) { return a.d3 < b.d3; });
  if (best != samples.end() && best->d3 < -opt.margin_b) {
    rep.cond_b = true;
    rep.ball_center = best->x;
    double r = std::min({best->x.z(), m.h - best->x.z()});
    for (const auto& s : samples)
      if (s.d3 >= -opt.margin_b) r = std::min(r, (s.x - best->x).norm());
    rep.ball_radius = r;
  }

  // Smallness condition: lhs(delta) is increasing in delta, searched on a log
  // grid anyway so the minimizing delta is reported alongside the bound.
  rep.rhs_c = 2.0 / (m.h * m.h);
  double best_lhs = std::numeric_limits<double>::infinity(), best_delta = 0.0;
  for (int i = 0; i < opt.delta_count; ++i) {
    const double t = static_cast<double>(i) / (opt.delta_count - 1);
    const double delta = 0.5 * std::pow(2.0 * opt.delta_max, t) * std::pow(1.0 + 1e-6, 1.0 - t);
    const double lhs = 0.5 * delta * sup_gt * sup_gt + std::sqrt(2.0) / m.h * sup_d3;
    if (lhs < best_lhs) {
      best_lhs = lhs;
      best_delta = delta;
    }
  }
  rep.lhs_c = best_lhs;
  rep.best_delta = best_delta;
  rep.cond_c = best_lhs < rep.rhs_c;
  return rep;
}

SliceTable fourier_slices(const MaterialProfile& m, const ModeLattice& lattice,
                          const std::vector<double>& x3_points, int resolution) {
  for (double z : x3_points)
    if (z < 0.0 || z > m.h)
      throw std::invalid_argument("fourier_slices: x3 points must lie in [0,h]");

  const int P = 2 * lattice.order;
  if (m.laterally_uniform) {
    SliceTable table;
    table.max_mode = P;
    table.x3 = x3_points;
    table.values = MatXc::Zero(static_cast<int>(x3_points.size()), (2 * P + 1) * (2 * P + 1));
    const int zero = table.mode_index(0, 0);
    for (size_t i = 0; i < x3_points.size(); ++i)
      table.values(static_cast<int>(i), zero) = m.inv_eps(Vec3d(0.0, 0.0, x3_points[i]));
    table.diagonal = true;
    return table;
  }
  auto f = [&m](const Vec3d& x) { return cplx(m.inv_eps(x), 0.0); };
  const int res = resolution > 0 ? resolution : default_grid_resolution(lattice.order);
  return slice_function(f, P, x3_points, res);
}

SliceTable slice_function(const std::function<cplx(const Vec3d&)>& f, int max_mode,
                          const std::vector<double>& x3_points, int resolution) {
  const int need = 2 * (2 * max_mode + 1);
  if (resolution < need)
    throw std::invalid_argument("slice_function: resolution below 2(2P+1), slices would alias");

  SliceTable table;
  table.max_mode = max_mode;
  table.x3 = x3_points;
  const int w = 2 * max_mode + 1;
  table.values = MatXc::Zero(static_cast<int>(x3_points.size()), w * w);

  CellGrid grid(resolution, resolution);
  for (size_t iz = 0; iz < x3_points.size(); ++iz) {
    for (int i2 = 0; i2 < resolution; ++i2)
      for (int i1 = 0; i1 < resolution; ++i1)
        grid.at(i1, i2) = f(Vec3d(grid.x1(i1), grid.x2(i2), x3_points[iz]));
    fft2_inplace(grid, -1);
    const double scale = 1.0 / (static_cast<double>(resolution) * resolution);
    for (int p1 = -max_mode; p1 <= max_mode; ++p1)
      for (int p2 = -max_mode; p2 <= max_mode; ++p2) {
        const int b1 = ((p1 % resolution) + resolution) % resolution;
        const int b2 = ((p2 % resolution) + resolution) % resolution;
        table.values(static_cast<int>(iz), table.mode_index(p1, p2)) =
            grid.at(b1, b2) * scale;
      }
  }
  return table;
}

} // namespace qpmax

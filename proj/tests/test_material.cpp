// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qpmax/material.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

using namespace qpmax;

TEST_CASE("bump profile: piecewise values") {
  const double lambda = 0.2, h1 = 0.3, h2 = 0.6, h = 1.0;
  const MaterialProfile m = bump_profile(lambda, h1, h2, h);

  // Inside the plateau of the cutoff, below h1: lambda + 1.
  CHECK(m(Vec3d(pi, pi, 0.1)) == doctest::Approx(lambda + 1.0).epsilon(1e-14));
  // Above h2: identically one everywhere.
  CHECK(m(Vec3d(0.3, 5.0, 0.7)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m(Vec3d(pi, pi, 0.95)) == doctest::Approx(1.0).epsilon(1e-15));
  // Ramp midpoint with chi = 1: lambda/2 + 1.
  CHECK(m(Vec3d(pi, pi, 0.5 * (h1 + h2))) == doctest::Approx(0.5 * lambda + 1.0).epsilon(1e-14));
  CHECK(m.collar == doctest::Approx(h - h2));
  CHECK_FALSE(m.laterally_uniform);

  CHECK_THROWS(bump_profile(0.2, 0.6, 0.3, 1.0)); // ordering violated
  CHECK_THROWS(bump_profile(0.2, 0.3, 1.2, 1.0));
}

TEST_CASE("cutoff: plateau, support, gradient consistency") {
  CHECK(default_cutoff(pi, pi) == doctest::Approx(1.0));
  CHECK(default_cutoff(0.55 * pi, 1.3 * pi) == doctest::Approx(1.0));
  CHECK(default_cutoff(0.05, 3.0) == doctest::Approx(0.0));
  CHECK(default_cutoff(3.0, 2.0 * pi - 0.05) == doctest::Approx(0.0));

  // Finite-difference check of the gradient.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(0.2, 2.0 * pi - 0.2);
  for (int t = 0; t < 50; ++t) {
    const double x1 = uni(rng), x2 = uni(rng), s = 1e-6;
    const Vec2d g = default_cutoff_grad(x1, x2);
    const double g1 = (default_cutoff(x1 + s, x2) - default_cutoff(x1 - s, x2)) / (2 * s);
    const double g2 = (default_cutoff(x1, x2 + s) - default_cutoff(x1, x2 - s)) / (2 * s);
    CHECK(std::abs(g.x() - g1) < 1e-8);
    CHECK(std::abs(g.y() - g2) < 1e-8);
  }
}

TEST_CASE("non-trapping conditions: canonical pass and fail") {
  const MaterialProfile good = bump_profile(0.01, 0.3, 0.6, 1.0);
  const ConditionReport rg = check_conditions(good);
  CHECK(rg.cond_a);
  CHECK(rg.cond_b);
  CHECK(rg.cond_c);
  CHECK(rg.all_pass());
  // Monotone decrease implies inv_eps >= 1 wherever sampled.
  CHECK(rg.min_inv_eps >= 1.0 - 1e-12);
  // The located ball really has strictly negative vertical slope.
  CHECK(rg.ball_radius > 0.0);
  CHECK(good.grad_inv_eps(rg.ball_center).z() < -rg.margin_b);

  const MaterialProfile bad = bump_profile(10.0, 0.3, 0.6, 1.0);
  const ConditionReport rb = check_conditions(bad);
  CHECK(rb.cond_a);
  CHECK(rb.cond_b);
  CHECK_FALSE(rb.cond_c);
  CHECK(rb.lhs_c > rb.rhs_c);

  const ConditionReport ru = check_conditions(uniform_profile(1.0));
  CHECK(ru.cond_a);
  CHECK_FALSE(ru.cond_b); // zero gradient nowhere strictly decreasing
  CHECK(ru.cond_c);
}

TEST_CASE("smallness condition is monotone in the bump amplitude") {
  // The left-hand side scales with lambda, so failure propagates upward.
  double prev = 0.0;
  for (double lambda : {0.5, 2.0, 8.0, 32.0}) {
    const ConditionReport r = check_conditions(bump_profile(lambda, 0.3, 0.6, 1.0));
    CHECK(r.lhs_c >= prev);
    prev = r.lhs_c;
  }
  const ConditionReport r1 = check_conditions(bump_profile(5.0, 0.3, 0.6, 1.0));
  const ConditionReport r2 = check_conditions(bump_profile(20.0, 0.3, 0.6, 1.0));
  if (!r1.cond_c) CHECK_FALSE(r2.cond_c);
}

TEST_CASE("trapping slab violates the monotonicity condition") {
  const MaterialProfile trap = trapping_slab_profile(4.0, 0.2, 0.5, 1.0);
  const ConditionReport r = check_conditions(trap);
  CHECK_FALSE(r.cond_a);
  CHECK(r.max_d3 > 0.0);
}

TEST_CASE("fourier slices: uniform and single-cosine profiles") {
  const ModeLattice lat = build_lattice(1, Vec2d(0, 0), 1.0);
  const std::vector<double> zs{0.1, 0.4, 0.9};

  const SliceTable uni = fourier_slices(uniform_profile(1.0), lat, zs);
  CHECK(uni.diagonal);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(uni.value(i, 0, 0) - 1.0) < 1e-14);
    CHECK(std::abs(uni.value(i, 1, 0)) < 1e-14);
  }

  // inv_eps = 1 + 0.1 cos(x1): coefficients 0.05 at (±1, 0).
  MaterialProfile cosx;
  cosx.inv_eps = [](const Vec3d& x) { return 1.0 + 0.1 * std::cos(x.x()); };
  cosx.grad_inv_eps = [](const Vec3d& x) { return Vec3d(-0.1 * std::sin(x.x()), 0.0, 0.0); };
  cosx.h = 1.0;
  cosx.collar = 0.0;
  cosx.laterally_uniform = false;
  cosx.inf_inv_eps = 0.9;
  cosx.sup_inv_eps = 1.1;
  const SliceTable ct = fourier_slices(cosx, lat, zs);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(ct.value(i, 1, 0) - 0.05) < 1e-13);
    CHECK(std::abs(ct.value(i, -1, 0) - 0.05) < 1e-13);
    CHECK(std::abs(ct.value(i, 0, 0) - 1.0) < 1e-13);
    CHECK(std::abs(ct.value(i, 0, 1)) < 1e-13);
  }
}

namespace {

// Direct trapezoid evaluation of the coefficient integral, independent of
// the FFT path.
cplx direct_slice(const MaterialProfile& m, int p1, int p2, double z, int res) {
  cplx acc(0.0);
  for (int i2 = 0; i2 < res; ++i2)
    for (int i1 = 0; i1 < res; ++i1) {
      const double x1 = 2.0 * pi * i1 / res, x2 = 2.0 * pi * i2 / res;
      acc += m.inv_eps(Vec3d(x1, x2, z)) * std::exp(-iu * (p1 * x1 + p2 * x2));
    }
  return acc / (static_cast<double>(res) * res);
}

} // namespace

TEST_CASE("fourier slices: FFT path equals direct summation at matched resolution") {
  const ModeLattice lat = build_lattice(1, Vec2d(0.2, -0.1), 1.0);
  const MaterialProfile m = bump_profile(0.35, 0.3, 0.6, 1.0);
  const std::vector<double> zs{0.05, 0.35, 0.55};
  const int res = 64;
  const SliceTable t = fourier_slices(m, lat, zs, res);
  for (size_t iz = 0; iz < zs.size(); ++iz)
    for (int p1 = -2; p1 <= 2; ++p1)
      for (int p2 = -2; p2 <= 2; ++p2)
        CHECK(std::abs(t.value(static_cast<int>(iz), p1, p2) -
                       direct_slice(m, p1, p2, zs[iz], res)) < 1e-12);
}

TEST_CASE("fourier slices converge to the coefficient integral") {
  // The smooth cutoff decays fast enough that a moderate grid already
  // matches a much finer independent quadrature.
  const ModeLattice lat = build_lattice(1, Vec2d(0, 0), 1.0);
  const MaterialProfile m = smoothed_bump_profile(0.4, 0.3, 0.6, 1.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uz(0.02, 0.98);
  std::vector<double> zs;
  for (int i = 0; i < 10; ++i) zs.push_back(uz(rng));
  const SliceTable t = fourier_slices(m, lat, zs, 256);
  for (size_t iz = 0; iz < zs.size(); ++iz)
    for (int p1 = -2; p1 <= 2; ++p1)
      for (int p2 = -2; p2 <= 2; ++p2)
        CHECK(std::abs(t.value(static_cast<int>(iz), p1, p2) -
                       direct_slice(m, p1, p2, zs[iz], 1024)) < 1e-10);
}

TEST_CASE("fourier slices: conjugate symmetry for real profiles") {
  const ModeLattice lat = build_lattice(2, Vec2d(0.3, 0.1), 1.3);
  const MaterialProfile m = bump_profile(0.8, 0.2, 0.7, 1.0);
  const SliceTable t = fourier_slices(m, lat, {0.1, 0.5});
  for (int iz = 0; iz < 2; ++iz) {
    CHECK(std::abs(t.value(iz, 0, 0).imag()) < 1e-14);
    for (int p1 = -4; p1 <= 4; ++p1)
      for (int p2 = -4; p2 <= 4; ++p2)
        CHECK(std::abs(t.value(iz, p1, p2) - std::conj(t.value(iz, -p1, -p2))) < 1e-13);
  }
}

TEST_CASE("grid profile: interpolation, bounds, uniformity detection") {
  const int g1 = 24, g2 = 24, g3 = 17;
  const double h = 0.8;
  std::vector<double> vals(static_cast<size_t>(g1) * g2 * g3);
  auto f = [](const Vec3d& x) { return 1.0 + 0.3 * std::cos(x.x()) * (1.0 - x.z()); };
  for (int i3 = 0; i3 < g3; ++i3)
    for (int i2 = 0; i2 < g2; ++i2)
      for (int i1 = 0; i1 < g1; ++i1)
        vals[(static_cast<size_t>(i3) * g2 + i2) * g1 + i1] =
            f(Vec3d(2.0 * pi * i1 / g1, 2.0 * pi * i2 / g2, h * i3 / (g3 - 1)));
  const MaterialProfile m = grid_profile(g1, g2, g3, h, 0.0, vals);
  CHECK_FALSE(m.laterally_uniform);
  CHECK(m.sup_inv_eps <= 1.3 + 1e-12);
  CHECK(m.inf_inv_eps >= 0.7 - 1e-12);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(0.0, 2.0 * pi), uz(0.0, h);
  for (int t = 0; t < 50; ++t) {
    const Vec3d x(ux(rng), ux(rng), uz(rng));
    CHECK(std::abs(m(x) - f(x)) < 5e-3); // trilinear on a 24-point grid
  }

  // Constant samples are detected as laterally uniform.
  std::vector<double> flat(static_cast<size_t>(4) * 4 * 3, 2.0);
  CHECK(grid_profile(4, 4, 3, 1.0, 0.5, flat).laterally_uniform);

  CHECK_THROWS(grid_profile(1, 4, 3, 1.0, 0.0, flat));
  std::vector<double> negative(static_cast<size_t>(4) * 4 * 3, -1.0);
  CHECK_THROWS(grid_profile(4, 4, 3, 1.0, 0.0, negative));
}

TEST_CASE("grid profile file round trip") {
  const std::string path = "test_profile_grid.txt";
  {
    std::ofstream out(path);
    out << "2 2 2 1.0 0.25\n";
    for (int i = 0; i < 8; ++i) out << (1.0 + 0.125 * i) << " ";
    out << "\n";
  }
  const MaterialProfile m = load_grid_profile(path);
  CHECK(m.h == doctest::Approx(1.0));
  CHECK(m.collar == doctest::Approx(0.25));
  CHECK(m(Vec3d(0, 0, 0)) == doctest::Approx(1.0));
  std::remove(path.c_str());
  CHECK_THROWS(load_grid_profile("nonexistent_profile_file.txt"));
}

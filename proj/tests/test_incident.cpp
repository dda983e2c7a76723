// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qpmax/incident.hpp"

#include <cmath>

using namespace qpmax;

namespace {

// Central-difference curl oracle for smooth vector closures.
template <typename F>
Vec3c fd_curl(F&& f, const Vec3d& x, double step) {
  auto d = [&](int j, int c) {
    Vec3d e = Vec3d::Zero();
    e(j) = step;
    return (f(x + e)(c) - f(x - e)(c)) / (2.0 * step);
  };
  return Vec3c(d(1, 2) - d(2, 1), d(2, 0) - d(0, 2), d(0, 1) - d(1, 0));
}

} // namespace

TEST_CASE("make_source: polarization algebra") {
  const PlaneWaveSource s1 = make_source(Vec3d(0, 0, -1), Vec3d(1, 0, 0), 1.0);
  CHECK((s1.q - Vec3d(0, 1, 0)).norm() < 1e-15);
  CHECK(s1.k == doctest::Approx(1.0));
  CHECK(s1.alpha.norm() == 0.0);

  const PlaneWaveSource s2 = make_source(Vec3d(0, 0, -1), Vec3d(0, 1, 0), 1.0);
  CHECK((s2.q - Vec3d(-1, 0, 0)).norm() < 1e-15);

  // Validated invariants on an oblique source.
  const double k = 2.0;
  const Vec3d d(0.5, -0.3, -std::sqrt(k * k - 0.25 - 0.09));
  const Vec3d p = d.cross(Vec3d(0, 0, 1)); // orthogonal to d by construction
  const PlaneWaveSource s3 = make_source(d, p, k);
  CHECK(std::abs(s3.d.squaredNorm() - k * k) < 1e-12 * k * k);
  CHECK(std::abs(s3.p.dot(s3.d)) < 1e-12);
  CHECK((s3.q - p.cross(d) / k).norm() < 1e-15);
}

TEST_CASE("make_source rejects invalid input") {
  CHECK_THROWS(make_source(Vec3d(0, 0, -1), Vec3d(0, 0, -1), 1.0)); // p parallel to d
  CHECK_THROWS(make_source(Vec3d(0, 0, 1), Vec3d(1, 0, 0), 1.0));   // upward wave vector
  CHECK_THROWS(make_source(Vec3d(0, 0, -2), Vec3d(1, 0, 0), 1.0));  // dispersion violated
  CHECK_THROWS(make_source(Vec3d(0, 0, -1), Vec3d(1, 0, 0), -1.0)); // bad frequency
}

TEST_CASE("combined field: conductor conditions at the plate") {
  const double k = 1.3;
  const Vec3d d(0.4, 0.2, -std::sqrt(k * k - 0.2));
  const Vec3d p = d.cross(Vec3d(1, 1, 0)).normalized();
  const CombinedIncidentField f(make_source(d, p, k));

  for (double x1 : {0.0, 1.1, 4.4})
    for (double x2 : {0.0, 2.3, 5.9}) {
      const Vec3d x(x1, x2, 0.0);
      CHECK(std::abs(eval_Hir_alpha(f, x)(2)) < 1e-12);      // e3 . H^{ir} = 0
      const Vec3c E = eval_Eir_alpha(f, x);
      CHECK(std::abs(E(0)) < 1e-12);                          // e3 x E^{ir} = 0
      CHECK(std::abs(E(1)) < 1e-12);
      const Vec3c curl = eval_curl_alpha_Hir(f, x);
      CHECK(std::abs(curl(0)) < 1e-12);                       // e3 x curl_alpha H^{ir} = 0
      CHECK(std::abs(curl(1)) < 1e-12);
    }
}

TEST_CASE("combined field: normal incidence value and periodicity") {
  const CombinedIncidentField f(make_source(Vec3d(0, 0, -1), Vec3d(1, 0, 0), 1.0));
  const Vec3c at0 = eval_Hir_alpha(f, Vec3d(0, 0, 0));
  CHECK((at0 - Vec3c(2.0, 0.0, 0.0)).norm() < 1e-15);

  const double k = 1.7;
  const Vec3d d(0.6, -0.1, -std::sqrt(k * k - 0.37));
  const CombinedIncidentField g(make_source(d, d.cross(Vec3d(0, 1, 0)).normalized(), k));
  const Vec3d x(0.7, 1.9, 0.8);
  const Vec3c v = eval_Hir_alpha(g, x);
  const Vec3c v_shift1 = eval_Hir_alpha(g, x + Vec3d(2.0 * pi, 0, 0));
  const Vec3c v_shift2 = eval_Hir_alpha(g, x + Vec3d(0, 2.0 * pi, 0));
  CHECK((v - v_shift1).norm() < 1e-14 * v.norm());
  CHECK((v - v_shift2).norm() < 1e-14 * v.norm());
}

TEST_CASE("analytic curl matches a finite-difference oracle") {
  const double k = 1.9;
  const Vec3d d(0.5, 0.25, -std::sqrt(k * k - 0.3125));
  const CombinedIncidentField f(make_source(d, d.cross(Vec3d(0, 0, 1)), k));
  const Vec2d alpha = f.source.alpha;

  auto Hir = [&](const Vec3d& x) { return eval_Hir_alpha(f, x); };
  for (const Vec3d& x : {Vec3d(0.3, 0.9, 0.5), Vec3d(2.2, 4.0, 1.4), Vec3d(5.5, 0.1, 0.02)}) {
    // curl_alpha = curl + i alpha x
    const Vec3c fd =
        fd_curl(Hir, x, 1e-4) + iu * cross3(Vec3c(alpha.x(), alpha.y(), 0.0), Vec3c(Hir(x)));
    const Vec3c exact = eval_curl_alpha_Hir(f, x);
    CHECK((fd - exact).norm() < 1e-7);
  }
}

TEST_CASE("zero polarization gives zero fields") {
  const CombinedIncidentField f(make_source(Vec3d(0, 0, -1), Vec3d(0, 0, 0), 1.0));
  CHECK(eval_Hir_alpha(f, Vec3d(1, 2, 3)).norm() == 0.0);
  CHECK(eval_curl_alpha_Hir(f, Vec3d(1, 2, 3)).norm() == 0.0);
}

TEST_CASE("second-order equation and divergence hold for the combined field") {
  const double k = 1.25;
  const Vec3d d(0.3, -0.4, -std::sqrt(k * k - 0.25));
  const PlaneWaveSource s = make_source(d, d.cross(Vec3d(1, 0, 0)).normalized(), k);
  const CombinedIncidentField f(s);

  // Divergence vanishes exactly by the construction d.p = dtilde.ptilde = 0.
  CHECK(std::abs(s.d.dot(s.p)) < 1e-12);
  CHECK(std::abs(mirrored(s.d).dot(mirrored(s.p))) < 1e-12);

  // curl_alpha curl_alpha H - k^2 H = 0, via finite differences of the
  // analytic first curl.
  auto curlH = [&](const Vec3d& x) { return eval_curl_alpha_Hir(f, x); };
  for (const Vec3d& x : {Vec3d(1.0, 0.4, 0.6), Vec3d(0.2, 3.1, 1.1)}) {
    const Vec3c second = fd_curl(curlH, x, 1e-4) +
                         iu * cross3(Vec3c(s.alpha.x(), s.alpha.y(), 0.0), Vec3c(curlH(x)));
    const Vec3c wave = k * k * eval_Hir_alpha(f, x);
    CHECK((second - wave).norm() < 1e-6 * wave.norm());
  }

  // div_alpha H = div H + i alpha . H by finite differences.
  auto Hc = [&](const Vec3d& x) { return eval_Hir_alpha(f, x); };
  const Vec3d x(0.9, 1.7, 0.33);
  cplx div(0.0);
  for (int j = 0; j < 3; ++j) {
    Vec3d e = Vec3d::Zero();
    e(j) = 1e-4;
    div += (Hc(x + e)(j) - Hc(x - e)(j)) / (2e-4);
  }
  div += iu * (s.alpha.x() * Hc(x)(0) + s.alpha.y() * Hc(x)(1));
  CHECK(std::abs(div) < 1e-6);
}

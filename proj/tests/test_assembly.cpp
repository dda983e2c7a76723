// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qpmax/assembly.hpp"
#include "qpmax/audit.hpp"
#include "qpmax/boundary.hpp"

#include <cmath>
#include <random>

using namespace qpmax;

namespace {

MatXc boundary_block_reference(const ModeLattice& lat, int mode, const DofMap& dofs) {
  MatXc B = MatXc::Zero(dofs.block_size(), dofs.block_size());
  const Vec3c r = lat.dtn[static_cast<size_t>(mode)];
  const cplx beta = lat.beta[static_cast<size_t>(mode)];
  const int top = dofs.nodes - 1;
  for (int c = 0; c < 3; ++c)
    for (int cp = 0; cp < 3; ++cp) {
      cplx entry = -(c == cp ? beta : cplx(0.0));
      if (c == 2) entry += r(cp);
      if (cp == 2) entry -= r(c);
      B(dofs.local_index(cp, top), dofs.local_index(c, top)) += cell_area * iu * entry;
    }
  return B;
}

} // namespace

TEST_CASE("vacuum single-mode block matches closed-form element integrals") {
  const double h = 1.0, k = 1.0;
  const int M = 4;
  const ModeLattice lat = build_lattice(0, Vec2d(0, 0), k);
  const VerticalMesh mesh = make_vertical_mesh(M, h);
  const MaterialProfile m = uniform_profile(h);
  const cplx rho(1.0, -1.0);
  const DiscreteSystem sys = assemble_system(m, lat, mesh, rho);
  REQUIRE(sys.block_diagonal);
  REQUIRE(sys.blocks.size() == 1);

  const double dz = h / M;
  const int nodes = M + 1;
  // Closed-form P1 stiffness and mass on the uniform mesh.
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(nodes, nodes);
  Eigen::MatrixXd Mm = Eigen::MatrixXd::Zero(nodes, nodes);
  for (int e = 0; e < M; ++e) {
    S(e, e) += 1.0 / dz;
    S(e + 1, e + 1) += 1.0 / dz;
    S(e, e + 1) -= 1.0 / dz;
    S(e + 1, e) -= 1.0 / dz;
    Mm(e, e) += dz / 3.0;
    Mm(e + 1, e + 1) += dz / 3.0;
    Mm(e, e + 1) += dz / 6.0;
    Mm(e + 1, e) += dz / 6.0;
  }

  const DofMap dofs{1, nodes};
  MatXc expected = MatXc::Zero(dofs.block_size(), dofs.block_size());
  auto add = [&](int c_test, int c_trial, const Eigen::MatrixXd& mat, cplx scale) {
    for (int i = 0; i < nodes; ++i)
      for (int j = 0; j < nodes; ++j) {
        const int row = dofs.local_index(c_test, i), col = dofs.local_index(c_trial, j);
        if (row < 0 || col < 0) continue;
        expected(row, col) += cell_area * scale * mat(i, j);
      }
  };
  // At the zero transverse frequency: curl-curl acts as 1D stiffness on the
  // two transverse components, the penalty as rho x stiffness on the third,
  // and the mass on all three.
  add(0, 0, S, 1.0);
  add(1, 1, S, 1.0);
  add(2, 2, S, rho);
  for (int c = 0; c < 3; ++c) add(c, c, Mm, -k * k);
  expected += boundary_block_reference(lat, 0, dofs);

  CHECK((sys.blocks[0] - expected).cwiseAbs().maxCoeff() < 1e-12 * expected.cwiseAbs().maxCoeff());
}

TEST_CASE("assembly preconditions") {
  const ModeLattice lat = build_lattice(0, Vec2d(0, 0), 1.0);
  const VerticalMesh mesh = make_vertical_mesh(4, 1.0);
  const MaterialProfile m = uniform_profile(1.0);
  CHECK_THROWS(assemble_system(m, lat, mesh, cplx(-1.0, -1.0))); // Re rho <= 0
  CHECK_THROWS(assemble_system(m, lat, mesh, cplx(1.0, 0.0)));   // Im rho >= 0

  // Collar boundary must be a mesh node.
  const MaterialProfile slab = slab_profile(4.0, 0.37, 1.0);
  const VerticalMesh bad = make_vertical_mesh(4, 1.0); // no node at 0.37
  CHECK_THROWS(assemble_system(slab, lat, bad, cplx(0.25, -0.25)));
  const VerticalMesh good = make_vertical_mesh(8, 1.0, {0.37});
  CHECK_NOTHROW(assemble_system(slab, lat, good, cplx(0.25, -0.25)));
}

TEST_CASE("curl-curl plus mass part is Hermitian") {
  // Isolate the penalty through two assemblies with different Im(rho),
  // subtract the analytic boundary block, and verify Hermitian symmetry of
  // the remainder (real symmetric integrand).
  const ModeLattice lat = build_lattice(1, Vec2d(0.2, -0.3), 1.4);
  const MaterialProfile m = bump_profile(0.5, 0.3, 0.6, 1.0);
  const VerticalMesh mesh = make_vertical_mesh(8, 1.0, {0.3, 0.6});
  const cplx rho1(1.0, -1.0), rho2(1.0, -2.0);
  const MatXc A1 = assemble_system(m, lat, mesh, rho1).to_dense();
  const MatXc A2 = assemble_system(m, lat, mesh, rho2).to_dense();
  const MatXc penalty = (A1 - A2) / (rho1 - rho2);

  MatXc core = A1 - rho1 * penalty;
  const DofMap dofs{lat.count(), mesh.node_count()};
  for (int mode = 0; mode < lat.count(); ++mode) {
    const MatXc B = boundary_block_reference(lat, mode, dofs);
    core.block(mode * dofs.block_size(), mode * dofs.block_size(), dofs.block_size(),
               dofs.block_size()) -= B;
  }
  const double scale = core.cwiseAbs().maxCoeff();
  CHECK((core - core.adjoint()).cwiseAbs().maxCoeff() < 1e-12 * scale);
  CHECK((penalty - penalty.adjoint()).cwiseAbs().maxCoeff() < 1e-12 * scale);
}

TEST_CASE("quadratic form equals the independent grid evaluation") {
  std::mt19937_64 rng(23);
  // Dense path with a laterally varying material.
  {
    const ModeLattice lat = build_lattice(1, Vec2d(0.15, 0.0), 1.2);
    const MaterialProfile m = bump_profile(0.4, 0.3, 0.6, 1.0);
    const VerticalMesh mesh = make_vertical_mesh(6, 1.0, {0.3, 0.6});
    const cplx rho(1.0, -1.0);
    DiscreteSystem sys = assemble_system(m, lat, mesh, rho);
    for (int trial = 0; trial < 6; ++trial) {
      const DiscreteField H = random_field(lat, mesh, rng);
      const DiscreteField F = random_field(lat, mesh, rng);
      const cplx via_matrix = dofs_from_field(sys, F).dot(sys.apply(dofs_from_field(sys, H)));
      const cplx via_grid = evaluate_B(H, F, m, rho);
      CHECK(std::abs(via_matrix - via_grid) < 1e-10 * std::max(1.0, std::abs(via_matrix)));
    }
  }
  // Block path with a layered material.
  {
    const ModeLattice lat = build_lattice(1, Vec2d(0, 0), 1.0);
    const MaterialProfile m = slab_profile(4.0, 0.5, 1.0);
    const VerticalMesh mesh = make_vertical_mesh(8, 1.0, {0.5});
    const cplx rho(0.25, -0.25);
    DiscreteSystem sys = assemble_system(m, lat, mesh, rho);
    for (int trial = 0; trial < 4; ++trial) {
      const DiscreteField H = random_field(lat, mesh, rng);
      const DiscreteField F = random_field(lat, mesh, rng);
      const cplx via_matrix = dofs_from_field(sys, F).dot(sys.apply(dofs_from_field(sys, H)));
      const cplx via_grid = evaluate_B(H, F, m, rho);
      CHECK(std::abs(via_matrix - via_grid) < 1e-10 * std::max(1.0, std::abs(via_matrix)));
    }
  }
}

TEST_CASE("form value on a linear vertical profile matches the closed form") {
  // H = (z, 0, 0) at the zero mode: curl = (0,1,0), div = 0, trace (h,0,0).
  // B(H,H) = 4pi^2 [ h - k^2 h^3/3 - i k h^2 ] in vacuum.
  const double h = 1.0, k = 1.0;
  const ModeLattice lat = build_lattice(0, Vec2d(0, 0), k);
  const VerticalMesh mesh = make_vertical_mesh(7, h);
  DiscreteField H(lat, mesh);
  for (int j = 0; j < mesh.node_count(); ++j)
    H.at(0, 0, j) = mesh.nodes[static_cast<size_t>(j)];
  const cplx expected = cell_area * (h - k * k * h * h * h / 3.0 - iu * k * h * h);
  const cplx value = evaluate_B(H, H, uniform_profile(h), cplx(1.0, -1.0));
  CHECK(std::abs(value - expected) < 1e-12 * std::abs(expected));

  const DiscreteSystem sys = assemble_system(uniform_profile(h), lat, mesh, cplx(1.0, -1.0));
  const VecXc x = dofs_from_field(sys, H);
  CHECK(std::abs(x.dot(sys.apply(x)) - expected) < 1e-12 * std::abs(expected));

  DiscreteField zero(lat, mesh);
  CHECK(std::abs(evaluate_B(zero, zero, uniform_profile(h), cplx(1.0, -1.0))) == 0.0);
}

TEST_CASE("right-hand side: vanishing and support properties") {
  const double k = 1.0;
  const PlaneWaveSource src = make_source(Vec3d(0, 0, -k), Vec3d(1, 0, 0), k);

  // Zero contrast kills the source term identically.
  {
    const ModeLattice lat = build_lattice(1, src.alpha, k);
    const VerticalMesh mesh = make_vertical_mesh(8, 1.0);
    const VecXc rhs = assemble_rhs(src, uniform_profile(1.0), lat, mesh);
    CHECK(rhs.norm() == 0.0);
  }

  // Contrast supported below h1: entries for basis functions supported in
  // the collar vanish.
  {
    const MaterialProfile m = bump_profile(0.5, 0.25, 0.5, 1.0);
    const ModeLattice lat = build_lattice(1, src.alpha, k);
    const VerticalMesh mesh = make_vertical_mesh(8, 1.0, {0.25, 0.5});
    const VecXc rhs = assemble_rhs(src, m, lat, mesh);
    CHECK(rhs.norm() > 0.0);
    const DofMap dofs{lat.count(), mesh.node_count()};
    for (int mode = 0; mode < lat.count(); ++mode)
      for (int c = 0; c < 3; ++c)
        for (int j = 0; j < mesh.node_count(); ++j) {
          const double support_lo = mesh.nodes[static_cast<size_t>(std::max(0, j - 1))];
          if (support_lo < 0.5 - 1e-12) continue; // overlaps the contrast region
          const int idx = dofs.index(mode, c, j);
          if (idx >= 0) CHECK(std::abs(rhs(idx)) < 1e-13);
        }
  }

  // Layered contrast feeds only the excited lattice mode.
  {
    const MaterialProfile m = slab_profile(4.0, 0.5, 1.0);
    const ModeLattice lat = build_lattice(1, src.alpha, k);
    const VerticalMesh mesh = make_vertical_mesh(8, 1.0, {0.5});
    const VecXc rhs = assemble_rhs(src, m, lat, mesh);
    const DofMap dofs{lat.count(), mesh.node_count()};
    for (int mode = 0; mode < lat.count(); ++mode) {
      const double block_norm =
          rhs.segment(mode * dofs.block_size(), dofs.block_size()).norm();
      if (mode == lat.index_of(0, 0))
        CHECK(block_norm > 0.0);
      else
        CHECK(block_norm < 1e-13);
    }
  }

  // Source/lattice quasi-momentum mismatch is rejected.
  {
    const ModeLattice lat = build_lattice(1, Vec2d(0.5, 0.0), k);
    const VerticalMesh mesh = make_vertical_mesh(4, 1.0);
    CHECK_THROWS(assemble_rhs(src, uniform_profile(1.0), lat, mesh));
  }
}

TEST_CASE("coercivity fit on random discrete fields") {
  std::mt19937_64 rng(31);
  const MaterialProfile m = smoothed_bump_profile(0.35, 0.3, 0.6, 1.0);
  const VerticalMesh mesh = make_vertical_mesh(8, 1.0, {0.3, 0.6});
  for (double k : {0.9, 2.1}) {
    const ModeLattice lat = build_lattice(1, Vec2d(0, 0), k);
    const DiscreteSystem sys = assemble_system(m, lat, mesh, RhoRule{}.resolve(m));
    const auto samples = garding_samples(sys, 30, rng);
    const GardingFit fit = fit_garding(samples);
    CHECK(fit.pass);
    CHECK(fit.c1 > 0.0);
    CHECK(fit.worst_margin >= -1e-10);
  }
}

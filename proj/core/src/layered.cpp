// SPDX-License-Identifier: Apache-2.0
#include "qpmax/layered.hpp"

#include <Eigen/Sparse>

#include <cmath>
#include <stdexcept>

namespace qpmax {

LayeredProfile layered_from(const MaterialProfile& m) {
  if (!m.laterally_uniform)
    throw std::invalid_argument("layered_from: material is not laterally uniform");
  LayeredProfile p;
  p.a = [f = m.inv_eps](double z) { return f(Vec3d(0.0, 0.0, z)); };
  p.h = m.h;
  p.collar = m.collar;
  p.family = m.family;
  return p;
}

OracleResult layered_solve(const LayeredProfile& profile, const PlaneWaveSource& source,
                           int grid_points, int lattice_order) {
  if (grid_points < 100)
    throw std::invalid_argument("layered_solve: grid too coarse for a reference solve");
  const double h = profile.h;
  const int M = grid_points;
  const double dz = h / M;
  const Vec2d kappa = source.alpha;
  const double k = source.k;
  const double k2 = k * k;
  const double beta0 = std::sqrt(std::max(0.0, k2 - kappa.squaredNorm()));
  if (!(beta0 > 0.0))
    throw std::invalid_argument("layered_solve: incident wave is not propagating");

  // Half-node samples drive the conservative fluxes; node samples (averaged
  // from the two adjacent half-nodes, so profile jumps on grid nodes stay
  // second order) drive the zeroth-order terms.
  std::vector<double> am(static_cast<size_t>(M));
  for (int j = 0; j < M; ++j) am[static_cast<size_t>(j)] = profile.a((j + 0.5) * dz);
  std::vector<double> an(static_cast<size_t>(M) + 1);
  an[0] = profile.a(0.25 * dz);
  an[static_cast<size_t>(M)] = profile.a(h - 0.25 * dz);
  for (int j = 1; j < M; ++j)
    an[static_cast<size_t>(j)] = 0.5 * (am[static_cast<size_t>(j) - 1] + am[static_cast<size_t>(j)]);

  // The third component is algebraic: (a |kappa|^2 - k^2) U3 couples to the
  // transverse derivatives. Keep the coefficient away from zero.
  for (int j = 0; j <= M; ++j)
    if (std::abs(an[static_cast<size_t>(j)] * kappa.squaredNorm() - k2) < 1e-8 * k2)
      throw std::runtime_error("layered_solve: degenerate vertical coefficient "
                               "a(x3)|kappa|^2 = k^2 inside the cell");

  // Scattered-field formulation: the volume source is the conservative
  // divergence of W = (a - 1) curl_alpha H^{ir}, so zero contrast yields the
  // zero field exactly and no discretization error rides on the incident
  // wave. V^{ir} = i d x p e^{i d3 z} + i dtilde x ptilde e^{-i d3 z}.
  const Vec3c A1 = iu * source.d.cross(source.p).cast<cplx>();
  const Vec3c A2 = iu * mirrored(source.d).cross(mirrored(source.p)).cast<cplx>();
  auto Vir = [&](double z) -> Vec3c {
    return A1 * std::exp(iu * source.d.z() * z) + A2 * std::exp(-iu * source.d.z() * z);
  };
  auto W_half = [&](int j_half) -> Vec3c { // W at z_{j_half + 1/2}
    const double z = (j_half + 0.5) * dz;
    return (am[static_cast<size_t>(j_half)] - 1.0) * Vir(z);
  };
  auto W_node = [&](int j) -> Vec3c { return (an[static_cast<size_t>(j)] - 1.0) * Vir(j * dz); };

  using Trip = Eigen::Triplet<cplx>;
  std::vector<Trip> trips;
  const int dim = 3 * (M + 1);
  VecXc rhs = VecXc::Zero(dim);
  auto id = [](int j, int c) { return 3 * j + c; };

  // Plate rows: vanishing normal component and vanishing tangential
  // inv_eps-weighted curl of the scattered field (the incident-plus-reflected
  // part satisfies both identically), with one-sided second-order stencils.
  {
    const double c0 = -3.0 / (2.0 * dz), c1 = 4.0 / (2.0 * dz), c2 = -1.0 / (2.0 * dz);
    // U1'(0) - i kappa1 U3(0) = 0
    trips.emplace_back(id(0, 0), id(0, 0), cplx(c0));
    trips.emplace_back(id(0, 0), id(1, 0), cplx(c1));
    trips.emplace_back(id(0, 0), id(2, 0), cplx(c2));
    trips.emplace_back(id(0, 0), id(0, 2), -iu * kappa.x());
    // i kappa2 U3(0) - U2'(0) = 0
    trips.emplace_back(id(0, 1), id(0, 1), cplx(-c0));
    trips.emplace_back(id(0, 1), id(1, 1), cplx(-c1));
    trips.emplace_back(id(0, 1), id(2, 1), cplx(-c2));
    trips.emplace_back(id(0, 1), id(0, 2), iu * kappa.y());
    // U3(0) = 0
    trips.emplace_back(id(0, 2), id(0, 2), cplx(1.0));
  }

  for (int j = 1; j < M; ++j) {
    const double aj = an[static_cast<size_t>(j)];
    const double ap = am[static_cast<size_t>(j)];      // a at j+1/2
    const double amw = am[static_cast<size_t>(j) - 1]; // a at j-1/2
    const double k1 = kappa.x(), kp2 = kappa.y();
    const double kap2 = kappa.squaredNorm();

    for (int c = 0; c < 2; ++c) {
      const int row = id(j, c);
      // -(a U_c')' by conservative differencing
      trips.emplace_back(row, id(j - 1, c), cplx(-amw / (dz * dz)));
      trips.emplace_back(row, id(j, c), cplx((ap + amw) / (dz * dz)));
      trips.emplace_back(row, id(j + 1, c), cplx(-ap / (dz * dz)));
      // transverse algebra a (|kappa|^2 I - kappa kappa^T) on (U1, U2)
      if (c == 0) {
        trips.emplace_back(row, id(j, 0), cplx(aj * kp2 * kp2));
        trips.emplace_back(row, id(j, 1), cplx(-aj * k1 * kp2));
      } else {
        trips.emplace_back(row, id(j, 1), cplx(aj * k1 * k1));
        trips.emplace_back(row, id(j, 0), cplx(-aj * k1 * kp2));
      }
      // + i kappa_c (a U3)' by central differencing
      const double kc = c == 0 ? k1 : kp2;
      trips.emplace_back(row, id(j + 1, 2),
                         iu * kc * an[static_cast<size_t>(j) + 1] / (2.0 * dz));
      trips.emplace_back(row, id(j - 1, 2),
                         -iu * kc * an[static_cast<size_t>(j) - 1] / (2.0 * dz));
      // - k^2 U_c
      trips.emplace_back(row, id(j, c), cplx(-k2));
    }
    // Algebraic third row: i a (kappa . U_T') + (a |kappa|^2 - k^2) U3.
    const int row = id(j, 2);
    trips.emplace_back(row, id(j + 1, 0), iu * aj * k1 / (2.0 * dz));
    trips.emplace_back(row, id(j - 1, 0), -iu * aj * k1 / (2.0 * dz));
    trips.emplace_back(row, id(j + 1, 1), iu * aj * kp2 / (2.0 * dz));
    trips.emplace_back(row, id(j - 1, 1), -iu * aj * kp2 / (2.0 * dz));
    trips.emplace_back(row, id(j, 2), cplx(aj * kap2 - k2));

    // Source: -D W with the same conservative flux structure.
    const Vec3c Wp = W_half(j), Wm = W_half(j - 1), Wj = W_node(j);
    rhs(id(j, 0)) = (Wp.y() - Wm.y()) / dz - iu * kp2 * Wj.z();
    rhs(id(j, 1)) = -(Wp.x() - Wm.x()) / dz + iu * k1 * Wj.z();
    rhs(id(j, 2)) = -iu * k1 * Wj.y() + iu * kp2 * Wj.x();
  }

  // Outgoing rows at the top: the scattered field radiates upward.
  {
    const double c0 = 3.0 / (2.0 * dz), c1 = -4.0 / (2.0 * dz), c2 = 1.0 / (2.0 * dz);
    for (int c = 0; c < 3; ++c) {
      const int row = id(M, c);
      trips.emplace_back(row, id(M, c), cplx(c0) - iu * beta0);
      trips.emplace_back(row, id(M - 1, c), cplx(c1));
      trips.emplace_back(row, id(M - 2, c), cplx(c2));
    }
  }

  Eigen::SparseMatrix<cplx> A(dim, dim);
  A.setFromTriplets(trips.begin(), trips.end());
  Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("layered_solve: sparse factorization failed");
  const VecXc u = lu.solve(rhs);
  if (!u.allFinite()) throw std::runtime_error("layered_solve: solve produced non-finite values");

  Vec3c scattered;
  for (int c = 0; c < 3; ++c) scattered(c) = u(id(M, c));

  OracleResult res;
  res.grid_points = M;
  res.lattice = build_lattice(lattice_order, source.alpha, source.k);
  res.scattered_at_h = MatXc::Zero(3, res.lattice.count());
  const int excited = res.lattice.index_of(0, 0);
  res.scattered_at_h.col(excited) = scattered;

  MatXc totals = res.scattered_at_h;
  totals.col(excited) += mirrored(source.p).cast<cplx>() * std::exp(iu * beta0 * h);
  res.energy = energy_from_amplitudes(res.lattice, totals, source);
  return res;
}

cplx pec_stack_reflection(const std::vector<Layer>& layers, double k, double kappa_norm,
                          Polarization pol) {
  const double beta2 = k * k - kappa_norm * kappa_norm;
  if (!(beta2 > 0.0))
    throw std::invalid_argument("pec_stack_reflection: incidence must be propagating");
  const double beta = std::sqrt(beta2);

  // State (psi, w): w = psi' for TE, w = a psi' for TM. PEC start values:
  // psi(0) = 0 for TE (tangential E vanishes), w(0) = 0 for TM.
  cplx psi = pol == Polarization::TE ? cplx(0.0) : cplx(1.0);
  cplx w = pol == Polarization::TE ? cplx(1.0) : cplx(0.0);
  double z_top = 0.0;

  for (const Layer& layer : layers) {
    if (!(layer.eps_r > 0.0) || !(layer.thickness > 0.0))
      throw std::invalid_argument("pec_stack_reflection: bad layer");
    const cplx q = std::sqrt(cplx(k * k * layer.eps_r - kappa_norm * kappa_norm));
    const double a = pol == Polarization::TM ? 1.0 / layer.eps_r : 1.0;
    const cplx c = std::cos(q * layer.thickness), s = std::sin(q * layer.thickness);
    // psi' = w/a inside the layer; w' = -a q^2 psi.
    const cplx psi_new = c * psi + (s / (q * a)) * w;
    const cplx w_new = -a * q * s * psi + c * w;
    psi = psi_new;
    w = w_new;
    z_top += layer.thickness;
  }

  // Vacuum above: psi = D e^{-i beta (z - Z)} + U e^{i beta (z - Z)}.
  const cplx D = 0.5 * (psi - w / (iu * beta));
  const cplx U = 0.5 * (psi + w / (iu * beta));
  if (std::abs(D) == 0.0) throw std::runtime_error("pec_stack_reflection: no incoming component");
  return (U / D) * std::exp(-2.0 * iu * beta * z_top);
}

} // namespace qpmax

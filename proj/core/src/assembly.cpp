// SPDX-License-Identifier: Apache-2.0
#include "qpmax/assembly.hpp"

#include "qpmax/boundary.hpp"

#include <stdexcept>

namespace qpmax {

VecXc DiscreteSystem::apply(const VecXc& x) const {
  if (x.size() != dim()) throw std::invalid_argument("DiscreteSystem::apply: size mismatch");
  if (!block_diagonal) return dense * x;
  VecXc y(dim());
  const int b = dofs.block_size();
  for (int m = 0; m < dofs.modes; ++m)
    y.segment(m * b, b) = blocks[static_cast<size_t>(m)] * x.segment(m * b, b);
  return y;
}

MatXc DiscreteSystem::to_dense() const {
  if (!block_diagonal) return dense;
  MatXc A = MatXc::Zero(dim(), dim());
  const int b = dofs.block_size();
  for (int m = 0; m < dofs.modes; ++m)
    A.block(m * b, m * b, b, b) = blocks[static_cast<size_t>(m)];
  return A;
}

namespace {

// Per-mode curl of a basis function e_c * phi: 3-vector linear in (phi, dphi).
inline Vec3c basis_curl(const Vec2d& kap, int comp, double phi, double dphi) {
  switch (comp) {
    case 0: return Vec3c(cplx(0.0), cplx(dphi, 0.0), -iu * kap.y() * phi);
    case 1: return Vec3c(cplx(-dphi, 0.0), cplx(0.0), iu * kap.x() * phi);
    default: return Vec3c(iu * kap.y() * phi, -iu * kap.x() * phi, cplx(0.0));
  }
}

inline cplx basis_div(const Vec2d& kap, int comp, double phi, double dphi) {
  switch (comp) {
    case 0: return iu * kap.x() * phi;
    case 1: return iu * kap.y() * phi;
    default: return cplx(dphi, 0.0);
  }
}

// Gauss nodes of the mesh, element-major, plus a flat list of x3 positions.
struct QuadLayout {
  GaussRule rule;
  std::vector<double> x3; // elements * q points
  int q = 0;

  explicit QuadLayout(const VerticalMesh& mesh) : rule(gauss_rule(mesh.quad_order)) {
    q = static_cast<int>(rule.points.size());
    x3.reserve(static_cast<size_t>(mesh.elements()) * q);
    for (int e = 0; e < mesh.elements(); ++e)
      for (int g = 0; g < q; ++g)
        x3.push_back(mesh.nodes[static_cast<size_t>(e)] + rule.points[static_cast<size_t>(g)] * mesh.dz(e));
  }
  int flat(int e, int g) const { return e * q + g; }
};

void add_boundary_block(MatXc& A, const DofMap& dofs, const ModeLattice& lat, int mode,
                        int row_offset, int col_offset) {
  // Top-trace contribution <e3 x (R_alpha x H), F> - <R_alpha . H, e3 . F>:
  // with trial Hhat = e_c and test Fhat = e_c' at mode n this is
  // i [ delta_{c3} r_{c'} - beta delta_{cc'} - r_c delta_{c'3} ].
  const Vec3c r = lat.dtn[static_cast<size_t>(mode)];
  const cplx beta = lat.beta[static_cast<size_t>(mode)];
  const int top = dofs.nodes - 1;
  for (int c = 0; c < 3; ++c) {
    const int col = col_offset + dofs.local_index(c, top);
    for (int cp = 0; cp < 3; ++cp) {
      const int row = row_offset + dofs.local_index(cp, top);
      cplx entry = -(c == cp ? beta : cplx(0.0));
      if (c == 2) entry += r(cp);
      if (cp == 2) entry -= r(c);
      A(row, col) += cell_area * iu * entry;
    }
  }
}

// Volume contribution of one mode pair (n = test, m = trial) into a matrix
// block, using the slice column ahat_{n-m} sampled at the Gauss nodes.
void add_volume_block(MatXc& A, const DofMap& dofs, const ModeLattice& lat,
                      const VerticalMesh& mesh, const QuadLayout& quad, int mode_test,
                      int mode_trial, const SliceTable& slices, cplx rho, int row_offset,
                      int col_offset) {
  const Vec2i pn = lat.modes[static_cast<size_t>(mode_test)] - lat.modes[static_cast<size_t>(mode_trial)];
  const int pidx = slices.mode_index(pn.x(), pn.y());
  if (pidx < 0) throw std::logic_error("add_volume_block: slice table too small");
  const bool diagonal_pair = mode_test == mode_trial;
  const Vec2d kap_n = lat.kappa[static_cast<size_t>(mode_test)];
  const Vec2d kap_m = lat.kappa[static_cast<size_t>(mode_trial)];
  const double k2 = lat.k * lat.k;

  for (int e = 0; e < mesh.elements(); ++e) {
    const double dz = mesh.dz(e);
    for (int g = 0; g < quad.q; ++g) {
      const double w = quad.rule.weights[static_cast<size_t>(g)] * dz * cell_area;
      const double t = quad.rule.points[static_cast<size_t>(g)];
      const cplx a_slice = slices.values(quad.flat(e, g), pidx);

      // P1 shape functions on the element, local nodes 0 and 1.
      const double phi[2] = {1.0 - t, t};
      const double dphi[2] = {-1.0 / dz, 1.0 / dz};

      for (int c = 0; c < 3; ++c)
        for (int lj = 0; lj < 2; ++lj) {
          const int col_local = dofs.local_index(c, e + lj);
          if (col_local < 0) continue;
          const Vec3c curl_trial = basis_curl(kap_m, c, phi[lj], dphi[lj]);
          const cplx div_trial = basis_div(kap_m, c, phi[lj], dphi[lj]);
          for (int cp = 0; cp < 3; ++cp)
            for (int li = 0; li < 2; ++li) {
              const int row_local = dofs.local_index(cp, e + li);
              if (row_local < 0) continue;
              const Vec3c curl_test = basis_curl(kap_n, cp, phi[li], dphi[li]);
              cplx entry = a_slice * (curl_trial.x() * std::conj(curl_test.x()) +
                                      curl_trial.y() * std::conj(curl_test.y()) +
                                      curl_trial.z() * std::conj(curl_test.z()));
              if (diagonal_pair) {
                const cplx div_test = basis_div(kap_n, cp, phi[li], dphi[li]);
                entry += rho * div_trial * std::conj(div_test);
                if (c == cp) entry -= k2 * phi[lj] * phi[li];
              }
              A(row_offset + row_local, col_offset + col_local) += w * entry;
            }
        }
    }
  }
}

} // namespace

DiscreteSystem assemble_system(const MaterialProfile& m, const ModeLattice& lattice,
                               const VerticalMesh& mesh, cplx rho) {
  if (!(rho.real() > 0.0) || !(rho.imag() < 0.0))
    throw std::invalid_argument("assemble_system: require Re(rho) > 0 and Im(rho) < 0");
  if (std::abs(mesh.h() - m.h) > 1e-12 * std::max(1.0, m.h))
    throw std::invalid_argument("assemble_system: mesh height does not match the material cell");
  if (m.collar < m.h && !mesh.has_node_at(m.h - m.collar))
    throw std::invalid_argument("assemble_system: no mesh node on the collar boundary h - eta");

  DiscreteSystem sys;
  sys.lattice = lattice;
  sys.mesh = mesh;
  sys.rho = rho;
  sys.dofs = DofMap{lattice.count(), mesh.node_count()};
  sys.block_diagonal = m.laterally_uniform;
  sys.rhs = VecXc::Zero(sys.dim());

  const QuadLayout quad(mesh);
  const SliceTable slices = fourier_slices(m, lattice, quad.x3);
  const int b = sys.dofs.block_size();

  if (sys.block_diagonal) {
    sys.blocks.assign(static_cast<size_t>(lattice.count()), MatXc::Zero(b, b));
    for (int n = 0; n < lattice.count(); ++n) {
      add_volume_block(sys.blocks[static_cast<size_t>(n)], sys.dofs, lattice, mesh, quad, n, n,
                       slices, rho, 0, 0);
      add_boundary_block(sys.blocks[static_cast<size_t>(n)], sys.dofs, lattice, n, 0, 0);
    }
  } else {
    sys.dense = MatXc::Zero(sys.dim(), sys.dim());
    for (int n = 0; n < lattice.count(); ++n) {
      for (int mm = 0; mm < lattice.count(); ++mm)
        add_volume_block(sys.dense, sys.dofs, lattice, mesh, quad, n, mm, slices, rho, n * b,
                         mm * b);
      add_boundary_block(sys.dense, sys.dofs, lattice, n, n * b, n * b);
    }
  }
  return sys;
}

VecXc assemble_rhs(const PlaneWaveSource& source, const MaterialProfile& m,
                   const ModeLattice& lattice, const VerticalMesh& mesh) {
  if ((source.alpha - lattice.alpha).norm() > 1e-12)
    throw std::invalid_argument("assemble_rhs: source quasi-momentum does not match the lattice");
  if (std::abs(source.k - lattice.k) > 1e-12 * std::max(1.0, lattice.k))
    throw std::invalid_argument("assemble_rhs: source wave number does not match the lattice");

  const DofMap dofs{lattice.count(), mesh.node_count()};
  VecXc rhs = VecXc::Zero(dofs.total());
  const QuadLayout quad(mesh);
  const CombinedIncidentField inc(source);

  // Fourier slices of (1 - inv_eps) * curl_alpha H^{ir}_alpha per component.
  // For laterally uniform materials the product keeps the single transverse
  // frequency of the incident field, i.e. only the n = 0 slice survives.
  std::array<SliceTable, 3> src;
  if (m.laterally_uniform) {
    for (int c = 0; c < 3; ++c) {
      SliceTable t;
      t.max_mode = 2 * lattice.order;
      t.x3 = quad.x3;
      const int w = 2 * t.max_mode + 1;
      t.values = MatXc::Zero(static_cast<int>(quad.x3.size()), w * w);
      t.diagonal = true;
      src[static_cast<size_t>(c)] = std::move(t);
    }
    for (size_t i = 0; i < quad.x3.size(); ++i) {
      const Vec3d x(0.0, 0.0, quad.x3[i]);
      const Vec3c G = eval_curl_alpha_Hir(inc, x);
      const double contrast = 1.0 - m.inv_eps(x);
      for (int c = 0; c < 3; ++c)
        src[static_cast<size_t>(c)].values(static_cast<int>(i),
                                           src[static_cast<size_t>(c)].mode_index(0, 0)) =
            contrast * G(c);
    }
  } else {
    const int res = default_grid_resolution(lattice.order);
    for (int c = 0; c < 3; ++c) {
      auto f = [&](const Vec3d& x) { return (1.0 - m.inv_eps(x)) * eval_curl_alpha_Hir(inc, x)(c); };
      src[static_cast<size_t>(c)] = slice_function(f, 2 * lattice.order, quad.x3, res);
    }
  }

  for (int n = 0; n < lattice.count(); ++n) {
    const Vec2i nn = lattice.modes[static_cast<size_t>(n)];
    const Vec2d kap_n = lattice.kappa[static_cast<size_t>(n)];
    const int pidx = src[0].mode_index(nn.x(), nn.y());
    for (int e = 0; e < mesh.elements(); ++e) {
      const double dz = mesh.dz(e);
      for (int g = 0; g < quad.q; ++g) {
        const double w = quad.rule.weights[static_cast<size_t>(g)] * dz * cell_area;
        const double t = quad.rule.points[static_cast<size_t>(g)];
        const Vec3c S(src[0].values(quad.flat(e, g), pidx), src[1].values(quad.flat(e, g), pidx),
                      src[2].values(quad.flat(e, g), pidx));
        const double phi[2] = {1.0 - t, t};
        const double dphi[2] = {-1.0 / dz, 1.0 / dz};
        for (int cp = 0; cp < 3; ++cp)
          for (int li = 0; li < 2; ++li) {
            const int row = dofs.index(n, cp, e + li);
            if (row < 0) continue;
            const Vec3c curl_test = basis_curl(kap_n, cp, phi[li], dphi[li]);
            rhs(row) += w * (S.x() * std::conj(curl_test.x()) + S.y() * std::conj(curl_test.y()) +
                             S.z() * std::conj(curl_test.z()));
          }
      }
    }
  }
  return rhs;
}

cplx evaluate_B(const DiscreteField& H, const DiscreteField& F, const MaterialProfile& m,
                cplx rho, int resolution) {
  if (!H.lattice.same_discretization(F.lattice) || !H.mesh.same_nodes(F.mesh))
    throw std::invalid_argument("evaluate_B: fields live on different discretizations");
  const ModeLattice& lat = H.lattice;
  const int res = resolution > 0 ? resolution : default_grid_resolution(lat.order);
  const double k2 = lat.k * lat.k;
  const GaussRule rule = gauss_rule(H.mesh.quad_order);

  cplx volume(0.0);
  const double cell_weight = cell_area / (static_cast<double>(res) * res);
  std::vector<Vec3c> curlH(static_cast<size_t>(lat.count())), curlF(curlH), valH(curlH), valF(curlH);
  std::vector<cplx> divH(static_cast<size_t>(lat.count())), divF(divH);

  for (int e = 0; e < H.mesh.elements(); ++e) {
    const double dz = H.mesh.dz(e);
    for (size_t g = 0; g < rule.points.size(); ++g) {
      const double t = rule.points[g];
      const double x3 = H.mesh.nodes[static_cast<size_t>(e)] + t * dz;
      for (int mm = 0; mm < lat.count(); ++mm) {
        const Vec3c vH = H.mode_value(mm, e, t), dH = H.mode_deriv(mm, e);
        const Vec3c vF = F.mode_value(mm, e, t), dF = F.mode_deriv(mm, e);
        valH[static_cast<size_t>(mm)] = vH;
        valF[static_cast<size_t>(mm)] = vF;
        curlH[static_cast<size_t>(mm)] = mode_curl(lat, mm, vH, dH);
        curlF[static_cast<size_t>(mm)] = mode_curl(lat, mm, vF, dF);
        divH[static_cast<size_t>(mm)] = mode_div(lat, mm, vH, dH);
        divF[static_cast<size_t>(mm)] = mode_div(lat, mm, vF, dF);
      }
      cplx plane(0.0);
      for (int i2 = 0; i2 < res; ++i2)
        for (int i1 = 0; i1 < res; ++i1) {
          const double x1 = 2.0 * pi * i1 / res, x2 = 2.0 * pi * i2 / res;
          Vec3c cH = Vec3c::Zero(), cF = Vec3c::Zero(), vH = Vec3c::Zero(), vF = Vec3c::Zero();
          cplx dH(0.0), dF(0.0);
          for (int mm = 0; mm < lat.count(); ++mm) {
            const Vec2i n = lat.modes[static_cast<size_t>(mm)];
            const cplx ph = std::exp(iu * (n.x() * x1 + n.y() * x2));
            cH += curlH[static_cast<size_t>(mm)] * ph;
            cF += curlF[static_cast<size_t>(mm)] * ph;
            vH += valH[static_cast<size_t>(mm)] * ph;
            vF += valF[static_cast<size_t>(mm)] * ph;
            dH += divH[static_cast<size_t>(mm)] * ph;
            dF += divF[static_cast<size_t>(mm)] * ph;
          }
          const double a = m.inv_eps(Vec3d(x1, x2, x3));
          cplx point = a * (cH.x() * std::conj(cF.x()) + cH.y() * std::conj(cF.y()) +
                            cH.z() * std::conj(cF.z()));
          point -= k2 * (vH.x() * std::conj(vF.x()) + vH.y() * std::conj(vF.y()) +
                         vH.z() * std::conj(vF.z()));
          point += rho * dH * std::conj(dF);
          plane += point;
        }
      volume += plane * cell_weight * rule.weights[g] * dz;
    }
  }

  // Transparent-boundary terms at the top, mode-wise.
  cplx boundary(0.0);
  const TraceCoefficients trH = H.top_trace(), trF = F.top_trace();
  for (int mm = 0; mm < lat.count(); ++mm) {
    const Vec3c Hn = trH.values.col(mm), Fn = trF.values.col(mm);
    const Vec3c cross = e3_cross_R_cross_symbol(lat, mm, Hn);
    const Vec3c r = lat.dtn[static_cast<size_t>(mm)];
    const cplx rdotH = iu * (r.x() * Hn.x() + r.y() * Hn.y() + r.z() * Hn.z());
    boundary += cross.x() * std::conj(Fn.x()) + cross.y() * std::conj(Fn.y()) +
                cross.z() * std::conj(Fn.z());
    boundary -= rdotH * std::conj(Fn.z());
  }
  return volume + cell_area * boundary;
}

DiscreteField field_from_dofs(const DiscreteSystem& sys, const VecXc& x) {
  if (x.size() != sys.dim()) throw std::invalid_argument("field_from_dofs: size mismatch");
  DiscreteField H(sys.lattice, sys.mesh);
  for (int m = 0; m < sys.dofs.modes; ++m)
    for (int c = 0; c < 3; ++c)
      for (int j = 0; j < sys.dofs.nodes; ++j) {
        const int i = sys.dofs.index(m, c, j);
        if (i >= 0) H.at(m, c, j) = x(i);
      }
  return H;
}

VecXc dofs_from_field(const DiscreteSystem& sys, const DiscreteField& H) {
  if (!H.lattice.same_discretization(sys.lattice) || !H.mesh.same_nodes(sys.mesh))
    throw std::invalid_argument("dofs_from_field: discretization mismatch");
  VecXc x = VecXc::Zero(sys.dim());
  for (int m = 0; m < sys.dofs.modes; ++m)
    for (int c = 0; c < 3; ++c)
      for (int j = 0; j < sys.dofs.nodes; ++j) {
        const int i = sys.dofs.index(m, c, j);
        if (i >= 0) x(i) = H.at(m, c, j);
      }
  return x;
}

} // namespace qpmax

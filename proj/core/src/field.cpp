// SPDX-License-Identifier: Apache-2.0
#include "qpmax/field.hpp"

#include <stdexcept>

namespace qpmax {

DiscreteField::DiscreteField(const ModeLattice& lat, const VerticalMesh& msh)
    : lattice(lat), mesh(msh),
      coeffs(VecXc::Zero(static_cast<Eigen::Index>(lat.count()) * 3 * msh.node_count())) {}

Vec3c DiscreteField::mode_value(int mode, int element, double t) const {
  Vec3c v;
  for (int c = 0; c < 3; ++c) {
    const cplx a = at(mode, c, element), b = at(mode, c, element + 1);
    v(c) = a + (b - a) * t;
  }
  return v;
}

Vec3c DiscreteField::mode_deriv(int mode, int element) const {
  const double dz = mesh.dz(element);
  Vec3c v;
  for (int c = 0; c < 3; ++c)
    v(c) = (at(mode, c, element + 1) - at(mode, c, element)) / dz;
  return v;
}

TraceCoefficients DiscreteField::top_trace() const {
  TraceCoefficients tr;
  tr.lattice = lattice;
  tr.values = MatXc::Zero(3, lattice.count());
  const int top = node_count() - 1;
  for (int m = 0; m < lattice.count(); ++m)
    for (int c = 0; c < 3; ++c) tr.values(c, m) = at(m, c, top);
  return tr;
}

TraceCoefficients DiscreteField::top_trace_deriv() const {
  TraceCoefficients tr;
  tr.lattice = lattice;
  tr.values = MatXc::Zero(3, lattice.count());
  const int e = mesh.elements() - 1;
  for (int m = 0; m < lattice.count(); ++m) {
    const Vec3c d = mode_deriv(m, e);
    for (int c = 0; c < 3; ++c) tr.values(c, m) = d(c);
  }
  return tr;
}

void DiscreteField::enforce_essential() {
  for (int m = 0; m < lattice.count(); ++m) at(m, 2, 0) = cplx(0.0);
}

Vec3c mode_curl(const ModeLattice& lat, int mode, const Vec3c& value, const Vec3c& deriv) {
  const Vec2d kap = lat.kappa[static_cast<size_t>(mode)];
  return Vec3c(iu * kap.y() * value.z() - deriv.y(),
               deriv.x() - iu * kap.x() * value.z(),
               iu * (kap.x() * value.y() - kap.y() * value.x()));
}

cplx mode_div(const ModeLattice& lat, int mode, const Vec3c& value, const Vec3c& deriv) {
  const Vec2d kap = lat.kappa[static_cast<size_t>(mode)];
  return iu * (kap.x() * value.x() + kap.y() * value.y()) + deriv.z();
}

namespace {
// Exact integral over one element of |a(1-t) + b t|^2 times dz.
double seg_l2(const cplx& a, const cplx& b, double dz) {
  return dz * (std::norm(a) + std::norm(b) + (std::conj(a) * b).real()) / 3.0;
}
} // namespace

double l2_norm_sq(const DiscreteField& H) {
  double acc = 0.0;
  for (int m = 0; m < H.lattice.count(); ++m)
    for (int c = 0; c < 3; ++c)
      for (int e = 0; e < H.mesh.elements(); ++e)
        acc += seg_l2(H.at(m, c, e), H.at(m, c, e + 1), H.mesh.dz(e));
  return cell_area * acc;
}

double grad_alpha_norm_sq(const DiscreteField& H) {
  double acc = 0.0;
  for (int m = 0; m < H.lattice.count(); ++m) {
    const double kap2 = H.lattice.kappa[static_cast<size_t>(m)].squaredNorm();
    for (int c = 0; c < 3; ++c)
      for (int e = 0; e < H.mesh.elements(); ++e) {
        const cplx a = H.at(m, c, e), b = H.at(m, c, e + 1);
        const double dz = H.mesh.dz(e);
        acc += kap2 * seg_l2(a, b, dz) + std::norm(b - a) / dz;
      }
  }
  return cell_area * acc;
}

double div_alpha_norm_sq(const DiscreteField& H) {
  double acc = 0.0;
  for (int m = 0; m < H.lattice.count(); ++m)
    for (int e = 0; e < H.mesh.elements(); ++e) {
      const double dz = H.mesh.dz(e);
      const Vec3c va = H.mode_value(m, e, 0.0), vb = H.mode_value(m, e, 1.0);
      const Vec3c dv = H.mode_deriv(m, e);
      const cplx da = mode_div(H.lattice, m, va, dv);
      const cplx db = mode_div(H.lattice, m, vb, dv);
      acc += seg_l2(da, db, dz);
    }
  return cell_area * acc;
}

DiscreteField random_field(const ModeLattice& lat, const VerticalMesh& mesh,
                           std::mt19937_64& rng) {
  DiscreteField H(lat, mesh);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (Eigen::Index i = 0; i < H.coeffs.size(); ++i) H.coeffs(i) = cplx(uni(rng), uni(rng));
  H.enforce_essential();
  return H;
}

void synthesize_field_plane(const DiscreteField& H, double x3, std::array<CellGrid, 3>& out) {
  const int res = out[0].n1;
  // Locate the element containing x3 (top node maps into the last element).
  int e = 0;
  while (e + 1 < H.mesh.elements() && x3 > H.mesh.nodes[static_cast<size_t>(e) + 1]) ++e;
  const double t = (x3 - H.mesh.nodes[static_cast<size_t>(e)]) / H.mesh.dz(e);

  TraceCoefficients tr;
  tr.lattice = H.lattice;
  tr.values = MatXc::Zero(3, H.lattice.count());
  for (int m = 0; m < H.lattice.count(); ++m) {
    const Vec3c v = H.mode_value(m, e, t);
    for (int c = 0; c < 3; ++c) tr.values(c, m) = v(c);
  }
  for (int c = 0; c < 3; ++c) out[static_cast<size_t>(c)] = synthesize_trace(tr, res, out[static_cast<size_t>(c)].n2, c);
}

} // namespace qpmax

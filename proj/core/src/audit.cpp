// SPDX-License-Identifier: Apache-2.0
#include "qpmax/audit.hpp"

#include "qpmax/boundary.hpp"

#include <cmath>
#include <stdexcept>

namespace qpmax {

double normalized_residual(const cplx& left, const cplx& right) {
  return std::abs(left - right) / std::max({1.0, std::abs(left), std::abs(right)});
}

namespace {

// alpha-twisted transverse helpers from a plain Jacobian J(j,c) = d_j F_c.
struct TwistedDerivatives {
  Vec3c curl_aT_vec;  // (d2^a F3, -d1^a F3, 0)
  Vec3c grad_aT_F3;   // (d1^a F3, d2^a F3, 0)
  cplx curl_aT;       // d1^a F2 - d2^a F1
  cplx div_aT;        // d1^a F1 + d2^a F2
  Vec3c d3_FT;        // (d3 F1, d3 F2, 0)
};

TwistedDerivatives twisted(const Eigen::Matrix3cd& J, const Vec3c& F, const Vec2d& alpha) {
  auto da = [&](int j, int c) { return J(j, c) + iu * (j == 0 ? alpha.x() : alpha.y()) * F(c); };
  TwistedDerivatives t;
  t.curl_aT_vec = Vec3c(da(1, 2), -da(0, 2), cplx(0.0));
  t.grad_aT_F3 = Vec3c(da(0, 2), da(1, 2), cplx(0.0));
  t.curl_aT = da(0, 1) - da(1, 0);
  t.div_aT = da(0, 0) + da(1, 1);
  t.d3_FT = Vec3c(J(2, 0), J(2, 1), cplx(0.0));
  return t;
}

inline Vec3c e3_cross(const Vec3c& v) { return Vec3c(-v.y(), v.x(), cplx(0.0)); }

inline cplx pair3(const Vec3c& u, const Vec3c& v) {
  // u . conj(v) without Eigen's left-conjugation convention.
  return u.x() * std::conj(v.x()) + u.y() * std::conj(v.y()) + u.z() * std::conj(v.z());
}

// Visit the quadrature points of the cell x (0,h): equispaced transverse
// grid, composite Gauss vertically on a uniform element subdivision. The
// callback receives the point and its full quadrature weight.
template <typename F>
void visit_volume(double h, const AuditQuadrature& quad, F&& f) {
  const GaussRule rule = gauss_rule(quad.gauss_order);
  const double dz = h / quad.elements;
  const double wt = cell_area / (static_cast<double>(quad.resolution) * quad.resolution);
  for (int e = 0; e < quad.elements; ++e)
    for (size_t g = 0; g < rule.points.size(); ++g) {
      const double z = (e + rule.points[g]) * dz;
      const double w = wt * rule.weights[g] * dz;
      for (int i2 = 0; i2 < quad.resolution; ++i2)
        for (int i1 = 0; i1 < quad.resolution; ++i1)
          f(Vec3d(2.0 * pi * i1 / quad.resolution, 2.0 * pi * i2 / quad.resolution, z), w);
    }
}

template <typename F>
void visit_plane(double z, const AuditQuadrature& quad, F&& f) {
  const double w = cell_area / (static_cast<double>(quad.resolution) * quad.resolution);
  for (int i2 = 0; i2 < quad.resolution; ++i2)
    for (int i1 = 0; i1 < quad.resolution; ++i1)
      f(Vec3d(2.0 * pi * i1 / quad.resolution, 2.0 * pi * i2 / quad.resolution, z), w);
}

std::string quad_string(const AuditQuadrature& q) {
  return "elements=" + std::to_string(q.elements) + " resolution=" + std::to_string(q.resolution) +
         " gauss=" + std::to_string(q.gauss_order);
}

} // namespace

AuditResult audit_curl_decomposition(const TrigField& F, double h, int samples) {
  double worst = 0.0;
  cplx worst_l(0.0), worst_r(0.0);
  for (int i3 = 0; i3 < samples; ++i3)
    for (int i2 = 0; i2 < samples; ++i2)
      for (int i1 = 0; i1 < samples; ++i1) {
        const Vec3d x((i1 + 0.5) * 2.0 * pi / samples, (i2 + 0.5) * 2.0 * pi / samples,
                      (i3 + 0.5) * h / samples);
        const Vec3c curl = F.curl_alpha(x);
        const auto t = twisted(F.jacobian(x), F.value(x), F.alpha());
        const double left = curl.squaredNorm();
        const double right = std::norm(t.curl_aT) + t.curl_aT_vec.squaredNorm() +
                             t.d3_FT.squaredNorm() -
                             2.0 * std::real(pair3(t.d3_FT, t.grad_aT_F3));
        const double res = normalized_residual(cplx(left), cplx(right));
        if (res > worst) {
          worst = res;
          worst_l = left;
          worst_r = right;
        }
      }
  AuditResult r;
  r.identity = "curl_decomposition";
  r.left = worst_l;
  r.right = worst_r;
  r.residual = worst;
  r.resolution = "samples=" + std::to_string(samples);
  return r;
}

AuditResult audit_lemma_weighted_curl(const TrigField& H, const MaterialProfile& m,
                                      const AuditQuadrature& quad) {
  const double h = m.h;
  const Vec2d alpha = H.alpha();

  // Single volume pass accumulating the pairing and the three volume terms.
  double lhs = 0.0, t1 = 0.0, t3 = 0.0;
  visit_volume(h, quad, [&](const Vec3d& x, double w) {
    const Vec3c curl = H.curl_alpha(x);
    const Vec3c d3H = H.d3(x);
    const double a = m.inv_eps(x);
    const Vec3d ga = m.grad_inv_eps(x);
    const Vec3c weighted = cross3(ga.cast<cplx>(), curl) + a * H.curl_alpha_curl_alpha(x);
    lhs += w * 2.0 * std::real(x.z() * pair3(d3H, weighted));
    t1 += -w * (a + x.z() * ga.z()) * curl.squaredNorm();
    t3 += w * 2.0 * std::real(a * pair3(e3_cross(d3H), curl));
  });

  double t2 = 0.0, t4 = 0.0;
  visit_plane(h, quad, [&](const Vec3d& x, double w) {
    const Vec3c curl = H.curl_alpha(x);
    const auto t = twisted(H.jacobian(x), H.value(x), alpha);
    t2 += w * h * curl.squaredNorm();
    t4 += w * 2.0 * h * std::real(pair3(t.d3_FT, e3_cross(curl)));
  });

  AuditResult r;
  r.identity = "weighted_curl_vertical_pairing";
  r.left = lhs;
  r.right = t1 + t2 + t3 + t4;
  r.residual = normalized_residual(r.left, r.right);
  r.resolution = quad_string(quad);
  return r;
}

AuditResult audit_lemma_vertical_shear(const TrigField& H, const MaterialProfile& m,
                                       const AuditQuadrature& quad) {
  const double h = m.h;
  const Vec2d alpha = H.alpha();

  double lhs = 0.0, r1 = 0.0, r2 = 0.0, r3 = 0.0;
  visit_volume(h, quad, [&](const Vec3d& x, double w) {
    const Vec3c curl = H.curl_alpha(x);
    const Vec3c d3H = H.d3(x);
    const Vec3c val = H.value(x);
    const cplx div = H.div_alpha(x);
    const double a = m.inv_eps(x);
    const Vec3d ga = m.grad_inv_eps(x);
    lhs += w * 2.0 * std::real(a * pair3(e3_cross(d3H), curl));
    r1 += w * 2.0 * a * d3H.squaredNorm();
    const cplx gdot = ga.x() * d3H.x() + ga.y() * d3H.y() + ga.z() * d3H.z();
    r2 += w * 2.0 * std::real(gdot * std::conj(val.z()));
    const cplx dz_aH3 = ga.z() * std::conj(val.z()) + a * std::conj(d3H.z());
    r3 += -w * 2.0 * std::real(dz_aH3 * div);
  });

  double r4 = 0.0;
  visit_plane(h, quad, [&](const Vec3d& x, double w) {
    r4 += -w * 2.0 * std::real((H.d3(x).z() - H.div_alpha(x)) * std::conj(H.value(x).z()));
  });
  double r5 = 0.0;
  visit_plane(0.0, quad, [&](const Vec3d& x, double w) {
    const auto t = twisted(H.jacobian(x), H.value(x), alpha);
    r5 += -w * 2.0 * std::real(m.inv_eps(x) * std::conj(H.value(x).z()) * t.div_aT);
  });

  AuditResult r;
  r.identity = "vertical_shear_pairing";
  r.left = lhs;
  r.right = r1 + r2 + r3 + r4 + r5;
  r.residual = normalized_residual(r.left, r.right);
  r.resolution = quad_string(quad);
  return r;
}

AuditResult audit_poincare(const std::function<double(double)>& u,
                           const std::function<double(double)>& du, double h, int elements) {
  const GaussRule rule = gauss_rule(5);
  double uu = 0.0, dudu = 0.0;
  const double dz = h / elements;
  for (int e = 0; e < elements; ++e)
    for (size_t g = 0; g < rule.points.size(); ++g) {
      const double z = (e + rule.points[g]) * dz;
      uu += u(z) * u(z) * rule.weights[g] * dz;
      dudu += du(z) * du(z) * rule.weights[g] * dz;
    }
  AuditResult r;
  r.identity = "poincare_vertical";
  const double ratio = dudu > 0.0 ? 2.0 * uu / (h * h * dudu) : 0.0;
  r.left = ratio;
  r.right = 1.0;
  r.residual = std::max(0.0, ratio - 1.0);
  r.resolution = "analytic elements=" + std::to_string(elements);
  return r;
}

AuditResult audit_poincare(const std::vector<cplx>& nodal, const VerticalMesh& mesh) {
  if (nodal.size() != static_cast<size_t>(mesh.node_count()))
    throw std::invalid_argument("audit_poincare: nodal size does not match mesh");
  if (std::abs(nodal.front()) != 0.0)
    throw std::invalid_argument("audit_poincare: field must vanish at the plate");
  double uu = 0.0, dudu = 0.0;
  for (int e = 0; e < mesh.elements(); ++e) {
    const cplx a = nodal[static_cast<size_t>(e)], b = nodal[static_cast<size_t>(e) + 1];
    const double dz = mesh.dz(e);
    uu += dz * (std::norm(a) + std::norm(b) + (std::conj(a) * b).real()) / 3.0;
    dudu += std::norm(b - a) / dz;
  }
  AuditResult r;
  r.identity = "poincare_vertical";
  const double h = mesh.h();
  const double ratio = dudu > 0.0 ? 2.0 * uu / (h * h * dudu) : 0.0;
  r.left = ratio;
  r.right = 1.0;
  r.residual = std::max(0.0, ratio - 1.0);
  r.resolution = "nodal elements=" + std::to_string(mesh.elements());
  return r;
}

namespace {

// Plane evaluations of a discrete field and its derived quantities at a
// fixed height, by direct mode summation.
struct PlaneEval {
  const DiscreteField& H;
  int element;
  double t;
  std::vector<Vec3c> vals, d3s, curls;

  PlaneEval(const DiscreteField& field, double z) : H(field) {
    element = 0;
    while (element + 1 < H.mesh.elements() && z > H.mesh.nodes[static_cast<size_t>(element) + 1])
      ++element;
    t = (z - H.mesh.nodes[static_cast<size_t>(element)]) / H.mesh.dz(element);
    const int mcount = H.lattice.count();
    vals.resize(static_cast<size_t>(mcount));
    d3s.resize(static_cast<size_t>(mcount));
    curls.resize(static_cast<size_t>(mcount));
    for (int m = 0; m < mcount; ++m) {
      const Vec3c v = H.mode_value(m, element, t);
      const Vec3c d = H.mode_deriv(m, element);
      vals[static_cast<size_t>(m)] = v;
      d3s[static_cast<size_t>(m)] = d;
      curls[static_cast<size_t>(m)] = mode_curl(H.lattice, m, v, d);
    }
  }

  void sample(double x1, double x2, Vec3c& val, Vec3c& d3, Vec3c& curl) const {
    val = d3 = curl = Vec3c::Zero();
    for (int m = 0; m < H.lattice.count(); ++m) {
      const Vec2i n = H.lattice.modes[static_cast<size_t>(m)];
      const cplx ph = std::exp(iu * (n.x() * x1 + n.y() * x2));
      val += vals[static_cast<size_t>(m)] * ph;
      d3 += d3s[static_cast<size_t>(m)] * ph;
      curl += curls[static_cast<size_t>(m)] * ph;
    }
  }
};

// int_Omega f(x, H, d3H, curl_alpha H) with the field's own mesh elements.
template <typename F>
double integrate_discrete(const DiscreteField& H, int resolution, F&& f) {
  const GaussRule rule = gauss_rule(H.mesh.quad_order);
  const double wt = cell_area / (static_cast<double>(resolution) * resolution);
  double acc = 0.0;
  for (int e = 0; e < H.mesh.elements(); ++e) {
    const double dz = H.mesh.dz(e);
    for (size_t g = 0; g < rule.points.size(); ++g) {
      const double z = H.mesh.nodes[static_cast<size_t>(e)] + rule.points[g] * dz;
      const PlaneEval plane(H, z);
      double sum = 0.0;
      for (int i2 = 0; i2 < resolution; ++i2)
        for (int i1 = 0; i1 < resolution; ++i1) {
          const double x1 = 2.0 * pi * i1 / resolution, x2 = 2.0 * pi * i2 / resolution;
          Vec3c val, d3, curl;
          plane.sample(x1, x2, val, d3, curl);
          sum += f(Vec3d(x1, x2, z), val, d3, curl);
        }
      acc += sum * wt * rule.weights[g] * dz;
    }
  }
  return acc;
}

double vertical_energy(const DiscreteField& H) {
  // int |d3 H|^2, exact for the piecewise-linear representation.
  double acc = 0.0;
  for (int m = 0; m < H.lattice.count(); ++m)
    for (int e = 0; e < H.mesh.elements(); ++e)
      acc += H.mode_deriv(m, e).squaredNorm() * H.mesh.dz(e);
  return cell_area * acc;
}

} // namespace

AuditResult rellich_residual(const DiscreteField& H, const MaterialProfile& m, int resolution) {
  const int res = resolution > 0 ? resolution : default_grid_resolution(H.lattice.order);

  const double v1 = integrate_discrete(
      H, res, [&](const Vec3d& x, const Vec3c&, const Vec3c& d3, const Vec3c&) {
        return 2.0 * m.inv_eps(x) * d3.squaredNorm();
      });
  const double v2 = integrate_discrete(
      H, res, [&](const Vec3d& x, const Vec3c&, const Vec3c&, const Vec3c& curl) {
        return -x.z() * m.grad_inv_eps(x).z() * curl.squaredNorm();
      });
  const double v3 = integrate_discrete(
      H, res, [&](const Vec3d& x, const Vec3c& val, const Vec3c& d3, const Vec3c&) {
        const cplx gdot = m.grad_inv_eps(x).cast<cplx>().transpose() * d3;
        return 2.0 * std::real(gdot * std::conj(val.z()));
      });

  const TraceCoefficients tr = H.top_trace();
  const double s1 = boundary_pairing(tr).real();
  double s2 = 0.0;
  for (int mm = 0; mm < H.lattice.count(); ++mm)
    s2 += 2.0 * H.lattice.beta[static_cast<size_t>(mm)].imag() * std::norm(tr.values(2, mm));
  s2 *= cell_area;

  AuditResult r;
  r.identity = "rellich_combination";
  r.left = v1 + v2 + v3 + s1 + s2;
  r.right = 0.0;
  const double norm2 = l2_norm_sq(H);
  r.residual = norm2 > 0.0 ? std::abs(r.left) / norm2 : 0.0;
  r.resolution = "resolution=" + std::to_string(res);
  return r;
}

EstimateReport estimate_lhs_bound(const DiscreteField& H, const MaterialProfile& m,
                                  const ConditionReport& report, int resolution) {
  EstimateReport rep;
  rep.conditions_pass = report.all_pass();
  if (!rep.conditions_pass)
    throw std::invalid_argument(
        "estimate_lhs_bound: the non-trapping conditions fail, the bound is not claimed");

  // Pick delta maximizing min(bracket(delta), (2 delta - 1)/delta).
  const double h = m.h;
  double best_c = 0.0, best_delta = 0.0;
  for (int i = 0; i < 400; ++i) {
    const double t = (i + 1) / 400.0;
    const double delta = 0.5 + t * 49.5; // (1/2, 50]
    const double bracket = 2.0 - 0.5 * delta * h * h * report.sup_grad_T * report.sup_grad_T -
                           std::sqrt(2.0) * h * report.sup_d3;
    if (bracket <= 0.0) continue;
    const double c = std::min(bracket, (2.0 * delta - 1.0) / delta);
    if (c > best_c) {
      best_c = c;
      best_delta = delta;
    }
  }
  rep.constant = best_c;
  rep.delta = best_delta;

  rep.lhs = best_c * vertical_energy(H);
  const int res = resolution > 0 ? resolution : default_grid_resolution(H.lattice.order);
  rep.rhs = integrate_discrete(
      H, res, [&](const Vec3d& x, const Vec3c&, const Vec3c&, const Vec3c& curl) {
        return x.z() * m.grad_inv_eps(x).z() * curl.squaredNorm();
      });
  rep.margin = rep.rhs - rep.lhs;
  rep.satisfied = rep.lhs <= rep.rhs + 1e-12 * std::max(1.0, std::abs(rep.rhs));
  return rep;
}

GardingFit fit_garding(const std::vector<GardingSample>& samples) {
  GardingFit fit;
  if (samples.empty()) return fit;
  // For a fixed c2, the best c1 is min_i (re_b + c2 l2)/grad2; scan c2.
  std::vector<double> c2_grid{0.0};
  for (int i = 0; i <= 240; ++i) c2_grid.push_back(std::pow(10.0, -3.0 + i * (10.0 / 240.0)));
  for (double c2 : c2_grid) {
    double c1 = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) {
      if (!(s.grad2 > 0.0)) continue;
      c1 = std::min(c1, (s.re_b + c2 * s.l2) / s.grad2);
    }
    if (std::isfinite(c1) && c1 > fit.c1) {
      fit.c1 = c1;
      fit.c2 = c2;
    }
  }
  fit.pass = fit.c1 > 0.0;
  fit.worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& s : samples)
    fit.worst_margin = std::min(fit.worst_margin, s.re_b + fit.c2 * s.l2 - fit.c1 * s.grad2);
  return fit;
}

std::vector<GardingSample> garding_samples(const DiscreteSystem& sys, int count,
                                           std::mt19937_64& rng) {
  std::vector<GardingSample> out;
  out.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    const DiscreteField H = random_field(sys.lattice, sys.mesh, rng);
    const VecXc x = dofs_from_field(sys, H);
    GardingSample s;
    s.re_b = x.dot(sys.apply(x)).real();
    s.grad2 = grad_alpha_norm_sq(H);
    s.l2 = l2_norm_sq(H);
    out.push_back(s);
  }
  return out;
}

} // namespace qpmax

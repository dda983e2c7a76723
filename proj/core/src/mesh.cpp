// SPDX-License-Identifier: Apache-2.0
#include "qpmax/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qpmax {

GaussRule gauss_rule(int order) {
  // Tabulated Gauss-Legendre nodes on (-1,1), mapped to (0,1).
  static const double p2 = 0.5773502691896257645091488;
  static const double p3 = 0.7745966692414833770358531;
  static const double p4a = 0.3399810435848562648026658, p4b = 0.8611363115940525752239465;
  static const double w4a = 0.6521451548625461426269361, w4b = 0.3478548451374538573730639;
  static const double p5a = 0.5384693101056830910363144, p5b = 0.9061798459386639927976269;
  static const double w5a = 0.4786286704993664680412915, w5b = 0.2369268850561890875142640;
  static const double w5c = 0.5688888888888888888888889;

  GaussRule r;
  std::vector<double> x, w;
  switch (order) {
    case 1: x = {0.0}; w = {2.0}; break;
    case 2: x = {-p2, p2}; w = {1.0, 1.0}; break;
    case 3: x = {-p3, 0.0, p3}; w = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0}; break;
    case 4: x = {-p4b, -p4a, p4a, p4b}; w = {w4b, w4a, w4a, w4b}; break;
    case 5: x = {-p5b, -p5a, 0.0, p5a, p5b}; w = {w5b, w5a, w5c, w5a, w5b}; break;
    default: throw std::invalid_argument("gauss_rule: order must be in 1..5");
  }
  for (size_t i = 0; i < x.size(); ++i) {
    r.points.push_back(0.5 * (x[i] + 1.0));
    r.weights.push_back(0.5 * w[i]);
  }
  return r;
}

bool VerticalMesh::has_node_at(double z, double tol) const {
  for (double zn : nodes)
    if (std::abs(zn - z) <= tol * std::max(1.0, h())) return true;
  return false;
}

bool VerticalMesh::same_nodes(const VerticalMesh& o) const {
  if (nodes.size() != o.nodes.size()) return false;
  for (size_t i = 0; i < nodes.size(); ++i)
    if (std::abs(nodes[i] - o.nodes[i]) > 1e-14 * std::max(1.0, h())) return false;
  return true;
}

VerticalMesh make_vertical_mesh(int elements, double h,
                                const std::vector<double>& required_nodes, int quad_order) {
  if (elements < 1) throw std::invalid_argument("make_vertical_mesh: need at least one element");
  if (!(h > 0.0)) throw std::invalid_argument("make_vertical_mesh: h must be positive");
  if (quad_order < 2 || quad_order > 5)
    throw std::invalid_argument("make_vertical_mesh: quadrature order must be in 2..5");

  VerticalMesh mesh;
  mesh.quad_order = quad_order;
  mesh.nodes.resize(static_cast<size_t>(elements) + 1);
  for (int j = 0; j <= elements; ++j) mesh.nodes[static_cast<size_t>(j)] = h * j / elements;
  mesh.nodes.back() = h;

  for (double r : required_nodes) {
    if (!(r > 0.0) || !(r < h)) continue; // endpoints are always nodes
    // Snap the nearest interior node (a no-op when r already is a node).
    int best = 1;
    double dist = std::abs(mesh.nodes[1] - r);
    for (int j = 2; j < elements; ++j) {
      const double d = std::abs(mesh.nodes[static_cast<size_t>(j)] - r);
      if (d < dist) {
        dist = d;
        best = j;
      }
    }
    mesh.nodes[static_cast<size_t>(best)] = r;
  }
  std::sort(mesh.nodes.begin(), mesh.nodes.end());
  for (int e = 0; e < elements; ++e)
    if (!(mesh.dz(e) > 1e-12 * h))
      throw std::invalid_argument("make_vertical_mesh: required nodes collapse an element");
  return mesh;
}

} // namespace qpmax

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace qpmax {

/// Gauss-Legendre rule on (0,1), 1 to 5 points.
struct GaussRule {
  std::vector<double> points;
  std::vector<double> weights;
};
GaussRule gauss_rule(int order);

/// 1D nodal mesh on (0,h) for the vertical direction. Piecewise-linear
/// elements; nodes can be snapped onto material interfaces so that the
/// collar boundary h-eta is always a mesh node.
struct VerticalMesh {
  std::vector<double> nodes; // 0 = z0 < ... < zM = h
  int quad_order = 3;

  int elements() const { return static_cast<int>(nodes.size()) - 1; }
  int node_count() const { return static_cast<int>(nodes.size()); }
  double h() const { return nodes.back(); }
  double dz(int e) const { return nodes[static_cast<size_t>(e) + 1] - nodes[static_cast<size_t>(e)]; }
  bool has_node_at(double z, double tol = 1e-12) const;
  bool same_nodes(const VerticalMesh& o) const;
};

/// Uniform M-element mesh with interior nodes snapped to the required
/// points (collar boundary, material interfaces).
VerticalMesh make_vertical_mesh(int elements, double h,
                                const std::vector<double>& required_nodes = {},
                                int quad_order = 3);

} // namespace qpmax

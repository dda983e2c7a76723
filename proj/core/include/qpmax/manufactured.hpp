// SPDX-License-Identifier: Apache-2.0
//
// Manufactured vector fields for the identity audits: finite sums of
// biperiodic harmonics e^{i n.x} times smooth vertical profiles, so that
// values and first/second derivatives are available in closed form.
#pragma once

#include "qpmax/types.hpp"

#include <functional>
#include <random>
#include <vector>

namespace qpmax {

/// Closed-form vertical profile with three derivatives.
struct Profile1D {
  std::function<double(double)> f, df, d2f, d3f;

  static Profile1D polynomial(std::vector<double> coeffs); // sum c_j z^j
  static Profile1D sinusoid(double amp, double freq, double phase); // amp sin(freq z + phase)
  static Profile1D constant(double value) { return polynomial({value}); }
  /// Profile whose j-th derivative is the base's (j+1)-th.
  Profile1D shifted() const;
};

struct HarmonicTerm {
  Vec2i n;
  Vec3c amplitude;
  Profile1D profile;
};

/// F(x) = sum_t amplitude_t * profile_t(x3) * e^{i n_t.x}, with a fixed
/// quasi-momentum entering all alpha-twisted differential operators.
class TrigField {
 public:
  TrigField() = default;
  TrigField(std::vector<HarmonicTerm> terms, const Vec2d& alpha)
      : terms_(std::move(terms)), alpha_(alpha) {}

  const Vec2d& alpha() const { return alpha_; }
  const std::vector<HarmonicTerm>& terms() const { return terms_; }

  Vec3c value(const Vec3d& x) const;
  /// du(j, c) = d_j F_c (plain partial derivatives, no alpha twist).
  Eigen::Matrix3cd jacobian(const Vec3d& x) const;
  Vec3c d3(const Vec3d& x) const;
  Vec3c d3d3(const Vec3d& x) const;

  Vec3c curl_alpha(const Vec3d& x) const;
  Vec3c curl_alpha_curl_alpha(const Vec3d& x) const;
  cplx div_alpha(const Vec3d& x) const;
  /// d/dx3 of curl_alpha F (needed for curl of material-weighted curls).
  Vec3c curl_alpha_d3(const Vec3d& x) const;

  /// Gradient field nabla_alpha phi of a scalar harmonic phi; curl_alpha of
  /// the result vanishes identically.
  static TrigField gradient_field(const Vec2i& n, const Profile1D& profile, const Vec2d& alpha);

 private:
  std::vector<HarmonicTerm> terms_;
  Vec2d alpha_{0.0, 0.0};
};

/// Random band-limited field: modes within |n|_inf <= max_mode, mixed
/// polynomial/sinusoid vertical profiles with O(1) coefficients.
TrigField random_trig_field(int max_mode, const Vec2d& alpha, std::mt19937_64& rng,
                            int term_count = 4);

} // namespace qpmax

// SPDX-License-Identifier: Apache-2.0
#include "qpmax/manufactured.hpp"

#include <cmath>
#include <stdexcept>

namespace qpmax {

Profile1D Profile1D::polynomial(std::vector<double> coeffs) {
  auto eval = [](const std::vector<double>& c, double z, int deriv) {
    double acc = 0.0;
    for (size_t j = c.size(); j-- > 0;) {
      double fac = 1.0;
      const int jj = static_cast<int>(j);
      if (jj < deriv) continue;
      for (int d = 0; d < deriv; ++d) fac *= (jj - d);
      acc += c[j] * fac * std::pow(z, jj - deriv);
    }
    return acc;
  };
  Profile1D p;
  p.f = [coeffs, eval](double z) { return eval(coeffs, z, 0); };
  p.df = [coeffs, eval](double z) { return eval(coeffs, z, 1); };
  p.d2f = [coeffs, eval](double z) { return eval(coeffs, z, 2); };
  p.d3f = [coeffs, eval](double z) { return eval(coeffs, z, 3); };
  return p;
}

Profile1D Profile1D::shifted() const {
  Profile1D p;
  p.f = df;
  p.df = d2f;
  p.d2f = d3f;
  p.d3f = [](double) -> double {
    throw std::logic_error("Profile1D::shifted: fourth derivative not tracked");
  };
  return p;
}

Profile1D Profile1D::sinusoid(double amp, double freq, double phase) {
  Profile1D p;
  p.f = [=](double z) { return amp * std::sin(freq * z + phase); };
  p.df = [=](double z) { return amp * freq * std::cos(freq * z + phase); };
  p.d2f = [=](double z) { return -amp * freq * freq * std::sin(freq * z + phase); };
  p.d3f = [=](double z) { return -amp * freq * freq * freq * std::cos(freq * z + phase); };
  return p;
}

namespace {
inline cplx harmonic(const Vec2i& n, const Vec3d& x) {
  return std::exp(iu * (n.x() * x.x() + n.y() * x.y()));
}
} // namespace

Vec3c TrigField::value(const Vec3d& x) const {
  Vec3c v = Vec3c::Zero();
  for (const auto& t : terms_) v += t.amplitude * t.profile.f(x.z()) * harmonic(t.n, x);
  return v;
}

Eigen::Matrix3cd TrigField::jacobian(const Vec3d& x) const {
  Eigen::Matrix3cd J = Eigen::Matrix3cd::Zero();
  for (const auto& t : terms_) {
    const cplx ph = harmonic(t.n, x);
    const double f = t.profile.f(x.z()), df = t.profile.df(x.z());
    for (int c = 0; c < 3; ++c) {
      J(0, c) += iu * static_cast<double>(t.n.x()) * t.amplitude(c) * f * ph;
      J(1, c) += iu * static_cast<double>(t.n.y()) * t.amplitude(c) * f * ph;
      J(2, c) += t.amplitude(c) * df * ph;
    }
  }
  return J;
}

Vec3c TrigField::d3(const Vec3d& x) const {
  Vec3c v = Vec3c::Zero();
  for (const auto& t : terms_) v += t.amplitude * t.profile.df(x.z()) * harmonic(t.n, x);
  return v;
}

Vec3c TrigField::d3d3(const Vec3d& x) const {
  Vec3c v = Vec3c::Zero();
  for (const auto& t : terms_) v += t.amplitude * t.profile.d2f(x.z()) * harmonic(t.n, x);
  return v;
}

namespace {
// curl of a single harmonic term with the alpha twist: (i kappa + e3 d3) x (A f(z) e^{inx}).
inline Vec3c term_curl(const Vec2d& kappa, const Vec3c& A, double f, double df) {
  return Vec3c(iu * kappa.y() * A.z() * f - A.y() * df,
               A.x() * df - iu * kappa.x() * A.z() * f,
               iu * (kappa.x() * A.y() - kappa.y() * A.x()) * f);
}
} // namespace

Vec3c TrigField::curl_alpha(const Vec3d& x) const {
  Vec3c v = Vec3c::Zero();
  for (const auto& t : terms_) {
    const Vec2d kap = t.n.cast<double>() + alpha_;
    v += term_curl(kap, t.amplitude, t.profile.f(x.z()), t.profile.df(x.z())) * harmonic(t.n, x);
  }
  return v;
}

Vec3c TrigField::curl_alpha_d3(const Vec3d& x) const {
  Vec3c v = Vec3c::Zero();
  for (const auto& t : terms_) {
    const Vec2d kap = t.n.cast<double>() + alpha_;
    v += term_curl(kap, t.amplitude, t.profile.df(x.z()), t.profile.d2f(x.z())) * harmonic(t.n, x);
  }
  return v;
}

Vec3c TrigField::curl_alpha_curl_alpha(const Vec3d& x) const {
  Vec3c v = Vec3c::Zero();
  for (const auto& t : terms_) {
    const Vec2d kap = t.n.cast<double>() + alpha_;
    const double f = t.profile.f(x.z()), df = t.profile.df(x.z()), d2f = t.profile.d2f(x.z());
    // First curl expressed per term as (value part, derivative part):
    // C(z) = term_curl(kap, A, f, df); its z-derivative is term_curl(kap, A, df, d2f).
    const Vec3c C = term_curl(kap, t.amplitude, f, df);
    const Vec3c dC = term_curl(kap, t.amplitude, df, d2f);
    v += Vec3c(iu * kap.y() * C.z() - dC.y(), dC.x() - iu * kap.x() * C.z(),
               iu * (kap.x() * C.y() - kap.y() * C.x())) *
         harmonic(t.n, x);
  }
  return v;
}

cplx TrigField::div_alpha(const Vec3d& x) const {
  cplx v(0.0);
  for (const auto& t : terms_) {
    const Vec2d kap = t.n.cast<double>() + alpha_;
    v += (iu * (kap.x() * t.amplitude.x() + kap.y() * t.amplitude.y()) * t.profile.f(x.z()) +
          t.amplitude.z() * t.profile.df(x.z())) *
         harmonic(t.n, x);
  }
  return v;
}

TrigField TrigField::gradient_field(const Vec2i& n, const Profile1D& profile, const Vec2d& alpha) {
  const Vec2d kap = n.cast<double>() + alpha;
  // nabla_alpha (f(z) e^{inx}) = (i kap1 f, i kap2 f, f') e^{inx}: two terms
  // sharing the harmonic, one with profile f and transverse amplitudes, one
  // with profile f' and a vertical amplitude.
  std::vector<HarmonicTerm> terms;
  terms.push_back({n, Vec3c(iu * kap.x(), iu * kap.y(), cplx(0.0)), profile});
  terms.push_back({n, Vec3c(cplx(0.0), cplx(0.0), cplx(1.0)), profile.shifted()});
  return TrigField(std::move(terms), alpha);
}

TrigField random_trig_field(int max_mode, const Vec2d& alpha, std::mt19937_64& rng,
                            int term_count) {
  std::uniform_int_distribution<int> mode(-max_mode, max_mode);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<HarmonicTerm> terms;
  for (int t = 0; t < term_count; ++t) {
    HarmonicTerm term;
    term.n = Vec2i(mode(rng), mode(rng));
    for (int c = 0; c < 3; ++c) term.amplitude(c) = cplx(uni(rng), uni(rng));
    if (t % 2 == 0) {
      term.profile = Profile1D::polynomial({uni(rng), uni(rng), uni(rng), uni(rng), uni(rng)});
    } else {
      term.profile = Profile1D::sinusoid(uni(rng), 2.0 + uni(rng), pi * uni(rng));
    }
    terms.push_back(std::move(term));
  }
  return TrigField(std::move(terms), alpha);
}

} // namespace qpmax

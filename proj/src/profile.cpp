#include "kec/profile.hpp"

#include "kec/errors.hpp"

#include <cmath>

namespace kec {

namespace {

struct Evaluate {
  double t;

  ProfileValue operator()(const EinsteinFamily& f) const {
    const double e = (f.n - 2) * std::sqrt(f.c) / (f.n * std::sqrt(2.0));
    const double m = -0.5 * (f.n + 1);
    const double tm = std::pow(t, m);
    const double s = std::sqrt(t);
    ProfileValue out;
    out.v = e / s + f.k_a * tm + f.k_b;
    out.dv = -0.5 * e / (t * s) + f.k_a * m * tm / t;
    out.d2v = 0.75 * e / (t * t * s) + f.k_a * m * (m - 1.0) * tm / (t * t);
    return out;
  }

  ProfileValue operator()(const ConstantProfile& f) const { return {f.v0, 0.0, 0.0}; }

  ProfileValue operator()(const RationalProfile&) const {
    const double u = 1.0 / (1.0 + t);
    return {u, -u * u, 2.0 * u * u * u};
  }
};

}  // namespace

ProfileValue VProfile::operator()(double t) const {
  if (!(t > 0.0) || !std::isfinite(t))
    throw DomainError("profile evaluated at t <= 0 (t=" + std::to_string(t) + ")");
  return std::visit(Evaluate{t}, kind_);
}

std::string VProfile::name() const {
  struct Name {
    std::string operator()(const EinsteinFamily&) const { return "einstein"; }
    std::string operator()(const ConstantProfile&) const { return "constant"; }
    std::string operator()(const RationalProfile&) const { return "rational"; }
  };
  return std::visit(Name{}, kind_);
}

}  // namespace kec

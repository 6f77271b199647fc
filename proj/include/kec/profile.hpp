#pragma once

#include <string>
#include <variant>

namespace kec {

/// v(t) and its first two derivatives.
struct ProfileValue {
  double v = 0.0;
  double dv = 0.0;
  double d2v = 0.0;
};

/// The Einstein family e t^{-1/2} + k_a t^{-(n+1)/2} + k_b with
/// e = (n - 2) sqrt(c) / (n sqrt(2)).
struct EinsteinFamily {
  double c = 1.0;
  int n = 2;
  double k_a = 0.0;
  double k_b = 0.0;
};

struct ConstantProfile {
  double v0 = 0.0;
};

/// v(t) = 1 / (1 + t); a non-Einstein test profile.
struct RationalProfile {};

/// Fiber-radial coefficient v(t) of the metric, with exact derivatives.
class VProfile {
 public:
  using Kind = std::variant<EinsteinFamily, ConstantProfile, RationalProfile>;

  VProfile() : kind_(ConstantProfile{}) {}
  explicit VProfile(Kind kind) : kind_(kind) {}

  static VProfile einstein(double c, int n, double k_a, double k_b) {
    return VProfile(EinsteinFamily{c, n, k_a, k_b});
  }
  static VProfile constant(double v0) { return VProfile(ConstantProfile{v0}); }
  static VProfile rational() { return VProfile(RationalProfile{}); }

  /// Throws DomainError for t <= 0.
  ProfileValue operator()(double t) const;

  const Kind& kind() const noexcept { return kind_; }
  bool is_einstein_family() const noexcept { return std::holds_alternative<EinsteinFamily>(kind_); }
  std::string name() const;

 private:
  Kind kind_;
};

}  // namespace kec

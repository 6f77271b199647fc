#pragma once

#include "kec/tensor.hpp"

namespace kec {

/// Parameters shared by every formula of the construction.
///
/// `a_metric` is the coefficient of sqrt(t) g_ij in G_ij; `k_a` and `k_b`
/// are the two integration constants of the Einstein profile
/// v(t) = e t^{-1/2} + k_a t^{-(n+1)/2} + k_b.
struct ModelParams {
  int n = 2;
  double c = 1.0;
  double a_metric = 1.4142135623730951;
  double k_a = 0.0;
  double k_b = 0.0;

  /// Integrable configuration: a_metric = sqrt(2c).
  static ModelParams kahler(int n, double c, double k_a = 0.0, double k_b = 0.0);

  /// Throws DomainError unless n >= 2, c > 0, a_metric > 0, k_a, k_b >= 0.
  void validate() const;

  /// True when a_metric equals sqrt(2c) to a few ulps.
  bool is_kahler() const;
};

struct BasePoint {
  Vec x;
};

/// Base metric with its first and second partial derivatives at a point.
struct MetricJet {
  Mat g;
  Mat g_inv;
  Tensor3 dg;   ///< dg(k, i, j) = d_k g_ij
  Tensor4 ddg;  ///< ddg(l, k, i, j) = d_l d_k g_ij
};

/// Christoffel symbols with their first derivatives.
struct ChristoffelJet {
  Tensor3 gamma;   ///< gamma(k, i, j) = Gamma^k_ij
  Tensor4 dgamma;  ///< dgamma(l, k, i, j) = d_l Gamma^k_ij
};

struct BaseCurvature {
  Tensor3 gamma;     ///< gamma(k, i, j) = Gamma^k_ij
  Tensor4 riemann;   ///< riemann(h, k, i, j) = R^h_kij, R(d_i, d_j) d_k = R^h_kij d_h
};

/// Conformally flat chart g_ij = exp(2 sigma(x)) delta_ij with
/// sigma(x) = -log(1 + c|x|^2/4) + bump * x_0^2.
///
/// With bump = 0 this is the stereographic chart of the round space form of
/// sectional curvature c.  A nonzero bump breaks constant curvature and is
/// used as a negative fixture.
class ConformalChart {
 public:
  explicit ConformalChart(double c, double bump = 0.0) : c_(c), bump_(bump) {}

  double c() const noexcept { return c_; }
  double bump() const noexcept { return bump_; }
  bool is_space_form() const noexcept { return bump_ == 0.0; }

  MetricJet jet(const Vec& x) const;

 private:
  double c_;
  double bump_;
};

/// Stereographic space-form metric delta_ij / (1 + c|x|^2/4)^2 with exact jets.
MetricJet space_form_metric(const BasePoint& x, const ModelParams& params);

/// Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij).
/// Throws SingularMetricError when cond(g) exceeds 1e12.
Tensor3 christoffel(const MetricJet& jet);

/// Christoffel symbols and their analytic first derivatives (uses ddg).
ChristoffelJet christoffel_jet(const MetricJet& jet);

/// R^h_kij = d_i Gamma^h_jk - d_j Gamma^h_ik + Gamma^h_il Gamma^l_jk - Gamma^h_jl Gamma^l_ik.
///
/// With this convention the space form satisfies
/// R^l_kij = c (delta^l_i g_jk - delta^l_j g_ik).
BaseCurvature base_curvature_tensor(const ChristoffelJet& gamma_jet);

/// max |R^l_kij - c (delta^l_i g_jk - delta^l_j g_ik)|.
double constant_curvature_residual(const BaseCurvature& curv, const MetricJet& jet, double c);

/// Sectional curvature of the coordinate plane (d_i, d_j).
double sectional_curvature(const BaseCurvature& curv, const MetricJet& jet, int i, int j);

/// max |R^h_kij + R^h_ijk + R^h_jki|.
double first_bianchi_residual(const BaseCurvature& curv);

}  // namespace kec

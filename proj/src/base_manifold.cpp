#include "kec/base_manifold.hpp"

#include "kec/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace kec {

ModelParams ModelParams::kahler(int n, double c, double k_a, double k_b) {
  return ModelParams{n, c, std::sqrt(2.0 * c), k_a, k_b};
}

void ModelParams::validate() const {
  if (n < 2) throw DomainError("ModelParams.n must be >= 2, got " + std::to_string(n));
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("ModelParams.c must be > 0");
  if (!(a_metric > 0.0) || !std::isfinite(a_metric))
    throw DomainError("ModelParams.a_metric must be > 0");
  if (!(k_a >= 0.0) || !(k_b >= 0.0)) throw DomainError("ModelParams.k_a, k_b must be >= 0");
}

bool ModelParams::is_kahler() const {
  const double target = std::sqrt(2.0 * c);
  return std::abs(a_metric - target) <= 8.0 * std::numeric_limits<double>::epsilon() * target;
}

MetricJet ConformalChart::jet(const Vec& x) const {
  const int n = static_cast<int>(x.size());
  const double u = 1.0 + 0.25 * c_ * x.squaredNorm();

  // sigma, its gradient and Hessian.
  double sigma = -std::log(u) + bump_ * x(0) * x(0);
  Vec ds = -(0.5 * c_ / u) * x;
  Mat hs = -(0.5 * c_ / u) * Mat::Identity(n, n) + (0.25 * c_ * c_ / (u * u)) * x * x.transpose();
  ds(0) += 2.0 * bump_ * x(0);
  hs(0, 0) += 2.0 * bump_;

  const double e = std::exp(2.0 * sigma);
  MetricJet jet;
  jet.g = e * Mat::Identity(n, n);
  jet.g_inv = (1.0 / e) * Mat::Identity(n, n);
  jet.dg = Tensor3(n);
  jet.ddg = Tensor4(n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) jet.dg(k, i, i) = 2.0 * ds(k) * e;
    for (int l = 0; l < n; ++l) {
      const double second = (4.0 * ds(k) * ds(l) + 2.0 * hs(k, l)) * e;
      for (int i = 0; i < n; ++i) jet.ddg(l, k, i, i) = second;
    }
  }
  return jet;
}

MetricJet space_form_metric(const BasePoint& x, const ModelParams& params) {
  return ConformalChart(params.c).jet(x.x);
}

namespace {

void check_conditioning(const MetricJet& jet) {
  Eigen::SelfAdjointEigenSolver<Mat> es(jet.g, Eigen::EigenvaluesOnly);
  const Vec ev = es.eigenvalues();
  const double lo = ev.minCoeff();
  const double hi = ev.maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12)
    throw SingularMetricError("base metric is not invertible (cond > 1e12)");
}

}  // namespace

Tensor3 christoffel(const MetricJet& jet) {
  check_conditioning(jet);
  const int n = static_cast<int>(jet.g.rows());
  Tensor3 gamma(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l)
          s += jet.g_inv(k, l) * (jet.dg(i, j, l) + jet.dg(j, i, l) - jet.dg(l, i, j));
        gamma(k, i, j) = 0.5 * s;
        gamma(k, j, i) = 0.5 * s;
      }
  return gamma;
}

ChristoffelJet christoffel_jet(const MetricJet& jet) {
  const int n = static_cast<int>(jet.g.rows());
  ChristoffelJet out;
  out.gamma = christoffel(jet);
  out.dgamma = Tensor4(n);

  // Lowered symbols Gamma_{l,ij} = 1/2 (d_i g_jl + d_j g_il - d_l g_ij) and
  // their derivatives; d_m g^kl = -g^ka d_m g_ab g^bl.
  for (int m = 0; m < n; ++m) {
    const Mat dg_m = [&] {
      Mat d(n, n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) d(a, b) = jet.dg(m, a, b);
      return d;
    }();
    const Mat dginv = -jet.g_inv * dg_m * jet.g_inv;
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int l = 0; l < n; ++l) {
            const double low = 0.5 * (jet.dg(i, j, l) + jet.dg(j, i, l) - jet.dg(l, i, j));
            const double dlow =
                0.5 * (jet.ddg(m, i, j, l) + jet.ddg(m, j, i, l) - jet.ddg(m, l, i, j));
            s += dginv(k, l) * low + jet.g_inv(k, l) * dlow;
          }
          out.dgamma(m, k, i, j) = s;
        }
  }
  return out;
}

BaseCurvature base_curvature_tensor(const ChristoffelJet& gj) {
  const int n = gj.gamma.dim();
  BaseCurvature out{gj.gamma, Tensor4(n)};
  const auto& G = gj.gamma;
  const auto& dG = gj.dgamma;
  for (int h = 0; h < n; ++h)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double r = dG(i, h, j, k) - dG(j, h, i, k);
          for (int l = 0; l < n; ++l) r += G(h, i, l) * G(l, j, k) - G(h, j, l) * G(l, i, k);
          out.riemann(h, k, i, j) = r;
        }
  return out;
}

double constant_curvature_residual(const BaseCurvature& curv, const MetricJet& jet, double c) {
  const int n = curv.riemann.dim();
  double m = 0.0;
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double model = c * ((l == i ? jet.g(j, k) : 0.0) - (l == j ? jet.g(i, k) : 0.0));
          m = std::max(m, std::abs(curv.riemann(l, k, i, j) - model));
        }
  return m;
}

double sectional_curvature(const BaseCurvature& curv, const MetricJet& jet, int i, int j) {
  const int n = curv.riemann.dim();
  // g(R(d_i, d_j) d_j, d_i)
  double num = 0.0;
  for (int h = 0; h < n; ++h) num += jet.g(i, h) * curv.riemann(h, j, i, j);
  const double area = jet.g(i, i) * jet.g(j, j) - jet.g(i, j) * jet.g(i, j);
  return num / area;
}

double first_bianchi_residual(const BaseCurvature& curv) {
  const auto& R = curv.riemann;
  const int n = R.dim();
  double m = 0.0;
  for (int h = 0; h < n; ++h)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          m = std::max(m, std::abs(R(h, k, i, j) + R(h, i, j, k) + R(h, j, k, i)));
  return m;
}

}  // namespace kec

#include "kec/mtensor.hpp"

#include "kec/errors.hpp"

#include <cmath>

namespace kec {

double energy_density(const Vec& q, const Vec& p, const MetricJet& jet) {
  if (q.size() != p.size() || p.size() != jet.g.rows())
    throw DomainError("energy_density: dimension mismatch");
  const double t = 0.5 * p.dot(jet.g_inv * p);
  if (!(t >= 1e-300)) throw DomainError("energy_density: point on the zero section");
  return t;
}

CotangentPoint::CotangentPoint(Vec q, Vec p, const MetricJet& jet)
    : q_(std::move(q)), p_(std::move(p)), t_(energy_density(q_, p_, jet)) {
  if (t_ < 1e-12)
    throw DomainError("cotangent point too close to the zero section (t=" + std::to_string(t_) +
                      ")");
}

Vec CotangentPoint::z() const {
  Vec z(2 * n());
  z << q_, p_;
  return z;
}

void CotangentPoint::revalidate(const MetricJet& jet) const {
  const double t = energy_density(q_, p_, jet);
  if (std::abs(t - t_) > 1e-14 * std::max(1.0, t))
    throw DomainError("cached energy density is stale");
}

namespace {

void check_positive(double t, double v, const ModelParams& params) {
  if (!(params.a_metric > 0.0) || !(v > -params.a_metric / (2.0 * std::sqrt(t))))
    throw PositivityError(t, v, params.a_metric);
}

double w_coefficient(double a, double t, double v) {
  return -v / (a * t * (a + 2.0 * std::sqrt(t) * v));
}

}  // namespace

MTensor02 metric_G_lower(const CotangentPoint& pt, const MetricJet& jet, const VProfile& vp,
                         const ModelParams& params) {
  const double t = pt.t();
  const double v = vp(t).v;
  check_positive(t, v, params);
  return {params.a_metric * std::sqrt(t) * jet.g + v * pt.p() * pt.p().transpose()};
}

MTensor20 metric_H_upper(const CotangentPoint& pt, const MetricJet& jet, const VProfile& vp,
                         const ModelParams& params) {
  const double t = pt.t();
  const double v = vp(t).v;
  check_positive(t, v, params);
  const Vec g0 = jet.g_inv * pt.p();
  const double a = params.a_metric;
  return {jet.g_inv / (a * std::sqrt(t)) + w_coefficient(a, t, v) * g0 * g0.transpose()};
}

FiberMetric fiber_metric(const CotangentPoint& pt, const MetricJet& jet, const VProfile& vp,
                         const ModelParams& params) {
  const int n = pt.n();
  const double t = pt.t();
  const double st = std::sqrt(t);
  const double a = params.a_metric;
  const ProfileValue pv = vp(t);
  const double v = pv.v;
  const double v1 = pv.dv;
  const double v2 = pv.d2v;
  check_positive(t, v, params);

  const Vec& p = pt.p();
  const Vec g0 = jet.g_inv * p;
  const Mat& g = jet.g;
  const Mat& gi = jet.g_inv;

  FiberMetric out;
  out.G = {a * st * g + v * p * p.transpose()};
  out.w = w_coefficient(a, t, v);
  out.H = {gi / (a * st) + out.w * g0 * g0.transpose()};

  // f = a sqrt(t) and F = 1 / (a sqrt(t)) with their t-derivatives.
  const double f1 = a / (2.0 * st);
  const double f2 = -a / (4.0 * t * st);
  const double F1 = -1.0 / (2.0 * a * t * st);
  const double D = a * a * t + 2.0 * a * t * st * v;
  const double D1 = a * a + 3.0 * a * st * v + 2.0 * a * t * st * v1;
  const double w1 = -(v1 * D - v * D1) / (D * D);

  const auto kd = [](int x, int y) { return x == y ? 1.0 : 0.0; };

  out.dG = Tensor3(n);
  out.dH = Tensor3(n);
  out.ddG = Tensor4(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        out.dG(k, i, j) = f1 * g0(k) * g(i, j) + v1 * g0(k) * p(i) * p(j) +
                          v * (kd(k, i) * p(j) + kd(k, j) * p(i));
        out.dH(k, i, j) = F1 * g0(k) * gi(i, j) + w1 * g0(k) * g0(i) * g0(j) +
                          out.w * (gi(k, i) * g0(j) + g0(i) * gi(k, j));
      }
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          out.ddG(m, k, i, j) = f2 * g0(m) * g0(k) * g(i, j) + f1 * gi(m, k) * g(i, j) +
                                v2 * g0(m) * g0(k) * p(i) * p(j) + v1 * gi(m, k) * p(i) * p(j) +
                                v1 * g0(k) * (kd(m, i) * p(j) + kd(m, j) * p(i)) +
                                v1 * g0(m) * (kd(k, i) * p(j) + kd(k, j) * p(i)) +
                                v * (kd(k, i) * kd(m, j) + kd(k, j) * kd(m, i));
        }
  return out;
}

Vec AdaptedVector::stacked() const {
  Vec x(h.size() + v.size());
  x << h, v;
  return x;
}

AdaptedVector AdaptedVector::from_stacked(const Vec& x) {
  const auto n = x.size() / 2;
  return {x.head(n), x.tail(n)};
}

double BlockBilinear::operator()(const AdaptedVector& x, const AdaptedVector& y) const {
  return x.h.dot(hh * y.h) + x.h.dot(hv * y.v) + x.v.dot(vh * y.h) + x.v.dot(vv * y.v);
}

Mat BlockBilinear::dense() const {
  const auto n = hh.rows();
  Mat m(2 * n, 2 * n);
  m << hh, hv, vh, vv;
  return m;
}

BlockBilinear BlockBilinear::from_dense(const Mat& m) {
  const auto n = m.rows() / 2;
  return {m.topLeftCorner(n, n), m.topRightCorner(n, n), m.bottomLeftCorner(n, n),
          m.bottomRightCorner(n, n)};
}

AdaptedVector BlockOperator::apply(const AdaptedVector& x) const {
  return {hh * x.h + hv * x.v, vh * x.h + vv * x.v};
}

Mat BlockOperator::dense() const {
  const auto n = hh.rows();
  Mat m(2 * n, 2 * n);
  m << hh, hv, vh, vv;
  return m;
}

BlockOperator BlockOperator::from_dense(const Mat& m) {
  const auto n = m.rows() / 2;
  return {m.topLeftCorner(n, n), m.topRightCorner(n, n), m.bottomLeftCorner(n, n),
          m.bottomRightCorner(n, n)};
}

BlockBilinear assemble_metric(const MTensor02& G, const MTensor20& H) {
  const auto n = G.comp.rows();
  return {G.comp, Mat::Zero(n, n), Mat::Zero(n, n), H.comp};
}

AdaptedVector frame_bracket(int i, int j, FramePair kind, const CotangentPoint& pt,
                            const BaseCurvature& base) {
  const int n = pt.n();
  AdaptedVector out{Vec::Zero(n), Vec::Zero(n)};
  switch (kind) {
    case FramePair::VerticalVertical:
      break;
    case FramePair::VerticalHorizontal:
      for (int k = 0; k < n; ++k) out.v(k) = base.gamma(i, j, k);
      break;
    case FramePair::HorizontalHorizontal:
      for (int k = 0; k < n; ++k) {
        double r0 = 0.0;
        for (int h = 0; h < n; ++h) r0 += pt.p()(h) * base.riemann(h, k, i, j);
        out.v(k) = r0;
      }
      break;
  }
  return out;
}

CotangentModel CotangentModel::kahler_einstein(int n, double c, double k_a, double k_b) {
  return {ModelParams::kahler(n, c, k_a, k_b), ConformalChart(c),
          VProfile::einstein(c, n, k_a, k_b)};
}

CotangentModel CotangentModel::space_form(int n, double c, double a_metric,
                                          const VProfile& profile) {
  return {ModelParams{n, c, a_metric, 0.0, 0.0}, ConformalChart(c), profile};
}

PointState evaluate(const CotangentModel& model, const Vec& q, const Vec& p) {
  MetricJet jet = model.chart.jet(q);
  CotangentPoint pt(q, p, jet);
  BaseCurvature base = base_curvature_tensor(christoffel_jet(jet));
  const int n = pt.n();
  Tensor3 r0(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int h = 0; h < n; ++h) s += p(h) * base.riemann(h, k, i, j);
        r0(k, i, j) = s;
      }
  FiberMetric fiber = fiber_metric(pt, jet, model.profile, model.params);
  const ProfileValue v = model.profile(pt.t());
  Vec g0 = jet.g_inv * p;
  return PointState{std::move(pt), std::move(jet), std::move(base), v,
                    std::move(g0), std::move(r0), std::move(fiber)};
}

PointState evaluate(const CotangentModel& model, const Vec& z) {
  const auto n = z.size() / 2;
  return evaluate(model, z.head(n), z.tail(n));
}

Mat adapted_frame_vectors(const Vec& p, const Tensor3& gamma) {
  const int n = static_cast<int>(p.size());
  Mat e = Mat::Identity(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int h = 0; h < n; ++h) {
      double g0 = 0.0;
      for (int k = 0; k < n; ++k) g0 += p(k) * gamma(k, i, h);
      e(n + h, i) = g0;
    }
  return e;
}

Tensor3 frame_structure_constants(const PointState& s) {
  const int n = s.pt.n();
  Tensor3 c(2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        // [dp_i, dq_j] = Gamma^i_jk dp_k and its antisymmetric partner
        c(n + i, j, n + k) = s.base.gamma(i, j, k);
        c(j, n + i, n + k) = -s.base.gamma(i, j, k);
        c(i, j, n + k) = s.r0(k, i, j);
      }
  return c;
}

oracle::Frame adapted_frame(const CotangentModel& model) {
  return oracle::Frame{
      [model](const Vec& z) {
        const auto n = z.size() / 2;
        const MetricJet jet = model.chart.jet(z.head(n));
        return adapted_frame_vectors(z.tail(n), christoffel(jet));
      },
      [model](const Vec& z) { return frame_structure_constants(evaluate(model, z)); }};
}

Mat frame_metric(const CotangentModel& model, const Vec& z) {
  const auto n = z.size() / 2;
  const MetricJet jet = model.chart.jet(z.head(n));
  const CotangentPoint pt(z.head(n), z.tail(n), jet);
  return assemble_metric(metric_G_lower(pt, jet, model.profile, model.params),
                         metric_H_upper(pt, jet, model.profile, model.params))
      .dense();
}

}  // namespace kec

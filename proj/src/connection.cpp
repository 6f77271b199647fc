#include "kec/connection.hpp"

#include "kec/errors.hpp"
#include "kec/structure.hpp"

#include <cmath>

namespace kec {

ConnectionJet connection_coeffs_general(const PointState& s) {
  const int n = s.pt.n();
  const Mat& G = s.fiber.G.comp;
  const Mat& H = s.fiber.H.comp;
  const auto& dG = s.fiber.dG;
  const auto& dH = s.fiber.dH;
  const auto& ddG = s.fiber.ddG;
  const auto& r0 = s.r0;
  const auto& R = s.base.riemann;

  ConnectionJet out;
  auto& cf = out.coeffs;
  cf.Q = Tensor3(n);
  cf.P = Tensor3(n);
  cf.S = Tensor3(n);
  cf.gamma = s.base.gamma;
  out.dP = Tensor4(n);
  out.dS = Tensor4(n);

  // Y(i, j, k) = dG_jk/dp_i - H^il R^0_ljk, the bracket inside P.
  Tensor3 Y(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double y = dG(i, j, k);
        for (int l = 0; l < n; ++l) y -= H(i, l) * r0(l, j, k);
        Y(i, j, k) = y;
      }

  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double q = 0.0, p = 0.0, sg = 0.0;
        for (int k = 0; k < n; ++k) {
          q += G(h, k) * (dH(i, j, k) + dH(j, i, k) - dH(k, i, j));
          p += H(h, k) * Y(i, j, k);
          sg += G(h, k) * dG(k, i, j);
        }
        cf.Q(i, j, h) = 0.5 * q;
        cf.P(h, i, j) = 0.5 * p;
        cf.S(h, i, j) = -0.5 * sg + 0.5 * r0(h, i, j);
      }

  for (int m = 0; m < n; ++m)
    for (int h = 0; h < n; ++h)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double dp = 0.0, ds = 0.0;
          for (int k = 0; k < n; ++k) {
            double dy = ddG(m, i, j, k);
            for (int l = 0; l < n; ++l) dy -= dH(m, i, l) * r0(l, j, k) + H(i, l) * R(m, l, j, k);
            dp += dH(m, h, k) * Y(i, j, k) + H(h, k) * dy;
            ds += dG(m, h, k) * dG(k, i, j) + G(h, k) * ddG(m, k, i, j);
          }
          out.dP(m, h, i, j) = 0.5 * dp;
          out.dS(m, h, i, j) = -0.5 * ds + 0.5 * R(m, h, i, j);
        }
  return out;
}

ConnectionCoeffs connection_coeffs_kahler(const PointState& s, const ModelParams& params) {
  if (!params.is_kahler())
    throw PreconditionError("Kähler connection formulas need a_metric = sqrt(2c)");
  const double c = params.c;
  const double t = s.pt.t();
  const double v = s.v.v;
  const double v1 = s.v.dv;
  if (!(v > -std::sqrt(c / (2.0 * t))))
    throw PreconditionError("Kähler admissibility v > -sqrt(c/2t) violated");

  const int n = s.pt.n();
  const Vec& p = s.pt.p();
  const Vec& g0 = s.g0;
  const Mat& g = s.jet.g;
  const Mat& gi = s.jet.g_inv;
  const double r = std::sqrt(2.0 * c * t);
  const auto kd = [](int x, int y) { return x == y ? 1.0 : 0.0; };

  const double q1 = -1.0 / (4.0 * t);
  const double q2 = (c - r * v) / (4.0 * c * t);
  const double q3 = (v * v - r * v1) / (4.0 * t * (c + r * v));
  const double s1 = -(c + r * v) / 2.0;
  const double s2 = (c - r * v) / 2.0;
  const double s3 = -(2.0 * v * v + r * v1 + 2.0 * t * v * v1) / 2.0;

  ConnectionCoeffs out{Tensor3(n), Tensor3(n), Tensor3(n), s.base.gamma};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int h = 0; h < n; ++h) {
        out.Q(i, j, h) = q1 * (kd(i, h) * g0(j) + kd(j, h) * g0(i)) + q2 * gi(i, j) * p(h) +
                         q3 * g0(i) * g0(j) * p(h);
        out.S(h, i, j) = s1 * (g(i, j) * p(h) + g(h, i) * p(j)) + s2 * g(h, j) * p(i) +
                         s3 * p(h) * p(i) * p(j);
      }
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.P(h, i, j) = -out.Q(i, h, j);
  return out;
}

Tensor3 connection_form(const ConnectionCoeffs& cf) {
  const int n = cf.Q.dim();
  Tensor3 w(2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int h = 0; h < n; ++h) {
        w(n + i, n + j, n + h) = cf.Q(i, j, h);
        w(i, n + j, n + h) = -cf.gamma(j, i, h);
        w(i, n + j, h) = cf.P(h, j, i);
        w(n + i, j, h) = cf.P(h, i, j);
        w(i, j, h) = cf.gamma(h, i, j);
        w(i, j, n + h) = cf.S(h, i, j);
      }
  return w;
}

AdaptedVector covariant_derivative_frame(int a, int b, const ConnectionCoeffs& coeffs) {
  const Tensor3 w = connection_form(coeffs);
  Vec out(w.dim());
  for (int d = 0; d < w.dim(); ++d) out(d) = w(a, b, d);
  return AdaptedVector::from_stacked(out);
}

AdaptedVector covariant_derivative(const AdaptedVector& x, const oracle::Field& y, const Vec& z,
                                   const CotangentModel& model, const ConnectionCoeffs& coeffs,
                                   const oracle::FDConfig& cfg) {
  const Tensor3 w = connection_form(coeffs);
  const int d = w.dim();
  const Vec xs = x.stacked();
  const Vec y0 = y(z);
  // X(Y^d) along X = x^a E_a is a single directional derivative.
  const Mat e = adapted_frame(model).vectors(z);
  Vec out = oracle::fd_directional(y, z, e * xs, cfg);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) out(c) += xs(a) * y0(b) * w(a, b, c);
  return AdaptedVector::from_stacked(out);
}

ConnectionField analytic_connection_field(const CotangentModel& model) {
  return [model](const Vec& z) {
    return connection_form(connection_coeffs_general(evaluate(model, z)).coeffs);
  };
}

namespace {

struct KoszulData {
  Mat G;
  Tensor3 C;
  std::vector<Mat> dG;  // dG[a](b, c) = E_a G(E_b, E_c)
};

KoszulData koszul_data(const MetricField& metric, const oracle::Frame& frame, const Vec& z,
                       const oracle::FDConfig& cfg) {
  const int d = static_cast<int>(z.size());
  const oracle::Field g_field = [&metric](const Vec& y) { return Vec(metric(y).reshaped()); };
  KoszulData out{metric(z), frame.brackets(z), {}};
  for (int a = 0; a < d; ++a)
    out.dG.push_back(oracle::frame_derivative(g_field, z, frame, a, cfg).reshaped(d, d));
  return out;
}

KoszulData koszul_data(const CotangentModel& model, const Vec& z, const oracle::FDConfig& cfg) {
  return koszul_data([&model](const Vec& y) { return frame_metric(model, y); }, adapted_frame(model), z, cfg);
}

double koszul_rhs(const KoszulData& k, int a, int b, int c);

Tensor3 solve_koszul(const KoszulData& k) {
  const int d = static_cast<int>(k.G.rows());
  const Eigen::LDLT<Mat> ldlt(k.G);
  Tensor3 w(d);
  Vec rhs(d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      for (int c = 0; c < d; ++c) rhs(c) = 0.5 * koszul_rhs(k, a, b, c);
      const Vec sol = ldlt.solve(rhs);
      for (int c = 0; c < d; ++c) w(a, b, c) = sol(c);
    }
  return w;
}

double koszul_rhs(const KoszulData& k, int a, int b, int c) {
  const int d = static_cast<int>(k.G.rows());
  const auto gb = [&](int x, int y, int w) {  // G([E_x, E_y], E_w)
    double s = 0.0;
    for (int e = 0; e < d; ++e) s += k.C(x, y, e) * k.G(e, w);
    return s;
  };
  return k.dG[a](b, c) + k.dG[b](a, c) - k.dG[c](a, b) + gb(a, b, c) - gb(a, c, b) - gb(b, c, a);
}

}  // namespace

double koszul_oracle(int a, int b, int c, const CotangentModel& model, const Vec& z,
                     const oracle::FDConfig& cfg) {
  return koszul_rhs(koszul_data(model, z, cfg), a, b, c);
}

Tensor3 koszul_connection(const CotangentModel& model, const Vec& z, const oracle::FDConfig& cfg) {
  return solve_koszul(koszul_data(model, z, cfg));
}

Tensor3 koszul_connection(const MetricField& metric, const oracle::Frame& frame, const Vec& z,
                          const oracle::FDConfig& cfg) {
  return solve_koszul(koszul_data(metric, frame, z, cfg));
}

ConnectionField koszul_connection_field(const CotangentModel& model, const oracle::FDConfig& cfg) {
  return [model, cfg](const Vec& z) { return koszul_connection(model, z, cfg); };
}

double torsion_residual(const Tensor3& w, const Tensor3& C) {
  const int d = w.dim();
  double m = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) m = std::max(m, std::abs(w(a, b, c) - w(b, a, c) - C(a, b, c)));
  return m;
}

double metric_compatibility_residual(const CotangentModel& model, const Vec& z,
                                     const Tensor3& w, const oracle::FDConfig& cfg) {
  const KoszulData k = koszul_data(model, z, cfg);
  const int d = w.dim();
  double m = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) {
        double r = k.dG[a](b, c);
        for (int e = 0; e < d; ++e) r -= w(a, b, e) * k.G(e, c) + w(a, c, e) * k.G(b, e);
        m = std::max(m, std::abs(r));
      }
  return m;
}

double nabla_J_residual(const CotangentModel& model, const Vec& z, const Tensor3& w,
                        const oracle::FDConfig& cfg) {
  const int d = w.dim();
  const oracle::Frame frame = adapted_frame(model);
  const oracle::Field j_field = [&model](const Vec& y) {
    return Vec(frame_complex_structure(model, y).reshaped());
  };
  const Mat J = frame_complex_structure(model, z);
  double m = 0.0;
  for (int a = 0; a < d; ++a) {
    const Mat dJ = oracle::frame_derivative(j_field, z, frame, a, cfg).reshaped(d, d);
    Mat wa(d, d);  // wa(c, b) = omega(a, b, c)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) wa(c, b) = w(a, b, c);
    const Mat res = dJ + wa * J - J * wa;
    m = std::max(m, max_abs(res));
  }
  return m;
}

double max_coeff_difference(const ConnectionCoeffs& x, const ConnectionCoeffs& y) {
  return std::max({max_abs_diff(x.Q, y.Q), max_abs_diff(x.P, y.P), max_abs_diff(x.S, y.S)});
}

}  // namespace kec

#include "kec/curvature.hpp"

#include "kec/errors.hpp"
#include "kec/structure.hpp"

#include <cmath>

namespace kec {

CurvatureBlocks curvature_blocks(const PointState& s, const ConnectionJet& jet, const ModelParams& params) {
  if (!params.is_kahler())
    throw PreconditionError("curvature block formulas need a_metric = sqrt(2c)");
  const int n = s.pt.n();
  const auto& R = s.base.riemann;
  const auto& r0 = s.r0;
  const auto& Q = jet.coeffs.Q;
  const auto& P = jet.coeffs.P;
  const auto& S = jet.coeffs.S;
  const auto& dP = jet.dP;
  const auto& dS = jet.dS;

  CurvatureBlocks b{Tensor4(n), Tensor4(n), Tensor4(n), Tensor4(n), Tensor4(n), Tensor4(n)};
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int w = 0; w < n; ++w) {
          // qqq(h=x, i=y, j=z, k=w)
          double qqq = R(x, w, y, z);
          // ppq(i=x, j=y, h=z, k=w)
          double ppq = dP(x, z, y, w) - dP(y, z, x, w);
          // pqq(i=x, j=y, k=z, h=w)
          double pqq = dS(x, w, y, z);
          // pqp(i=x, k=y, h=z, j=w)
          double pqp = dP(x, z, y, w);
          for (int l = 0; l < n; ++l) {
            qqq += -P(x, l, w) * r0(l, y, z) + P(x, l, y) * S(l, z, w) - P(x, l, z) * S(l, y, w);
            ppq += P(z, x, l) * P(l, y, w) - P(z, y, l) * P(l, x, w);
            pqq += Q(x, l, w) * S(l, y, z) - P(l, x, z) * S(w, y, l);
            pqp += P(z, x, l) * P(l, y, w) - P(z, l, w) * Q(x, y, l);
          }
          b.qqq(x, y, z, w) = qqq;
          b.ppq(x, y, z, w) = ppq;
          b.pqq(x, y, z, w) = pqq;
          b.pqp(x, y, z, w) = pqp;
        }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int w = 0; w < n; ++w) {
          b.qqp(x, y, z, w) = -b.qqq(x, y, z, w);
          b.ppp(x, y, z, w) = -b.ppq(x, y, z, w);
        }
  return b;
}

Tensor4 assemble_curvature(const CurvatureBlocks& b) {
  const int n = b.qqq.dim();
  Tensor4 K(2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int h = 0; h < n; ++h) {
          K(i, j, k, h) = b.qqq(h, i, j, k);
          K(i, j, n + k, n + h) = b.qqp(k, i, j, h);
          K(n + i, n + j, k, h) = b.ppq(i, j, h, k);
          K(n + i, n + j, n + k, n + h) = b.ppp(i, j, k, h);
          K(n + i, j, k, n + h) = b.pqq(i, j, k, h);
          K(n + i, j, n + k, h) = b.pqp(i, k, h, j);
          K(j, n + i, k, n + h) = -b.pqq(i, j, k, h);
          K(j, n + i, n + k, h) = -b.pqp(i, k, h, j);
        }
  return K;
}

Mat RicciBlocks::dense() const {
  const auto n = qq.rows();
  Mat m(2 * n, 2 * n);
  // mixed(i, j) = Ric(dp_i, dq_j) sits at row n+i, column j
  m << qq, mixed.transpose(), mixed, pp;
  return m;
}

RicciBlocks ricci_blocks(const CurvatureBlocks& b) {
  const int n = b.qqq.dim();
  RicciBlocks out{Mat::Zero(n, n), Mat::Zero(n, n), Mat::Zero(n, n), std::nullopt};
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int h = 0; h < n; ++h) {
        out.qq(j, k) += b.qqq(h, h, j, k) + b.pqq(h, j, k, h);
        out.pp(j, k) += b.ppp(h, j, k, h) - b.pqp(j, k, h, h);
      }
  // Mixed traces: K(dq_h, dp_i) dq_j and K(dp_h, dp_i) dq_j have no
  // component along the traced vector in the block structure.
  return out;
}

RicciBlocks ricci_from_curvature(const Tensor4& K) {
  const int d = K.dim();
  const int n = d / 2;
  Mat ric = Mat::Zero(d, d);
  for (int b = 0; b < d; ++b)
    for (int c = 0; c < d; ++c)
      for (int a = 0; a < d; ++a) ric(b, c) += K(a, b, c, a);
  return {ric.topLeftCorner(n, n), ric.bottomRightCorner(n, n), ric.bottomLeftCorner(n, n),
          std::nullopt};
}

RicciCoefficients ricci_coefficients(double t, const ProfileValue& pv, const ModelParams& params) {
  const int n = params.n;
  const double c = params.c;
  const double sc = std::sqrt(c);
  const double s2c = std::sqrt(2.0 * c);
  const double st = std::sqrt(t);
  const double t32 = t * st;
  const double t52 = t * t * st;
  const double v = pv.v, v1 = pv.dv, v2 = pv.d2v;

  RicciCoefficients r;
  r.a = n * sc * (sc - std::sqrt(2.0) * st * v) - s2c * (s2c + st * v + 2.0 * t32 * v1);
  r.alpha = -n * (c + 2.0 * t * v * v + 2.0 * s2c * t32 * v1 + 4.0 * t * t * v * v1) +
            2.0 * (c - t * v * v - 3.0 * s2c * t32 * v1 - 8.0 * t * t * v * v1 -
                   2.0 * s2c * t52 * v2 - 4.0 * t * t * t * v * v2);
  r.beta = -n * (c + s2c * st * v - 2.0 * t * v * v + 2.0 * s2c * t32 * v1) +
           2.0 * (c + s2c * st * v + t * v * v - 3.0 * s2c * t32 * v1 + 2.0 * t * t * v * v1 -
                  2.0 * s2c * t52 * v2);
  return r;
}

RicciBlocks ricci_closed_form(const PointState& s, const ModelParams& params) {
  if (!params.is_kahler())
    throw PreconditionError("closed-form Ricci needs a_metric = sqrt(2c)");
  const double t = s.pt.t();
  const double c = params.c;
  const double v = s.v.v;
  if (!(v > -std::sqrt(c / (2.0 * t))))
    throw PreconditionError("Kähler admissibility v > -sqrt(c/2t) violated");
  const RicciCoefficients r = ricci_coefficients(t, s.v, params);
  const int n = s.pt.n();
  const Vec& p = s.pt.p();
  RicciBlocks out;
  out.qq = 0.5 * r.a * s.jet.g + (r.alpha / (4.0 * t)) * p * p.transpose();
  out.pp = (r.a / (4.0 * c * t)) * s.jet.g_inv +
           (r.beta / (8.0 * std::sqrt(c) * t * t * (std::sqrt(c) + std::sqrt(2.0 * t) * v))) *
               s.g0 * s.g0.transpose();
  out.mixed = Mat::Zero(n, n);
  out.coeffs = r;
  return out;
}

Tensor4 curvature_from_connection(const ConnectionField& omega, const oracle::Frame& frame,
                                  const Vec& z, const oracle::FDConfig& cfg) {
  const Tensor3 w = omega(z);
  const int d = w.dim();
  const Tensor3 C = frame.brackets(z);
  const oracle::Field flat = [&omega](const Vec& y) { return omega(y).flat(); };
  std::vector<Tensor3> dw;  // dw[a] = E_a(omega)
  for (int a = 0; a < d; ++a)
    dw.push_back(Tensor3::from_flat(d, oracle::frame_derivative(flat, z, frame, a, cfg)));

  Tensor4 K(d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int x = 0; x < d; ++x) {
          double k = dw[a](b, c, x) - dw[b](a, c, x);
          for (int e = 0; e < d; ++e)
            k += w(b, c, e) * w(a, e, x) - w(a, c, e) * w(b, e, x) - C(a, b, e) * w(e, c, x);
          K(a, b, c, x) = k;
        }
  return K;
}

namespace {

Tensor4 lower_last(const Tensor4& K, const Mat& G) {
  const int d = K.dim();
  Tensor4 L(d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int w = 0; w < d; ++w) {
          double s = 0.0;
          for (int x = 0; x < d; ++x) s += K(a, b, c, x) * G(x, w);
          L(a, b, c, w) = s;
        }
  return L;
}

}  // namespace

double pair_symmetry_residual(const Tensor4& K, const Mat& G) {
  const Tensor4 L = lower_last(K, G);
  const int d = K.dim();
  double m = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int w = 0; w < d; ++w) m = std::max(m, std::abs(L(a, b, c, w) - L(c, w, a, b)));
  return m;
}

double holomorphic_sectional_curvature(const AdaptedVector& x, const Tensor4& K,
                                       const BlockBilinear& Gb, const BlockOperator& J) {
  const Vec X = x.stacked();
  if (X.norm() == 0.0) throw DomainError("holomorphic sectional curvature of the zero vector");
  const Mat G = Gb.dense();
  const Vec JX = J.dense() * X;
  const int d = K.dim();
  Vec kv = Vec::Zero(d);  // K(X, JX) JX
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      const double ab = X(a) * JX(b);
      if (ab == 0.0) continue;
      for (int c = 0; c < d; ++c) {
        const double abc = ab * JX(c);
        if (abc == 0.0) continue;
        for (int e = 0; e < d; ++e) kv(e) += abc * K(a, b, c, e);
      }
    }
  const double gxx = X.dot(G * X);
  return kv.dot(G * X) / (gxx * gxx);
}

CurvatureField analytic_curvature_field(const CotangentModel& model) {
  if (!model.params.is_kahler())
    throw PreconditionError("closed-form curvature needs a_metric = sqrt(2c)");
  return [model](const Vec& z) {
    const PointState s = evaluate(model, z);
    return assemble_curvature(curvature_blocks(s, connection_coeffs_general(s), model.params));
  };
}

Tensor5 covariant_derivative_curvature(const CurvatureField& K, const Tensor3& w,
                                       const oracle::Frame& frame, const Vec& z,
                                       const oracle::FDConfig& cfg) {
  const Tensor4 k0 = K(z);
  const int d = k0.dim();
  const oracle::Field flat = [&K](const Vec& y) { return K(y).flat(); };
  Tensor5 out(d);
  for (int e = 0; e < d; ++e) {
    const Tensor4 dk = Tensor4::from_flat(d, oracle::frame_derivative(flat, z, frame, e, cfg));
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c)
          for (int x = 0; x < d; ++x) {
            double s = dk(a, b, c, x);
            for (int f = 0; f < d; ++f)
              s += w(e, f, x) * k0(a, b, c, f) - w(e, a, f) * k0(f, b, c, x) -
                   w(e, b, f) * k0(a, f, c, x) - w(e, c, f) * k0(a, b, f, x);
            out(e, a, b, c, x) = s;
          }
  }
  return out;
}

double nabla_K_probe(const CotangentModel& model, const Vec& z, const oracle::FDConfig& cfg) {
  const Tensor3 w = analytic_connection_field(model)(z);
  return covariant_derivative_curvature(analytic_curvature_field(model), w, adapted_frame(model), z,
                                        cfg)
      .max_abs();
}

double second_bianchi_residual(const Tensor5& nk) {
  const int d = nk.dim();
  double m = 0.0;
  for (int e = 0; e < d; ++e)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c)
          for (int x = 0; x < d; ++x)
            m = std::max(m, std::abs(nk(e, a, b, c, x) + nk(a, b, e, c, x) + nk(b, e, a, c, x)));
  return m;
}

}  // namespace kec

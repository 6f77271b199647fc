#include "kec/structure.hpp"

#include "kec/errors.hpp"

#include <cmath>

namespace kec {

BlockOperator assemble_J(const MTensor02& G, const MTensor20& H) {
  const auto n = G.comp.rows();
  // column i of vh: components of J dq_i on dp_k, i.e. G_ik
  return {Mat::Zero(n, n), -H.comp.transpose(), G.comp.transpose(), Mat::Zero(n, n)};
}

Mat frame_complex_structure(const CotangentModel& model, const Vec& z) {
  const auto n = z.size() / 2;
  const MetricJet jet = model.chart.jet(z.head(n));
  const CotangentPoint pt(z.head(n), z.tail(n), jet);
  return assemble_J(metric_G_lower(pt, jet, model.profile, model.params),
                    metric_H_upper(pt, jet, model.profile, model.params))
      .dense();
}

BlockBilinear fundamental_form(const BlockBilinear& Gb, const BlockOperator& J) {
  return BlockBilinear::from_dense(Gb.dense() * J.dense());
}

double exterior_derivative_residual(const oracle::Field& form, int dim, const oracle::Frame& frame,
                                    const Vec& z, const oracle::FDConfig& cfg) {
  const Mat w = form(z).reshaped(dim, dim);  // w(a, b) stored column-major
  std::vector<Mat> dw;
  for (int a = 0; a < dim; ++a)
    dw.push_back(oracle::frame_derivative(form, z, frame, a, cfg).reshaped(dim, dim));
  const Tensor3 C = frame.brackets(z);

  // omega([E_a, E_b], E_c)
  const auto wb = [&](int a, int b, int c) {
    double s = 0.0;
    for (int e = 0; e < dim; ++e) s += C(a, b, e) * w(e, c);
    return s;
  };
  double m = 0.0;
  for (int a = 0; a < dim; ++a)
    for (int b = a + 1; b < dim; ++b)
      for (int c = b + 1; c < dim; ++c) {
        const double d = dw[a](b, c) - dw[b](a, c) + dw[c](a, b) - wb(a, b, c) + wb(a, c, b) -
                         wb(b, c, a);
        m = std::max(m, std::abs(d));
      }
  return m;
}

double dphi_residual(const CotangentModel& model, const Vec& z, const oracle::FDConfig& cfg) {
  const int dim = static_cast<int>(z.size());
  const oracle::Field phi = [&model](const Vec& y) {
    const Mat f = frame_metric(model, y) * frame_complex_structure(model, y);
    return Vec(f.reshaped());
  };
  return exterior_derivative_residual(phi, dim, adapted_frame(model), z, cfg);
}

std::vector<NijenhuisValue> nijenhuis_closed_form(const PointState& s, const ModelParams& params) {
  const int n = s.pt.n();
  const Vec& p = s.pt.p();
  const Mat& g = s.jet.g;
  const Mat& H = s.fiber.H.comp;
  const auto& R = s.base.riemann;
  const double half_a2 = 0.5 * params.a_metric * params.a_metric;

  // B_kij = {a^2/2 (delta^h_i g_jk - delta^h_j g_ik) - R^h_kij} p_h
  Tensor3 B(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double r0 = 0.0;
        for (int h = 0; h < n; ++h) r0 += R(h, k, i, j) * p(h);
        B(k, i, j) = half_a2 * (p(i) * g(j, k) - p(j) * g(i, k)) - r0;
      }

  std::vector<NijenhuisValue> out;
  out.reserve(static_cast<std::size_t>(3 * n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      NijenhuisValue x{{Vec::Zero(n), Vec::Zero(n)}, FramePair::HorizontalHorizontal, i, j};
      for (int k = 0; k < n; ++k) x.value.v(k) = B(k, i, j);
      out.push_back(std::move(x));
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // H^kl H^jr B_lir on delta/delta q^k
      NijenhuisValue x{{Vec::Zero(n), Vec::Zero(n)}, FramePair::VerticalHorizontal, i, j};
      for (int k = 0; k < n; ++k) {
        double s2 = 0.0;
        for (int l = 0; l < n; ++l)
          for (int r = 0; r < n; ++r) s2 += H(k, l) * H(j, r) * B(l, i, r);
        x.value.h(k) = s2;
      }
      out.push_back(std::move(x));
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // H^ir H^jl B_klr on d/dp_k
      NijenhuisValue x{{Vec::Zero(n), Vec::Zero(n)}, FramePair::VerticalVertical, i, j};
      for (int k = 0; k < n; ++k) {
        double s2 = 0.0;
        for (int l = 0; l < n; ++l)
          for (int r = 0; r < n; ++r) s2 += H(i, r) * H(j, l) * B(k, l, r);
        x.value.v(k) = s2;
      }
      out.push_back(std::move(x));
    }
  return out;
}

Tensor3 nijenhuis_frame(const oracle::Field& j_field, const oracle::Frame& frame, const Vec& z,
                        const oracle::FDConfig& cfg) {
  const Mat J = j_field(z).reshaped(z.size(), z.size());
  const int d = static_cast<int>(J.rows());
  const Tensor3 C = frame.brackets(z);
  // dJ[a](c, b) = E_a(J^c_b)
  std::vector<Mat> dJ;
  for (int a = 0; a < d; ++a)
    dJ.push_back(oracle::frame_derivative(j_field, z, frame, a, cfg).reshaped(d, d));

  // [X, Y] for X = x^a E_a, Y = y^b E_b at one point, given the derivative
  // of y along X and of x along Y.
  const auto bracket_const = [&](const Vec& x, const Vec& y) {
    Vec out = Vec::Zero(d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        const double xy = x(a) * y(b);
        if (xy == 0.0) continue;
        for (int e = 0; e < d; ++e) out(e) += xy * C(a, b, e);
      }
    return out;
  };

  Tensor3 out(d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      const Vec ea = Vec::Unit(d, a);
      const Vec eb = Vec::Unit(d, b);
      const Vec ja = J.col(a);
      const Vec jb = J.col(b);
      // X(f) along JX = ja^c E_c(f)
      Vec ja_of_jb = Vec::Zero(d), jb_of_ja = Vec::Zero(d);
      for (int c = 0; c < d; ++c) {
        ja_of_jb += ja(c) * dJ[c].col(b);
        jb_of_ja += jb(c) * dJ[c].col(a);
      }
      const Vec jx_jy = ja_of_jb - jb_of_ja + bracket_const(ja, jb);
      const Vec jx_y = -dJ[b].col(a) + bracket_const(ja, eb);
      const Vec x_jy = dJ[a].col(b) + bracket_const(ea, jb);
      const Vec x_y = bracket_const(ea, eb);
      const Vec n_ab = jx_jy - J * jx_y - J * x_jy - x_y;
      for (int c = 0; c < d; ++c) out(a, b, c) = n_ab(c);
    }
  return out;
}

std::vector<NijenhuisValue> nijenhuis_numeric(const CotangentModel& model, const Vec& z,
                                              const oracle::FDConfig& cfg) {
  const int n = static_cast<int>(z.size() / 2);
  const oracle::Field j_field = [&model](const Vec& y) {
    return Vec(frame_complex_structure(model, y).reshaped());
  };
  const Tensor3 N = nijenhuis_frame(j_field, adapted_frame(model), z, cfg);

  const auto pick = [&](int a, int b, FramePair kind, int i, int j) {
    NijenhuisValue x{{Vec::Zero(n), Vec::Zero(n)}, kind, i, j};
    for (int k = 0; k < n; ++k) {
      x.value.h(k) = N(a, b, k);
      x.value.v(k) = N(a, b, n + k);
    }
    return x;
  };
  std::vector<NijenhuisValue> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.push_back(pick(i, j, FramePair::HorizontalHorizontal, i, j));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.push_back(pick(i, n + j, FramePair::VerticalHorizontal, i, j));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.push_back(pick(n + i, n + j, FramePair::VerticalVertical, i, j));
  return out;
}

double max_component(const std::vector<NijenhuisValue>& values) {
  double m = 0.0;
  for (const auto& x : values) m = std::max({m, max_abs(x.value.h), max_abs(x.value.v)});
  return m;
}

double max_difference(const std::vector<NijenhuisValue>& x, const std::vector<NijenhuisValue>& y) {
  if (x.size() != y.size()) throw DomainError("Nijenhuis lists differ in length");
  double m = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k)
    m = std::max({m, max_abs(Vec(x[k].value.h - y[k].value.h)),
                  max_abs(Vec(x[k].value.v - y[k].value.v))});
  return m;
}

}  // namespace kec

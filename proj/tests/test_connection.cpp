#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kec/connection.hpp"
#include "kec/errors.hpp"
#include "test_support.hpp"

using namespace kec;

namespace {

std::vector<CotangentModel> kahler_models() {
  return {CotangentModel::kahler_einstein(2, 1.0, 1.0, 1.0),
          CotangentModel::kahler_einstein(3, 2.0, 0.5, 0.0),
          CotangentModel::space_form(3, 0.5, 1.0, VProfile::rational())};
}

std::vector<CotangentModel> general_models() {
  auto out = kahler_models();
  out.push_back(CotangentModel::space_form(2, 1.0, 0.7, VProfile::rational()));
  out.push_back(CotangentModel::space_form(3, 1.5, 2.5, VProfile::constant(0.3)));
  out.push_back(CotangentModel{ModelParams{2, 1.0, 1.2}, ConformalChart(1.0, 0.3), VProfile::rational()});
  return out;
}

}  // namespace

TEST_CASE("general formulas by hand substitution") {
  SUBCASE("v = 0, flat base, a = 1") {
    // H^jk = g^jk / sqrt t gives
    // Q^ij_h = -(delta^j_h g^0i + delta^i_h g^0j - g^ij p_h) / (4t).
    const int n = 3;
    const auto model = CotangentModel::space_form(n, 1e-14, 1.0, VProfile::constant(0.0));
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 5; ++trial) {
      const PointState s = evaluate(model, test::random_z(rng, model));
      const ConnectionCoeffs k = connection_coeffs_general(s).coeffs;
      const Mat& gi = s.jet.g_inv;
      const Vec& p = s.pt.p();
      const double t = s.pt.t();
      double worst = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int h = 0; h < n; ++h) {
            const double expect = -((j == h) * s.g0(i) + (i == h) * s.g0(j) - gi(i, j) * p(h)) / (4.0 * t);
            worst = std::max(worst, std::abs(k.Q(i, j, h) - expect));
          }
      CHECK(worst < 1e-12);
    }
  }

  SUBCASE("flat base: S is symmetric in its last pair") {
    const auto model = CotangentModel::space_form(3, 1e-14, 0.8, VProfile::rational());
    std::mt19937_64 rng(2);
    const PointState s = evaluate(model, test::random_z(rng, model));
    const Tensor3 S = connection_coeffs_general(s).coeffs.S;
    for (int h = 0; h < 3; ++h)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(std::abs(S(h, i, j) - S(h, j, i)) < 1e-12);
  }

  SUBCASE("Q is symmetric in its upper pair") {
    std::mt19937_64 rng(3);
    for (const auto& model : general_models()) {
      const PointState s = evaluate(model, test::random_z(rng, model));
      const Tensor3 Q = connection_coeffs_general(s).coeffs.Q;
      const int n = model.params.n;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int h = 0; h < n; ++h) CHECK(std::abs(Q(i, j, h) - Q(j, i, h)) < 1e-13);
    }
  }
}

TEST_CASE("Kaehler specialization") {
  std::mt19937_64 rng(4);

  SUBCASE("P = -Q with swapped indices") {
    for (const auto& model : kahler_models()) {
      const int n = model.params.n;
      const PointState s = evaluate(model, test::random_z(rng, model));
      const ConnectionCoeffs k = connection_coeffs_kahler(s, model.params);
      for (int h = 0; h < n; ++h)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) CHECK(std::abs(k.P(h, i, j) + k.Q(i, h, j)) < 1e-12);
    }
  }

  SUBCASE("n=2, c=1, v = 0, t = 0.5 at the origin") {
    const auto model = CotangentModel::space_form(2, 1.0, std::sqrt(2.0), VProfile::constant(0.0));
    const PointState s = evaluate(model, Vec::Zero(2), (Vec(2) << 0.6, 0.8).finished());
    CHECK(std::abs(s.pt.t() - 0.5) < 1e-15);
    CHECK(max_coeff_difference(connection_coeffs_kahler(s, model.params), connection_coeffs_general(s).coeffs) < 1e-10);
  }

  SUBCASE("agrees with the general formulas") {
    for (const auto& model : kahler_models())
      for (int trial = 0; trial < 20; ++trial) {
        const PointState s = evaluate(model, test::random_z(rng, model, 2.0, 0.1, 10.0));
        const ConnectionCoeffs kg = connection_coeffs_general(s).coeffs;
        const ConnectionCoeffs kk = connection_coeffs_kahler(s, model.params);
        CHECK(max_coeff_difference(kg, kk) < 1e-9);
        // Fully radial contraction of S.
        const int n = model.params.n;
        double rg = 0.0, rk = 0.0;
        for (int h = 0; h < n; ++h)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
              const double w = s.g0(h) * s.g0(i) * s.g0(j);
              rg += kg.S(h, i, j) * w;
              rk += kk.S(h, i, j) * w;
            }
        CHECK(std::abs(rg - rk) < 1e-9 * std::max(1.0, std::abs(rg)));
      }
  }

  SUBCASE("preconditions") {
    const auto detuned = CotangentModel::space_form(2, 1.0, 1.0, VProfile::rational());
    const PointState s = evaluate(detuned, test::random_z(rng, detuned));
    CHECK_THROWS_AS(connection_coeffs_kahler(s, detuned.params), PreconditionError);
  }
}

TEST_CASE("frame rules") {
  std::mt19937_64 rng(5);
  const auto model = CotangentModel::kahler_einstein(3, 1.0, 1.0, 1.0);
  const int n = 3;
  const PointState s = evaluate(model, test::random_z(rng, model));
  const ConnectionCoeffs k = connection_coeffs_general(s).coeffs;
  const Tensor3 omega = connection_form(k);
  for (int a = 0; a < 2 * n; ++a)
    for (int b = 0; b < 2 * n; ++b) {
      const Vec rule = covariant_derivative_frame(a, b, k).stacked();
      for (int d = 0; d < 2 * n; ++d) CHECK(rule(d) == omega(a, b, d));
    }
  // Horizontal part of nabla_{dq_i} dq_j is the base connection.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int h = 0; h < n; ++h) CHECK(omega(i, j, h) == s.base.gamma(h, i, j));
  // The mixed-pair torsion is algebraic.
  const Tensor3 C = frame_structure_constants(s);
  CHECK(torsion_residual(omega, C) < 1e-10);
}

TEST_CASE("covariant derivative of a general field obeys Leibniz") {
  std::mt19937_64 rng(6);
  const oracle::FDConfig cfg;
  const auto model = CotangentModel::space_form(2, 1.0, 0.9, VProfile::rational());
  const int n = 2;
  const Vec z = test::random_z(rng, model);
  const ConnectionCoeffs k = connection_coeffs_general(evaluate(model, z)).coeffs;
  const oracle::Frame frame = adapted_frame(model);
  const AdaptedVector x{(Vec(2) << 0.3, -1.0).finished(), (Vec(2) << 0.5, 0.2).finished()};
  const auto f = [](const Vec& y) { return std::sin(y(0)) + y(2) * y(3); };
  for (int b = 0; b < 2 * n; ++b) {
    const oracle::Field y = [&](const Vec& zz) { return Vec(f(zz) * Vec::Unit(2 * n, b)); };
    const Vec lhs = covariant_derivative(x, y, z, model, k, cfg).stacked();
    const oracle::Field ff = [&](const Vec& zz) { return Vec::Constant(1, f(zz)); };
    const Vec dir = frame.vectors(z) * x.stacked();
    const double xf = oracle::fd_directional(ff, z, dir, cfg)(0);
    Vec rhs = xf * Vec::Unit(2 * n, b);
    for (int a = 0; a < 2 * n; ++a) rhs += x.stacked()(a) * f(z) * covariant_derivative_frame(a, b, k).stacked();
    CHECK(max_abs(Vec(lhs - rhs)) < 1e-8);
  }
}

TEST_CASE("Koszul oracle") {
  std::mt19937_64 rng(7);
  const oracle::FDConfig cfg;

  SUBCASE("agrees with the closed-form connection") {
    for (const auto& model : general_models())
      for (int trial = 0; trial < 20; ++trial) {
        const Vec z = test::random_z(rng, model);
        const Tensor3 closed = connection_form(connection_coeffs_general(evaluate(model, z)).coeffs);
        CHECK(max_abs_diff(koszul_connection(model, z, cfg), closed) < 1e-5);
      }
  }

  SUBCASE("recovers the base connection on horizontal triples") {
    const auto model = CotangentModel::space_form(3, 1.5, 1.0, VProfile::constant(0.0));
    const Vec z = test::random_z(rng, model);
    const Tensor3 w = koszul_connection(model, z, cfg);
    const PointState s = evaluate(model, z);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int h = 0; h < 3; ++h) CHECK(std::abs(w(i, j, h) - s.base.gamma(h, i, j)) < 1e-6);
  }

  SUBCASE("swapping the first two fields adds the bracket term") {
    const auto model = CotangentModel::space_form(2, 1.0, 0.8, VProfile::rational());
    const Vec z = test::random_z(rng, model);
    const Mat G = frame_metric(model, z);
    const Tensor3 C = frame_structure_constants(evaluate(model, z));
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c) {
          double bracket = 0.0;
          for (int e = 0; e < 4; ++e) bracket += C(a, b, e) * G(e, c);
          CHECK(std::abs(koszul_oracle(a, b, c, model, z, cfg) - koszul_oracle(b, a, c, model, z, cfg) -
                         2.0 * bracket) < 1e-8);
        }
  }
}

TEST_CASE("Levi-Civita properties at sampled points") {
  std::mt19937_64 rng(8);
  const oracle::FDConfig cfg;
  for (const auto& model : general_models())
    for (int trial = 0; trial < 5; ++trial) {
      const Vec z = test::random_z(rng, model);
      const PointState s = evaluate(model, z);
      const Tensor3 omega = connection_form(connection_coeffs_general(s).coeffs);
      CHECK(torsion_residual(omega, oracle::numeric_brackets(adapted_frame(model), z, cfg)) < 1e-5);
      CHECK(metric_compatibility_residual(model, z, omega, cfg) < 1e-5);
    }
  for (const auto& model : kahler_models())
    for (int trial = 0; trial < 5; ++trial) {
      const Vec z = test::random_z(rng, model);
      const Tensor3 omega = connection_form(connection_coeffs_general(evaluate(model, z)).coeffs);
      CHECK(nabla_J_residual(model, z, omega, cfg) < 1e-5);
    }
  // J is not parallel once the metric coefficient is detuned.
  const auto detuned = CotangentModel::space_form(2, 1.0, 1.1 * std::sqrt(2.0), VProfile::rational());
  const Vec z = test::random_z(rng, detuned);
  const Tensor3 omega = connection_form(connection_coeffs_general(evaluate(detuned, z)).coeffs);
  CHECK(nabla_J_residual(detuned, z, omega, cfg) > 1e-3);
}

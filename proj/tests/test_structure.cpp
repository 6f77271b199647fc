#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kec/structure.hpp"
#include "test_support.hpp"

using namespace kec;

namespace {

struct Fixture {
  CotangentModel model;
  std::string label;
};

std::vector<Fixture> admissible_fixtures() {
  return {
      {CotangentModel::kahler_einstein(2, 1.0, 1.0, 1.0), "einstein n=2 c=1"},
      {CotangentModel::kahler_einstein(3, 2.0, 0.0, 1.0), "einstein n=3 c=2"},
      {CotangentModel::space_form(3, 0.5, 1.7, VProfile::rational()), "rational n=3"},
      {CotangentModel::space_form(2, 1.0, 0.6, VProfile::constant(0.4)), "constant n=2"},
  };
}

CotangentModel bumped_model(int n, double c, double bump) {
  const ModelParams params = ModelParams::kahler(n, c);
  return CotangentModel{params, ConformalChart(c, bump), VProfile::einstein(c, n, 1.0, 1.0)};
}

// Random point whose energy density is exactly one.
Vec unit_energy_z(std::mt19937_64& rng, const CotangentModel& model) {
  return test::random_z(rng, model, 1.5, 1.0, 1.0);
}

}  // namespace

TEST_CASE("complex structure") {
  std::mt19937_64 rng(1);
  for (const auto& fx : admissible_fixtures()) {
    INFO(fx.label);
    const int n = fx.model.params.n;
    for (int trial = 0; trial < 25; ++trial) {
      const PointState s = evaluate(fx.model, test::random_z(rng, fx.model, 2.0, 0.1, 10.0));
      const BlockOperator J = assemble_J(s.fiber.G, s.fiber.H);
      const Mat Jd = J.dense();
      CHECK(max_abs(Mat(Jd * Jd + Mat::Identity(2 * n, 2 * n))) < 1e-11);
      const BlockBilinear Gb = assemble_metric(s.fiber.G, s.fiber.H);
      for (int pair = 0; pair < 4; ++pair) {
        const AdaptedVector x{test::uniform_vec(rng, n, -1, 1), test::uniform_vec(rng, n, -1, 1)};
        const AdaptedVector y{test::uniform_vec(rng, n, -1, 1), test::uniform_vec(rng, n, -1, 1)};
        CHECK(std::abs(Gb(J.apply(x), J.apply(y)) - Gb(x, y)) < 1e-10);
      }
      for (int i = 0; i < n; ++i) {
        const AdaptedVector e{Vec::Unit(n, i), Vec::Zero(n)};
        const AdaptedVector jj = J.apply(J.apply(e));
        CHECK(max_abs(Vec(jj.stacked() + e.stacked())) < 1e-11);
      }
    }
  }

  SUBCASE("flat-looking configuration: g = I, v = 0, a = 1, t = 1") {
    const Mat I = Mat::Identity(2, 2);
    const BlockOperator J = assemble_J(MTensor02{I}, MTensor20{I});
    CHECK(J.vh == I);
    CHECK(J.hv == -I);
    CHECK(J.hh.isZero(0.0));
    CHECK(J.vv.isZero(0.0));
  }
}

TEST_CASE("fundamental form is the canonical symplectic form") {
  std::mt19937_64 rng(2);
  for (const auto& fx : admissible_fixtures()) {
    INFO(fx.label);
    const int n = fx.model.params.n;
    const Mat I = Mat::Identity(n, n);
    for (int trial = 0; trial < 50; ++trial) {
      const PointState s = evaluate(fx.model, test::random_z(rng, fx.model, 2.0, 0.1, 10.0));
      const BlockBilinear phi = fundamental_form(assemble_metric(s.fiber.G, s.fiber.H),
                                                 assemble_J(s.fiber.G, s.fiber.H));
      CHECK(max_abs(phi.hh) < 1e-12);
      CHECK(max_abs(phi.vv) < 1e-12);
      CHECK(max_abs(Mat(phi.vh - I)) < 1e-12);
      CHECK(max_abs(Mat(phi.hv + I)) < 1e-12);
      const AdaptedVector x{test::uniform_vec(rng, n, -1, 1), test::uniform_vec(rng, n, -1, 1)};
      const AdaptedVector y{test::uniform_vec(rng, n, -1, 1), test::uniform_vec(rng, n, -1, 1)};
      CHECK(std::abs(phi(x, y) + phi(y, x)) < 1e-12);
    }
  }
}

TEST_CASE("closedness of the fundamental form") {
  const oracle::FDConfig cfg;
  std::mt19937_64 rng(3);

  SUBCASE("constant-coefficient form in coordinates") {
    const int n = 3;
    Mat canon = Mat::Zero(2 * n, 2 * n);
    canon.bottomLeftCorner(n, n) = Mat::Identity(n, n);
    canon.topRightCorner(n, n) = -Mat::Identity(n, n);
    const oracle::Field form = [&](const Vec&) { return Vec(canon.reshaped()); };
    const Vec z = test::uniform_vec(rng, 2 * n, -1, 1);
    CHECK(exterior_derivative_residual(form, 2 * n, oracle::coordinate_frame(2 * n), z, cfg) < 1e-8);
  }

  SUBCASE("a non-closed form is detected") {
    // x0 dx0 ^ dx1 has d = 0, x2 dx0 ^ dx1 does not.
    const oracle::Field form = [](const Vec& y) {
      Mat m = Mat::Zero(3, 3);
      m(0, 1) = y(2);
      m(1, 0) = -y(2);
      return Vec(m.reshaped());
    };
    CHECK(exterior_derivative_residual(form, 3, oracle::coordinate_frame(3), Vec::Ones(3), cfg) > 0.5);
  }

  SUBCASE("Einstein profile n=3, c=1 and profile independence") {
    const auto einstein = CotangentModel::kahler_einstein(3, 1.0, 1.0, 1.0);
    const auto rational = CotangentModel::space_form(3, 1.0, std::sqrt(2.0), VProfile::rational());
    for (int trial = 0; trial < 5; ++trial) {
      const Vec z = test::random_z(rng, einstein);
      const double r1 = dphi_residual(einstein, z, cfg);
      const double r2 = dphi_residual(rational, z, cfg);
      CHECK(r1 < 1e-6);
      CHECK(std::abs(r1 - r2) < 1e-9);
    }
  }
}

TEST_CASE("Nijenhuis closed form") {
  std::mt19937_64 rng(4);

  SUBCASE("vanishes on the integrable space forms") {
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 2 + trial % 3;
      const double c = 0.5 + 0.015 * trial;
      const ModelParams params = ModelParams::kahler(n, c);
      const auto model = trial % 2 ? CotangentModel::kahler_einstein(n, c, 1.0, 0.5)
                                   : CotangentModel::space_form(n, c, params.a_metric, VProfile::rational());
      const PointState s = evaluate(model, test::random_z(rng, model, 2.0, 0.1, 10.0));
      worst = std::max(worst, max_component(nijenhuis_closed_form(s, model.params)));
    }
    CHECK(worst < 1e-9);
  }

  SUBCASE("detuned metric coefficient at t = 1") {
    for (double c : {0.5, 1.0, 2.0}) {
      const auto model = CotangentModel::space_form(3, c, 1.1 * std::sqrt(2.0 * c), VProfile::rational());
      const PointState s = evaluate(model, unit_energy_z(rng, model));
      double hh = 0.0;
      for (const auto& nv : nijenhuis_closed_form(s, model.params))
        if (nv.pair_kind == FramePair::HorizontalHorizontal) hh = std::max(hh, max_abs(nv.value.stacked()));
      CHECK(hh > 1e-3);
    }
  }

  SUBCASE("five percent detuning is visible") {
    const auto model = CotangentModel::space_form(2, 1.0, 0.95 * std::sqrt(2.0), VProfile::rational());
    const PointState s = evaluate(model, test::random_z(rng, model));
    CHECK(max_component(nijenhuis_closed_form(s, model.params)) > 1e-4);
  }

  SUBCASE("horizontal pair is antisymmetric") {
    const auto model = CotangentModel::space_form(3, 1.0, 2.0, VProfile::rational());
    const PointState s = evaluate(model, test::random_z(rng, model));
    const auto values = nijenhuis_closed_form(s, model.params);
    for (const auto& a : values)
      for (const auto& b : values)
        if (a.pair_kind == FramePair::HorizontalHorizontal && b.pair_kind == a.pair_kind && a.i == b.j && a.j == b.i)
          CHECK(max_abs(Vec(a.value.stacked() + b.value.stacked())) < 1e-14);
  }

  SUBCASE("non-constant base curvature") {
    const auto model = bumped_model(3, 1.0, 0.3);
    const PointState s = evaluate(model, test::random_z(rng, model));
    CHECK(max_component(nijenhuis_closed_form(s, model.params)) > 1e-3);
  }
}

TEST_CASE("Nijenhuis bracket-definition oracle") {
  std::mt19937_64 rng(5);
  const oracle::FDConfig cfg;

  SUBCASE("agrees with the closed form, integrable and not") {
    for (int n : {2, 3})
      for (double a_scale : {1.0, 1.1, 0.7}) {
        const auto model = CotangentModel::space_form(n, 1.0, a_scale * std::sqrt(2.0), VProfile::rational());
        for (int trial = 0; trial < 20; ++trial) {
          const Vec z = test::random_z(rng, model);
          const auto closed = nijenhuis_closed_form(evaluate(model, z), model.params);
          const auto numeric = nijenhuis_numeric(model, z, cfg);
          CHECK(max_difference(closed, numeric) < 1e-5);
          if (a_scale == 1.0) CHECK(max_component(numeric) < 1e-5);
        }
      }
  }

  SUBCASE("agrees on the bumped base") {
    const auto model = bumped_model(2, 1.0, 0.4);
    const Vec z = test::random_z(rng, model);
    CHECK(max_difference(nijenhuis_closed_form(evaluate(model, z), model.params),
                         nijenhuis_numeric(model, z, cfg)) < 1e-5);
  }

  SUBCASE("constant standard structure in coordinates is integrable") {
    const int n = 2;
    Mat J = Mat::Zero(2 * n, 2 * n);
    J.bottomLeftCorner(n, n) = Mat::Identity(n, n);
    J.topRightCorner(n, n) = -Mat::Identity(n, n);
    const oracle::Field jf = [&](const Vec&) { return Vec(J.reshaped()); };
    CHECK(nijenhuis_frame(jf, oracle::coordinate_frame(2 * n), Vec::Ones(2 * n), cfg).max_abs() < 1e-8);
  }

  SUBCASE("antisymmetric") {
    const auto model = CotangentModel::space_form(2, 1.0, 2.0, VProfile::rational());
    const Vec z = test::random_z(rng, model);
    const oracle::Field jf = [&](const Vec& y) { return Vec(frame_complex_structure(model, y).reshaped()); };
    const Tensor3 N = nijenhuis_frame(jf, adapted_frame(model), z, cfg);
    double asym = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c) asym = std::max(asym, std::abs(N(a, b, c) + N(b, a, c)));
    CHECK(asym < 1e-8);
  }
}

#include "kec/oracle.hpp"

#include "kec/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace kec::oracle {

void FDConfig::validate() const {
  if (!(base_step >= 1e-8 && base_step <= 1e-2))
    throw ConfigError("fd.base_step", "must lie in [1e-8, 1e-2], got " + std::to_string(base_step));
  if (richardson_levels < 1 || richardson_levels > 3)
    throw ConfigError("fd.richardson_levels", "must be 1, 2 or 3");
}

Frame coordinate_frame(int dim) {
  return Frame{[dim](const Vec&) { return Mat::Identity(dim, dim).eval(); },
               [dim](const Vec&) { return Tensor3(dim); }};
}

namespace {

Vec checked(Vec v) {
  if (!v.allFinite()) throw FiniteDifferenceError("non-finite value on the stencil");
  return v;
}

// 4th-order central difference of s -> field(z + s dir) at s = 0.
Vec central4(const Field& field, const Vec& z, const Vec& dir, double h) {
  const Vec fp2 = checked(field(z + 2.0 * h * dir));
  const Vec fp1 = checked(field(z + h * dir));
  const Vec fm1 = checked(field(z - h * dir));
  const Vec fm2 = checked(field(z - 2.0 * h * dir));
  return (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
}

// Richardson table over h, h/2, ...; the error expansion of the 4th-order
// stencil has only even powers starting at h^4.
Vec extrapolated(const Field& field, const Vec& z, const Vec& dir, double h, int levels) {
  std::vector<Vec> row;
  row.reserve(static_cast<std::size_t>(levels));
  for (int k = 0; k < levels; ++k) row.push_back(central4(field, z, dir, h / std::ldexp(1.0, k)));
  for (int j = 1; j < levels; ++j) {
    const double w = std::ldexp(1.0, 4 + 2 * (j - 1));
    for (int k = 0; k + j < levels; ++k) row[k] = (w * row[k + 1] - row[k]) / (w - 1.0);
  }
  return row.front();
}

double scaled_step(const Vec& z, const Vec& dir, const FDConfig& cfg) {
  double h = cfg.base_step;
  if (cfg.relative_scaling) h *= std::max(1.0, max_abs(z));
  h /= std::max(1.0, max_abs(dir));
  // The smallest displacement must change the coordinates it moves.
  const double smallest = h / std::ldexp(1.0, cfg.richardson_levels - 1);
  const Vec moved = z + smallest * dir;
  if (!(smallest > 0.0) || (moved - z).cwiseAbs().maxCoeff() == 0.0)
    throw FiniteDifferenceError("finite-difference step underflow");
  return h;
}

}  // namespace

Vec fd_directional(const Field& field, const Vec& z, const Vec& direction, const FDConfig& cfg) {
  return extrapolated(field, z, direction, scaled_step(z, direction, cfg), cfg.richardson_levels);
}

Vec fd_partial(const Field& field, const Vec& z, int dir, const FDConfig& cfg) {
  Vec e = Vec::Zero(z.size());
  e(dir) = 1.0;
  double h = cfg.base_step;
  if (cfg.relative_scaling) h *= std::max(1.0, std::abs(z(dir)));
  if (z(dir) + h / std::ldexp(1.0, cfg.richardson_levels - 1) == z(dir))
    throw FiniteDifferenceError("finite-difference step underflow");
  return extrapolated(field, z, e, h, cfg.richardson_levels);
}

Vec frame_derivative(const Field& field, const Vec& z, const Frame& frame, int a,
                     const FDConfig& cfg) {
  const Mat e = frame.vectors(z);
  return fd_directional(field, z, e.col(a), cfg);
}

Tensor3 numeric_brackets(const Frame& frame, const Vec& z, const FDConfig& cfg) {
  const Mat e = frame.vectors(z);
  const int d = static_cast<int>(e.cols());
  const auto column = [&frame](int b) {
    return Field([&frame, b](const Vec& y) { return Vec(frame.vectors(y).col(b)); });
  };
  // jac[a][b] = D E_b applied to E_a
  std::vector<std::vector<Vec>> jac(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) jac[a].push_back(fd_directional(column(b), z, e.col(a), cfg));

  const Eigen::PartialPivLU<Mat> lu(e);
  Tensor3 out(d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      const Vec comps = lu.solve(jac[a][b] - jac[b][a]);
      for (int c = 0; c < d; ++c) out(a, b, c) = comps(c);
    }
  return out;
}

OrderCheck fd_order_check(const FDConfig& cfg, double initial_step, double floor, double factor) {
  // f(x) = exp(sin x) at x = 0.7
  const Field f = [](const Vec& x) { return Vec::Constant(1, std::exp(std::sin(x(0)))); };
  const Vec x0 = Vec::Constant(1, 0.7);
  const Vec dir = Vec::Constant(1, 1.0);
  const double exact = std::cos(0.7) * std::exp(std::sin(0.7));

  OrderCheck out;
  out.min_ratio = std::numeric_limits<double>::infinity();
  double h = initial_step;
  int counted = 0;
  for (int k = 0; k < 30; ++k, h *= 0.5) {
    const double err = std::abs(extrapolated(f, x0, dir, h, cfg.richardson_levels)(0) - exact);
    out.steps.push_back(h);
    out.errors.push_back(err);
    if (err < floor) break;
    if (out.errors.size() >= 2) {
      out.min_ratio = std::min(out.min_ratio, out.errors[out.errors.size() - 2] / err);
      ++counted;
    }
  }
  out.passed = counted >= 1 && out.errors.back() < floor && out.min_ratio >= factor;
  return out;
}

}  // namespace kec::oracle

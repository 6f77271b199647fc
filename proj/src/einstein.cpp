#include "kec/einstein.hpp"

#include "kec/errors.hpp"

#include <cmath>

namespace kec {

ProfileValue v_einstein(double t, const ModelParams& params) {
  return VProfile::einstein(params.c, params.n, params.k_a, params.k_b)(t);
}

double gamma_factor(double t, const VProfile& vp, const ModelParams& params) {
  const ProfileValue pv = vp(t);
  const double st = std::sqrt(t);
  const double r2 = std::sqrt(2.0);
  return (2 - params.n) * std::sqrt(params.c) - 2.0 * (params.n + 3) * r2 * t * st * pv.dv -
         4.0 * r2 * t * t * st * pv.d2v;
}

double euler_ode_residual(double t, const VProfile& vp, const ModelParams& params) {
  const ProfileValue pv = vp(t);
  return t * t * pv.d2v + 0.5 * (params.n + 3) * t * pv.dv -
         (2 - params.n) * std::sqrt(params.c) / (4.0 * std::sqrt(2.0) * std::sqrt(t));
}

bool kahler_admissible(double t, const VProfile& vp, const ModelParams& params) {
  return vp(t).v > -std::sqrt(params.c / (2.0 * t));
}

EinsteinDifference einstein_difference(const PointState& s, const RicciBlocks& ric,
                                       const BlockBilinear& Gb, const ModelParams& params) {
  const double t = s.pt.t();
  const double a = ricci_coefficients(t, s.v, params).a;
  const double scale = a / (2.0 * std::sqrt(2.0 * params.c * t));
  return {ric.qq - scale * Gb.hh, ric.pp - scale * Gb.vv};
}

double einstein_constant(const ModelParams& params) { return -0.5 * params.k_b * (params.n + 1); }

double einstein_constant_check(const RicciBlocks& ric, const BlockBilinear& Gb,
                               const ModelParams& params) {
  return max_abs(Mat(ric.dense() - einstein_constant(params) * Gb.dense()));
}

double fit_einstein_constant(const std::vector<Mat>& ricci, const std::vector<Mat>& metric) {
  if (ricci.size() != metric.size() || ricci.empty())
    throw DomainError("fit_einstein_constant: mismatched or empty batch");
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < ricci.size(); ++k) {
    num += (ricci[k].array() * metric[k].array()).sum();
    den += metric[k].squaredNorm();
  }
  return num / den;
}

}  // namespace kec

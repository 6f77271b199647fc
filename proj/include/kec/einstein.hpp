#pragma once

#include "kec/base_manifold.hpp"
#include "kec/curvature.hpp"
#include "kec/mtensor.hpp"
#include "kec/profile.hpp"

#include <vector>

namespace kec {

/// Einstein profile value and exact derivatives at t for the constants in
/// `params`.  Throws DomainError for t <= 0.
ProfileValue v_einstein(double t, const ModelParams& params);

/// gamma = (2-n) sqrt(c) - 2(n+3) sqrt(2) t^{3/2} v' - 4 sqrt(2) t^{5/2} v''.
double gamma_factor(double t, const VProfile& vp, const ModelParams& params);

/// t^2 v'' + (n+3)/2 t v' - (2-n) sqrt(c) / (4 sqrt(2)) t^{-1/2}.
double euler_ode_residual(double t, const VProfile& vp, const ModelParams& params);

/// True when v(t) > -sqrt(c / 2t).
bool kahler_admissible(double t, const VProfile& vp, const ModelParams& params);

struct EinsteinDifference {
  Mat qq;  ///< RicQQ_jk - a / (2 sqrt(2ct)) G_jk
  Mat pp;  ///< RicPP^jk - a / (2 sqrt(2ct)) H^jk
};

/// Difference tensors by direct subtraction; `a` is the closed-form Ricci
/// coefficient at the point.
EinsteinDifference einstein_difference(const PointState& s, const RicciBlocks& ric,
                                       const BlockBilinear& Gb, const ModelParams& params);

/// The Einstein constant -k_b (n+1) / 2.
double einstein_constant(const ModelParams& params);

/// max |Ric(E_a, E_b) + k_b (n+1)/2 G(E_a, E_b)| over frame pairs.
double einstein_constant_check(const RicciBlocks& ric, const BlockBilinear& Gb,
                               const ModelParams& params);

/// Least-squares lambda minimizing sum |Ric - lambda G|^2 over a batch.
double fit_einstein_constant(const std::vector<Mat>& ricci, const std::vector<Mat>& metric);

}  // namespace kec

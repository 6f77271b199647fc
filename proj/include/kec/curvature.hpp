#pragma once

#include "kec/connection.hpp"
#include "kec/mtensor.hpp"
#include "kec/oracle.hpp"
#include "kec/profile.hpp"

#include <optional>

namespace kec {

/// The six curvature blocks of K(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z
/// - nabla_[X,Y] Z in the adapted frame.  Storage follows the index order of
/// the component names:
///   K(dq_i, dq_j) dq_k = QQQ^h_ijk dq_h      qqq(h, i, j, k)
///   K(dq_i, dq_j) dp_k = QQP^k_ijh dp_h      qqp(k, i, j, h)
///   K(dp_i, dp_j) dq_k = PPQ^ijh_k dq_h      ppq(i, j, h, k)
///   K(dp_i, dp_j) dp_k = PPP^ijk_h dp_h      ppp(i, j, k, h)
///   K(dp_i, dq_j) dq_k = PQQ^i_jkh dp_h      pqq(i, j, k, h)
///   K(dp_i, dq_j) dp_k = PQP^ikh_j dq_h      pqp(i, k, h, j)
struct CurvatureBlocks {
  Tensor4 qqq;
  Tensor4 qqp;
  Tensor4 ppq;
  Tensor4 ppp;
  Tensor4 pqq;
  Tensor4 pqp;
};

/// Closed-form blocks from the connection coefficients and their fiber
/// derivatives.  QQP and PPP are assigned from QQQ and PPQ, which relies on
/// J being parallel: throws PreconditionError unless a_metric = sqrt(2c).
CurvatureBlocks curvature_blocks(const PointState& s, const ConnectionJet& jet, const ModelParams& params);

/// Full frame curvature K(a, b, c, d) = component d of K(E_a, E_b) E_c.
Tensor4 assemble_curvature(const CurvatureBlocks& blocks);

/// a, alpha, beta of the closed-form Ricci tensor.
struct RicciCoefficients {
  double a = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
};

struct RicciBlocks {
  Mat qq;     ///< Ric(dq_j, dq_k)
  Mat pp;     ///< Ric(dp_j, dp_k)
  Mat mixed;  ///< Ric(dp_i, dq_j)
  std::optional<RicciCoefficients> coeffs;

  Mat dense() const;
};

/// Ricci by tracing the blocks.
RicciBlocks ricci_blocks(const CurvatureBlocks& blocks);

/// Ricci by tracing a full frame curvature, Ric(b, c) = K(a, b, c, a).
RicciBlocks ricci_from_curvature(const Tensor4& K);

RicciCoefficients ricci_coefficients(double t, const ProfileValue& v, const ModelParams& params);

/// RicQQ = a/2 g + alpha/(4t) p p, RicPP = a/(4ct) g^-1 + beta/(8 sqrt(c) t^2
/// (sqrt(c) + sqrt(2t) v)) g^0 g^0.  Kähler configurations only.
RicciBlocks ricci_closed_form(const PointState& s, const ModelParams& params);

/// Curvature from a connection form field by the definition formula, with
/// finite differences of the connection along the frame.
Tensor4 curvature_from_connection(const ConnectionField& omega, const oracle::Frame& frame,
                                  const Vec& z, const oracle::FDConfig& cfg);

/// max |G(K(X,Y)Z, W) - G(K(Z,W)X, Y)| over frame quadruples.
double pair_symmetry_residual(const Tensor4& K, const Mat& G);

/// H(X) = G(K(X, JX) JX, X) / G(X, X)^2.  Throws DomainError for X = 0.
double holomorphic_sectional_curvature(const AdaptedVector& x, const Tensor4& K,
                                       const BlockBilinear& Gb, const BlockOperator& J);

/// Closed-form frame curvature as a field over chart coordinates.
using CurvatureField = std::function<Tensor4(const Vec&)>;
/// Kähler configurations only.
CurvatureField analytic_curvature_field(const CotangentModel& model);

/// (nabla_{E_e} K)(a, b, c, d) by the Leibniz expansion, finite differences
/// for the derivatives of K's components.
Tensor5 covariant_derivative_curvature(const CurvatureField& K, const Tensor3& omega,
                                       const oracle::Frame& frame, const Vec& z,
                                       const oracle::FDConfig& cfg);

/// max |nabla K| at z for the closed-form curvature; nonzero witnesses that
/// the metric is not locally symmetric.
double nabla_K_probe(const CotangentModel& model, const Vec& z, const oracle::FDConfig& cfg);

/// max |(nabla_e K)(a,b) + (nabla_a K)(b,e) + (nabla_b K)(e,a)|.
double second_bianchi_residual(const Tensor5& nabla_k);

}  // namespace kec

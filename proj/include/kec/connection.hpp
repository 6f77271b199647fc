#pragma once

#include "kec/mtensor.hpp"
#include "kec/oracle.hpp"

#include <functional>

namespace kec {

/// Levi-Civita connection of G in the adapted frame:
///   nabla_{dp_i} dp_j = Q^ij_h dp_h
///   nabla_{dq_i} dp_j = -Gamma^j_ih dp_h + P^hj_i dq_h
///   nabla_{dp_i} dq_j = P^hi_j dq_h
///   nabla_{dq_i} dq_j = Gamma^h_ij dq_h + S_hij dp_h
struct ConnectionCoeffs {
  Tensor3 Q;      ///< Q(i, j, h) = Q^ij_h
  Tensor3 P;      ///< P(h, i, j) = P^hi_j
  Tensor3 S;      ///< S(h, i, j) = S_hij
  Tensor3 gamma;  ///< base Christoffels, gamma(k, i, j) = Gamma^k_ij
};

/// Coefficients together with their fiber derivatives, needed for curvature.
struct ConnectionJet {
  ConnectionCoeffs coeffs;
  Tensor4 dP;  ///< dP(m, h, i, j) = d P^hi_j / dp_m
  Tensor4 dS;  ///< dS(m, h, i, j) = d S_hij / dp_m
};

/// General formulas in terms of G, H, their fiber derivatives and R^0.
ConnectionJet connection_coeffs_general(const PointState& s);

/// Specialization for a_metric = sqrt(2c).  Throws PreconditionError when
/// the configuration is not Kähler or v <= -sqrt(c / 2t).
ConnectionCoeffs connection_coeffs_kahler(const PointState& s, const ModelParams& params);

/// Christoffel form of the frame connection: omega(a, b, d) is component d
/// of nabla_{E_a} E_b, frame ordering (delta/delta q^0.., d/dp_0..).
Tensor3 connection_form(const ConnectionCoeffs& coeffs);

/// nabla_{E_a} E_b from the frame rules.
AdaptedVector covariant_derivative_frame(int a, int b, const ConnectionCoeffs& coeffs);

/// nabla_X Y for a vector field Y (frame components as a function of z),
/// using finite differences for the derivatives of Y's components.
AdaptedVector covariant_derivative(const AdaptedVector& x, const oracle::Field& y, const Vec& z,
                                   const CotangentModel& model, const ConnectionCoeffs& coeffs,
                                   const oracle::FDConfig& cfg);

/// Connection form as a field over chart coordinates.
using ConnectionField = std::function<Tensor3(const Vec&)>;

/// Closed-form connection form (general formulas).
ConnectionField analytic_connection_field(const CotangentModel& model);

/// Right side of 2 G(nabla_X Y, Z) = X G(Y,Z) + Y G(X,Z) - Z G(X,Y)
///   + G([X,Y],Z) - G([X,Z],Y) - G([Y,Z],X) for frame fields X=E_a, Y=E_b, Z=E_c.
double koszul_oracle(int a, int b, int c, const CotangentModel& model, const Vec& z,
                     const oracle::FDConfig& cfg);

/// Connection form recovered from the Koszul formula by inverting G.
Tensor3 koszul_connection(const CotangentModel& model, const Vec& z, const oracle::FDConfig& cfg);

/// Levi-Civita connection form of an arbitrary frame metric field.
using MetricField = std::function<Mat(const Vec&)>;
Tensor3 koszul_connection(const MetricField& metric, const oracle::Frame& frame, const Vec& z,
                          const oracle::FDConfig& cfg);
ConnectionField koszul_connection_field(const CotangentModel& model, const oracle::FDConfig& cfg);

/// max |nabla_a E_b - nabla_b E_a - [E_a, E_b]| over frame pairs.
double torsion_residual(const Tensor3& omega, const Tensor3& brackets);

/// max |E_a G(E_b, E_c) - G(nabla_a E_b, E_c) - G(E_b, nabla_a E_c)|.
double metric_compatibility_residual(const CotangentModel& model, const Vec& z,
                                     const Tensor3& omega, const oracle::FDConfig& cfg);

/// max |(nabla_{E_a} J) E_b|.
double nabla_J_residual(const CotangentModel& model, const Vec& z, const Tensor3& omega,
                        const oracle::FDConfig& cfg);

/// max |x - y| over Q, P, S.
double max_coeff_difference(const ConnectionCoeffs& x, const ConnectionCoeffs& y);

}  // namespace kec

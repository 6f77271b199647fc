#pragma once

#include "kec/mtensor.hpp"
#include "kec/oracle.hpp"

#include <vector>

namespace kec {

/// J delta/delta q^i = G_ik d/dp_k, J d/dp_i = -H^ik delta/delta q^k.
BlockOperator assemble_J(const MTensor02& G, const MTensor20& H);

/// Dense matrix of J in the adapted frame at z = (q, p); column b holds J E_b.
Mat frame_complex_structure(const CotangentModel& model, const Vec& z);

/// phi(X, Y) = G(X, JY).  For the pair built from one G this is the
/// canonical symplectic form: vh = identity, hv = -identity, hh = vv = 0.
BlockBilinear fundamental_form(const BlockBilinear& Gb, const BlockOperator& J);

/// Maximum of |d omega(E_a, E_b, E_c)| over frame triples, for a 2-form
/// given by its frame components; derivatives by finite differences.
double exterior_derivative_residual(const oracle::Field& form, int dim, const oracle::Frame& frame,
                                    const Vec& z, const oracle::FDConfig& cfg);

/// d phi residual of the fundamental form at z.
double dphi_residual(const CotangentModel& model, const Vec& z, const oracle::FDConfig& cfg);

/// One frame-pair component N(X, Y) of the Nijenhuis tensor.
struct NijenhuisValue {
  AdaptedVector value;
  FramePair pair_kind;  ///< HH: (dq_i, dq_j), VH: (dq_i, dp_j), VV: (dp_i, dp_j)
  int i = 0;
  int j = 0;
};

/// Closed-form Nijenhuis components on all three frame-pair families.
std::vector<NijenhuisValue> nijenhuis_closed_form(const PointState& s, const ModelParams& params);

/// Nijenhuis tensor N(X,Y) = [JX,JY] - J[JX,Y] - J[X,JY] - [X,Y] on frame
/// pairs, with frame brackets from the structure constants and finite
/// differences for the derivatives of J's components.  Same ordering as
/// nijenhuis_closed_form.
std::vector<NijenhuisValue> nijenhuis_numeric(const CotangentModel& model, const Vec& z,
                                              const oracle::FDConfig& cfg);

/// Generic frame version: full tensor out(a, b, c) = component c of N(E_a, E_b).
Tensor3 nijenhuis_frame(const oracle::Field& j_field, const oracle::Frame& frame, const Vec& z,
                        const oracle::FDConfig& cfg);

double max_component(const std::vector<NijenhuisValue>& values);

/// max |x - y| over matching components of two Nijenhuis lists.
double max_difference(const std::vector<NijenhuisValue>& x, const std::vector<NijenhuisValue>& y);

}  // namespace kec

#pragma once

#include "kec/base_manifold.hpp"
#include "kec/oracle.hpp"
#include "kec/profile.hpp"
#include "kec/tensor.hpp"

namespace kec {

/// Components of an M-tensor field of type (0,2) at a point (lower indices).
struct MTensor02 {
  Mat comp;
};

/// Components of an M-tensor field of type (2,0) at a point (upper indices).
struct MTensor20 {
  Mat comp;
};

/// t = 1/2 g^ik p_i p_k.  Throws DomainError on the zero section (t < 1e-300).
double energy_density(const Vec& q, const Vec& p, const MetricJet& jet);

/// Point (q, p) of the nonzero cotangent bundle with its energy density cached.
class CotangentPoint {
 public:
  /// Rejects points with t < 1e-12.
  CotangentPoint(Vec q, Vec p, const MetricJet& jet);

  const Vec& q() const noexcept { return q_; }
  const Vec& p() const noexcept { return p_; }
  double t() const noexcept { return t_; }
  int n() const noexcept { return static_cast<int>(q_.size()); }

  /// Stacked chart coordinates (q, p) of T*M.
  Vec z() const;

  /// Recomputes t from `jet`; throws DomainError if it drifted from the cache.
  void revalidate(const MetricJet& jet) const;

 private:
  Vec q_;
  Vec p_;
  double t_;
};

/// G_ij, H^kl and their derivatives along the fiber.
struct FiberMetric {
  MTensor02 G;
  MTensor20 H;
  double w = 0.0;  ///< coefficient of g^0k g^0l in H^kl
  Tensor3 dG;      ///< dG(k, i, j) = dG_ij / dp_k
  Tensor3 dH;      ///< dH(m, k, l) = dH^kl / dp_m
  Tensor4 ddG;     ///< ddG(m, k, i, j) = d^2 G_ij / dp_m dp_k
};

/// G_ij = a sqrt(t) g_ij + v(t) p_i p_j.  Throws PositivityError when
/// v(t) <= -a / (2 sqrt(t)).
MTensor02 metric_G_lower(const CotangentPoint& pt, const MetricJet& jet, const VProfile& vp,
                         const ModelParams& params);

/// H^kl = g^kl / (a sqrt(t)) + w(t) g^0k g^0l, w = -v / (a t (a + 2 sqrt(t) v)).
MTensor20 metric_H_upper(const CotangentPoint& pt, const MetricJet& jet, const VProfile& vp,
                         const ModelParams& params);

/// G, H with analytic fiber derivatives (chain rule through dt/dp_k = g^0k).
FiberMetric fiber_metric(const CotangentPoint& pt, const MetricJet& jet, const VProfile& vp,
                         const ModelParams& params);

/// Tangent vector in the adapted frame: h on delta/delta q^i, v on d/dp_i.
struct AdaptedVector {
  Vec h;
  Vec v;

  Vec stacked() const;
  static AdaptedVector from_stacked(const Vec& x);
};

/// Bilinear form on the adapted frame, B(X, Y) = X_h^T hh Y_h + X_h^T hv Y_v
/// + X_v^T vh Y_h + X_v^T vv Y_v.
struct BlockBilinear {
  Mat hh;
  Mat hv;
  Mat vh;
  Mat vv;

  double operator()(const AdaptedVector& x, const AdaptedVector& y) const;
  Mat dense() const;
  static BlockBilinear from_dense(const Mat& m);
};

/// Endomorphism of the adapted frame; `hv` maps vertical input to
/// horizontal output, and so on.
struct BlockOperator {
  Mat hh;
  Mat hv;
  Mat vh;
  Mat vv;

  AdaptedVector apply(const AdaptedVector& x) const;
  Mat dense() const;
  static BlockOperator from_dense(const Mat& m);
};

/// G = G_ij dq^i dq^j + H^ij Dp_i Dp_j.
BlockBilinear assemble_metric(const MTensor02& G, const MTensor20& H);

enum class FramePair {
  VerticalVertical,      ///< [d/dp_i, d/dp_j]
  VerticalHorizontal,    ///< [d/dp_i, delta/delta q^j]
  HorizontalHorizontal,  ///< [delta/delta q^i, delta/delta q^j]
};

/// Bracket of two adapted frame fields:
/// [dp_i, dp_j] = 0, [dp_i, dq_j] = Gamma^i_jk dp_k, [dq_i, dq_j] = R^0_kij dp_k.
AdaptedVector frame_bracket(int i, int j, FramePair kind, const CotangentPoint& pt,
                            const BaseCurvature& base);

/// Everything the construction needs to evaluate fields at any point.
struct CotangentModel {
  ModelParams params;
  ConformalChart chart;
  VProfile profile;

  /// Space form of curvature c, a_metric = sqrt(2c), Einstein profile.
  static CotangentModel kahler_einstein(int n, double c, double k_a, double k_b);

  /// Space form of curvature c with an explicit a_metric and profile.
  static CotangentModel space_form(int n, double c, double a_metric, const VProfile& profile);
};

/// Closed-form local data at one cotangent point.
struct PointState {
  CotangentPoint pt;
  MetricJet jet;
  BaseCurvature base;
  ProfileValue v;
  Vec g0;      ///< g^0i = g^ik p_k
  Tensor3 r0;  ///< r0(k, i, j) = R^0_kij = p_h R^h_kij
  FiberMetric fiber;
};

PointState evaluate(const CotangentModel& model, const Vec& q, const Vec& p);
PointState evaluate(const CotangentModel& model, const Vec& z);

/// Coordinate components of (delta/delta q^i, d/dp_i) as columns of a 2n x 2n matrix:
/// delta/delta q^i = d/dq^i + p_k Gamma^k_ih d/dp_h.
Mat adapted_frame_vectors(const Vec& p, const Tensor3& gamma);

/// Structure constants C(a, b, c) of the adapted frame from the closed-form brackets.
Tensor3 frame_structure_constants(const PointState& s);

/// The adapted frame as a field over chart coordinates z = (q, p).
oracle::Frame adapted_frame(const CotangentModel& model);

/// Dense 2n x 2n matrix of G in the adapted frame at z = (q, p).
Mat frame_metric(const CotangentModel& model, const Vec& z);

}  // namespace kec

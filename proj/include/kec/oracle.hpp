#pragma once

#include "kec/tensor.hpp"

#include <functional>

namespace kec::oracle {

/// Finite-difference settings shared by every oracle in a run.
struct FDConfig {
  double base_step = 1e-4;
  int richardson_levels = 2;  ///< 1: plain 4th-order stencil; 2, 3: extrapolated
  bool relative_scaling = true;

  /// Throws ConfigError unless base_step in [1e-8, 1e-2] and levels in {1, 2, 3}.
  void validate() const;
};

/// Array-valued field of a chart point (flattened components).
using Field = std::function<Vec(const Vec&)>;

/// A local frame E_0..E_{d-1} on a chart domain of dimension d.
struct Frame {
  /// Columns are the coordinate components of E_a at the point.
  std::function<Mat(const Vec&)> vectors;
  /// brackets(a, b, c): component c of [E_a, E_b] in the frame.
  std::function<Tensor3(const Vec&)> brackets;
};

/// Coordinate frame of R^dim: identity vectors, vanishing brackets.
Frame coordinate_frame(int dim);

/// d field / d z_dir: 4th-order central stencil with Richardson extrapolation.
Vec fd_partial(const Field& field, const Vec& z, int dir, const FDConfig& cfg);

/// Directional derivative d/ds field(z + s * direction) at s = 0.
Vec fd_directional(const Field& field, const Vec& z, const Vec& direction, const FDConfig& cfg);

/// E_a(field), the frame vector field applied as a derivation.
Vec frame_derivative(const Field& field, const Vec& z, const Frame& frame, int a,
                     const FDConfig& cfg);

/// Brackets of the frame obtained by finite differences of the frame vectors:
/// out(a, b, c) = component c of (DE_b E_a - DE_a E_b).
Tensor3 numeric_brackets(const Frame& frame, const Vec& z, const FDConfig& cfg);

/// Step-halving order check on a smooth scalar test field.
struct OrderCheck {
  std::vector<double> steps;
  std::vector<double> errors;
  double min_ratio = 0.0;  ///< smallest error reduction while above the floor
  bool passed = false;
};

/// Halves base_step from `initial_step` until the error falls below `floor`;
/// passes if every halving above the floor improved the error by >= `factor`.
OrderCheck fd_order_check(const FDConfig& cfg, double initial_step = 0.2, double floor = 1e-11,
                          double factor = 16.0);

}  // namespace kec::oracle

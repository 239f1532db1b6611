#pragma once

// Internal grid numerics: cubic Lagrange interpolation on the action grid,
// 4th-order finite-difference stencils, and separable mode <-> angle-grid
// transforms.  Not installed.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "toravg/torus_box.hpp"

namespace toravg::detail {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// 4-point Lagrange interpolation along one action axis: stencil base node
/// and the four weights for an off-grid coordinate.  Exact at grid nodes
/// and for cubic polynomials.
struct CubicStencil {
  int base = 0;
  std::array<double, 4> w{};
};

inline CubicStencil cubic_stencil(double x, double lo, double step, int n_nodes) {
  const double t = (x - lo) / step;
  int cell = static_cast<int>(std::floor(t));
  int base = cell - 1;
  if (base < 0) base = 0;
  if (base > n_nodes - 4) base = n_nodes - 4;
  const double xi = t - base;
  CubicStencil s;
  s.base = base;
  // Lagrange basis on local nodes {0,1,2,3} evaluated at xi.
  const double a = xi, b = xi - 1.0, c = xi - 2.0, e = xi - 3.0;
  s.w[0] = -b * c * e / 6.0;
  s.w[1] = a * c * e / 2.0;
  s.w[2] = -a * b * e / 2.0;
  s.w[3] = a * b * c / 6.0;
  return s;
}

/// Coefficients of the 4th-order first-derivative stencils (5 nodes), in
/// units of 1/(12 h).  Rows: fully one-sided, offset-by-one, centered.
inline constexpr std::array<double, 5> fd4_forward = {-25.0, 48.0, -36.0, 16.0, -3.0};
inline constexpr std::array<double, 5> fd4_offset = {-3.0, -10.0, 18.0, -6.0, 1.0};
inline constexpr std::array<double, 5> fd4_centered = {1.0, -8.0, 0.0, 8.0, -1.0};

/// Apply d/dI_axis to one mode-coefficient array over the action grid.
/// 4th-order centered in the interior, one-sided at the box edges.
void differentiate_action_axis(const TorusBox& box, int axis,
                               std::span<const std::complex<double>> in,
                               std::span<std::complex<double>> out);

/// Separable transforms between mode space and a uniform M^d angle grid for
/// one action node.  M >= modes_per_axis makes values_to_modes exact on
/// band-limited data.
class AngleTransform {
 public:
  AngleTransform(const TorusBox& box, int per_axis);

  int per_axis() const noexcept { return m_; }
  int n_angle() const noexcept { return n_angle_; }

  /// modes (length n_modes) -> real values on the angle grid (length M^d).
  void modes_to_values(std::span<const std::complex<double>> modes,
                       std::span<double> values) const;

  /// real values on the angle grid -> modes within the truncation band.
  void values_to_modes(std::span<const double> values,
                       std::span<std::complex<double>> modes) const;

  /// Angle coordinates of a flat angle-grid index.
  void angle_point(int flat, std::span<double> theta) const;

 private:
  int d_;
  int k_per_axis_;  // 2K+1
  int m_;           // grid points per axis
  int n_angle_;
  int n_modes_;
  // forward_[m * k_per_axis + (k+K)] = exp(+i 2 pi k m / M), shared by all axes
  std::vector<std::complex<double>> forward_;
};

}  // namespace toravg::detail

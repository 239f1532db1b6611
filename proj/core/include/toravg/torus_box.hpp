#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace toravg {

/// A point of the phase space T^d x B: angles with period 1, actions in B.
struct PhasePoint {
  std::vector<double> theta;
  std::vector<double> action;
};

/// Wrap an angle to [0, 1).
inline double wrap_angle(double t) {
  double w = t - std::floor(t);
  return (w >= 1.0) ? 0.0 : w;
}

/// Distance of two angles on the unit circle.
inline double circle_distance(double a, double b) {
  double diff = std::fabs(wrap_angle(a) - wrap_angle(b));
  return std::min(diff, 1.0 - diff);
}

/// The discretized phase-space model T^d x B.
///
/// Angles live on [0,1)^d, so the coordinate fields d/dtheta_j generate
/// 1-periodic flows.  Fields on the space are truncated Fourier series in
/// the angles (multi-indices k in {-K..K}^d) whose coefficients are sampled
/// on a uniform N-point grid per action axis, endpoints included.
///
/// Two fields are combinable only when their TorusBox records are equal.
class TorusBox {
 public:
  static TorusBox make(int dim, std::vector<double> action_lo,
                       std::vector<double> action_hi, int truncation,
                       int grid_points);

  int dim() const noexcept { return d_; }
  int truncation() const noexcept { return K_; }
  int grid_points_per_axis() const noexcept { return N_; }
  const std::vector<double>& action_lo() const noexcept { return lo_; }
  const std::vector<double>& action_hi() const noexcept { return hi_; }

  bool operator==(const TorusBox& other) const noexcept;
  bool operator!=(const TorusBox& other) const noexcept { return !(*this == other); }

  // Fourier mode bookkeeping.  Multi-indices are flattened row-major with
  // axis 0 slowest; component j of the multi-index lies in [-K, K].
  int modes_per_axis() const noexcept { return 2 * K_ + 1; }
  int n_modes() const noexcept { return n_modes_; }
  void mode_multi(int flat, std::span<int> k) const;
  int mode_flat(std::span<const int> k) const;
  int conjugate_mode(int flat) const;
  bool mode_in_band(std::span<const int> k) const;
  bool mode_is_zero(int flat) const { return flat == zero_mode_; }
  int zero_mode() const noexcept { return zero_mode_; }

  // Action grid bookkeeping, flattened row-major with axis 0 slowest.
  int n_grid() const noexcept { return n_grid_; }
  double grid_step(int axis) const { return (hi_[axis] - lo_[axis]) / (N_ - 1); }
  double grid_coord(int axis, int node) const { return lo_[axis] + node * grid_step(axis); }
  void grid_multi(int flat, std::span<int> g) const;
  int grid_flat(std::span<const int> g) const;
  void grid_point(int flat, std::span<double> action) const;

  /// True when the action coordinates lie in B (strictly inside when
  /// `strict`, inside the closed box otherwise).
  bool inside(std::span<const double> action, bool strict) const;

  /// The box shrunk by `per_side_fraction` of its width on each side,
  /// same dimension, truncation and grid resolution.
  TorusBox shrunk(double per_side_fraction) const;

  /// Same discretization over a different action box; the new box must be
  /// contained in the current one.
  TorusBox with_action_box(std::vector<double> lo, std::vector<double> hi) const;

  /// True when `inner`'s action box is contained in this one.
  bool contains_box(const TorusBox& inner) const;

 private:
  TorusBox() = default;

  int d_ = 0;
  int K_ = 0;
  int N_ = 0;
  std::vector<double> lo_;
  std::vector<double> hi_;
  int n_modes_ = 0;
  int n_grid_ = 0;
  int zero_mode_ = 0;
};

}  // namespace toravg

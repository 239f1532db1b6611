#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "toravg/torus_box.hpp"

namespace toravg {

/// A real scalar field on T^d x B, stored as a truncated Fourier series in
/// the angles whose coefficients are complex arrays over the action grid.
/// Conjugate symmetry coef[-k] = conj(coef[k]) is maintained by every
/// factory and operation, so evaluation is real.
///
/// Values are immutable after construction; all operations return new
/// fields.  Evaluation between action grid nodes uses 4-point (cubic)
/// Lagrange interpolation per axis; evaluation in the angles is the exact
/// mode sum.
class ScalarField {
 public:
  using Complex = std::complex<double>;

  static ScalarField zeros(const TorusBox& space);
  static ScalarField constant(const TorusBox& space, double value);

  /// Build from raw mode-major storage (n_modes x n_grid); the data is
  /// symmetrized, so slightly asymmetric input is projected onto the real
  /// subspace.
  static ScalarField from_raw(const TorusBox& space, std::vector<Complex> coef);

  /// Fast path for data that is conjugate-symmetric by construction
  /// (derivatives, mode convolutions): skips the symmetrization pass and
  /// scans only `candidates` (all modes when empty) for activity.
  static ScalarField from_raw_symmetric(const TorusBox& space, std::vector<Complex> coef,
                                        std::span<const int> candidates = {});

  /// Sample a point function on the (2K+1)^d angle collocation grid crossed
  /// with the action grid and project onto the modes.  Exact for
  /// trigonometric polynomials within the truncation.
  static ScalarField from_point_function(
      const TorusBox& space,
      const std::function<double(std::span<const double> theta,
                                 std::span<const double> action)>& f);

  /// An angle-independent field from a function of the actions alone.
  static ScalarField from_action_function(
      const TorusBox& space,
      const std::function<double(std::span<const double> action)>& f);

  const TorusBox& space() const noexcept { return space_; }

  std::span<const Complex> mode(int mode_flat) const;
  /// The flat index list of modes with a nonzero coefficient array.
  const std::vector<int>& active_modes() const noexcept { return active_; }

  /// Replace one mode (and its conjugate partner) by the given coefficient
  /// array; used by builders.  Returns *this.
  ScalarField& set_mode(std::span<const int> k, std::span<const Complex> values);
  ScalarField& set_mode_constant(std::span<const int> k, Complex value);

  /// Exact Fourier sum with cubic interpolation of the coefficients in the
  /// actions.  The action coordinates must be strictly inside B.
  double evaluate(std::span<const double> theta, std::span<const double> action) const;
  double evaluate(const PhasePoint& p) const { return evaluate(p.theta, p.action); }

  /// Evaluation with the action fixed at a grid node (no interpolation);
  /// valid on the whole closed box, boundary nodes included.
  double evaluate_at_grid_action(std::span<const double> theta, int grid_flat) const;

  /// Values on the M^d uniform angle grid per action node, laid out
  /// [grid_flat * M^d + angle_flat], angle axis 0 slowest.
  std::vector<double> sample_angle_grid(int per_axis) const;

  /// Sup norm over the (4K+1)^d angle grid crossed with the action grid.
  double sup_norm() const;

  /// Max over the grid of |coef[-k] - conj(coef[k])| (an invariant check;
  /// zero up to rounding by construction).
  double conjugate_defect() const;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double scale);
  friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
  friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
  friend ScalarField operator*(ScalarField a, double s) { return a *= s; }
  friend ScalarField operator*(double s, ScalarField a) { return a *= s; }
  ScalarField operator-() const;

  std::span<const Complex> raw() const noexcept { return coef_; }

 private:
  // Does not scan for active modes; factories do.
  ScalarField(TorusBox space, std::vector<Complex> coef)
      : space_(std::move(space)), coef_(std::move(coef)) {}

  void rebuild_active(std::span<const int> candidates = {});
  void symmetrize();

  TorusBox space_;
  std::vector<Complex> coef_;  // mode-major: coef_[m * n_grid + g]
  std::vector<int> active_;

  friend class FieldBuilderAccess;
};

/// Pointwise product projected back onto the truncation band; modes of the
/// product outside the band are dropped.
ScalarField multiply(const ScalarField& a, const ScalarField& b);

double sup_distance(const ScalarField& a, const ScalarField& b);

/// Cubic resampling of the coefficient arrays onto a contained action box
/// with the same truncation and resolution.
ScalarField restrict_to_box(const ScalarField& f, const TorusBox& target);

}  // namespace toravg

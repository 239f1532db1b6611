#pragma once

#include <cstdint>
#include <random>

#include "toravg/tensor_fields.hpp"

namespace toravg {

/// Seeded builder of smooth random fields for property suites: a few
/// low-order angle modes with per-axis cubic action profiles, so that grid
/// differentiation and interpolation are exact on them and identities can
/// be tested at tight tolerances.
class RandomFieldSampler {
 public:
  explicit RandomFieldSampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi);
  std::mt19937_64& rng() noexcept { return rng_; }

  /// Random scalar with modes |k|_inf <= max_mode; `zero_average` leaves
  /// the k = 0 mode identically zero.
  ScalarField scalar(const TorusBox& box, int max_mode = 3, double amplitude = 1.0,
                     bool zero_average = false);

  /// Angle-independent field, cubic polynomial per action axis.
  ScalarField action_polynomial(const TorusBox& box, double amplitude = 1.0);

  OneForm one_form(const TorusBox& box, int max_mode = 3, double amplitude = 1.0);
  VectorField vector_field(const TorusBox& box, int max_mode = 3, double amplitude = 1.0);

  /// Vertical field (angle components only); `theta_only` makes the
  /// components independent of the actions.
  VectorField vertical_field(const TorusBox& box, int max_mode = 2,
                             bool theta_only = true, double amplitude = 1.0);

  /// Random symplectic field: X_H for a random Hamiltonian (including an
  /// angle-independent part) plus a constant harmonic part sum m_j d/dI_j.
  VectorField symplectic_field(const TorusBox& box, double amplitude = 1.0);

  std::vector<PhasePoint> phase_points(const TorusBox& box, int count,
                                       double interior_fraction = 0.55);

 private:
  std::mt19937_64 rng_;
};

}  // namespace toravg

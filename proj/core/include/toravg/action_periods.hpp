#pragma once

#include <functional>

#include "toravg/flow.hpp"

namespace toravg {

/// A 1-form lambda with d(lambda) = omega, verified against the canonical
/// potential sum_j I_j dtheta_j at construction: the difference must be
/// closed to the stated tolerance.
class SymplecticPotential {
 public:
  static SymplecticPotential canonical(const TorusBox& space);

  /// canonical + dg + sum_j c_j dtheta_j with constant c_j.
  static SymplecticPotential shifted(const TorusBox& space, const ScalarField& g,
                                     std::span<const double> c = {});

  /// Wrap an arbitrary 1-form, verifying the potential property to `tol`.
  static SymplecticPotential from_form(OneForm form, double tol = 1e-10);

  const OneForm& form() const noexcept { return form_; }
  const TorusBox& space() const noexcept { return form_.space(); }

 private:
  explicit SymplecticPotential(OneForm f) : form_(std::move(f)) {}
  OneForm form_;
};

/// A family of fiber cycles b -> gamma(b): a smooth closed-loop
/// parametrization (b, t) -> point lying in the fiber over b, t in [0, 1],
/// together with its velocity (packed theta..., I...).
class CycleFamily {
 public:
  using PointFn = std::function<PhasePoint(std::span<const double> base, double t)>;
  using VelocityFn =
      std::function<std::vector<double>(std::span<const double> base, double t)>;

  CycleFamily(int axis, PointFn point, VelocityFn velocity);

  /// The coordinate cycle t -> (theta_axis = offset_axis + t, other angles
  /// fixed at the offsets, I = b).
  static CycleFamily coordinate(const TorusBox& space, int axis,
                                std::vector<double> angle_offsets = {});

  int axis() const noexcept { return axis_; }
  PhasePoint point(std::span<const double> base, double t) const { return point_(base, t); }
  std::vector<double> velocity(std::span<const double> base, double t) const {
    return velocity_(base, t);
  }

 private:
  int axis_;
  PointFn point_;
  VelocityFn velocity_;
};

/// The action xi(b) = loop integral of lambda over gamma(b), computed by
/// trapezoid quadrature along the loop (spectrally accurate for
/// trigonometric integrands) and returned as an angle-independent field.
/// Open loops or cycles leaving their fiber raise PreconditionError.
ScalarField action_function(const SymplecticPotential& lambda, const CycleFamily& gamma,
                            int nodes = 0);

/// The Hamiltonian field of an angle-independent action; vertical and
/// parallel by construction of the convention.
VectorField lattice_section(const ScalarField& xi);

/// Integrates the time-1 flow of a vertical parallel field from each sample
/// point and returns the largest distance back to the start (circle metric
/// in the angles, euclidean in the actions).  Zero defect identifies period
/// lattice elements.
double verify_one_periodic(const VectorField& x, std::span<const PhasePoint> points,
                           FlowParams params = {});

/// Winding numbers of the time-1 trajectory from `start`, from unwrapped
/// angle tracking rounded with a 0.1 guard band.
std::vector<int> winding_numbers(const VectorField& x, const PhasePoint& start,
                                 FlowParams params = {});

}  // namespace toravg

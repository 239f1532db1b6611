#pragma once

#include <optional>
#include <vector>

#include "toravg/field_calculus.hpp"

namespace toravg {

inline constexpr double kClosednessGate = 1e-8;

/// Line integral of alpha along the j-th coordinate cycle
/// t -> (theta_j = offset_j + t, other angles fixed, I = base), by uniform
/// trapezoid quadrature on `nodes` samples (exact for trigonometric
/// polynomials of degree < nodes).
double coordinate_cycle_integral(const OneForm& alpha, int axis,
                                 std::span<const double> base_action,
                                 std::span<const double> angle_offsets,
                                 int nodes = 0);

/// Periods P_j of a closed 1-form along the d coordinate cycles at a
/// reference base point (default: box center).  Verifies that the periods
/// are constant over a sample of base points and angle offsets
/// (homotopy invariance of closed forms); non-constant periods raise an
/// InconsistencyError, a closedness defect above the gate raises a
/// PreconditionError.
std::vector<double> cycle_periods(const OneForm& alpha,
                                  std::optional<std::vector<double>> base_action = {},
                                  double consistency_tol = 1e-8);

/// The unique primitive with vanishing vertical average of a closed 1-form
/// whose vertical average vanishes: f with d f = alpha and <f> = 0
/// (the k = 0 mode of f is identically zero).
///
/// Mode construction: f_k = alpha^theta_j_k / (2 pi i k_j) with
/// j = argmax |k_j|; all other admissible j and the dI components of df are
/// cross-checked to `check_tol`.
ScalarField primitive_with_zero_average(const OneForm& alpha,
                                        double gate = kClosednessGate,
                                        double check_tol = 1e-8);

/// Splitting of a symplectic vector field X = X_A + X2 with <A> = 0 and
/// X2 = <X> a symplectic lift of a base field.
struct SymplecticSplit {
  ScalarField hamiltonian;  // A, zero vertical average
  VectorField lift;         // X2 = <X>
};

SymplecticSplit decompose_symplectic(const VectorField& x,
                                     double gate = kClosednessGate,
                                     double check_tol = 1e-8);

}  // namespace toravg

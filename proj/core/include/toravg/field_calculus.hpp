#pragma once

#include "toravg/tensor_fields.hpp"

namespace toravg {

// Symplectic convention used throughout: omega = sum_j dI_j ^ dtheta_j, so
// omega_flat maps  sum a_j d/dtheta_j + b_j d/dI_j  to  sum b_j dtheta_j - a_j dI_j,
// and X_H = -omega_sharp(dH) has angle components dH/dI_j and action
// components -dH/dtheta_j.

/// d/dtheta_j: exact in spectral space (mode k picks up the factor 2 pi i k_j).
ScalarField partial_theta(const ScalarField& f, int axis);

/// d/dI_j: 4th-order finite differences on the action grid, one-sided at
/// the box edges.
ScalarField partial_action(const ScalarField& f, int axis);

/// Derivative along the coordinate with flattened index v (v < d: theta_v,
/// v >= d: I_{v-d}).
ScalarField partial_coord(const ScalarField& f, int v);

/// Exterior derivative of a function.
OneForm d_scalar(const ScalarField& f);

/// max over coordinate pairs (u,v) of sup |d_u alpha_v - d_v alpha_u|;
/// zero (up to discretization) exactly for closed forms.
double closedness_defect(const OneForm& alpha);

OneForm omega_flat(const VectorField& x);
VectorField omega_sharp(const OneForm& alpha);

/// Hamiltonian vector field X_H = -omega_sharp(d_scalar(H)).
VectorField hamiltonian_vf(const ScalarField& h);

/// Pointwise pairing alpha(X) as a scalar field (spectral products,
/// truncated to the band).
ScalarField contract(const OneForm& alpha, const VectorField& x);

/// Lie bracket [X, Y].
VectorField lie_bracket(const VectorField& x, const VectorField& y);

/// The flat torsion-free fiber connection of a lagrangian fibration
/// (Weinstein), evaluated through its defining contraction formula
/// nabla_X Y = omega_sharp(X . d(omega_flat(Y))) for vertical X, Y.
/// Inputs must be vertical to `tol`.
VectorField weinstein_nabla(const VectorField& x, const VectorField& y,
                            double tol = 1e-10);

}  // namespace toravg

#pragma once

#include <optional>

#include "toravg/tensor_fields.hpp"

namespace toravg {

inline constexpr double kDefaultPredicateTol = 1e-10;

/// Vertical (toric) average.  In this chart the lattice generators are the
/// coordinate fields d/dtheta_j, whose flows are angle translations with
/// identity Jacobian in the coordinate frame, so averaging reduces to
/// extracting the angle-independent (k = 0) Fourier mode componentwise.
ScalarField vertical_average(const ScalarField& f);
OneForm vertical_average(const OneForm& alpha);
VectorField vertical_average(const VectorField& x);

/// Independent route for the same average: uniform trapezoid quadrature
/// over an angle grid (exact for trigonometric polynomials of degree below
/// the node count).  Kept distinct from the spectral route so the two can
/// be checked against each other.
ScalarField vertical_average_by_quadrature(const ScalarField& f, int nodes_per_axis = 0);
OneForm vertical_average_by_quadrature(const OneForm& alpha, int nodes_per_axis = 0);
VectorField vertical_average_by_quadrature(const VectorField& x, int nodes_per_axis = 0);

/// T is invariant under the toric action iff <T> = T.
bool is_g_invariant(const ScalarField& f, double tol = kDefaultPredicateTol);
bool is_g_invariant(const OneForm& alpha, double tol = kDefaultPredicateTol);
bool is_g_invariant(const VectorField& x, double tol = kDefaultPredicateTol);

/// X is vertical and parallel on each fiber iff omega_flat(X) is a
/// pull-back from the base: no dtheta components and angle-independent dI
/// components, each to `tol`.
bool is_vertical_parallel(const VectorField& x, double tol = kDefaultPredicateTol);

/// If every action component of X is angle-independent to `tol`, X projects
/// to a well-defined base field; returns its d components as
/// angle-independent scalar fields, or nothing.
std::optional<std::vector<ScalarField>> is_lift(const VectorField& x,
                                                double tol = kDefaultPredicateTol);

}  // namespace toravg

#pragma once

#include <vector>

#include "toravg/scalar_field.hpp"

namespace toravg {

/// A 1-form alpha = sum_j theta_comp[j] dtheta_j + action_comp[j] dI_j.
/// All 2d component fields share one TorusBox.
class OneForm {
 public:
  static OneForm zeros(const TorusBox& space);
  OneForm(std::vector<ScalarField> theta_comp, std::vector<ScalarField> action_comp);

  const TorusBox& space() const noexcept { return theta_[0].space(); }
  int dim() const noexcept { return static_cast<int>(theta_.size()); }

  const ScalarField& theta_comp(int j) const { return theta_[j]; }
  const ScalarField& action_comp(int j) const { return action_[j]; }
  /// Component by coordinate index: v < d are dtheta, v >= d are dI.
  const ScalarField& comp(int v) const;

  OneForm& set_theta_comp(int j, ScalarField f);
  OneForm& set_action_comp(int j, ScalarField f);

  double sup_norm() const;

  OneForm& operator+=(const OneForm& other);
  OneForm& operator-=(const OneForm& other);
  OneForm& operator*=(double s);
  friend OneForm operator+(OneForm a, const OneForm& b) { return a += b; }
  friend OneForm operator-(OneForm a, const OneForm& b) { return a -= b; }
  friend OneForm operator*(OneForm a, double s) { return a *= s; }
  OneForm operator-() const;

 private:
  std::vector<ScalarField> theta_, action_;
};

/// A vector field X = sum_j angle_comp[j] d/dtheta_j + action_comp[j] d/dI_j.
class VectorField {
 public:
  static VectorField zeros(const TorusBox& space);
  VectorField(std::vector<ScalarField> angle_comp, std::vector<ScalarField> action_comp);

  const TorusBox& space() const noexcept { return angle_[0].space(); }
  int dim() const noexcept { return static_cast<int>(angle_.size()); }

  const ScalarField& angle_comp(int j) const { return angle_[j]; }
  const ScalarField& action_comp(int j) const { return action_[j]; }
  /// Component by coordinate index: v < d are d/dtheta, v >= d are d/dI.
  const ScalarField& comp(int v) const;

  VectorField& set_angle_comp(int j, ScalarField f);
  VectorField& set_action_comp(int j, ScalarField f);

  double sup_norm() const;

  /// Max sup norm of the action components (0 for vertical fields).
  double vertical_defect() const;

  VectorField& operator+=(const VectorField& other);
  VectorField& operator-=(const VectorField& other);
  VectorField& operator*=(double s);
  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
  friend VectorField operator*(VectorField a, double s) { return a *= s; }
  friend VectorField operator*(double s, VectorField a) { return a *= s; }
  VectorField operator-() const;

 private:
  std::vector<ScalarField> angle_, action_;
};

double sup_distance(const OneForm& a, const OneForm& b);
double sup_distance(const VectorField& a, const VectorField& b);

OneForm restrict_to_box(const OneForm& a, const TorusBox& target);
VectorField restrict_to_box(const VectorField& x, const TorusBox& target);

}  // namespace toravg

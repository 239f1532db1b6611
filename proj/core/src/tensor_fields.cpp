#include "toravg/tensor_fields.hpp"

#include <algorithm>

#include "toravg/errors.hpp"

namespace toravg {

namespace {

void check_components(const std::vector<ScalarField>& a,
                      const std::vector<ScalarField>& b, const char* what) {
  if (a.empty() || a.size() != b.size())
    throw PreconditionError(std::string(what) + ": need d components of each kind");
  const TorusBox& space = a[0].space();
  if (static_cast<int>(a.size()) != space.dim())
    throw PreconditionError(std::string(what) + ": component count must equal d");
  for (const auto& f : a)
    if (f.space() != space)
      throw PreconditionError(std::string(what) + ": components on different TorusBoxes");
  for (const auto& f : b)
    if (f.space() != space)
      throw PreconditionError(std::string(what) + ": components on different TorusBoxes");
}

std::vector<ScalarField> zero_components(const TorusBox& space) {
  std::vector<ScalarField> comps;
  comps.reserve(space.dim());
  for (int j = 0; j < space.dim(); ++j) comps.push_back(ScalarField::zeros(space));
  return comps;
}

}  // namespace

OneForm OneForm::zeros(const TorusBox& space) {
  return OneForm(zero_components(space), zero_components(space));
}

OneForm::OneForm(std::vector<ScalarField> theta_comp, std::vector<ScalarField> action_comp)
    : theta_(std::move(theta_comp)), action_(std::move(action_comp)) {
  check_components(theta_, action_, "OneForm");
}

const ScalarField& OneForm::comp(int v) const {
  const int d = dim();
  return v < d ? theta_[v] : action_[v - d];
}

OneForm& OneForm::set_theta_comp(int j, ScalarField f) {
  if (f.space() != space()) throw PreconditionError("OneForm::set_theta_comp: box mismatch");
  theta_[j] = std::move(f);
  return *this;
}

OneForm& OneForm::set_action_comp(int j, ScalarField f) {
  if (f.space() != space()) throw PreconditionError("OneForm::set_action_comp: box mismatch");
  action_[j] = std::move(f);
  return *this;
}

double OneForm::sup_norm() const {
  double m = 0.0;
  for (const auto& f : theta_) m = std::max(m, f.sup_norm());
  for (const auto& f : action_) m = std::max(m, f.sup_norm());
  return m;
}

OneForm& OneForm::operator+=(const OneForm& other) {
  for (int j = 0; j < dim(); ++j) {
    theta_[j] += other.theta_[j];
    action_[j] += other.action_[j];
  }
  return *this;
}

OneForm& OneForm::operator-=(const OneForm& other) {
  for (int j = 0; j < dim(); ++j) {
    theta_[j] -= other.theta_[j];
    action_[j] -= other.action_[j];
  }
  return *this;
}

OneForm& OneForm::operator*=(double s) {
  for (int j = 0; j < dim(); ++j) {
    theta_[j] *= s;
    action_[j] *= s;
  }
  return *this;
}

OneForm OneForm::operator-() const {
  OneForm a = *this;
  a *= -1.0;
  return a;
}

VectorField VectorField::zeros(const TorusBox& space) {
  return VectorField(zero_components(space), zero_components(space));
}

VectorField::VectorField(std::vector<ScalarField> angle_comp,
                         std::vector<ScalarField> action_comp)
    : angle_(std::move(angle_comp)), action_(std::move(action_comp)) {
  check_components(angle_, action_, "VectorField");
}

const ScalarField& VectorField::comp(int v) const {
  const int d = dim();
  return v < d ? angle_[v] : action_[v - d];
}

VectorField& VectorField::set_angle_comp(int j, ScalarField f) {
  if (f.space() != space()) throw PreconditionError("VectorField::set_angle_comp: box mismatch");
  angle_[j] = std::move(f);
  return *this;
}

VectorField& VectorField::set_action_comp(int j, ScalarField f) {
  if (f.space() != space()) throw PreconditionError("VectorField::set_action_comp: box mismatch");
  action_[j] = std::move(f);
  return *this;
}

double VectorField::sup_norm() const {
  double m = 0.0;
  for (const auto& f : angle_) m = std::max(m, f.sup_norm());
  for (const auto& f : action_) m = std::max(m, f.sup_norm());
  return m;
}

double VectorField::vertical_defect() const {
  double m = 0.0;
  for (const auto& f : action_) m = std::max(m, f.sup_norm());
  return m;
}

VectorField& VectorField::operator+=(const VectorField& other) {
  for (int j = 0; j < dim(); ++j) {
    angle_[j] += other.angle_[j];
    action_[j] += other.action_[j];
  }
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& other) {
  for (int j = 0; j < dim(); ++j) {
    angle_[j] -= other.angle_[j];
    action_[j] -= other.action_[j];
  }
  return *this;
}

VectorField& VectorField::operator*=(double s) {
  for (int j = 0; j < dim(); ++j) {
    angle_[j] *= s;
    action_[j] *= s;
  }
  return *this;
}

VectorField VectorField::operator-() const {
  VectorField x = *this;
  x *= -1.0;
  return x;
}

double sup_distance(const OneForm& a, const OneForm& b) {
  OneForm diff = a;
  diff -= b;
  return diff.sup_norm();
}

double sup_distance(const VectorField& a, const VectorField& b) {
  VectorField diff = a;
  diff -= b;
  return diff.sup_norm();
}

OneForm restrict_to_box(const OneForm& a, const TorusBox& target) {
  std::vector<ScalarField> th, ac;
  for (int j = 0; j < a.dim(); ++j) {
    th.push_back(restrict_to_box(a.theta_comp(j), target));
    ac.push_back(restrict_to_box(a.action_comp(j), target));
  }
  return OneForm(std::move(th), std::move(ac));
}

VectorField restrict_to_box(const VectorField& x, const TorusBox& target) {
  std::vector<ScalarField> an, ac;
  for (int j = 0; j < x.dim(); ++j) {
    an.push_back(restrict_to_box(x.angle_comp(j), target));
    ac.push_back(restrict_to_box(x.action_comp(j), target));
  }
  return VectorField(std::move(an), std::move(ac));
}

}  // namespace toravg

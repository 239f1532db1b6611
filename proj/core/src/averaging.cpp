#include "toravg/averaging.hpp"

#include <vector>

#include "toravg/field_calculus.hpp"

namespace toravg {

namespace {

ScalarField keep_zero_mode(const ScalarField& f) {
  const TorusBox& box = f.space();
  ScalarField out = ScalarField::zeros(box);
  std::vector<int> zero(box.dim(), 0);
  out.set_mode(zero, f.mode(box.zero_mode()));
  return out;
}

ScalarField quadrature_average(const ScalarField& f, int nodes_per_axis) {
  const TorusBox& box = f.space();
  if (nodes_per_axis <= 0) nodes_per_axis = 4 * box.truncation() + 1;
  nodes_per_axis = std::max(nodes_per_axis, 1);
  const auto values = f.sample_angle_grid(nodes_per_axis);
  int n_angle = 1;
  for (int j = 0; j < box.dim(); ++j) n_angle *= nodes_per_axis;

  // Periodic trapezoid rule = plain mean of the samples.
  std::vector<ScalarField::Complex> mean(box.n_grid());
  for (int g = 0; g < box.n_grid(); ++g) {
    double acc = 0.0;
    const double* row = values.data() + static_cast<std::size_t>(g) * n_angle;
    for (int a = 0; a < n_angle; ++a) acc += row[a];
    mean[g] = acc / n_angle;
  }
  ScalarField out = ScalarField::zeros(box);
  std::vector<int> zero(box.dim(), 0);
  out.set_mode(zero, mean);
  return out;
}

template <typename Op>
OneForm map_components_oneform(const OneForm& a, Op&& op) {
  std::vector<ScalarField> th, ac;
  for (int j = 0; j < a.dim(); ++j) {
    th.push_back(op(a.theta_comp(j)));
    ac.push_back(op(a.action_comp(j)));
  }
  return OneForm(std::move(th), std::move(ac));
}

template <typename Op>
VectorField map_components_vf(const VectorField& x, Op&& op) {
  std::vector<ScalarField> an, ac;
  for (int j = 0; j < x.dim(); ++j) {
    an.push_back(op(x.angle_comp(j)));
    ac.push_back(op(x.action_comp(j)));
  }
  return VectorField(std::move(an), std::move(ac));
}

}  // namespace

ScalarField vertical_average(const ScalarField& f) { return keep_zero_mode(f); }

OneForm vertical_average(const OneForm& alpha) {
  return map_components_oneform(alpha, [](const ScalarField& f) { return keep_zero_mode(f); });
}

VectorField vertical_average(const VectorField& x) {
  return map_components_vf(x, [](const ScalarField& f) { return keep_zero_mode(f); });
}

ScalarField vertical_average_by_quadrature(const ScalarField& f, int nodes_per_axis) {
  return quadrature_average(f, nodes_per_axis);
}

OneForm vertical_average_by_quadrature(const OneForm& alpha, int nodes_per_axis) {
  return map_components_oneform(
      alpha, [&](const ScalarField& f) { return quadrature_average(f, nodes_per_axis); });
}

VectorField vertical_average_by_quadrature(const VectorField& x, int nodes_per_axis) {
  return map_components_vf(
      x, [&](const ScalarField& f) { return quadrature_average(f, nodes_per_axis); });
}

bool is_g_invariant(const ScalarField& f, double tol) {
  return sup_distance(f, vertical_average(f)) < tol;
}

bool is_g_invariant(const OneForm& alpha, double tol) {
  return sup_distance(alpha, vertical_average(alpha)) < tol;
}

bool is_g_invariant(const VectorField& x, double tol) {
  return sup_distance(x, vertical_average(x)) < tol;
}

bool is_vertical_parallel(const VectorField& x, double tol) {
  const OneForm alpha = omega_flat(x);
  for (int j = 0; j < x.dim(); ++j) {
    if (alpha.theta_comp(j).sup_norm() >= tol) return false;
    if (!is_g_invariant(alpha.action_comp(j), tol)) return false;
  }
  return true;
}

std::optional<std::vector<ScalarField>> is_lift(const VectorField& x, double tol) {
  std::vector<ScalarField> base;
  base.reserve(x.dim());
  for (int j = 0; j < x.dim(); ++j) {
    const ScalarField& c = x.action_comp(j);
    const ScalarField avg = vertical_average(c);
    if (sup_distance(c, avg) >= tol) return std::nullopt;
    base.push_back(avg);
  }
  return base;
}

}  // namespace toravg

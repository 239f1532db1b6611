#include "toravg/field_calculus.hpp"

#include <complex>
#include <sstream>
#include <vector>

#include "detail/grid_numerics.hpp"
#include "toravg/errors.hpp"

namespace toravg {

using detail::two_pi;

ScalarField partial_theta(const ScalarField& f, int axis) {
  const TorusBox& box = f.space();
  const int n = box.n_grid();
  std::vector<ScalarField::Complex> out(
      static_cast<std::size_t>(box.n_modes()) * n, {0.0, 0.0});
  std::vector<int> k(box.dim());
  for (int m : f.active_modes()) {
    box.mode_multi(m, k);
    if (k[axis] == 0) continue;
    const std::complex<double> factor{0.0, two_pi * k[axis]};
    const auto row = f.mode(m);
    ScalarField::Complex* ro = out.data() + static_cast<std::size_t>(m) * n;
    for (int g = 0; g < n; ++g) ro[g] = factor * row[g];
  }
  return ScalarField::from_raw_symmetric(box, std::move(out), f.active_modes());
}

ScalarField partial_action(const ScalarField& f, int axis) {
  const TorusBox& box = f.space();
  const int n = box.n_grid();
  std::vector<ScalarField::Complex> out(
      static_cast<std::size_t>(box.n_modes()) * n, {0.0, 0.0});
  for (int m : f.active_modes()) {
    detail::differentiate_action_axis(
        box, axis, f.mode(m),
        {out.data() + static_cast<std::size_t>(m) * n, static_cast<std::size_t>(n)});
  }
  return ScalarField::from_raw_symmetric(box, std::move(out), f.active_modes());
}

ScalarField partial_coord(const ScalarField& f, int v) {
  const int d = f.space().dim();
  return v < d ? partial_theta(f, v) : partial_action(f, v - d);
}

OneForm d_scalar(const ScalarField& f) {
  const int d = f.space().dim();
  std::vector<ScalarField> th, ac;
  th.reserve(d);
  ac.reserve(d);
  for (int j = 0; j < d; ++j) th.push_back(partial_theta(f, j));
  for (int j = 0; j < d; ++j) ac.push_back(partial_action(f, j));
  return OneForm(std::move(th), std::move(ac));
}

double closedness_defect(const OneForm& alpha) {
  const int d = alpha.dim();
  double defect = 0.0;
  for (int u = 0; u < 2 * d; ++u) {
    for (int v = u + 1; v < 2 * d; ++v) {
      ScalarField diff = partial_coord(alpha.comp(v), u);
      diff -= partial_coord(alpha.comp(u), v);
      defect = std::max(defect, diff.sup_norm());
    }
  }
  return defect;
}

OneForm omega_flat(const VectorField& x) {
  const int d = x.dim();
  std::vector<ScalarField> th, ac;
  th.reserve(d);
  ac.reserve(d);
  for (int j = 0; j < d; ++j) th.push_back(x.action_comp(j));
  for (int j = 0; j < d; ++j) ac.push_back(-x.angle_comp(j));
  return OneForm(std::move(th), std::move(ac));
}

VectorField omega_sharp(const OneForm& alpha) {
  const int d = alpha.dim();
  std::vector<ScalarField> an, ac;
  an.reserve(d);
  ac.reserve(d);
  for (int j = 0; j < d; ++j) an.push_back(-alpha.action_comp(j));
  for (int j = 0; j < d; ++j) ac.push_back(alpha.theta_comp(j));
  return VectorField(std::move(an), std::move(ac));
}

VectorField hamiltonian_vf(const ScalarField& h) {
  VectorField x = omega_sharp(d_scalar(h));
  x *= -1.0;
  return x;
}

ScalarField contract(const OneForm& alpha, const VectorField& x) {
  if (alpha.space() != x.space())
    throw PreconditionError("contract: operands live on different TorusBoxes");
  ScalarField acc = ScalarField::zeros(alpha.space());
  for (int j = 0; j < alpha.dim(); ++j) {
    acc += multiply(alpha.theta_comp(j), x.angle_comp(j));
    acc += multiply(alpha.action_comp(j), x.action_comp(j));
  }
  return acc;
}

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  if (x.space() != y.space())
    throw PreconditionError("lie_bracket: operands live on different TorusBoxes");
  const int d = x.dim();
  std::vector<ScalarField> comps;
  comps.reserve(2 * d);
  for (int w = 0; w < 2 * d; ++w) {
    ScalarField acc = ScalarField::zeros(x.space());
    for (int v = 0; v < 2 * d; ++v) {
      if (!x.comp(v).active_modes().empty())
        acc += multiply(x.comp(v), partial_coord(y.comp(w), v));
      if (!y.comp(v).active_modes().empty())
        acc -= multiply(y.comp(v), partial_coord(x.comp(w), v));
    }
    comps.push_back(std::move(acc));
  }
  std::vector<ScalarField> an(comps.begin(), comps.begin() + d);
  std::vector<ScalarField> ac(comps.begin() + d, comps.end());
  return VectorField(std::move(an), std::move(ac));
}

VectorField weinstein_nabla(const VectorField& x, const VectorField& y, double tol) {
  if (x.space() != y.space())
    throw PreconditionError("weinstein_nabla: operands live on different TorusBoxes");
  const double dx = x.vertical_defect();
  const double dy = y.vertical_defect();
  if (dx > tol || dy > tol) {
    std::ostringstream os;
    os << "weinstein_nabla: inputs must be vertical (action-component sup "
       << std::max(dx, dy) << " exceeds " << tol << ")";
    throw PreconditionError(os.str());
  }

  const int d = x.dim();
  const OneForm beta = omega_flat(y);

  // (X . d beta)_v = sum_u X^u (d_u beta_v - d_v beta_u)
  std::vector<ScalarField> comps;
  comps.reserve(2 * d);
  for (int v = 0; v < 2 * d; ++v) {
    ScalarField acc = ScalarField::zeros(x.space());
    for (int u = 0; u < 2 * d; ++u) {
      if (u == v || x.comp(u).active_modes().empty()) continue;
      ScalarField curl = partial_coord(beta.comp(v), u);
      curl -= partial_coord(beta.comp(u), v);
      acc += multiply(x.comp(u), curl);
    }
    comps.push_back(std::move(acc));
  }
  std::vector<ScalarField> th(comps.begin(), comps.begin() + d);
  std::vector<ScalarField> ac(comps.begin() + d, comps.end());
  return omega_sharp(OneForm(std::move(th), std::move(ac)));
}

}  // namespace toravg

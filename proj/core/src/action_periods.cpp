#include "toravg/action_periods.hpp"

#include <cmath>
#include <sstream>

#include "toravg/averaging.hpp"
#include "toravg/decomposition.hpp"
#include "toravg/errors.hpp"
#include "toravg/field_calculus.hpp"

namespace toravg {

namespace {

OneForm canonical_form(const TorusBox& space) {
  OneForm lambda = OneForm::zeros(space);
  for (int j = 0; j < space.dim(); ++j) {
    lambda.set_theta_comp(
        j, ScalarField::from_action_function(
               space, [j](std::span<const double> action) { return action[j]; }));
  }
  return lambda;
}

}  // namespace

SymplecticPotential SymplecticPotential::canonical(const TorusBox& space) {
  return SymplecticPotential(canonical_form(space));
}

SymplecticPotential SymplecticPotential::shifted(const TorusBox& space,
                                                 const ScalarField& g,
                                                 std::span<const double> c) {
  if (g.space() != space)
    throw PreconditionError("SymplecticPotential::shifted: g on a different TorusBox");
  OneForm lambda = canonical_form(space);
  lambda += d_scalar(g);
  for (std::size_t j = 0; j < c.size(); ++j) {
    ScalarField comp = lambda.theta_comp(static_cast<int>(j));
    comp += ScalarField::constant(space, c[j]);
    lambda.set_theta_comp(static_cast<int>(j), std::move(comp));
  }
  return SymplecticPotential(std::move(lambda));
}

SymplecticPotential SymplecticPotential::from_form(OneForm form, double tol) {
  OneForm diff = form;
  diff -= canonical_form(form.space());
  const double defect = closedness_defect(diff);
  if (defect >= tol) {
    std::ostringstream os;
    os << "SymplecticPotential: d(lambda) != omega (defect " << defect << " >= "
       << tol << ")";
    throw PreconditionError(os.str());
  }
  return SymplecticPotential(std::move(form));
}

CycleFamily::CycleFamily(int axis, PointFn point, VelocityFn velocity)
    : axis_(axis), point_(std::move(point)), velocity_(std::move(velocity)) {
  if (!point_ || !velocity_)
    throw PreconditionError("CycleFamily: parametrization callables required");
}

CycleFamily CycleFamily::coordinate(const TorusBox& space, int axis,
                                    std::vector<double> angle_offsets) {
  const int d = space.dim();
  if (axis < 0 || axis >= d) throw PreconditionError("CycleFamily: axis out of range");
  if (angle_offsets.empty()) angle_offsets.assign(d, 0.0);
  if (static_cast<int>(angle_offsets.size()) != d)
    throw PreconditionError("CycleFamily: need d angle offsets");

  auto point = [d, axis, angle_offsets](std::span<const double> base, double t) {
    PhasePoint p;
    p.theta = angle_offsets;
    p.theta[axis] = wrap_angle(angle_offsets[axis] + t);
    p.action.assign(base.begin(), base.end());
    return p;
  };
  auto velocity = [d, axis](std::span<const double>, double) {
    std::vector<double> v(2 * d, 0.0);
    v[axis] = 1.0;
    return v;
  };
  return CycleFamily(axis, std::move(point), std::move(velocity));
}

ScalarField action_function(const SymplecticPotential& lambda, const CycleFamily& gamma,
                            int nodes) {
  const TorusBox& box = lambda.space();
  const int d = box.dim();
  if (nodes <= 0) nodes = 4 * box.truncation() + 1;
  constexpr double kFiberTol = 1e-12;

  ScalarField xi = ScalarField::from_action_function(
      box, [](std::span<const double>) { return 0.0; });
  std::vector<ScalarField::Complex> values(box.n_grid());
  std::vector<double> base(d);

  for (int g = 0; g < box.n_grid(); ++g) {
    box.grid_point(g, base);

    // Closed loop and fiber containment.
    const PhasePoint p0 = gamma.point(base, 0.0);
    const PhasePoint p1 = gamma.point(base, 1.0);
    for (int j = 0; j < d; ++j) {
      if (circle_distance(p0.theta[j], p1.theta[j]) > kFiberTol ||
          std::fabs(p0.action[j] - p1.action[j]) > kFiberTol)
        throw PreconditionError("action_function: cycle is not a closed loop");
    }

    double acc = 0.0;
    for (int q = 0; q < nodes; ++q) {
      const double t = static_cast<double>(q) / nodes;
      const PhasePoint p = gamma.point(base, t);
      for (int j = 0; j < d; ++j) {
        if (std::fabs(p.action[j] - base[j]) > kFiberTol)
          throw PreconditionError("action_function: cycle leaves its fiber");
      }
      const auto vel = gamma.velocity(base, t);
      for (int j = 0; j < d; ++j) {
        if (vel[j] != 0.0)
          acc += lambda.form().theta_comp(j).evaluate_at_grid_action(p.theta, g) * vel[j];
        if (vel[d + j] != 0.0)
          acc += lambda.form().action_comp(j).evaluate_at_grid_action(p.theta, g) * vel[d + j];
      }
    }
    values[g] = acc / nodes;
  }

  std::vector<int> zero(d, 0);
  xi.set_mode(zero, values);
  return xi;
}

VectorField lattice_section(const ScalarField& xi) {
  const double defect = sup_distance(xi, vertical_average(xi));
  if (defect >= 1e-10) {
    std::ostringstream os;
    os << "lattice_section: action must be angle-independent (defect " << defect << ")";
    throw PreconditionError(os.str());
  }
  return hamiltonian_vf(xi);
}

double verify_one_periodic(const VectorField& x, std::span<const PhasePoint> points,
                           FlowParams params) {
  if (!is_vertical_parallel(x))
    throw PreconditionError("verify_one_periodic: field must be vertical and parallel");
  const TimeDepVectorField family = TimeDepVectorField::constant(x, 1.0, false);
  const FlowMap phi = integrate_flow(family, 1.0, x.space(), params);

  double defect = 0.0;
  for (const PhasePoint& p : points)
    defect = std::max(defect, phase_distance(p, phi.map(p)));
  return defect;
}

std::vector<int> winding_numbers(const VectorField& x, const PhasePoint& start,
                                 FlowParams params) {
  const TimeDepVectorField family = TimeDepVectorField::constant(x, 1.0, false);
  const FlowMap phi = integrate_flow(family, 1.0, x.space(), params);
  const PhasePoint end = phi.map_unwrapped(start);

  std::vector<int> winding(start.theta.size());
  for (std::size_t j = 0; j < start.theta.size(); ++j) {
    const double turns = end.theta[j] - start.theta[j];
    const double rounded = std::round(turns);
    if (std::fabs(turns - rounded) > 0.1) {
      std::ostringstream os;
      os << "winding_numbers: angle " << j << " advanced by " << turns
         << ", not within 0.1 of an integer";
      throw InconsistencyError(os.str());
    }
    winding[j] = static_cast<int>(rounded);
  }
  return winding;
}

}  // namespace toravg

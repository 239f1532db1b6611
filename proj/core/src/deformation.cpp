#include "toravg/deformation.hpp"

#include <cmath>
#include <sstream>

#include "detail/grid_numerics.hpp"
#include "toravg/averaging.hpp"
#include "toravg/errors.hpp"

namespace toravg {

namespace {

// Resample f(eps) o phi onto the spectral grid over the flow's safe box.
ScalarField compose_and_resample(const ScalarField& base, const FlowMap& phi) {
  const TorusBox target = phi.safe_box();
  const detail::AngleTransform tr(target, target.modes_per_axis());
  const int n_angle = tr.n_angle();
  const int n_grid = target.n_grid();

  std::vector<ScalarField::Complex> coef(
      static_cast<std::size_t>(target.n_modes()) * n_grid);
  std::vector<double> values(n_angle);
  std::vector<ScalarField::Complex> modes(target.n_modes());

  PhasePoint p;
  p.theta.resize(target.dim());
  p.action.resize(target.dim());
  for (int g = 0; g < n_grid; ++g) {
    target.grid_point(g, p.action);
    for (int a = 0; a < n_angle; ++a) {
      tr.angle_point(a, p.theta);
      values[a] = base.evaluate(phi.map(p));
    }
    tr.values_to_modes(values, modes);
    for (int m = 0; m < target.n_modes(); ++m)
      coef[static_cast<std::size_t>(m) * n_grid + g] = modes[m];
  }
  return ScalarField::from_raw(target, std::move(coef));
}

}  // namespace

DeformationScenario DeformationScenario::make(ScalarFamily base,
                                              TimeDepVectorField generator,
                                              std::optional<TorusBox> safe_box) {
  if (base.space() != generator.space())
    throw PreconditionError("DeformationScenario: base family and generator on different TorusBoxes");
  if (base.eps_max() != generator.eps_max())
    throw PreconditionError("DeformationScenario: base family and generator disagree on eps_max");
  if (!generator.symplectic())
    throw PreconditionError("DeformationScenario: generator must carry the symplectic flag");

  // The base family must be fiberwise constant; probe a few epsilons.
  for (double frac : {0.0, 0.5, 1.0}) {
    const ScalarField j = base.at(frac * base.eps_max());
    const double defect = sup_distance(j, vertical_average(j));
    if (defect >= 1e-10) {
      std::ostringstream os;
      os << "DeformationScenario: base family is angle-dependent at eps = "
         << frac * base.eps_max() << " (defect " << defect << ")";
      throw PreconditionError(os.str());
    }
  }

  TorusBox safe = safe_box ? std::move(*safe_box)
                           : generator.space().shrunk(kDefaultSafeShrink);
  if (!generator.space().contains_box(safe))
    throw PreconditionError("DeformationScenario: safe box not contained in B");
  return DeformationScenario(std::move(base), std::move(generator), std::move(safe));
}

ScalarField realize_deformation(const DeformationScenario& s, double eps,
                                FlowParams params) {
  const FlowMap phi = integrate_flow(s.generator(), eps, s.safe_box(), params);
  return compose_and_resample(s.base().at(eps), phi);
}

NormalFormResult normal_form(const DeformationScenario& s, double eps,
                             FlowParams params) {
  FlowDecomposition dec = decompose_flow(s.generator(), s.safe_box(), params);
  const FlowMap fiber_flow = integrate_flow(dec.lift, eps, s.safe_box(), params);
  ScalarField i_nf = compose_and_resample(s.base().at(eps), fiber_flow);
  ScalarField g = dec.g.at(eps);
  return NormalFormResult{std::move(i_nf), std::move(g), std::move(dec)};
}

double normal_form_residual(const DeformationScenario& s, double eps,
                            const NormalFormResult& nf,
                            std::span<const PhasePoint> samples, FlowParams params) {
  const ScalarField h_eps = realize_deformation(s, eps, params);
  const FlowMap phi_g = integrate_flow(nf.flows.z, eps, nf.flows.z.space(), params);

  double residual = 0.0;
  for (const PhasePoint& m : samples) {
    const double lhs = h_eps.evaluate(m);
    const double rhs = nf.i_nf.evaluate(phi_g.map(m));
    residual = std::max(residual, std::fabs(lhs - rhs));
  }
  return residual;
}

}  // namespace toravg

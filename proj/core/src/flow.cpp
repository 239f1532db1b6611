#include "toravg/flow.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "detail/field_evaluator.hpp"
#include "detail/grid_numerics.hpp"
#include "toravg/averaging.hpp"
#include "toravg/decomposition.hpp"
#include "toravg/errors.hpp"
#include "toravg/field_calculus.hpp"

namespace toravg {

namespace {

double clamp_to_range(double eps, double eps_max, const char* what) {
  const double slack = 1e-12 * std::max(1.0, std::fabs(eps_max));
  if (eps < 0.0) {
    if (eps > -slack) return 0.0;
    throw PreconditionError(std::string(what) + ": epsilon below 0");
  }
  if (eps > eps_max) {
    if (eps < eps_max + slack) return eps_max;
    std::ostringstream os;
    os << what << ": epsilon " << eps << " exceeds eps_max " << eps_max;
    throw PreconditionError(os.str());
  }
  return eps;
}

}  // namespace

// ---------------------------------------------------------------------------
// ScalarFamily

struct ScalarFamily::State {
  State(TorusBox s, Provider p, double e)
      : space(std::move(s)), provider(std::move(p)), eps_max(e) {}

  TorusBox space;
  Provider provider;
  double eps_max;
  std::mutex mu;
  std::map<double, ScalarField> cache;
};

ScalarFamily::ScalarFamily(TorusBox space, Provider provider, double eps_max)
    : state_(std::make_shared<State>(std::move(space), std::move(provider), eps_max)) {
  if (eps_max <= 0.0) throw PreconditionError("ScalarFamily: eps_max must be positive");
}

ScalarFamily ScalarFamily::constant(ScalarField f, double eps_max) {
  TorusBox space = f.space();
  return ScalarFamily(std::move(space),
                      [f = std::move(f)](double) { return f; }, eps_max);
}

const TorusBox& ScalarFamily::space() const noexcept { return state_->space; }
double ScalarFamily::eps_max() const noexcept { return state_->eps_max; }

ScalarField ScalarFamily::at(double eps) const {
  eps = clamp_to_range(eps, state_->eps_max, "ScalarFamily::at");
  std::lock_guard<std::mutex> lock(state_->mu);
  auto it = state_->cache.find(eps);
  if (it == state_->cache.end()) {
    ScalarField f = state_->provider(eps);
    if (f.space() != state_->space)
      throw InconsistencyError("ScalarFamily: provider changed the TorusBox");
    it = state_->cache.emplace(eps, std::move(f)).first;
  }
  return it->second;
}

// ---------------------------------------------------------------------------
// TimeDepVectorField

struct TimeDepVectorField::Impl {
  Impl(TorusBox s, double e, bool sympl, bool verify,
       std::function<VectorField(double)> r, bool time_indep = false)
      : space(std::move(s)),
        eps_max(e),
        symplectic(sympl),
        verify_symplectic(verify),
        time_independent(time_indep),
        resolver(std::move(r)) {}

  TorusBox space;
  double eps_max;
  bool symplectic;
  bool verify_symplectic;
  bool time_independent;  // one shared cache entry for all epsilons
  std::function<VectorField(double)> resolver;

  struct Entry {
    Entry(VectorField f, std::vector<ScalarField> dv)
        : field(std::move(f)), derivs(std::move(dv)) {}
    VectorField field;
    std::vector<ScalarField> derivs;  // [r * 2d + c] = d comp_r / d coord_c
  };

  mutable std::mutex mu;
  mutable std::map<double, std::shared_ptr<const Entry>> cache;

  std::shared_ptr<const Entry> entry(double eps) const {
    eps = clamp_to_range(eps, eps_max, "TimeDepVectorField");
    if (time_independent) eps = 0.0;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(eps);
    if (it != cache.end()) return it->second;

    VectorField field = resolver(eps);
    if (field.space() != space)
      throw InconsistencyError("TimeDepVectorField: provider changed the TorusBox");
    if (verify_symplectic) {
      const double defect = closedness_defect(omega_flat(field));
      if (defect >= kClosednessGate) {
        std::ostringstream os;
        os << "TimeDepVectorField: symplectic family has non-closed omega(X) at eps = "
           << eps << " (defect " << defect << ")";
        throw InconsistencyError(os.str());
      }
    }

    const int d = space.dim();
    std::vector<ScalarField> derivs;
    derivs.reserve(4 * d * d);
    for (int r = 0; r < 2 * d; ++r)
      for (int c = 0; c < 2 * d; ++c)
        derivs.push_back(partial_coord(field.comp(r), c));
    auto e = std::make_shared<Entry>(std::move(field), std::move(derivs));
    it = cache.emplace(eps, std::move(e)).first;
    return it->second;
  }
};

TimeDepVectorField::TimeDepVectorField(TorusBox space, Provider provider,
                                       double eps_max, bool symplectic) {
  if (eps_max <= 0.0)
    throw PreconditionError("TimeDepVectorField: eps_max must be positive");
  impl_ = std::make_shared<Impl>(std::move(space), eps_max, symplectic, symplectic,
                                 std::move(provider));
}

TimeDepVectorField TimeDepVectorField::constant(VectorField x, double eps_max,
                                                bool symplectic) {
  if (eps_max <= 0.0)
    throw PreconditionError("TimeDepVectorField: eps_max must be positive");
  TorusBox space = x.space();
  return TimeDepVectorField(std::make_shared<Impl>(
      std::move(space), eps_max, symplectic, symplectic,
      [x = std::move(x)](double) { return x; }, /*time_indep=*/true));
}

TimeDepVectorField TimeDepVectorField::sampled(TorusBox space, Provider provider,
                                               double eps_max, bool symplectic,
                                               int nodes) {
  if (nodes < 4)
    throw PreconditionError("TimeDepVectorField::sampled: need at least 4 nodes");
  // Chebyshev-Lobatto nodes mapped to [0, eps_max].
  auto node_eps = std::make_shared<std::vector<double>>();
  auto node_fields = std::make_shared<std::vector<VectorField>>();
  node_eps->reserve(nodes);
  node_fields->reserve(nodes);
  for (int i = 0; i < nodes; ++i) {
    const double x = 0.5 * (1.0 - std::cos(std::numbers::pi * i / (nodes - 1)));
    const double e = (i == nodes - 1) ? eps_max : eps_max * x;
    node_eps->push_back(e);
    node_fields->push_back(provider(e));
    if (node_fields->back().space() != space)
      throw PreconditionError("TimeDepVectorField::sampled: provider changed the TorusBox");
  }

  auto interpolant = [node_eps, node_fields](double eps) {
    const auto& xs = *node_eps;
    const int n = static_cast<int>(xs.size());
    // 4-point Lagrange window around eps.
    int hi = static_cast<int>(std::lower_bound(xs.begin(), xs.end(), eps) - xs.begin());
    int base = std::clamp(hi - 2, 0, n - 4);
    VectorField acc = VectorField::zeros((*node_fields)[0].space());
    for (int q = 0; q < 4; ++q) {
      double w = 1.0;
      for (int r = 0; r < 4; ++r) {
        if (r == q) continue;
        w *= (eps - xs[base + r]) / (xs[base + q] - xs[base + r]);
      }
      acc += (*node_fields)[base + q] * w;
    }
    return acc;
  };
  return TimeDepVectorField(std::move(space), std::move(interpolant), eps_max, symplectic);
}

const TorusBox& TimeDepVectorField::space() const noexcept { return impl_->space; }
double TimeDepVectorField::eps_max() const noexcept { return impl_->eps_max; }
bool TimeDepVectorField::symplectic() const noexcept { return impl_->symplectic; }
bool TimeDepVectorField::time_independent() const noexcept {
  return impl_->time_independent;
}

VectorField TimeDepVectorField::field_at(double eps) const {
  return impl_->entry(eps)->field;
}

TimeDepVectorField TimeDepVectorField::reversed(double eps0) const {
  eps0 = clamp_to_range(eps0, impl_->eps_max, "TimeDepVectorField::reversed");
  if (eps0 == 0.0)
    throw PreconditionError("TimeDepVectorField::reversed: eps0 must be positive");
  auto parent = impl_;
  auto resolver = [parent, eps0](double s) {
    VectorField x = parent->entry(eps0 - s)->field;
    x *= -1.0;
    return x;
  };
  // The parent family already verifies symplecticity; reversal of a
  // time-independent family is time-independent.
  return TimeDepVectorField(std::make_shared<Impl>(
      parent->space, eps0, parent->symplectic, false, std::move(resolver),
      parent->time_independent));
}

// ---------------------------------------------------------------------------
// RK4 with Richardson step halving

namespace {

using Entry = TimeDepVectorField::Impl::Entry;

struct Integration {
  Eigen::VectorXd y;
  Eigen::MatrixXd jac;
};

// One fixed-step RK4 pass over [0, eps], optionally with the variational
// equations dJ/deps = DX(y) J.
Integration integrate_fixed(const TimeDepVectorField::Impl& impl,
                            const Eigen::VectorXd& y0, double eps, int steps,
                            bool with_jac, detail::FieldEvaluator& ev) {
  const int d = impl.space.dim();
  const int n2 = 2 * d;

  Integration out;
  out.y = y0;
  out.jac = Eigen::MatrixXd::Identity(n2, n2);

  Eigen::VectorXd k1(n2), k2(n2), k3(n2), k4(n2), tmp(n2);
  Eigen::MatrixXd m(n2, n2), j1, j2, j3, j4, jt;
  if (with_jac) {
    j1 = j2 = j3 = j4 = jt = Eigen::MatrixXd::Zero(n2, n2);
  }

  auto rhs = [&](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy,
                 Eigen::MatrixXd* dmat) {
    const auto entry = impl.entry(t);
    ev.bind(y.data());
    for (int r = 0; r < n2; ++r) dy[r] = ev.eval(entry->field.comp(r));
    if (dmat) {
      for (int r = 0; r < n2; ++r)
        for (int c = 0; c < n2; ++c)
          (*dmat)(r, c) = ev.eval(entry->derivs[static_cast<std::size_t>(r) * n2 + c]);
    }
  };

  const double h = eps / steps;
  for (int i = 0; i < steps; ++i) {
    const double t0 = eps * (static_cast<double>(i) / steps);
    const double tm = t0 + 0.5 * h;
    const double t1 = eps * (static_cast<double>(i + 1) / steps);

    if (!with_jac) {
      rhs(t0, out.y, k1, nullptr);
      tmp = out.y + 0.5 * h * k1;
      rhs(tm, tmp, k2, nullptr);
      tmp = out.y + 0.5 * h * k2;
      rhs(tm, tmp, k3, nullptr);
      tmp = out.y + h * k3;
      rhs(t1, tmp, k4, nullptr);
      out.y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } else {
      rhs(t0, out.y, k1, &m);
      j1.noalias() = m * out.jac;
      tmp = out.y + 0.5 * h * k1;
      jt = out.jac + 0.5 * h * j1;
      rhs(tm, tmp, k2, &m);
      j2.noalias() = m * jt;
      tmp = out.y + 0.5 * h * k2;
      jt = out.jac + 0.5 * h * j2;
      rhs(tm, tmp, k3, &m);
      j3.noalias() = m * jt;
      tmp = out.y + h * k3;
      jt = out.jac + h * j3;
      rhs(t1, tmp, k4, &m);
      j4.noalias() = m * jt;
      out.y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      out.jac += (h / 6.0) * (j1 + 2.0 * j2 + 2.0 * j3 + j4);
    }
  }
  return out;
}

Integration run_ladder(const TimeDepVectorField::Impl& impl, const Eigen::VectorXd& y0,
                       double eps, bool with_jac, const FlowParams& p) {
  const int d = impl.space.dim();
  if (eps == 0.0) {
    Integration out;
    out.y = y0;
    out.jac = Eigen::MatrixXd::Identity(2 * d, 2 * d);
    return out;
  }

  detail::FieldEvaluator ev(impl.space);
  const int max_steps = static_cast<int>(std::ceil(1.0 / p.min_step_fraction));

  int steps = p.initial_steps;
  Integration coarse = integrate_fixed(impl, y0, eps, steps, with_jac, ev);
  while (true) {
    if (2 * steps > max_steps) {
      std::ostringstream os;
      os << "flow integration hit the step floor (" << p.min_step_fraction
         << " * eps) without reaching tolerance " << p.richardson_tol;
      throw IntegrationError(os.str());
    }
    Integration fine = integrate_fixed(impl, y0, eps, 2 * steps, with_jac, ev);
    const double err = (coarse.y - fine.y).cwiseAbs().maxCoeff();
    if (err < p.richardson_tol) return fine;
    steps *= 2;
    coarse = std::move(fine);
  }
}

Eigen::VectorXd pack_point(const PhasePoint& p, int d) {
  if (static_cast<int>(p.theta.size()) != d || static_cast<int>(p.action.size()) != d)
    throw PreconditionError("PhasePoint dimension mismatch");
  Eigen::VectorXd y(2 * d);
  for (int j = 0; j < d; ++j) {
    y[j] = p.theta[j];
    y[d + j] = p.action[j];
  }
  return y;
}

PhasePoint unpack_point(const Eigen::VectorXd& y, int d, bool wrap) {
  PhasePoint p;
  p.theta.resize(d);
  p.action.resize(d);
  for (int j = 0; j < d; ++j) {
    p.theta[j] = wrap ? wrap_angle(y[j]) : y[j];
    p.action[j] = y[d + j];
  }
  return p;
}

}  // namespace

// ---------------------------------------------------------------------------
// FlowMap

FlowMap::FlowMap(TimeDepVectorField generator, double eps, TorusBox safe_box,
                 FlowParams params)
    : generator_(std::move(generator)),
      eps_(eps),
      safe_box_(std::move(safe_box)),
      params_(params) {
  eps_ = clamp_to_range(eps_, generator_.eps_max(), "FlowMap");
  if (!generator_.space().contains_box(safe_box_))
    throw PreconditionError("FlowMap: safe box not contained in the action box");
}

PhasePoint FlowMap::map(const PhasePoint& p) const {
  const int d = space().dim();
  const auto res = run_ladder(*generator_.impl(), pack_point(p, d), eps_, false, params_);
  return unpack_point(res.y, d, /*wrap=*/true);
}

PhasePoint FlowMap::map_unwrapped(const PhasePoint& p) const {
  const int d = space().dim();
  const auto res = run_ladder(*generator_.impl(), pack_point(p, d), eps_, false, params_);
  return unpack_point(res.y, d, /*wrap=*/false);
}

Eigen::MatrixXd FlowMap::jacobian(const PhasePoint& p) const {
  return map_with_jacobian(p).second;
}

std::pair<PhasePoint, Eigen::MatrixXd> FlowMap::map_with_jacobian(const PhasePoint& p) const {
  const int d = space().dim();
  auto res = run_ladder(*generator_.impl(), pack_point(p, d), eps_, true, params_);
  return {unpack_point(res.y, d, /*wrap=*/true), std::move(res.jac)};
}

PhasePoint FlowMap::inverse_map(const PhasePoint& p) const {
  const int d = space().dim();
  if (eps_ == 0.0) return unpack_point(pack_point(p, d), d, true);
  const TimeDepVectorField rev = generator_.reversed(eps_);
  const auto res = run_ladder(*rev.impl(), pack_point(p, d), eps_, false, params_);
  return unpack_point(res.y, d, /*wrap=*/true);
}

std::pair<PhasePoint, Eigen::MatrixXd> FlowMap::inverse_map_with_jacobian(
    const PhasePoint& p) const {
  const int d = space().dim();
  if (eps_ == 0.0)
    return {unpack_point(pack_point(p, d), d, true),
            Eigen::MatrixXd::Identity(2 * d, 2 * d)};
  const TimeDepVectorField rev = generator_.reversed(eps_);
  auto res = run_ladder(*rev.impl(), pack_point(p, d), eps_, true, params_);
  return {unpack_point(res.y, d, /*wrap=*/true), std::move(res.jac)};
}

FlowMap integrate_flow(const TimeDepVectorField& x, double eps,
                       std::optional<TorusBox> safe_box, FlowParams params) {
  TorusBox box = safe_box ? std::move(*safe_box) : x.space().shrunk(kDefaultSafeShrink);
  return FlowMap(x, eps, std::move(box), params);
}

// ---------------------------------------------------------------------------
// Pushforward and composition

VectorField pushforward_vf(const FlowMap& phi, const VectorField& x, PushDirection dir) {
  const TorusBox target = phi.safe_box();
  const int d = target.dim();
  const int n2 = 2 * d;
  const detail::AngleTransform tr(target, target.modes_per_axis());
  const int n_angle = tr.n_angle();
  const int n_grid = target.n_grid();

  std::vector<std::vector<double>> values(
      n2, std::vector<double>(static_cast<std::size_t>(n_angle)));
  std::vector<std::vector<ScalarField::Complex>> coef(
      n2, std::vector<ScalarField::Complex>(static_cast<std::size_t>(target.n_modes()) * n_grid));
  std::vector<ScalarField::Complex> modes(target.n_modes());

  detail::FieldEvaluator ev(x.space());
  PhasePoint p;
  p.theta.resize(d);
  p.action.resize(d);
  Eigen::VectorXd v(n2), w(n2), q(n2);

  for (int g = 0; g < n_grid; ++g) {
    target.grid_point(g, p.action);
    for (int a = 0; a < n_angle; ++a) {
      tr.angle_point(a, p.theta);

      PhasePoint src;
      Eigen::MatrixXd jac;
      if (dir == PushDirection::Forward) {
        std::tie(src, jac) = phi.inverse_map_with_jacobian(p);
      } else {
        std::tie(src, jac) = phi.map_with_jacobian(p);
      }
      for (int j = 0; j < d; ++j) {
        q[j] = src.theta[j];
        q[d + j] = src.action[j];
      }
      ev.bind(q.data());
      for (int r = 0; r < n2; ++r) v[r] = ev.eval(x.comp(r));
      // In both directions the needed matrix is the inverse of the one the
      // integrator produced.
      w = jac.partialPivLu().solve(v);
      for (int r = 0; r < n2; ++r) values[r][a] = w[r];
    }
    for (int r = 0; r < n2; ++r) {
      tr.values_to_modes(values[r], modes);
      for (int m = 0; m < target.n_modes(); ++m)
        coef[r][static_cast<std::size_t>(m) * n_grid + g] = modes[m];
    }
  }

  std::vector<ScalarField> an, ac;
  for (int j = 0; j < d; ++j)
    an.push_back(ScalarField::from_raw(target, std::move(coef[j])));
  for (int j = 0; j < d; ++j)
    ac.push_back(ScalarField::from_raw(target, std::move(coef[d + j])));
  return VectorField(std::move(an), std::move(ac));
}

TimeDepVectorField compose_generator(const TimeDepVectorField& x1,
                                     const TimeDepVectorField& x2,
                                     std::optional<TorusBox> safe_box,
                                     FlowParams params) {
  if (x1.space() != x2.space())
    throw PreconditionError("compose_generator: generators on different TorusBoxes");
  if (x1.eps_max() != x2.eps_max())
    throw PreconditionError("compose_generator: generators disagree on eps_max");
  TorusBox target = safe_box ? std::move(*safe_box)
                             : x1.space().shrunk(kDefaultSafeShrink);

  auto provider = [x1, x2, target, params](double eps) {
    VectorField out = restrict_to_box(x1.field_at(eps), target);
    const FlowMap phi = integrate_flow(x1, eps, target, params);
    out += pushforward_vf(phi, x2.field_at(eps), PushDirection::Forward);
    return out;
  };
  return TimeDepVectorField(std::move(target), std::move(provider), x1.eps_max(),
                            x1.symplectic() && x2.symplectic());
}

// ---------------------------------------------------------------------------
// Flow decomposition

FlowDecomposition decompose_flow(const TimeDepVectorField& x,
                                 std::optional<TorusBox> safe_box,
                                 FlowParams params) {
  if (!x.symplectic())
    throw PreconditionError("decompose_flow: generator must carry the symplectic flag");
  TorusBox target = safe_box ? std::move(*safe_box)
                             : x.space().shrunk(kDefaultSafeShrink);

  TimeDepVectorField lift =
      x.time_independent()
          ? TimeDepVectorField::constant(vertical_average(x.field_at(0.0)), x.eps_max(),
                                         true)
          : TimeDepVectorField(
                x.space(),
                [x](double eps) { return vertical_average(x.field_at(eps)); },
                x.eps_max(), /*symplectic=*/true);

  ScalarFamily g(
      target,
      [x, lift, target, params](double eps) {
        VectorField w = x.field_at(eps);
        w -= lift.field_at(eps);
        const FlowMap phi = integrate_flow(lift, eps, target, params);
        const VectorField z = pushforward_vf(phi, w, PushDirection::Inverse);
        ScalarField gf = primitive_with_zero_average(omega_flat(z));
        gf *= -1.0;
        return gf;
      },
      x.eps_max());

  TimeDepVectorField z(
      target, [g](double eps) { return hamiltonian_vf(g.at(eps)); }, x.eps_max(),
      /*symplectic=*/true);

  return FlowDecomposition{std::move(lift), std::move(g), std::move(z)};
}

double recomposition_residual(const TimeDepVectorField& x, const FlowDecomposition& dec,
                              double eps, std::span<const PhasePoint> samples,
                              FlowParams params) {
  const FlowMap phi_x = integrate_flow(x, eps, {}, params);
  const FlowMap phi_lift = integrate_flow(dec.lift, eps, {}, params);
  const FlowMap phi_z = integrate_flow(dec.z, eps, dec.z.space(), params);

  double residual = 0.0;
  for (const PhasePoint& m : samples) {
    const PhasePoint lhs = phi_x.map(m);
    const PhasePoint rhs = phi_lift.map(phi_z.map(m));
    residual = std::max(residual, phase_distance(lhs, rhs));
  }
  return residual;
}

// ---------------------------------------------------------------------------
// Small utilities

Eigen::MatrixXd canonical_omega_matrix(int d) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * d, 2 * d);
  for (int j = 0; j < d; ++j) {
    omega(j, d + j) = -1.0;
    omega(d + j, j) = 1.0;
  }
  return omega;
}

double symplectic_defect(const Eigen::MatrixXd& jac) {
  const int d = static_cast<int>(jac.rows()) / 2;
  const Eigen::MatrixXd omega = canonical_omega_matrix(d);
  return (jac.transpose() * omega * jac - omega).cwiseAbs().maxCoeff();
}

double phase_distance(const PhasePoint& a, const PhasePoint& b) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.theta.size(); ++j) {
    const double dt = circle_distance(a.theta[j], b.theta[j]);
    acc += dt * dt;
  }
  for (std::size_t j = 0; j < a.action.size(); ++j) {
    const double di = a.action[j] - b.action[j];
    acc += di * di;
  }
  return std::sqrt(acc);
}

}  // namespace toravg

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "toravg/averaging.hpp"
#include "toravg/errors.hpp"
#include "toravg/field_calculus.hpp"
#include "toravg/flow.hpp"
#include "toravg/random_fields.hpp"

using namespace toravg;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

TorusBox make_box(int d) {
  return TorusBox::make(d, std::vector<double>(d, -1.5), std::vector<double>(d, 1.5), 8, 33);
}

ScalarField from_fn(const TorusBox& box,
                    const std::function<double(std::span<const double>,
                                               std::span<const double>)>& f) {
  return ScalarField::from_point_function(box, f);
}

PhasePoint pt(std::vector<double> theta, std::vector<double> action) {
  return PhasePoint{std::move(theta), std::move(action)};
}

}  // namespace

TEST_CASE("zero generator gives the identity flow") {
  const TorusBox box = make_box(1);
  const TimeDepVectorField zero =
      TimeDepVectorField::constant(VectorField::zeros(box), 1.0, true);
  const FlowMap phi = integrate_flow(zero, 0.8);
  const auto [image, jac] = phi.map_with_jacobian(pt({0.3}, {0.5}));
  CHECK(image.theta[0] == doctest::Approx(0.3).epsilon(1e-13));
  CHECK(image.action[0] == doctest::Approx(0.5).epsilon(1e-13));
  CHECK((jac - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

  // eps = 0 is the identity regardless of the generator.
  const FlowMap at_zero = integrate_flow(zero, 0.0);
  const PhasePoint fixed = at_zero.map(pt({0.9}, {-1.0}));
  CHECK(fixed.theta[0] == doctest::Approx(0.9));
  CHECK(fixed.action[0] == doctest::Approx(-1.0));
}

TEST_CASE("constant angle translation flow") {
  const TorusBox box = make_box(1);
  const double c = 0.7;
  VectorField gen = VectorField::zeros(box);
  gen.set_angle_comp(0, ScalarField::constant(box, c));
  const FlowMap phi = integrate_flow(TimeDepVectorField::constant(gen, 1.0, true), 1.0);

  const PhasePoint image = phi.map(pt({0.6}, {0.2}));
  CHECK(image.theta[0] == doctest::Approx(wrap_angle(0.6 + c)).epsilon(1e-11));
  CHECK(image.action[0] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK((phi.jacobian(pt({0.6}, {0.2})) - Eigen::MatrixXd::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
}

TEST_CASE("shear flow of H = I^2/2") {
  const TorusBox box = make_box(1);
  const ScalarField h = from_fn(box, [](auto, auto act) { return 0.5 * act[0] * act[0]; });
  const TimeDepVectorField family =
      TimeDepVectorField::constant(hamiltonian_vf(h), 0.5, true);
  const double eps = 0.4;
  const FlowMap phi = integrate_flow(family, eps);

  const double theta0 = 0.15, i0 = 0.8;
  const auto [image, jac] = phi.map_with_jacobian(pt({theta0}, {i0}));
  CHECK(image.theta[0] == doctest::Approx(wrap_angle(theta0 + i0 * eps)).epsilon(1e-10));
  CHECK(image.action[0] == doctest::Approx(i0).epsilon(1e-11));
  // Jacobian is the unit upper-triangular shear with off-diagonal eps.
  CHECK(jac(0, 0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(jac(0, 1) == doctest::Approx(eps).epsilon(1e-9));
  CHECK(std::fabs(jac(1, 0)) < 1e-10);
  CHECK(jac(1, 1) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(symplectic_defect(jac) < 1e-9);
}

TEST_CASE("symplectic generators have symplectic Jacobians") {
  RandomFieldSampler sampler(77);
  for (int dim = 1; dim <= 2; ++dim) {
    const TorusBox box = make_box(dim);
    ScalarField h = sampler.scalar(box, 2, 0.1, true);
    h += sampler.action_polynomial(box, 0.3);
    const TimeDepVectorField family =
        TimeDepVectorField::constant(hamiltonian_vf(h), 0.5, true);
    const FlowMap phi = integrate_flow(family, 0.5);
    for (const auto& p : sampler.phase_points(box, 4)) {
      CHECK(symplectic_defect(phi.jacobian(p)) < 1e-7);
    }
  }
}

TEST_CASE("inverse map inverts the map") {
  RandomFieldSampler sampler(91);
  const TorusBox box = make_box(1);
  ScalarField h = sampler.scalar(box, 2, 0.1, true);
  h += sampler.action_polynomial(box, 0.4);
  const TimeDepVectorField family =
      TimeDepVectorField::constant(hamiltonian_vf(h), 0.5, true);
  const FlowMap phi = integrate_flow(family, 0.45);
  for (const auto& p : sampler.phase_points(box, 6)) {
    const PhasePoint back = phi.inverse_map(phi.map(p));
    CHECK(phase_distance(back, p) < 1e-8);
  }
}

TEST_CASE("trajectories that leave the box raise a domain escape error") {
  const TorusBox box = make_box(1);
  VectorField push = VectorField::zeros(box);
  push.set_action_comp(0, ScalarField::constant(box, 10.0));
  const TimeDepVectorField family = TimeDepVectorField::constant(push, 1.0, true);
  const FlowMap phi = integrate_flow(family, 1.0);
  CHECK_THROWS_AS(phi.map(pt({0.1}, {0.0})), DomainEscapeError);
}

TEST_CASE("unreachable tolerance hits the step floor") {
  const TorusBox box = make_box(1);
  const ScalarField h = from_fn(box, [](auto th, auto act) {
    return 0.2 * act[0] * act[0] + 0.05 * std::sin(kTwoPi * th[0]);
  });
  FlowParams params;
  params.richardson_tol = 1e-30;
  const TimeDepVectorField family =
      TimeDepVectorField::constant(hamiltonian_vf(h), 0.5, true);
  const FlowMap phi = integrate_flow(family, 0.5, {}, params);
  CHECK_THROWS_AS(phi.map(pt({0.2}, {0.3})), IntegrationError);
}

TEST_CASE("symplectic flag is verified on realization") {
  const TorusBox box = make_box(1);
  VectorField bad = VectorField::zeros(box);
  bad.set_angle_comp(0, from_fn(box, [](auto, auto act) { return act[0]; }));
  bad.set_action_comp(0, from_fn(box, [](auto, auto act) { return act[0]; }));
  const TimeDepVectorField family = TimeDepVectorField::constant(bad, 1.0, true);
  CHECK_THROWS_AS(family.field_at(0.5), InconsistencyError);
}

TEST_CASE("pushforward examples") {
  const TorusBox box = make_box(1);

  // Identity flow leaves fields unchanged (up to resampling).
  const TimeDepVectorField zero =
      TimeDepVectorField::constant(VectorField::zeros(box), 1.0, true);
  const FlowMap id = integrate_flow(zero, 1.0);
  RandomFieldSampler sampler(307);
  const VectorField x = sampler.vector_field(box, 3, 0.8);
  const VectorField pushed = pushforward_vf(id, x, PushDirection::Forward);
  CHECK(sup_distance(pushed, restrict_to_box(x, pushed.space())) < 1e-10);

  // Translation: (phi_* X)(theta) = X(theta - s).
  const double c = 0.3;
  VectorField gen = VectorField::zeros(box);
  gen.set_angle_comp(0, ScalarField::constant(box, c));
  const FlowMap shift = integrate_flow(TimeDepVectorField::constant(gen, 1.0, true), 1.0);
  VectorField wave = VectorField::zeros(box);
  wave.set_action_comp(0, from_fn(box, [](auto th, auto) { return std::sin(kTwoPi * th[0]); }));
  const VectorField moved = pushforward_vf(shift, wave, PushDirection::Forward);
  const ScalarField oracle = ScalarField::from_point_function(
      moved.space(),
      [&](auto th, auto) { return std::sin(kTwoPi * (th[0] - c)); });
  CHECK(sup_distance(moved.action_comp(0), oracle) < 1e-9);
  CHECK(moved.angle_comp(0).sup_norm() < 1e-9);
}

TEST_CASE("compose_generator degenerate and consistency cases") {
  const TorusBox box = make_box(1);
  RandomFieldSampler sampler(401);

  VectorField liftf = VectorField::zeros(box);
  liftf.set_angle_comp(0, ScalarField::constant(box, 0.6));
  liftf.set_action_comp(0, ScalarField::constant(box, 0.2));
  const TimeDepVectorField x1 = TimeDepVectorField::constant(liftf, 0.5, true);

  const ScalarField g = sampler.scalar(box, 2, 0.15, true);
  const TimeDepVectorField x2 =
      TimeDepVectorField::constant(hamiltonian_vf(g), 0.5, true);
  const TimeDepVectorField zero =
      TimeDepVectorField::constant(VectorField::zeros(box), 0.5, true);

  // X2 = 0 returns X1 (restricted to the safe box); X1 = 0 returns X2.
  const TimeDepVectorField just_x1 = compose_generator(x1, zero);
  CHECK(sup_distance(just_x1.field_at(0.3),
                     restrict_to_box(liftf, just_x1.space())) < 1e-9);
  const TimeDepVectorField just_x2 = compose_generator(zero, x2);
  CHECK(sup_distance(just_x2.field_at(0.3),
                     restrict_to_box(x2.field_at(0.3), just_x2.space())) < 1e-9);

  // Flow consistency at sample points.
  const TimeDepVectorField composed = compose_generator(x1, x2);
  const double eps = 0.4;
  const FlowMap phi3 = integrate_flow(composed, eps, composed.space());
  const FlowMap phi1 = integrate_flow(x1, eps);
  const FlowMap phi2 = integrate_flow(x2, eps);
  for (const auto& p : sampler.phase_points(box, 10, 0.4)) {
    CHECK(phase_distance(phi3.map(p), phi1.map(phi2.map(p))) < 1e-6);
  }
}

TEST_CASE("decompose_flow closed-form scenario") {
  const TorusBox box = make_box(1);
  const double c = 1.0, a = 0.1;
  const ScalarField h = from_fn(box, [&](auto th, auto act) {
    return c * act[0] + a * std::sin(kTwoPi * th[0]);
  });
  const TimeDepVectorField x =
      TimeDepVectorField::constant(hamiltonian_vf(h), 0.5, true);
  const FlowDecomposition dec = decompose_flow(x);

  RandomFieldSampler sampler(19);
  const auto samples = sampler.phase_points(box, 12, 0.45);
  for (double eps : {0.1, 0.25, 0.5}) {
    // Y_lift = c dtheta.
    const VectorField lift = dec.lift.field_at(eps);
    CHECK(sup_distance(lift.angle_comp(0),
                       ScalarField::constant(box, c)) < 1e-12);
    CHECK(lift.action_comp(0).sup_norm() < 1e-12);

    // G(eps) = a sin(2 pi (theta + c eps)).
    const ScalarField g = dec.g.at(eps);
    const ScalarField oracle = ScalarField::from_point_function(
        g.space(), [&](auto th, auto) { return a * std::sin(kTwoPi * (th[0] + c * eps)); });
    CHECK(sup_distance(g, oracle) < 1e-7);
    CHECK(vertical_average(g).sup_norm() == 0.0);

    CHECK(recomposition_residual(x, dec, eps, samples) < 1e-6);
  }
}

TEST_CASE("decompose_flow of a symplectic lift is trivial") {
  const TorusBox box = make_box(1);
  VectorField liftf = VectorField::zeros(box);
  liftf.set_angle_comp(0, ScalarField::from_action_function(box, [](auto act) {
                         return 0.5 + 0.2 * act[0];
                       }));
  liftf.set_action_comp(0, ScalarField::constant(box, 0.15));
  const TimeDepVectorField x = TimeDepVectorField::constant(liftf, 0.5, true);
  const FlowDecomposition dec = decompose_flow(x);
  for (double eps : {0.2, 0.5}) {
    CHECK(sup_distance(dec.lift.field_at(eps), liftf) < 1e-12);
    CHECK(dec.g.at(eps).sup_norm() < 1e-9);
  }
}

TEST_CASE("decompose_flow of a vertical Hamiltonian generator") {
  const TorusBox box = make_box(1);
  const double a = 0.1;
  const ScalarField h =
      from_fn(box, [&](auto th, auto) { return a * std::sin(kTwoPi * th[0]); });
  const TimeDepVectorField x =
      TimeDepVectorField::constant(hamiltonian_vf(h), 0.5, true);
  const FlowDecomposition dec = decompose_flow(x);
  for (double eps : {0.1, 0.5}) {
    CHECK(dec.lift.field_at(eps).sup_norm() < 1e-12);  // Phi = identity
    const ScalarField oracle = ScalarField::from_point_function(
        dec.g.space(), [&](auto th, auto) { return a * std::sin(kTwoPi * th[0]); });
    CHECK(sup_distance(dec.g.at(eps), oracle) < 1e-9);
  }
}

TEST_CASE("fiber-preserving symplectic flows preserve the period sections") {
  const TorusBox box = make_box(1);
  VectorField liftf = VectorField::zeros(box);
  liftf.set_angle_comp(0, ScalarField::from_action_function(box, [](auto act) {
                         return 0.7 + 0.3 * act[0];
                       }));
  liftf.set_action_comp(0, ScalarField::constant(box, 0.1));
  const TimeDepVectorField family = TimeDepVectorField::constant(liftf, 0.5, true);
  const FlowMap phi = integrate_flow(family, 0.5);

  VectorField frame = VectorField::zeros(box);
  frame.set_angle_comp(0, ScalarField::constant(box, 1.0));
  const VectorField pushed = pushforward_vf(phi, frame, PushDirection::Forward);
  CHECK(sup_distance(pushed, restrict_to_box(frame, pushed.space())) < 1e-7);
}

TEST_CASE("lift flows commute with averaging of pushforwards") {
  const TorusBox box = make_box(1);
  RandomFieldSampler sampler(55);
  VectorField liftf = VectorField::zeros(box);
  liftf.set_angle_comp(0, ScalarField::constant(box, 0.8));
  liftf.set_action_comp(0, ScalarField::constant(box, 0.12));
  const TimeDepVectorField family = TimeDepVectorField::constant(liftf, 0.5, true);
  const FlowMap phi = integrate_flow(family, 0.5);

  for (int i = 0; i < 3; ++i) {
    const VectorField t = sampler.vector_field(box, 2, 0.5);
    const VectorField lhs = vertical_average(pushforward_vf(phi, t, PushDirection::Forward));
    const VectorField rhs =
        pushforward_vf(phi, vertical_average(t), PushDirection::Forward);
    CHECK(sup_distance(lhs, rhs) < 1e-6);
  }
}

TEST_CASE("re-decomposing a fiber-preserving generator is stable") {
  const TorusBox box = make_box(1);
  VectorField liftf = VectorField::zeros(box);
  liftf.set_angle_comp(0, ScalarField::from_action_function(box, [](auto act) {
                         return 0.4 - 0.2 * act[0];
                       }));
  liftf.set_action_comp(0, ScalarField::constant(box, 0.05));
  const TimeDepVectorField x = TimeDepVectorField::constant(liftf, 0.5, true);
  const FlowDecomposition dec = decompose_flow(x);
  for (double eps : {0.25, 0.5}) {
    CHECK(sup_distance(dec.lift.field_at(eps), liftf) < 1e-7);
    CHECK(dec.g.at(eps).sup_norm() < 1e-7);
  }
}

TEST_CASE("sampled families interpolate between nodes") {
  const TorusBox box = make_box(1);
  // A family linear in eps is reproduced exactly by the node interpolation.
  auto provider = [&](double eps) {
    VectorField v = VectorField::zeros(box);
    v.set_angle_comp(0, ScalarField::constant(box, 0.1 + 0.5 * eps));
    return v;
  };
  const TimeDepVectorField sampled =
      TimeDepVectorField::sampled(box, provider, 0.5, true, 9);
  for (double eps : {0.0, 0.123, 0.31, 0.5}) {
    CHECK(sup_distance(sampled.field_at(eps), provider(eps)) < 1e-13);
  }
}

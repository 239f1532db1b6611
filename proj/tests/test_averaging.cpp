#include <doctest.h>

#include <cmath>
#include <numbers>

#include "toravg/averaging.hpp"
#include "toravg/field_calculus.hpp"
#include "toravg/random_fields.hpp"

using namespace toravg;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

TorusBox make_box(int d) {
  return TorusBox::make(d, std::vector<double>(d, -1.5), std::vector<double>(d, 1.5), 8, 33);
}

}  // namespace

TEST_CASE("vertical average examples against the quadrature oracle") {
  const TorusBox box = make_box(1);

  // f = I^2 + cos(2 pi theta) averages to I^2.
  const ScalarField f = ScalarField::from_point_function(
      box, [](auto th, auto act) { return act[0] * act[0] + std::cos(kTwoPi * th[0]); });
  const ScalarField avg = vertical_average(f);
  const ScalarField expected = ScalarField::from_action_function(
      box, [](auto act) { return act[0] * act[0]; });
  CHECK(sup_distance(avg, expected) < 1e-12);
  CHECK(sup_distance(avg, vertical_average_by_quadrature(f)) < 1e-13);

  // Already invariant fields are fixed.
  VectorField x = VectorField::zeros(box);
  x.set_angle_comp(0, ScalarField::constant(box, 1.0));
  CHECK(sup_distance(vertical_average(x), x) == 0.0);

  // alpha = sin(2 pi theta) dI + I dtheta averages to I dtheta.
  OneForm alpha = OneForm::zeros(box);
  alpha.set_action_comp(0, ScalarField::from_point_function(box, [](auto th, auto) {
                          return std::sin(kTwoPi * th[0]);
                        }));
  alpha.set_theta_comp(0, ScalarField::from_action_function(box, [](auto act) {
                         return act[0];
                       }));
  const OneForm avg_alpha = vertical_average(alpha);
  CHECK(avg_alpha.action_comp(0).sup_norm() < 1e-13);
  CHECK(sup_distance(avg_alpha.theta_comp(0), alpha.theta_comp(0)) < 1e-13);
  CHECK(sup_distance(avg_alpha, vertical_average_by_quadrature(alpha)) < 1e-13);
}

TEST_CASE("averaging properties on random fields") {
  RandomFieldSampler sampler(101);
  for (int dim = 1; dim <= 2; ++dim) {
    const TorusBox box = make_box(dim);
    for (int i = 0; i < 6; ++i) {
      const ScalarField f = sampler.scalar(box);
      const OneForm a = sampler.one_form(box);
      const VectorField x = sampler.vector_field(box);

      // Idempotence, exactly in mode space.
      CHECK(sup_distance(vertical_average(vertical_average(f)), vertical_average(f)) == 0.0);
      CHECK(sup_distance(vertical_average(vertical_average(a)), vertical_average(a)) == 0.0);
      CHECK(sup_distance(vertical_average(vertical_average(x)), vertical_average(x)) == 0.0);

      // <df> = d<f>.
      CHECK(sup_distance(vertical_average(d_scalar(f)), d_scalar(vertical_average(f))) < 1e-10);

      // omega compatibility.
      CHECK(sup_distance(vertical_average(omega_flat(x)), omega_flat(vertical_average(x))) <
            1e-12);

      // Quadrature oracle.
      CHECK(sup_distance(vertical_average(f), vertical_average_by_quadrature(f)) < 1e-12);
    }
  }
}

TEST_CASE("contraction compatibility for invariant fields") {
  RandomFieldSampler sampler(7);
  const TorusBox box = make_box(2);
  for (int i = 0; i < 4; ++i) {
    const VectorField x = vertical_average(sampler.vector_field(box));
    const OneForm a = sampler.one_form(box);
    const ScalarField lhs = vertical_average(contract(a, x));
    const ScalarField rhs = contract(vertical_average(a), x);
    CHECK(sup_distance(lhs, rhs) < 1e-10);
  }
}

TEST_CASE("is_g_invariant") {
  const TorusBox box = make_box(1);
  RandomFieldSampler sampler(31);

  OneForm alpha = OneForm::zeros(box);
  alpha.set_theta_comp(0, ScalarField::from_action_function(box, [](auto act) {
                         return act[0];
                       }));
  CHECK(is_g_invariant(alpha));

  const ScalarField s = ScalarField::from_point_function(
      box, [](auto th, auto) { return std::sin(kTwoPi * th[0]); });
  CHECK_FALSE(is_g_invariant(s));

  for (int i = 0; i < 5; ++i)
    CHECK(is_g_invariant(vertical_average(sampler.vector_field(box))));
}

TEST_CASE("is_vertical_parallel") {
  const TorusBox box = make_box(1);

  VectorField frame = VectorField::zeros(box);
  frame.set_angle_comp(0, ScalarField::constant(box, 1.0));
  CHECK(is_vertical_parallel(frame));

  VectorField scaled = VectorField::zeros(box);
  scaled.set_angle_comp(0, ScalarField::from_action_function(box, [](auto act) {
                          return act[0];
                        }));
  CHECK(is_vertical_parallel(scaled));

  VectorField wobble = VectorField::zeros(box);
  wobble.set_angle_comp(0, ScalarField::from_point_function(box, [](auto th, auto) {
                          return std::sin(kTwoPi * th[0]);
                        }));
  CHECK_FALSE(is_vertical_parallel(wobble));
}

TEST_CASE("is_lift") {
  const TorusBox box = make_box(1);

  VectorField unit = VectorField::zeros(box);
  unit.set_action_comp(0, ScalarField::constant(box, 1.0));
  const auto base = is_lift(unit);
  REQUIRE(base.has_value());
  CHECK(sup_distance((*base)[0], ScalarField::constant(box, 1.0)) < 1e-14);

  // Vertical fields are lifts of zero.
  VectorField vertical = VectorField::zeros(box);
  vertical.set_angle_comp(0, ScalarField::from_action_function(box, [](auto act) {
                            return act[0];
                          }));
  const auto zero_base = is_lift(vertical);
  REQUIRE(zero_base.has_value());
  CHECK((*zero_base)[0].sup_norm() == 0.0);

  VectorField not_lift = VectorField::zeros(box);
  not_lift.set_action_comp(0, ScalarField::from_point_function(box, [](auto th, auto) {
                             return std::sin(kTwoPi * th[0]);
                           }));
  CHECK_FALSE(is_lift(not_lift).has_value());
}

TEST_CASE("G-invariant fields are lifts") {
  RandomFieldSampler sampler(57);
  for (int dim = 1; dim <= 2; ++dim) {
    const TorusBox box = make_box(dim);
    for (int i = 0; i < 5; ++i) {
      const VectorField x = vertical_average(sampler.vector_field(box));
      CHECK(is_g_invariant(x));
      CHECK(is_lift(x).has_value());
    }
  }
}

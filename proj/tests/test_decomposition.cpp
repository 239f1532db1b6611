#include <doctest.h>

#include <cmath>
#include <numbers>

#include "toravg/averaging.hpp"
#include "toravg/decomposition.hpp"
#include "toravg/errors.hpp"
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

}  // namespace

TEST_CASE("cycle periods") {
  const TorusBox box = make_box(1);
  RandomFieldSampler sampler(13);

  // Exact forms have vanishing periods.
  for (int i = 0; i < 3; ++i) {
    const auto periods = cycle_periods(d_scalar(sampler.scalar(box)));
    CHECK(std::fabs(periods[0]) < 1e-10);
  }

  // alpha = 3 dtheta has period 3 (analytic line integral).
  OneForm harmonic = OneForm::zeros(box);
  harmonic.set_theta_comp(0, ScalarField::constant(box, 3.0));
  CHECK(cycle_periods(harmonic)[0] == doctest::Approx(3.0).epsilon(1e-12));

  // alpha = I dtheta is not closed: the gate rejects it, although the raw
  // line integral at I = 0.7 is 0.7.
  OneForm not_closed = OneForm::zeros(box);
  not_closed.set_theta_comp(0, from_fn(box, [](auto, auto act) { return act[0]; }));
  const double base[] = {0.7};
  const double offsets[] = {0.0};
  CHECK(coordinate_cycle_integral(not_closed, 0, {base, 1}, {offsets, 1}) ==
        doctest::Approx(0.7).epsilon(1e-12));
  CHECK_THROWS_AS(cycle_periods(not_closed), PreconditionError);
}

TEST_CASE("cycle periods are base-point independent (d = 2)") {
  const TorusBox box = make_box(2);
  OneForm alpha = OneForm::zeros(box);
  alpha.set_theta_comp(0, ScalarField::constant(box, 2.0));
  alpha.set_theta_comp(1, ScalarField::constant(box, -1.0));
  RandomFieldSampler sampler(99);
  alpha += d_scalar(sampler.scalar(box));
  const auto periods = cycle_periods(alpha);
  CHECK(periods[0] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(periods[1] == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("primitive_with_zero_average examples") {
  const TorusBox box = make_box(1);

  // alpha = 0 -> f = 0.
  CHECK(primitive_with_zero_average(OneForm::zeros(box)).sup_norm() == 0.0);

  // alpha = cos(2 pi theta) dtheta -> f = sin(2 pi theta) / (2 pi).
  OneForm alpha = OneForm::zeros(box);
  alpha.set_theta_comp(0, from_fn(box, [](auto th, auto) { return std::cos(kTwoPi * th[0]); }));
  const ScalarField f = primitive_with_zero_average(alpha);
  const ScalarField oracle =
      from_fn(box, [](auto th, auto) { return std::sin(kTwoPi * th[0]) / kTwoPi; });
  CHECK(sup_distance(f, oracle) < 1e-12);

  // alpha = d(I sin(2 pi theta)) reconstructs its primitive.
  const ScalarField g =
      from_fn(box, [](auto th, auto act) { return act[0] * std::sin(kTwoPi * th[0]); });
  const ScalarField back = primitive_with_zero_average(d_scalar(g));
  CHECK(sup_distance(back, g) < 1e-10);
  CHECK(vertical_average(back).sup_norm() == 0.0);
}

TEST_CASE("primitive_with_zero_average names the failed hypothesis") {
  const TorusBox box = make_box(1);

  // Not closed.
  OneForm not_closed = OneForm::zeros(box);
  not_closed.set_theta_comp(0, from_fn(box, [](auto, auto act) { return act[0]; }));
  CHECK_THROWS_WITH_AS(primitive_with_zero_average(not_closed),
                       doctest::Contains("closedness"), PreconditionError);

  // Closed but with periods (nonzero average).
  OneForm harmonic = OneForm::zeros(box);
  harmonic.set_theta_comp(0, ScalarField::constant(box, 1.0));
  CHECK_THROWS_WITH_AS(primitive_with_zero_average(harmonic),
                       doctest::Contains("zero-vertical-average"), PreconditionError);
}

TEST_CASE("decompose_symplectic closed-form example") {
  const TorusBox box = make_box(1);

  // X = omega^{-1}(I dI + cos(2 pi theta) dtheta).
  OneForm alpha = OneForm::zeros(box);
  alpha.set_action_comp(0, from_fn(box, [](auto, auto act) { return act[0]; }));
  alpha.set_theta_comp(0, from_fn(box, [](auto th, auto) { return std::cos(kTwoPi * th[0]); }));
  const VectorField x = omega_sharp(alpha);

  const auto split = decompose_symplectic(x);

  // X2 = -I dtheta and A = -sin(2 pi theta) / (2 pi).
  const ScalarField minus_i = from_fn(box, [](auto, auto act) { return -act[0]; });
  CHECK(sup_distance(split.lift.angle_comp(0), minus_i) < 1e-10);
  CHECK(split.lift.action_comp(0).sup_norm() < 1e-13);
  const ScalarField a_oracle =
      from_fn(box, [](auto th, auto) { return -std::sin(kTwoPi * th[0]) / kTwoPi; });
  CHECK(sup_distance(split.hamiltonian, a_oracle) < 1e-12);
}

TEST_CASE("decompose_symplectic fixes harmonic fields") {
  const TorusBox box = make_box(1);
  VectorField x = VectorField::zeros(box);
  x.set_action_comp(0, ScalarField::constant(box, 0.4));  // omega(X) = 0.4 dtheta
  const auto split = decompose_symplectic(x);
  CHECK(split.hamiltonian.sup_norm() < 1e-14);
  CHECK(sup_distance(split.lift, x) < 1e-14);
}

TEST_CASE("decompose_symplectic of a Hamiltonian field") {
  const TorusBox box = make_box(1);
  // H = I^2/2 + sin(2 pi theta) g(I) with g cubic.
  const auto g = [](double i) { return 0.3 + 0.2 * i - 0.1 * i * i * i; };
  const ScalarField h = from_fn(box, [&](auto th, auto act) {
    return 0.5 * act[0] * act[0] + std::sin(kTwoPi * th[0]) * g(act[0]);
  });
  const auto split = decompose_symplectic(hamiltonian_vf(h));

  const ScalarField freq = from_fn(box, [](auto, auto act) { return act[0]; });
  CHECK(sup_distance(split.lift.angle_comp(0), freq) < 1e-9);
  const ScalarField a_oracle =
      from_fn(box, [&](auto th, auto act) { return std::sin(kTwoPi * th[0]) * g(act[0]); });
  CHECK(sup_distance(split.hamiltonian, a_oracle) < 1e-9);
}

TEST_CASE("decompose_symplectic rejects non-symplectic input") {
  const TorusBox box = make_box(1);
  VectorField bad = VectorField::zeros(box);
  bad.set_angle_comp(0, from_fn(box, [](auto, auto act) { return act[0]; }));
  bad.set_action_comp(0, from_fn(box, [](auto, auto act) { return act[0]; }));
  CHECK_THROWS_AS(decompose_symplectic(bad), PreconditionError);
}

TEST_CASE("decomposition properties on random symplectic fields") {
  RandomFieldSampler sampler(211);
  for (int dim = 1; dim <= 2; ++dim) {
    const TorusBox box = make_box(dim);
    for (int i = 0; i < 5; ++i) {
      const VectorField x = sampler.symplectic_field(box, 0.8);
      const auto split = decompose_symplectic(x);

      VectorField recon = hamiltonian_vf(split.hamiltonian);
      recon += split.lift;
      CHECK(sup_distance(recon, x) < 1e-8);
      CHECK(vertical_average(split.hamiltonian).sup_norm() == 0.0);
      CHECK(is_lift(split.lift).has_value());
      CHECK(is_g_invariant(split.lift));
      CHECK(closedness_defect(omega_flat(split.lift)) < 1e-8);

      // Zero-average symplectic fields are Hamiltonian.
      VectorField x1 = x;
      x1 -= split.lift;
      const auto again = decompose_symplectic(x1);
      CHECK(again.lift.sup_norm() < 1e-10);
      CHECK(sup_distance(again.hamiltonian, split.hamiltonian) < 1e-10);
    }
  }
}

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "toravg/errors.hpp"
#include "toravg/field_calculus.hpp"
#include "toravg/random_fields.hpp"

using namespace toravg;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

TorusBox box1(int K = 8, int N = 33) {
  return TorusBox::make(1, {-1.5}, {1.5}, K, N);
}

TorusBox box2(int K = 8, int N = 33) {
  return TorusBox::make(2, {-1.5, -1.5}, {1.5, 1.5}, K, N);
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

TEST_CASE("TorusBox invariants") {
  CHECK_THROWS_AS(TorusBox::make(1, {1.0}, {0.0}, 4, 17), PreconditionError);
  CHECK_THROWS_AS(TorusBox::make(1, {0.0}, {1.0}, 4, 3), PreconditionError);
  CHECK_THROWS_AS(TorusBox::make(0, {}, {}, 4, 17), PreconditionError);

  const TorusBox a = box1();
  const TorusBox b = box1();
  CHECK(a == b);
  CHECK(a != box1(7));

  // Fields on different boxes are not combinable.
  ScalarField f = ScalarField::constant(a, 1.0);
  const ScalarField g = ScalarField::constant(box1(7), 1.0);
  CHECK_THROWS_AS(f += g, PreconditionError);
}

TEST_CASE("evaluate_scalar examples") {
  const TorusBox box = box1();

  const ScalarField one = ScalarField::constant(box, 1.0);
  CHECK(one.evaluate(pt({0.37}, {0.4})) == doctest::Approx(1.0).epsilon(1e-14));

  const ScalarField cosf = from_fn(box, [](auto th, auto) { return std::cos(kTwoPi * th[0]); });
  CHECK(std::fabs(cosf.evaluate(pt({0.25}, {-0.3}))) < 1e-13);

  // Oracle: direct polynomial evaluation.
  const ScalarField sq = from_fn(box, [](auto, auto act) { return act[0] * act[0]; });
  CHECK(sq.evaluate(pt({0.9}, {0.5})) == doctest::Approx(0.5 * 0.5).epsilon(1e-12));

  CHECK_THROWS_AS(one.evaluate(pt({0.0}, {2.0})), DomainEscapeError);
  CHECK_THROWS_AS(one.evaluate(pt({0.0}, {-1.5})), DomainEscapeError);  // boundary is outside
}

TEST_CASE("evaluate reconstructs grid samples") {
  RandomFieldSampler sampler(11);
  const TorusBox box = box1();
  const ScalarField f = sampler.scalar(box);
  std::vector<double> action(1);
  for (int g = 1; g + 1 < box.n_grid(); g += 5) {
    box.grid_point(g, action);
    for (double theta : {0.0, 0.31, 0.77}) {
      const double direct = f.evaluate_at_grid_action(std::vector<double>{theta}, g);
      CHECK(f.evaluate(pt({theta}, {action[0]})) == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("conjugate symmetry is maintained") {
  RandomFieldSampler sampler(3);
  const ScalarField f = sampler.scalar(box2());
  CHECK(f.conjugate_defect() == 0.0);
  const ScalarField p = multiply(f, f);
  CHECK(p.conjugate_defect() < 1e-15);
}

TEST_CASE("d_scalar examples against symbolic oracles") {
  const TorusBox box = box1();

  const OneForm dc = d_scalar(ScalarField::constant(box, 1.0));
  CHECK(dc.sup_norm() < 1e-15);

  const ScalarField sinf = from_fn(box, [](auto th, auto) { return std::sin(kTwoPi * th[0]); });
  const OneForm ds = d_scalar(sinf);
  const ScalarField oracle =
      from_fn(box, [](auto th, auto) { return kTwoPi * std::cos(kTwoPi * th[0]); });
  CHECK(sup_distance(ds.theta_comp(0), oracle) < 1e-12);
  CHECK(ds.action_comp(0).sup_norm() < 1e-12);

  const ScalarField lin = from_fn(box, [](auto, auto act) { return act[0]; });
  const OneForm dl = d_scalar(lin);
  CHECK(sup_distance(dl.action_comp(0), ScalarField::constant(box, 1.0)) < 1e-12);
  CHECK(dl.theta_comp(0).sup_norm() < 1e-12);
}

TEST_CASE("spectral angle derivatives are exact on pure modes") {
  const TorusBox box = box2();
  for (int k1 : {1, 3, 8}) {
    ScalarField f = ScalarField::zeros(box);
    f.set_mode_constant(std::vector<int>{k1, -2}, {0.25, 0.1});
    const ScalarField df = partial_theta(f, 0);
    // Mode k picks up exactly 2 pi i k_1.
    const auto row = df.mode(box.mode_flat(std::vector<int>{k1, -2}));
    const auto src = f.mode(box.mode_flat(std::vector<int>{k1, -2}));
    for (int g = 0; g < box.n_grid(); g += 97) {
      const std::complex<double> expected = src[g] * std::complex<double>{0.0, kTwoPi * k1};
      CHECK(std::abs(row[g] - expected) == 0.0);
    }
  }
}

TEST_CASE("closedness defect examples") {
  const TorusBox box = box1();
  RandomFieldSampler sampler(5);

  // d o d = 0 up to discretization.
  CHECK(closedness_defect(d_scalar(sampler.scalar(box, 3))) < 1e-9);
  CHECK(closedness_defect(d_scalar(sampler.scalar(box2(), 3))) < 1e-9);

  // alpha = I_1 dtheta_1 has defect exactly 1.
  OneForm alpha = OneForm::zeros(box);
  alpha.set_theta_comp(0, from_fn(box, [](auto, auto act) { return act[0]; }));
  CHECK(closedness_defect(alpha) == doctest::Approx(1.0).epsilon(1e-10));

  // Constant-coefficient forms are closed.
  OneForm harmonic = OneForm::zeros(box);
  harmonic.set_theta_comp(0, ScalarField::constant(box, 3.0));
  CHECK(closedness_defect(harmonic) < 1e-12);
}

TEST_CASE("musical isomorphisms") {
  const TorusBox box = box1();

  VectorField dtheta = VectorField::zeros(box);
  dtheta.set_angle_comp(0, ScalarField::constant(box, 1.0));
  const OneForm flat_theta = omega_flat(dtheta);
  CHECK(flat_theta.theta_comp(0).sup_norm() < 1e-15);
  CHECK(sup_distance(flat_theta.action_comp(0), ScalarField::constant(box, -1.0)) < 1e-15);

  VectorField dI = VectorField::zeros(box);
  dI.set_action_comp(0, ScalarField::constant(box, 1.0));
  const OneForm flat_action = omega_flat(dI);
  CHECK(sup_distance(flat_action.theta_comp(0), ScalarField::constant(box, 1.0)) < 1e-15);
  CHECK(flat_action.action_comp(0).sup_norm() < 1e-15);

  RandomFieldSampler sampler(17);
  for (int i = 0; i < 5; ++i) {
    const VectorField x = sampler.vector_field(box2());
    CHECK(sup_distance(omega_sharp(omega_flat(x)), x) < 1e-14);
  }
}

TEST_CASE("hamiltonian_vf examples and sign convention") {
  const TorusBox box = box1();

  // H = I_1: unit frequency.
  const VectorField x1 = hamiltonian_vf(from_fn(box, [](auto, auto act) { return act[0]; }));
  CHECK(sup_distance(x1.angle_comp(0), ScalarField::constant(box, 1.0)) < 1e-12);
  CHECK(x1.action_comp(0).sup_norm() < 1e-12);

  // H = I_1^2 / 2.
  const VectorField x2 =
      hamiltonian_vf(from_fn(box, [](auto, auto act) { return 0.5 * act[0] * act[0]; }));
  CHECK(sup_distance(x2.angle_comp(0), from_fn(box, [](auto, auto act) { return act[0]; })) <
        1e-12);

  // H = cos(2 pi theta_1).
  const VectorField x3 =
      hamiltonian_vf(from_fn(box, [](auto th, auto) { return std::cos(kTwoPi * th[0]); }));
  CHECK(sup_distance(x3.action_comp(0), from_fn(box, [](auto th, auto) {
                       return kTwoPi * std::sin(kTwoPi * th[0]);
                     })) < 1e-11);
  CHECK(x3.angle_comp(0).sup_norm() < 1e-12);

  // omega(X_H) + dH = 0 componentwise.
  RandomFieldSampler sampler(23);
  for (int dim = 1; dim <= 2; ++dim) {
    const ScalarField h = sampler.scalar(dim == 1 ? box : box2());
    OneForm defect = omega_flat(hamiltonian_vf(h));
    defect += d_scalar(h);
    CHECK(defect.sup_norm() < 1e-12);
  }
}

TEST_CASE("weinstein_nabla examples") {
  const TorusBox box = box1();

  VectorField frame = VectorField::zeros(box);
  frame.set_angle_comp(0, ScalarField::constant(box, 1.0));
  CHECK(weinstein_nabla(frame, frame).sup_norm() < 1e-14);

  // nabla_{dtheta} (sin(2 pi theta) dtheta) = 2 pi cos(2 pi theta) dtheta.
  VectorField y = VectorField::zeros(box);
  y.set_angle_comp(0, from_fn(box, [](auto th, auto) { return std::sin(kTwoPi * th[0]); }));
  const VectorField result = weinstein_nabla(frame, y);
  CHECK(sup_distance(result.angle_comp(0), from_fn(box, [](auto th, auto) {
                       return kTwoPi * std::cos(kTwoPi * th[0]);
                     })) < 1e-11);
  CHECK(result.vertical_defect() < 1e-14);

  // Non-vertical input is rejected.
  VectorField bad = VectorField::zeros(box);
  bad.set_action_comp(0, ScalarField::constant(box, 1.0));
  CHECK_THROWS_AS(weinstein_nabla(bad, frame), PreconditionError);
}

TEST_CASE("weinstein connection is torsion-free and flat (d = 2)") {
  RandomFieldSampler sampler(29);
  const TorusBox box = box2();
  for (int i = 0; i < 4; ++i) {
    const VectorField x = sampler.vertical_field(box, 2, true, 0.7);
    const VectorField y = sampler.vertical_field(box, 2, true, 0.7);
    const VectorField z = sampler.vertical_field(box, 2, true, 0.7);

    VectorField torsion = weinstein_nabla(x, y);
    torsion -= weinstein_nabla(y, x);
    torsion -= lie_bracket(x, y);
    CHECK(torsion.sup_norm() < 1e-9);

    VectorField curvature = weinstein_nabla(x, weinstein_nabla(y, z));
    curvature -= weinstein_nabla(y, weinstein_nabla(x, z));
    curvature -= weinstein_nabla(lie_bracket(x, y), z);
    CHECK(curvature.sup_norm() < 1e-8);
  }
}

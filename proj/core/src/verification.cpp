#include "toravg/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "toravg/action_periods.hpp"
#include "toravg/averaging.hpp"
#include "toravg/decomposition.hpp"
#include "toravg/deformation.hpp"
#include "toravg/errors.hpp"
#include "toravg/expression.hpp"
#include "toravg/field_calculus.hpp"
#include "toravg/flow.hpp"
#include "toravg/random_fields.hpp"

namespace toravg {

namespace {

using Clock = std::chrono::steady_clock;

class SuiteBuilder {
 public:
  SuiteBuilder(std::string name, std::uint64_t seed, double tol_scale)
      : tol_scale_(tol_scale), start_(Clock::now()) {
    result_.suite = std::move(name);
    result_.seed = seed;
  }

  void check(const std::string& name, double value, double tol) {
    CheckResult c;
    c.name = name;
    c.value = value;
    c.tol = tol * tol_scale_;
    c.pass = value < c.tol;
    result_.checks.push_back(std::move(c));
  }

  void check_exact(const std::string& name, double value) {
    CheckResult c;
    c.name = name;
    c.value = value;
    c.tol = 0.0;
    c.pass = (value == 0.0);
    result_.checks.push_back(std::move(c));
  }

  void check_bool(const std::string& name, bool ok) {
    CheckResult c;
    c.name = name;
    c.value = ok ? 0.0 : 1.0;
    c.tol = 0.0;
    c.pass = ok;
    result_.checks.push_back(std::move(c));
  }

  void fail(const std::string& name, const std::string& why) {
    CheckResult c;
    c.name = name + " [" + why + "]";
    c.value = 1.0;
    c.tol = 0.0;
    c.pass = false;
    result_.checks.push_back(std::move(c));
  }

  SuiteResult finish() {
    result_.pass = std::all_of(result_.checks.begin(), result_.checks.end(),
                               [](const CheckResult& c) { return c.pass; });
    result_.elapsed_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    return std::move(result_);
  }

 private:
  SuiteResult result_;
  double tol_scale_;
  Clock::time_point start_;
};

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

TorusBox default_suite_box(int dim) {
  return TorusBox::make(dim, std::vector<double>(dim, -1.5),
                        std::vector<double>(dim, 1.5), 8, 33);
}

// ---------------------------------------------------------------------------
// Suite 1: averaging

SuiteResult run_averaging_suite(std::uint64_t seed, int count, double tol_scale) {
  if (count <= 0) count = 100;
  SuiteBuilder suite("averaging", seed, tol_scale);
  RandomFieldSampler sampler(seed);

  double idem = 0.0, commute = 0.0, musical = 0.0, quadrature = 0.0;
  for (int dim = 1; dim <= 2; ++dim) {
    const TorusBox box = default_suite_box(dim);
    const int reps = count / 2;
    for (int i = 0; i < reps; ++i) {
      const ScalarField f = sampler.scalar(box);
      const OneForm a = sampler.one_form(box);
      const VectorField x = sampler.vector_field(box);

      idem = std::max(idem, sup_distance(vertical_average(vertical_average(f)),
                                         vertical_average(f)));
      idem = std::max(idem, sup_distance(vertical_average(vertical_average(a)),
                                         vertical_average(a)));
      idem = std::max(idem, sup_distance(vertical_average(vertical_average(x)),
                                         vertical_average(x)));

      commute = std::max(commute, sup_distance(vertical_average(d_scalar(f)),
                                               d_scalar(vertical_average(f))));

      musical = std::max(musical, sup_distance(vertical_average(omega_flat(x)),
                                               omega_flat(vertical_average(x))));

      quadrature = std::max(
          quadrature, sup_distance(vertical_average(f), vertical_average_by_quadrature(f)));
      quadrature = std::max(
          quadrature, sup_distance(vertical_average(a), vertical_average_by_quadrature(a)));
      quadrature = std::max(
          quadrature, sup_distance(vertical_average(x), vertical_average_by_quadrature(x)));
    }
  }

  suite.check("idempotence <<T>> = <T>", idem, 1e-14);
  suite.check("commutation <df> = d<f>", commute, 1e-10);
  suite.check("musical <omega(X)> = omega(<X>)", musical, 1e-12);
  suite.check("spectral vs quadrature average", quadrature, 1e-12);
  return suite.finish();
}

// ---------------------------------------------------------------------------
// Suite 2: exactness lemma

SuiteResult run_exactness_suite(std::uint64_t seed, int count, double tol_scale) {
  if (count <= 0) count = 100;
  SuiteBuilder suite("exactness", seed, tol_scale);
  RandomFieldSampler sampler(seed);

  double primitive_residual = 0.0, average_zero = 0.0, exact_periods = 0.0;
  try {
    for (int dim = 1; dim <= 2; ++dim) {
      const TorusBox box = default_suite_box(dim);
      const int reps = count / 2;
      for (int i = 0; i < reps; ++i) {
        // Closed zero-average forms, built as df projected onto zero
        // vertical average.
        OneForm alpha = d_scalar(sampler.scalar(box));
        alpha -= vertical_average(alpha);

        const ScalarField f = primitive_with_zero_average(alpha);
        primitive_residual =
            std::max(primitive_residual, sup_distance(d_scalar(f), alpha));
        average_zero = std::max(average_zero, vertical_average(f).sup_norm());

        const OneForm exact = d_scalar(sampler.scalar(box));
        for (double p : cycle_periods(exact))
          exact_periods = std::max(exact_periods, std::fabs(p));
      }
    }
    suite.check("primitive residual |df - alpha|", primitive_residual, 1e-8);
    suite.check_exact("<f> = 0 exactly", average_zero);
    suite.check("cycle periods of exact forms", exact_periods, 1e-10);
  } catch (const Error& e) {
    suite.fail("exactness machinery", e.what());
  }
  return suite.finish();
}

// ---------------------------------------------------------------------------
// Suite 3: decomposition theorem

SuiteResult run_decomposition_suite(std::uint64_t seed, int count, double tol_scale) {
  if (count <= 0) count = 100;
  SuiteBuilder suite("decomposition", seed, tol_scale);
  RandomFieldSampler sampler(seed);

  double reconstruction = 0.0, a_average = 0.0, idem = 0.0;
  double redecomp_lift = 0.0, redecomp_ham = 0.0;
  bool lift_ok = true, invariant_ok = true;
  try {
    for (int dim = 1; dim <= 2; ++dim) {
      const TorusBox box = default_suite_box(dim);
      const int reps = count / 2;
      for (int i = 0; i < reps; ++i) {
        const VectorField x = sampler.symplectic_field(box, 0.8);
        const auto split = decompose_symplectic(x);

        VectorField recon = hamiltonian_vf(split.hamiltonian);
        recon += split.lift;
        reconstruction = std::max(reconstruction, sup_distance(recon, x));
        a_average = std::max(a_average, vertical_average(split.hamiltonian).sup_norm());
        lift_ok = lift_ok && is_lift(split.lift).has_value();
        invariant_ok = invariant_ok && is_g_invariant(split.lift);

        // Degenerate re-decompositions: the lift alone and the Hamiltonian
        // part alone split into themselves.
        const auto lift_split = decompose_symplectic(split.lift);
        redecomp_lift = std::max(redecomp_lift, lift_split.hamiltonian.sup_norm());
        redecomp_lift =
            std::max(redecomp_lift, sup_distance(lift_split.lift, split.lift));

        const VectorField xa = hamiltonian_vf(split.hamiltonian);
        const auto ham_split = decompose_symplectic(xa);
        redecomp_ham =
            std::max(redecomp_ham, sup_distance(ham_split.hamiltonian, split.hamiltonian));
        redecomp_ham = std::max(redecomp_ham, ham_split.lift.sup_norm());

        // Idempotence of the split applied to the reconstruction.
        const auto again = decompose_symplectic(recon);
        idem = std::max(idem, sup_distance(again.hamiltonian, split.hamiltonian));
        idem = std::max(idem, sup_distance(again.lift, split.lift));
      }
    }
    suite.check("reconstruction |X - X_A - X2|", reconstruction, 1e-8);
    suite.check("<A> = 0", a_average, 1e-12);
    suite.check_bool("X2 is a lift", lift_ok);
    suite.check_bool("X2 is G-invariant", invariant_ok);
    suite.check("re-decomposition of X2", redecomp_lift, 1e-10);
    suite.check("re-decomposition of X_A", redecomp_ham, 1e-8);
    suite.check("idempotence of the split", idem, 1e-10);
  } catch (const Error& e) {
    suite.fail("decomposition machinery", e.what());
  }
  return suite.finish();
}

// ---------------------------------------------------------------------------
// Suite 4: fiber connection (d = 2)

SuiteResult run_weinstein_suite(std::uint64_t seed, int count, double tol_scale) {
  if (count <= 0) count = 20;
  SuiteBuilder suite("weinstein", seed, tol_scale);
  RandomFieldSampler sampler(seed);
  const TorusBox box = default_suite_box(2);

  double torsion = 0.0, curvature = 0.0, parallel_frame = 0.0;
  try {
    for (int i = 0; i < count; ++i) {
      const VectorField x = sampler.vertical_field(box, 2, true, 0.7);
      const VectorField y = sampler.vertical_field(box, 2, true, 0.7);
      const VectorField z = sampler.vertical_field(box, 2, true, 0.7);

      VectorField t = weinstein_nabla(x, y);
      t -= weinstein_nabla(y, x);
      t -= lie_bracket(x, y);
      torsion = std::max(torsion, t.sup_norm());

      VectorField r = weinstein_nabla(x, weinstein_nabla(y, z));
      r -= weinstein_nabla(y, weinstein_nabla(x, z));
      r -= weinstein_nabla(lie_bracket(x, y), z);
      curvature = std::max(curvature, r.sup_norm());
    }

    // The coordinate frame fields are parallel.
    for (int i = 0; i < 2; ++i) {
      VectorField frame_i = VectorField::zeros(box);
      frame_i.set_angle_comp(i, ScalarField::constant(box, 1.0));
      for (int j = 0; j < 2; ++j) {
        VectorField frame_j = VectorField::zeros(box);
        frame_j.set_angle_comp(j, ScalarField::constant(box, 1.0));
        parallel_frame =
            std::max(parallel_frame, weinstein_nabla(frame_i, frame_j).sup_norm());
      }
    }

    suite.check("torsion defect", torsion, 1e-8);
    suite.check("curvature defect", curvature, 1e-8);
    suite.check("parallel frame nabla = 0", parallel_frame, 1e-12);
  } catch (const Error& e) {
    suite.fail("connection machinery", e.what());
  }
  return suite.finish();
}

// ---------------------------------------------------------------------------
// Suite 5: period bundle

SuiteResult run_periods_suite(std::uint64_t seed, int count, double tol_scale) {
  if (count <= 0) count = 25;
  SuiteBuilder suite("periods", seed, tol_scale);
  RandomFieldSampler sampler(seed);

  double periodicity = 0.0;
  bool winding_ok = true;
  double min_det = std::numeric_limits<double>::infinity();
  try {
    for (int dim = 1; dim <= 2; ++dim) {
      const TorusBox box = default_suite_box(dim);

      std::vector<SymplecticPotential> potentials;
      potentials.push_back(SymplecticPotential::canonical(box));
      std::vector<double> shifts(dim);
      for (int j = 0; j < dim; ++j) shifts[j] = sampler.uniform(-0.5, 0.5);
      potentials.push_back(
          SymplecticPotential::shifted(box, sampler.scalar(box, 2, 0.4), shifts));

      // Base points: a uniform interior lattice with `count` points in
      // total per dimension pairing.
      const int per_axis = (dim == 1) ? count : std::max(2, static_cast<int>(std::sqrt(count)));
      std::vector<PhasePoint> samples;
      int total = 1;
      for (int j = 0; j < dim; ++j) total *= per_axis;
      for (int b = 0; b < total; ++b) {
        PhasePoint p;
        p.theta.assign(dim, 0.0);
        p.action.resize(dim);
        int rem = b;
        for (int j = 0; j < dim; ++j) {
          const double frac = (rem % per_axis + 1.0) / (per_axis + 1.0);
          rem /= per_axis;
          p.action[j] = box.action_lo()[j] + frac * (box.action_hi()[j] - box.action_lo()[j]);
          p.theta[j] = sampler.uniform(0.0, 1.0);
        }
        samples.push_back(std::move(p));
      }

      for (const auto& lambda : potentials) {
        std::vector<VectorField> sections;
        for (int j = 0; j < dim; ++j) {
          const CycleFamily gamma = CycleFamily::coordinate(box, j);
          const ScalarField xi = action_function(lambda, gamma);
          sections.push_back(lattice_section(xi));
          periodicity = std::max(periodicity, verify_one_periodic(sections.back(), samples));

          const auto winding = winding_numbers(sections.back(), samples.front());
          for (int a = 0; a < dim; ++a)
            winding_ok = winding_ok && (winding[a] == (a == j ? 1 : 0));
        }

        // Linear independence of the sections over the base grid: the
        // angle components are angle-independent, so read the k = 0 mode.
        for (int g = 0; g < box.n_grid(); ++g) {
          Eigen::MatrixXd m(dim, dim);
          for (int j = 0; j < dim; ++j)
            for (int a = 0; a < dim; ++a)
              m(a, j) = sections[j].angle_comp(a).mode(box.zero_mode())[g].real();
          min_det = std::min(min_det, std::fabs(m.determinant()));
        }
      }
    }
    suite.check("1-periodicity defect", periodicity, 1e-8);
    suite.check_bool("winding matrix = identity", winding_ok);
    suite.check_bool("independence det >= 0.5", min_det >= 0.5);
  } catch (const Error& e) {
    suite.fail("period bundle machinery", e.what());
  }
  return suite.finish();
}

// ---------------------------------------------------------------------------
// Suite 6: flows

SuiteResult run_flow_suite(std::uint64_t seed, int count, double tol_scale) {
  if (count <= 0) count = 50;
  SuiteBuilder suite("flows", seed, tol_scale);
  RandomFieldSampler sampler(seed);

  double sympl_defect = 0.0, jac_agreement = 0.0, compose_defect = 0.0;
  try {
    // Symplectic Jacobians and variational vs finite-difference Jacobians.
    for (int dim = 1; dim <= 2; ++dim) {
      const TorusBox box = default_suite_box(dim);
      ScalarField h = sampler.scalar(box, 2, 0.1, true);
      h += sampler.action_polynomial(box, 0.3);
      const TimeDepVectorField family =
          TimeDepVectorField::constant(hamiltonian_vf(h), 0.5, true);
      const FlowMap phi = integrate_flow(family, 0.4);

      const auto points = sampler.phase_points(box, dim == 1 ? 8 : 5);
      for (const auto& p : points) {
        const auto [image, jac] = phi.map_with_jacobian(p);
        sympl_defect = std::max(sympl_defect, symplectic_defect(jac));

        // Central finite differences of the map as the independent route.
        const double delta = 1e-3;
        Eigen::MatrixXd fd(2 * dim, 2 * dim);
        for (int c = 0; c < 2 * dim; ++c) {
          PhasePoint lo = p, hi = p;
          if (c < dim) {
            lo.theta[c] -= delta;
            hi.theta[c] += delta;
          } else {
            lo.action[c - dim] -= delta;
            hi.action[c - dim] += delta;
          }
          const PhasePoint ilo = phi.map_unwrapped(lo);
          const PhasePoint ihi = phi.map_unwrapped(hi);
          for (int r = 0; r < 2 * dim; ++r) {
            const double vlo = r < dim ? ilo.theta[r] : ilo.action[r - dim];
            const double vhi = r < dim ? ihi.theta[r] : ihi.action[r - dim];
            fd(r, c) = (vhi - vlo) / (2.0 * delta);
          }
        }
        jac_agreement = std::max(jac_agreement, (fd - jac).cwiseAbs().maxCoeff());
      }
    }

    // Flow consistency of the composition generator (d = 1).
    {
      const TorusBox box = default_suite_box(1);
      VectorField lift = VectorField::zeros(box);
      lift.set_angle_comp(0, ScalarField::constant(box, sampler.uniform(0.3, 0.9)));
      lift.set_action_comp(0, ScalarField::constant(box, sampler.uniform(-0.3, 0.3)));
      const TimeDepVectorField x1 = TimeDepVectorField::constant(lift, 0.5, true);

      ScalarField g = sampler.scalar(box, 2, 0.15, true);
      const TimeDepVectorField x2 =
          TimeDepVectorField::constant(hamiltonian_vf(g), 0.5, true);

      const TimeDepVectorField composed = compose_generator(x1, x2);
      const auto points = sampler.phase_points(box, count, 0.4);
      for (double eps : {0.3, 0.5}) {
        const FlowMap phi3 = integrate_flow(composed, eps, composed.space());
        const FlowMap phi1 = integrate_flow(x1, eps);
        const FlowMap phi2 = integrate_flow(x2, eps);
        for (const auto& p : points) {
          const PhasePoint lhs = phi3.map(p);
          const PhasePoint rhs = phi1.map(phi2.map(p));
          compose_defect = std::max(compose_defect, phase_distance(lhs, rhs));
        }
      }
    }

    suite.check("symplectic Jacobian defect", sympl_defect, 1e-7);
    suite.check("variational vs finite-difference Jacobian", jac_agreement, 1e-5);
    suite.check("composition flow consistency", compose_defect, 1e-6);
  } catch (const Error& e) {
    suite.fail("flow machinery", e.what());
  }
  return suite.finish();
}

// ---------------------------------------------------------------------------
// Suite 7: flow decomposition and normal form (closed-form scenario)

SuiteResult run_normal_form_suite(std::uint64_t seed, int count, double tol_scale) {
  (void)count;
  SuiteBuilder suite("normal-form", seed, tol_scale);
  RandomFieldSampler sampler(seed);

  const double c = 1.0, a = 0.1;
  const TorusBox box = default_suite_box(1);
  try {
    const ScalarField h = ScalarField::from_point_function(
        box, [&](std::span<const double> theta, std::span<const double> action) {
          return c * action[0] + a * std::sin(kTwoPi * theta[0]);
        });
    const TimeDepVectorField generator =
        TimeDepVectorField::constant(hamiltonian_vf(h), 0.5, true);
    const ScalarFamily base = ScalarFamily::constant(
        ScalarField::from_action_function(box,
                                          [](std::span<const double> action) {
                                            return action[0];
                                          }),
        0.5);
    const DeformationScenario scenario = DeformationScenario::make(base, generator);
    const FlowDecomposition dec = decompose_flow(generator, scenario.safe_box());

    const auto samples = sampler.phase_points(box, 40, 0.45);
    double g_defect = 0.0, recomposition = 0.0, residual = 0.0, angle_indep = 0.0;
    for (double eps : {0.1, 0.25, 0.5}) {
      const ScalarField g = dec.g.at(eps);
      const ScalarField oracle = ScalarField::from_point_function(
          g.space(), [&](std::span<const double> theta, std::span<const double>) {
            return a * std::sin(kTwoPi * (theta[0] + c * eps));
          });
      g_defect = std::max(g_defect, sup_distance(g, oracle));

      recomposition =
          std::max(recomposition, recomposition_residual(generator, dec, eps, samples));

      const NormalFormResult nf = normal_form(scenario, eps);
      residual = std::max(residual,
                          normal_form_residual(scenario, eps, nf, samples));
      angle_indep =
          std::max(angle_indep, sup_distance(nf.i_nf, vertical_average(nf.i_nf)));
    }

    suite.check("G(eps) vs closed form", g_defect, 1e-6);
    suite.check("recomposition phi_X = Phi o phi_Z", recomposition, 1e-6);
    suite.check("normal-form residual", residual, 1e-5);
    suite.check("I_nf angle-independence", angle_indep, 1e-7);
  } catch (const Error& e) {
    suite.fail("normal-form machinery", e.what());
  }
  return suite.finish();
}

// ---------------------------------------------------------------------------
// Suite 8 (parser half): expression fuzzing

SuiteResult run_parser_fuzz_suite(std::uint64_t seed, int count, double tol_scale) {
  if (count <= 0) count = 1000;
  SuiteBuilder suite("parser-fuzz", seed, tol_scale);
  RandomFieldSampler sampler(seed);

  static constexpr char alphabet[] =
      "0123456789.+-*/^()  thIepsincoxqz_eE";
  int parsed = 0, rejected = 0;
  bool clean = true;
  std::string why;
  for (int i = 0; i < count; ++i) {
    const int len = static_cast<int>(sampler.uniform(1.0, 40.0));
    std::string text;
    for (int j = 0; j < len; ++j) {
      const int pick =
          static_cast<int>(sampler.uniform(0.0, static_cast<double>(sizeof(alphabet) - 2)));
      text.push_back(alphabet[pick]);
    }
    const int dim = 1 + static_cast<int>(sampler.uniform(0.0, 2.0));
    try {
      const auto expr = parse_expression(text, std::min(dim, 2));
      ++parsed;
      const double theta[2] = {0.3, 0.7};
      const double action[2] = {0.1, -0.2};
      (void)expr->eval(Expression::Env{{theta, 2}, {action, 2}, 0.25});
    } catch (const ParseError&) {
      ++rejected;  // structured rejection is the expected path
    } catch (const std::exception& e) {
      clean = false;
      why = e.what();
    }
  }
  if (!clean) {
    suite.fail("fuzz inputs produce only structured errors", why);
  } else {
    suite.check_bool("fuzz inputs produce only structured errors", true);
    suite.check_bool("all inputs handled (" + std::to_string(parsed) + " parsed, " +
                         std::to_string(rejected) + " rejected)",
                     parsed + rejected == count);
  }
  return suite.finish();
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "averaging", "exactness",  "decomposition", "weinstein",
      "periods",   "flows",      "normal-form",   "parser-fuzz"};
  return names;
}

SuiteResult run_suite_by_name(const std::string& name, std::uint64_t seed, int count,
                              double tol_scale) {
  if (name == "averaging") return run_averaging_suite(seed, count, tol_scale);
  if (name == "exactness") return run_exactness_suite(seed, count, tol_scale);
  if (name == "decomposition") return run_decomposition_suite(seed, count, tol_scale);
  if (name == "weinstein") return run_weinstein_suite(seed, count, tol_scale);
  if (name == "periods") return run_periods_suite(seed, count, tol_scale);
  if (name == "flows") return run_flow_suite(seed, count, tol_scale);
  if (name == "normal-form") return run_normal_form_suite(seed, count, tol_scale);
  if (name == "parser-fuzz") return run_parser_fuzz_suite(seed, count, tol_scale);
  throw PreconditionError("unknown suite '" + name + "'");
}

}  // namespace toravg

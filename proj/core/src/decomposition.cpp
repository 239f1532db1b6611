#include "toravg/decomposition.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "detail/grid_numerics.hpp"
#include "toravg/averaging.hpp"
#include "toravg/errors.hpp"

namespace toravg {

using detail::two_pi;

double coordinate_cycle_integral(const OneForm& alpha, int axis,
                                 std::span<const double> base_action,
                                 std::span<const double> angle_offsets,
                                 int nodes) {
  const TorusBox& box = alpha.space();
  const int d = box.dim();
  if (nodes <= 0) nodes = 4 * box.truncation() + 2;
  std::vector<double> theta(angle_offsets.begin(), angle_offsets.end());

  // Along the cycle only dtheta_axis is swept, with unit speed.
  double acc = 0.0;
  for (int q = 0; q < nodes; ++q) {
    theta[axis] = angle_offsets[axis] + static_cast<double>(q) / nodes;
    acc += alpha.theta_comp(axis).evaluate(theta, base_action);
  }
  (void)d;
  return acc / nodes;
}

std::vector<double> cycle_periods(const OneForm& alpha,
                                  std::optional<std::vector<double>> base_action,
                                  double consistency_tol) {
  const TorusBox& box = alpha.space();
  const int d = box.dim();

  const double defect = closedness_defect(alpha);
  if (defect >= kClosednessGate) {
    std::ostringstream os;
    os << "cycle_periods: form is not closed (defect " << defect << " >= "
       << kClosednessGate << ")";
    throw PreconditionError(os.str());
  }

  std::vector<double> reference(d);
  if (base_action) {
    reference = *base_action;
  } else {
    for (int j = 0; j < d; ++j)
      reference[j] = 0.5 * (box.action_lo()[j] + box.action_hi()[j]);
  }

  std::vector<double> zero_offsets(d, 0.0);
  std::vector<double> periods(d);
  for (int j = 0; j < d; ++j)
    periods[j] = coordinate_cycle_integral(alpha, j, reference, zero_offsets);

  // Closedness makes the periods independent of the base point and of the
  // angle offsets; verify on a small sample.
  static constexpr double fractions[] = {0.25, 0.5, 0.75};
  static constexpr double offsets[] = {0.0, 0.37};
  std::vector<double> base(d), off(d);
  const int n_base = static_cast<int>(std::pow(3.0, d));
  for (int b = 0; b < n_base; ++b) {
    int rem = b;
    for (int j = 0; j < d; ++j) {
      base[j] = box.action_lo()[j] +
                fractions[rem % 3] * (box.action_hi()[j] - box.action_lo()[j]);
      rem /= 3;
    }
    for (double o : offsets) {
      std::fill(off.begin(), off.end(), o);
      for (int j = 0; j < d; ++j) {
        const double p = coordinate_cycle_integral(alpha, j, base, off);
        if (std::fabs(p - periods[j]) > consistency_tol) {
          std::ostringstream os;
          os << "cycle_periods: period " << j << " varies over base points ("
             << p << " vs " << periods[j] << "); the form is not closed enough";
          throw InconsistencyError(os.str());
        }
      }
    }
  }
  return periods;
}

ScalarField primitive_with_zero_average(const OneForm& alpha, double gate,
                                        double check_tol) {
  const TorusBox& box = alpha.space();
  const int d = box.dim();
  const int n = box.n_grid();

  const double defect = closedness_defect(alpha);
  if (defect >= gate) {
    std::ostringstream os;
    os << "primitive_with_zero_average: closedness hypothesis fails (defect "
       << defect << " >= " << gate << ")";
    throw PreconditionError(os.str());
  }
  const double avg = vertical_average(alpha).sup_norm();
  if (avg >= gate) {
    std::ostringstream os;
    os << "primitive_with_zero_average: zero-vertical-average hypothesis fails "
          "(|<alpha>| = " << avg << " >= " << gate << ")";
    throw PreconditionError(os.str());
  }

  std::vector<ScalarField::Complex> coef(
      static_cast<std::size_t>(box.n_modes()) * n, {0.0, 0.0});
  std::vector<int> k(d);
  for (int m = 0; m < box.n_modes(); ++m) {
    box.mode_multi(m, k);
    int j_best = -1;
    for (int j = 0; j < d; ++j)
      if (k[j] != 0 && (j_best < 0 || std::abs(k[j]) > std::abs(k[j_best]))) j_best = j;
    if (j_best < 0) continue;  // k = 0 stays zero: <f> = 0 by construction

    const std::complex<double> divisor{0.0, two_pi * k[j_best]};
    const auto row = alpha.theta_comp(j_best).mode(m);
    ScalarField::Complex* ro = coef.data() + static_cast<std::size_t>(m) * n;
    for (int g = 0; g < n; ++g) ro[g] = row[g] / divisor;

    // Cross-mode consistency: every other admissible axis must give the
    // same coefficient.
    for (int j = 0; j < d; ++j) {
      if (j == j_best || k[j] == 0) continue;
      const std::complex<double> dj{0.0, two_pi * k[j]};
      const auto rj = alpha.theta_comp(j).mode(m);
      double diff = 0.0;
      for (int g = 0; g < n; ++g) diff = std::max(diff, std::abs(rj[g] / dj - ro[g]));
      if (diff > check_tol) {
        std::ostringstream os;
        os << "primitive_with_zero_average: mode coefficients disagree between "
              "axes (" << diff << " > " << check_tol << "); form not closed";
        throw InconsistencyError(os.str());
      }
    }
  }

  ScalarField f = ScalarField::from_raw(box, std::move(coef));

  // Residual covers the dI components of df as well.
  const double residual = sup_distance(d_scalar(f), alpha);
  if (residual > check_tol) {
    std::ostringstream os;
    os << "primitive_with_zero_average: |df - alpha| = " << residual << " > "
       << check_tol;
    throw InconsistencyError(os.str());
  }
  return f;
}

SymplecticSplit decompose_symplectic(const VectorField& x, double gate,
                                     double check_tol) {
  const OneForm alpha = omega_flat(x);
  const double defect = closedness_defect(alpha);
  if (defect >= gate) {
    std::ostringstream os;
    os << "decompose_symplectic: field is not symplectic (closedness defect "
       << defect << " >= " << gate << ")";
    throw PreconditionError(os.str());
  }

  VectorField lift = vertical_average(x);
  OneForm alpha1 = alpha;
  alpha1 -= vertical_average(alpha);
  ScalarField a = primitive_with_zero_average(alpha1, gate, check_tol);
  a *= -1.0;

  // Reconstruction and structure guarantees.
  VectorField recon = hamiltonian_vf(a);
  recon += lift;
  const double residual = sup_distance(recon, x);
  if (residual > check_tol) {
    std::ostringstream os;
    os << "decompose_symplectic: reconstruction residual " << residual << " > "
       << check_tol;
    throw InconsistencyError(os.str());
  }
  if (!is_lift(lift, check_tol))
    throw InconsistencyError("decompose_symplectic: averaged part is not a lift");

  return SymplecticSplit{std::move(a), std::move(lift)};
}

}  // namespace toravg

#include "toravg/random_fields.hpp"

#include <cmath>

#include "toravg/field_calculus.hpp"

namespace toravg {

double RandomFieldSampler::uniform(double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(rng_);
}

namespace {

// A cubic polynomial per axis in the normalized action coordinate.
struct AxisPoly {
  std::array<double, 4> c;
  double operator()(double u) const { return c[0] + u * (c[1] + u * (c[2] + u * c[3])); }
};

}  // namespace

ScalarField RandomFieldSampler::scalar(const TorusBox& box, int max_mode,
                                       double amplitude, bool zero_average) {
  const int d = box.dim();
  const int n = box.n_grid();
  max_mode = std::min(max_mode, box.truncation());

  ScalarField f = ScalarField::zeros(box);
  std::vector<int> k(d), g(d);
  std::vector<ScalarField::Complex> values(n);

  const int per_axis = 2 * max_mode + 1;
  int total = 1;
  for (int j = 0; j < d; ++j) total *= per_axis;

  for (int flat = 0; flat < total; ++flat) {
    int rem = flat;
    for (int j = d - 1; j >= 0; --j) {
      k[j] = rem % per_axis - max_mode;
      rem /= per_axis;
    }
    // One representative per conjugate pair.
    int first_nonzero = 0;
    for (int j = 0; j < d; ++j) {
      if (k[j] != 0) {
        first_nonzero = k[j];
        break;
      }
    }
    if (first_nonzero < 0) continue;
    const bool is_zero_mode = (first_nonzero == 0);
    if (is_zero_mode && zero_average) continue;

    int l1 = 0;
    for (int j = 0; j < d; ++j) l1 += std::abs(k[j]);
    const double decay = amplitude * std::exp(-0.7 * l1);
    ScalarField::Complex coeff{uniform(-decay, decay), uniform(-decay, decay)};
    if (is_zero_mode) coeff = ScalarField::Complex{coeff.real(), 0.0};

    std::vector<AxisPoly> poly(d);
    for (int j = 0; j < d; ++j)
      poly[j] = AxisPoly{{uniform(-1.0, 1.0), uniform(-1.0, 1.0), uniform(-0.5, 0.5),
                          uniform(-0.25, 0.25)}};

    for (int gg = 0; gg < n; ++gg) {
      box.grid_multi(gg, g);
      double profile = 1.0;
      for (int j = 0; j < d; ++j) {
        const double mid = 0.5 * (box.action_lo()[j] + box.action_hi()[j]);
        const double half = 0.5 * (box.action_hi()[j] - box.action_lo()[j]);
        profile *= poly[j]((box.grid_coord(j, g[j]) - mid) / half);
      }
      values[gg] = coeff * profile;
    }
    f.set_mode(k, values);
  }
  return f;
}

ScalarField RandomFieldSampler::action_polynomial(const TorusBox& box, double amplitude) {
  const int d = box.dim();
  std::vector<AxisPoly> poly(d);
  for (int j = 0; j < d; ++j)
    poly[j] = AxisPoly{{uniform(-amplitude, amplitude), uniform(-amplitude, amplitude),
                        uniform(-0.5 * amplitude, 0.5 * amplitude),
                        uniform(-0.25 * amplitude, 0.25 * amplitude)}};
  return ScalarField::from_action_function(box, [&, poly](std::span<const double> action) {
    double profile = 1.0;
    for (int j = 0; j < d; ++j) {
      const double mid = 0.5 * (box.action_lo()[j] + box.action_hi()[j]);
      const double half = 0.5 * (box.action_hi()[j] - box.action_lo()[j]);
      profile *= poly[j]((action[j] - mid) / half);
    }
    return profile;
  });
}

OneForm RandomFieldSampler::one_form(const TorusBox& box, int max_mode, double amplitude) {
  std::vector<ScalarField> th, ac;
  for (int j = 0; j < box.dim(); ++j) th.push_back(scalar(box, max_mode, amplitude));
  for (int j = 0; j < box.dim(); ++j) ac.push_back(scalar(box, max_mode, amplitude));
  return OneForm(std::move(th), std::move(ac));
}

VectorField RandomFieldSampler::vector_field(const TorusBox& box, int max_mode,
                                             double amplitude) {
  std::vector<ScalarField> an, ac;
  for (int j = 0; j < box.dim(); ++j) an.push_back(scalar(box, max_mode, amplitude));
  for (int j = 0; j < box.dim(); ++j) ac.push_back(scalar(box, max_mode, amplitude));
  return VectorField(std::move(an), std::move(ac));
}

VectorField RandomFieldSampler::vertical_field(const TorusBox& box, int max_mode,
                                               bool theta_only, double amplitude) {
  VectorField x = VectorField::zeros(box);
  for (int j = 0; j < box.dim(); ++j) {
    ScalarField comp = scalar(box, max_mode, amplitude);
    if (theta_only) {
      // Flatten the action profile: evaluate every mode at the grid mean.
      const TorusBox& space = comp.space();
      ScalarField flat = ScalarField::zeros(space);
      std::vector<int> k(space.dim());
      std::vector<ScalarField::Complex> values(space.n_grid());
      for (int m : comp.active_modes()) {
        const auto row = comp.mode(m);
        ScalarField::Complex mean{0.0, 0.0};
        for (int g = 0; g < space.n_grid(); ++g) mean += row[g];
        mean /= static_cast<double>(space.n_grid());
        std::fill(values.begin(), values.end(), mean);
        space.mode_multi(m, k);
        flat.set_mode(k, values);
      }
      comp = std::move(flat);
    }
    x.set_angle_comp(j, std::move(comp));
  }
  return x;
}

VectorField RandomFieldSampler::symplectic_field(const TorusBox& box, double amplitude) {
  ScalarField h = scalar(box, 3, amplitude, /*zero_average=*/true);
  h += action_polynomial(box, amplitude);
  VectorField x = hamiltonian_vf(h);
  for (int j = 0; j < box.dim(); ++j) {
    ScalarField harmonic =
        ScalarField::constant(box, uniform(-amplitude, amplitude));
    harmonic += x.action_comp(j);
    x.set_action_comp(j, std::move(harmonic));
  }
  return x;
}

std::vector<PhasePoint> RandomFieldSampler::phase_points(const TorusBox& box, int count,
                                                         double interior_fraction) {
  std::vector<PhasePoint> points;
  points.reserve(count);
  for (int i = 0; i < count; ++i) {
    PhasePoint p;
    p.theta.resize(box.dim());
    p.action.resize(box.dim());
    for (int j = 0; j < box.dim(); ++j) {
      p.theta[j] = uniform(0.0, 1.0);
      const double mid = 0.5 * (box.action_lo()[j] + box.action_hi()[j]);
      const double half = 0.5 * (box.action_hi()[j] - box.action_lo()[j]);
      p.action[j] = mid + uniform(-interior_fraction, interior_fraction) * half;
    }
    points.push_back(std::move(p));
  }
  return points;
}

}  // namespace toravg

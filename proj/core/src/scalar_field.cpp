#include "toravg/scalar_field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "detail/grid_numerics.hpp"
#include "toravg/errors.hpp"

namespace toravg {

using detail::AngleTransform;
using detail::CubicStencil;
using detail::cubic_stencil;
using detail::two_pi;

namespace {

[[noreturn]] void throw_outside(std::span<const double> theta,
                                std::span<const double> action) {
  std::ostringstream os;
  os << "evaluation point outside the action box: I = (";
  for (std::size_t j = 0; j < action.size(); ++j)
    os << (j ? ", " : "") << action[j];
  os << ")";
  throw DomainEscapeError(os.str(), {theta.begin(), theta.end()},
                          {action.begin(), action.end()});
}

// Interpolation cells (flat grid offset, tensor weight) for an off-grid
// action point.
void build_cells(const TorusBox& box, std::span<const double> action,
                 std::vector<std::pair<int, double>>& cells) {
  const int d = box.dim();
  const int n = box.grid_points_per_axis();
  std::vector<CubicStencil> st(d);
  std::vector<int> gstride(d, 1);
  for (int j = d - 2; j >= 0; --j) gstride[j] = gstride[j + 1] * n;
  for (int j = 0; j < d; ++j)
    st[j] = cubic_stencil(action[j], box.action_lo()[j], box.grid_step(j), n);

  cells.clear();
  cells.emplace_back(0, 1.0);
  for (int j = 0; j < d; ++j) {
    std::vector<std::pair<int, double>> next;
    next.reserve(cells.size() * 4);
    for (const auto& [off, w] : cells)
      for (int q = 0; q < 4; ++q)
        next.emplace_back(off + (st[j].base + q) * gstride[j], w * st[j].w[q]);
    cells.swap(next);
  }
}

}  // namespace

ScalarField ScalarField::zeros(const TorusBox& space) {
  return ScalarField(space, std::vector<Complex>(
                                static_cast<std::size_t>(space.n_modes()) * space.n_grid()));
}

ScalarField ScalarField::constant(const TorusBox& space, double value) {
  ScalarField f = zeros(space);
  const int g0 = space.zero_mode() * space.n_grid();
  for (int g = 0; g < space.n_grid(); ++g) f.coef_[g0 + g] = value;
  if (value != 0.0) f.active_.push_back(space.zero_mode());
  return f;
}

ScalarField ScalarField::from_raw(const TorusBox& space, std::vector<Complex> coef) {
  if (coef.size() != static_cast<std::size_t>(space.n_modes()) * space.n_grid())
    throw PreconditionError("ScalarField::from_raw: wrong storage size");
  ScalarField f(space, std::move(coef));
  f.symmetrize();
  f.rebuild_active();
  return f;
}

ScalarField ScalarField::from_raw_symmetric(const TorusBox& space,
                                            std::vector<Complex> coef,
                                            std::span<const int> candidates) {
  if (coef.size() != static_cast<std::size_t>(space.n_modes()) * space.n_grid())
    throw PreconditionError("ScalarField::from_raw_symmetric: wrong storage size");
  ScalarField f(space, std::move(coef));
  f.rebuild_active(candidates);
  return f;
}

ScalarField ScalarField::from_point_function(
    const TorusBox& space,
    const std::function<double(std::span<const double>, std::span<const double>)>& fn) {
  const AngleTransform tr(space, space.modes_per_axis());
  const int n_grid = space.n_grid();
  const int n_angle = tr.n_angle();

  std::vector<Complex> coef(static_cast<std::size_t>(space.n_modes()) * n_grid);
  std::vector<double> values(n_angle);
  std::vector<std::complex<double>> modes(space.n_modes());
  std::vector<double> action(space.dim()), theta(space.dim());

  for (int g = 0; g < n_grid; ++g) {
    space.grid_point(g, action);
    for (int a = 0; a < n_angle; ++a) {
      tr.angle_point(a, theta);
      values[a] = fn(theta, action);
    }
    tr.values_to_modes(values, modes);
    for (int m = 0; m < space.n_modes(); ++m)
      coef[static_cast<std::size_t>(m) * n_grid + g] = modes[m];
  }
  return from_raw(space, std::move(coef));
}

ScalarField ScalarField::from_action_function(
    const TorusBox& space,
    const std::function<double(std::span<const double>)>& fn) {
  ScalarField f = zeros(space);
  std::vector<double> action(space.dim());
  const int g0 = space.zero_mode() * space.n_grid();
  for (int g = 0; g < space.n_grid(); ++g) {
    space.grid_point(g, action);
    f.coef_[g0 + g] = fn(action);
  }
  f.rebuild_active();
  return f;
}

std::span<const ScalarField::Complex> ScalarField::mode(int mode_flat) const {
  return {coef_.data() + static_cast<std::size_t>(mode_flat) * space_.n_grid(),
          static_cast<std::size_t>(space_.n_grid())};
}

ScalarField& ScalarField::set_mode(std::span<const int> k,
                                   std::span<const Complex> values) {
  if (!space_.mode_in_band(k))
    throw PreconditionError("ScalarField::set_mode: mode outside the truncation band");
  if (values.size() != static_cast<std::size_t>(space_.n_grid()))
    throw PreconditionError("ScalarField::set_mode: wrong grid length");
  const int m = space_.mode_flat(k);
  const int mc = space_.conjugate_mode(m);
  const int n = space_.n_grid();
  if (m == mc) {
    for (int g = 0; g < n; ++g)
      coef_[static_cast<std::size_t>(m) * n + g] = values[g].real();
  } else {
    for (int g = 0; g < n; ++g) {
      coef_[static_cast<std::size_t>(m) * n + g] = values[g];
      coef_[static_cast<std::size_t>(mc) * n + g] = std::conj(values[g]);
    }
  }
  rebuild_active();
  return *this;
}

ScalarField& ScalarField::set_mode_constant(std::span<const int> k, Complex value) {
  std::vector<Complex> values(space_.n_grid(), value);
  return set_mode(k, values);
}

double ScalarField::evaluate(std::span<const double> theta,
                             std::span<const double> action) const {
  if (!space_.inside(action, /*strict=*/true)) throw_outside(theta, action);
  const int d = space_.dim();
  const int K = space_.truncation();
  const int n_grid = space_.n_grid();

  std::vector<std::pair<int, double>> cells;
  build_cells(space_, action, cells);

  // Per-axis twiddles exp(i 2 pi k theta_j), k = -K..K.
  const int kpa = space_.modes_per_axis();
  std::vector<Complex> tw(static_cast<std::size_t>(d) * kpa);
  for (int j = 0; j < d; ++j) {
    for (int k = -K; k <= K; ++k) {
      const double phase = two_pi * k * theta[j];
      tw[static_cast<std::size_t>(j) * kpa + (k + K)] = {std::cos(phase), std::sin(phase)};
    }
  }

  std::vector<int> km(d);
  Complex sum{0.0, 0.0};
  for (int m : active_) {
    const Complex* row = coef_.data() + static_cast<std::size_t>(m) * n_grid;
    Complex c{0.0, 0.0};
    for (const auto& [off, w] : cells) c += w * row[off];
    space_.mode_multi(m, km);
    Complex phase{1.0, 0.0};
    for (int j = 0; j < d; ++j)
      phase *= tw[static_cast<std::size_t>(j) * kpa + (km[j] + K)];
    sum += c * phase;
  }
  return sum.real();
}

double ScalarField::evaluate_at_grid_action(std::span<const double> theta,
                                            int grid_flat) const {
  const int d = space_.dim();
  const int K = space_.truncation();
  const int kpa = space_.modes_per_axis();
  const int n_grid = space_.n_grid();

  std::vector<Complex> tw(static_cast<std::size_t>(d) * kpa);
  for (int j = 0; j < d; ++j) {
    for (int k = -K; k <= K; ++k) {
      const double phase = two_pi * k * theta[j];
      tw[static_cast<std::size_t>(j) * kpa + (k + K)] = {std::cos(phase), std::sin(phase)};
    }
  }

  std::vector<int> km(d);
  Complex sum{0.0, 0.0};
  for (int m : active_) {
    const Complex c = coef_[static_cast<std::size_t>(m) * n_grid + grid_flat];
    space_.mode_multi(m, km);
    Complex phase{1.0, 0.0};
    for (int j = 0; j < d; ++j)
      phase *= tw[static_cast<std::size_t>(j) * kpa + (km[j] + K)];
    sum += c * phase;
  }
  return sum.real();
}

std::vector<double> ScalarField::sample_angle_grid(int per_axis) const {
  const AngleTransform tr(space_, per_axis);
  const int n_grid = space_.n_grid();
  const int n_angle = tr.n_angle();
  std::vector<double> out(static_cast<std::size_t>(n_grid) * n_angle);
  std::vector<Complex> modes(space_.n_modes());
  for (int g = 0; g < n_grid; ++g) {
    for (int m = 0; m < space_.n_modes(); ++m)
      modes[m] = coef_[static_cast<std::size_t>(m) * n_grid + g];
    tr.modes_to_values(modes, {out.data() + static_cast<std::size_t>(g) * n_angle,
                               static_cast<std::size_t>(n_angle)});
  }
  return out;
}

double ScalarField::sup_norm() const {
  if (active_.empty()) return 0.0;
  // Angle-independent fields need no angle sampling.
  if (active_.size() == 1 && active_[0] == space_.zero_mode()) {
    double m = 0.0;
    for (int g = 0; g < space_.n_grid(); ++g)
      m = std::max(m, std::abs(coef_[static_cast<std::size_t>(active_[0]) * space_.n_grid() + g]));
    return m;
  }
  const int per_axis = 4 * space_.truncation() + 1;
  const auto values = sample_angle_grid(std::max(per_axis, space_.modes_per_axis()));
  double m = 0.0;
  for (double v : values) m = std::max(m, std::fabs(v));
  return m;
}

double ScalarField::conjugate_defect() const {
  const int n = space_.n_grid();
  double defect = 0.0;
  for (int m = 0; m < space_.n_modes(); ++m) {
    const int mc = space_.conjugate_mode(m);
    for (int g = 0; g < n; ++g) {
      const Complex diff = coef_[static_cast<std::size_t>(m) * n + g] -
                           std::conj(coef_[static_cast<std::size_t>(mc) * n + g]);
      defect = std::max(defect, std::abs(diff));
    }
  }
  return defect;
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  if (space_ != other.space_)
    throw PreconditionError("ScalarField: operands live on different TorusBoxes");
  for (std::size_t i = 0; i < coef_.size(); ++i) coef_[i] += other.coef_[i];
  rebuild_active();
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  if (space_ != other.space_)
    throw PreconditionError("ScalarField: operands live on different TorusBoxes");
  for (std::size_t i = 0; i < coef_.size(); ++i) coef_[i] -= other.coef_[i];
  rebuild_active();
  return *this;
}

ScalarField& ScalarField::operator*=(double scale) {
  for (auto& c : coef_) c *= scale;
  rebuild_active();
  return *this;
}

ScalarField ScalarField::operator-() const {
  ScalarField f = *this;
  f *= -1.0;
  return f;
}

void ScalarField::rebuild_active(std::span<const int> candidates) {
  active_.clear();
  const int n = space_.n_grid();
  auto scan = [&](int m) {
    const Complex* row = coef_.data() + static_cast<std::size_t>(m) * n;
    for (int g = 0; g < n; ++g) {
      if (row[g].real() != 0.0 || row[g].imag() != 0.0) {
        active_.push_back(m);
        return;
      }
    }
  };
  if (candidates.empty()) {
    for (int m = 0; m < space_.n_modes(); ++m) scan(m);
  } else {
    for (int m : candidates) scan(m);
  }
}

void ScalarField::symmetrize() {
  const int n = space_.n_grid();
  for (int m = 0; m < space_.n_modes(); ++m) {
    const int mc = space_.conjugate_mode(m);
    if (mc < m) continue;
    for (int g = 0; g < n; ++g) {
      const std::size_t a = static_cast<std::size_t>(m) * n + g;
      const std::size_t b = static_cast<std::size_t>(mc) * n + g;
      const Complex avg = 0.5 * (coef_[a] + std::conj(coef_[b]));
      coef_[a] = avg;
      coef_[b] = std::conj(avg);
    }
  }
}

ScalarField multiply(const ScalarField& a, const ScalarField& b) {
  if (a.space() != b.space())
    throw PreconditionError("multiply: operands live on different TorusBoxes");
  const TorusBox& box = a.space();
  const int d = box.dim();
  const int n = box.n_grid();

  std::vector<ScalarField::Complex> out(
      static_cast<std::size_t>(box.n_modes()) * n, {0.0, 0.0});

  std::vector<int> ka(d), kb(d), k(d);
  std::vector<int> touched;
  for (int ma : a.active_modes()) {
    box.mode_multi(ma, ka);
    const auto ra = a.mode(ma);
    for (int mb : b.active_modes()) {
      box.mode_multi(mb, kb);
      for (int j = 0; j < d; ++j) k[j] = ka[j] + kb[j];
      if (!box.mode_in_band(k)) continue;  // product tail outside the band is dropped
      const auto rb = b.mode(mb);
      const int target = box.mode_flat(k);
      touched.push_back(target);
      ScalarField::Complex* ro = out.data() + static_cast<std::size_t>(target) * n;
      for (int g = 0; g < n; ++g) ro[g] += ra[g] * rb[g];
    }
  }
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  return ScalarField::from_raw_symmetric(box, std::move(out), touched);
}

double sup_distance(const ScalarField& a, const ScalarField& b) {
  ScalarField diff = a;
  diff -= b;
  return diff.sup_norm();
}

ScalarField restrict_to_box(const ScalarField& f, const TorusBox& target) {
  const TorusBox& src = f.space();
  if (target.dim() != src.dim() || target.truncation() != src.truncation() ||
      target.grid_points_per_axis() != src.grid_points_per_axis())
    throw PreconditionError("restrict_to_box: discretization mismatch");
  if (!src.contains_box(target))
    throw PreconditionError("restrict_to_box: target box not contained in source");
  if (target == src) return f;

  const int d = src.dim();
  const int n = src.grid_points_per_axis();
  const int n_grid = src.n_grid();

  std::vector<ScalarField::Complex> out(
      static_cast<std::size_t>(src.n_modes()) * n_grid);
  std::vector<ScalarField::Complex> line_in, line_out(n);

  // Precompute per-axis stencils at target node coordinates.
  std::vector<std::vector<CubicStencil>> st(d, std::vector<CubicStencil>(n));
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < n; ++i)
      st[j][i] = cubic_stencil(target.grid_coord(j, i), src.action_lo()[j],
                               src.grid_step(j), n);

  std::vector<ScalarField::Complex> buf_a(n_grid), buf_b(n_grid);
  for (int m = 0; m < src.n_modes(); ++m) {
    const auto row = f.mode(m);
    std::copy(row.begin(), row.end(), buf_a.begin());
    for (int axis = 0; axis < d; ++axis) {
      int stride = 1;
      for (int j = d - 1; j > axis; --j) stride *= n;
      const int outer = n_grid / (n * stride);
      for (int o = 0; o < outer; ++o) {
        for (int s = 0; s < stride; ++s) {
          const int base = o * n * stride + s;
          for (int i = 0; i < n; ++i) {
            const CubicStencil& cs = st[axis][i];
            ScalarField::Complex acc{0.0, 0.0};
            for (int q = 0; q < 4; ++q)
              acc += cs.w[q] * buf_a[base + (cs.base + q) * stride];
            buf_b[base + i * stride] = acc;
          }
        }
      }
      buf_a.swap(buf_b);
    }
    std::copy(buf_a.begin(), buf_a.end(),
              out.begin() + static_cast<std::size_t>(m) * n_grid);
  }
  return ScalarField::from_raw(target, std::move(out));
}

}  // namespace toravg

#include "detail/grid_numerics.hpp"

#include "toravg/errors.hpp"

namespace toravg::detail {

void differentiate_action_axis(const TorusBox& box, int axis,
                               std::span<const std::complex<double>> in,
                               std::span<std::complex<double>> out) {
  const int d = box.dim();
  const int n = box.grid_points_per_axis();
  const double inv12h = 1.0 / (12.0 * box.grid_step(axis));

  // Stride of the axis in the flattened grid (axis 0 slowest).
  int stride = 1;
  for (int j = d - 1; j > axis; --j) stride *= n;
  const int outer = box.n_grid() / (n * stride);

  for (int o = 0; o < outer; ++o) {
    for (int s = 0; s < stride; ++s) {
      const int base = o * n * stride + s;
      auto at = [&](int node) { return in[base + node * stride]; };
      for (int i = 0; i < n; ++i) {
        std::complex<double> acc{0.0, 0.0};
        if (i == 0) {
          for (int q = 0; q < 5; ++q) acc += fd4_forward[q] * at(q);
        } else if (i == 1) {
          for (int q = 0; q < 5; ++q) acc += fd4_offset[q] * at(q);
        } else if (i == n - 2) {
          for (int q = 0; q < 5; ++q) acc -= fd4_offset[q] * at(n - 1 - q);
        } else if (i == n - 1) {
          for (int q = 0; q < 5; ++q) acc -= fd4_forward[q] * at(n - 1 - q);
        } else {
          for (int q = 0; q < 5; ++q) acc += fd4_centered[q] * at(i - 2 + q);
        }
        out[base + i * stride] = acc * inv12h;
      }
    }
  }
}

AngleTransform::AngleTransform(const TorusBox& box, int per_axis)
    : d_(box.dim()),
      k_per_axis_(box.modes_per_axis()),
      m_(per_axis),
      n_modes_(box.n_modes()) {
  if (per_axis < k_per_axis_)
    throw PreconditionError("AngleTransform: angle grid too coarse for the truncation");
  n_angle_ = 1;
  for (int j = 0; j < d_; ++j) n_angle_ *= m_;

  const int K = box.truncation();
  forward_.resize(static_cast<std::size_t>(m_) * k_per_axis_);
  for (int m = 0; m < m_; ++m) {
    for (int k = -K; k <= K; ++k) {
      const double phase = two_pi * k * m / m_;
      forward_[static_cast<std::size_t>(m) * k_per_axis_ + (k + K)] =
          std::complex<double>(std::cos(phase), std::sin(phase));
    }
  }
}

void AngleTransform::angle_point(int flat, std::span<double> theta) const {
  for (int j = d_ - 1; j >= 0; --j) {
    theta[j] = static_cast<double>(flat % m_) / m_;
    flat /= m_;
  }
}

// Transform axis by axis.  The working array has shape with axes already
// transformed of length M and the rest of length 2K+1; axis 0 is slowest.
void AngleTransform::modes_to_values(std::span<const std::complex<double>> modes,
                                     std::span<double> values) const {
  std::vector<std::complex<double>> a(modes.begin(), modes.end());
  std::vector<std::complex<double>> b;
  int done = 0;  // number of axes already transformed
  for (int axis = 0; axis < d_; ++axis) {
    // Current shape: [M]*done, [2K+1] for axis..d-1.  Transform `axis`.
    int lead = 1;
    for (int j = 0; j < done; ++j) lead *= m_;
    int trail = 1;
    for (int j = axis + 1; j < d_; ++j) trail *= k_per_axis_;

    b.assign(static_cast<std::size_t>(lead) * m_ * trail, {0.0, 0.0});
    for (int l = 0; l < lead; ++l) {
      const std::complex<double>* src = a.data() + static_cast<std::size_t>(l) * k_per_axis_ * trail;
      std::complex<double>* dst = b.data() + static_cast<std::size_t>(l) * m_ * trail;
      for (int m = 0; m < m_; ++m) {
        const std::complex<double>* tw = forward_.data() + static_cast<std::size_t>(m) * k_per_axis_;
        std::complex<double>* row = dst + static_cast<std::size_t>(m) * trail;
        for (int k = 0; k < k_per_axis_; ++k) {
          const std::complex<double> w = tw[k];
          const std::complex<double>* srow = src + static_cast<std::size_t>(k) * trail;
          for (int t = 0; t < trail; ++t) row[t] += w * srow[t];
        }
      }
    }
    a.swap(b);
    ++done;
  }
  for (int i = 0; i < n_angle_; ++i) values[i] = a[i].real();
}

void AngleTransform::values_to_modes(std::span<const double> values,
                                     std::span<std::complex<double>> modes) const {
  std::vector<std::complex<double>> a(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) a[i] = values[i];
  std::vector<std::complex<double>> b;
  const double scale = 1.0 / m_;
  int done = 0;  // axes already projected to mode space
  for (int axis = 0; axis < d_; ++axis) {
    int lead = 1;
    for (int j = 0; j < done; ++j) lead *= k_per_axis_;
    int trail = 1;
    for (int j = axis + 1; j < d_; ++j) trail *= m_;

    b.assign(static_cast<std::size_t>(lead) * k_per_axis_ * trail, {0.0, 0.0});
    for (int l = 0; l < lead; ++l) {
      const std::complex<double>* src = a.data() + static_cast<std::size_t>(l) * m_ * trail;
      std::complex<double>* dst = b.data() + static_cast<std::size_t>(l) * k_per_axis_ * trail;
      for (int m = 0; m < m_; ++m) {
        const std::complex<double>* tw = forward_.data() + static_cast<std::size_t>(m) * k_per_axis_;
        const std::complex<double>* srow = src + static_cast<std::size_t>(m) * trail;
        for (int k = 0; k < k_per_axis_; ++k) {
          const std::complex<double> w = std::conj(tw[k]) * scale;
          std::complex<double>* row = dst + static_cast<std::size_t>(k) * trail;
          for (int t = 0; t < trail; ++t) row[t] += w * srow[t];
        }
      }
    }
    a.swap(b);
    ++done;
  }
  for (int i = 0; i < n_modes_; ++i) modes[i] = a[i];
}

}  // namespace toravg::detail

#pragma once

// Internal fast evaluator for many fields at one moving point (the flow
// integrator's hot path).  Interpolation cells, per-axis twiddles and the
// mode multi-index table are cached and rebuilt only on bind().

#include <complex>
#include <utility>
#include <vector>

#include "detail/grid_numerics.hpp"
#include "toravg/errors.hpp"
#include "toravg/scalar_field.hpp"

namespace toravg::detail {

class FieldEvaluator {
 public:
  explicit FieldEvaluator(const TorusBox& box)
      : box_(box),
        d_(box.dim()),
        kpa_(box.modes_per_axis()),
        n_grid_(box.n_grid()),
        tw_(static_cast<std::size_t>(d_) * kpa_),
        mode_multi_(static_cast<std::size_t>(box.n_modes()) * d_) {
    std::vector<int> k(d_);
    for (int m = 0; m < box.n_modes(); ++m) {
      box.mode_multi(m, k);
      for (int j = 0; j < d_; ++j) mode_multi_[static_cast<std::size_t>(m) * d_ + j] = k[j];
    }
    gstride_.assign(d_, 1);
    for (int j = d_ - 2; j >= 0; --j)
      gstride_[j] = gstride_[j + 1] * box.grid_points_per_axis();
  }

  /// Bind to a packed state (theta..., I...).  Throws DomainEscapeError
  /// when the actions are not strictly inside the box.
  void bind(const double* state) {
    const double* action = state + d_;
    if (!box_.inside({action, static_cast<std::size_t>(d_)}, /*strict=*/true)) {
      throw DomainEscapeError(
          "trajectory left the action box",
          std::vector<double>(state, state + d_),
          std::vector<double>(action, action + d_));
    }

    // Interpolation cells for the action coordinates.
    const int n = box_.grid_points_per_axis();
    cells_.clear();
    cells_.emplace_back(0, 1.0);
    for (int j = 0; j < d_; ++j) {
      const CubicStencil st =
          cubic_stencil(action[j], box_.action_lo()[j], box_.grid_step(j), n);
      next_.clear();
      for (const auto& [off, w] : cells_)
        for (int q = 0; q < 4; ++q)
          next_.emplace_back(off + (st.base + q) * gstride_[j], w * st.w[q]);
      cells_.swap(next_);
    }

    // Twiddles exp(i 2 pi k theta_j) by recurrence from k = 0.
    const int K = box_.truncation();
    for (int j = 0; j < d_; ++j) {
      std::complex<double>* row = tw_.data() + static_cast<std::size_t>(j) * kpa_;
      const double phase = two_pi * state[j];
      const std::complex<double> w{std::cos(phase), std::sin(phase)};
      row[K] = {1.0, 0.0};
      for (int k = 1; k <= K; ++k) {
        row[K + k] = row[K + k - 1] * w;
        row[K - k] = std::conj(row[K + k]);
      }
    }
  }

  double eval(const ScalarField& f) const {
    std::complex<double> sum{0.0, 0.0};
    for (int m : f.active_modes()) {
      const std::complex<double>* row = f.raw().data() + static_cast<std::size_t>(m) * n_grid_;
      std::complex<double> c{0.0, 0.0};
      for (const auto& [off, w] : cells_) c += w * row[off];
      const int* km = mode_multi_.data() + static_cast<std::size_t>(m) * d_;
      std::complex<double> phase = tw_[km[0] + box_.truncation()];
      for (int j = 1; j < d_; ++j)
        phase *= tw_[static_cast<std::size_t>(j) * kpa_ + (km[j] + box_.truncation())];
      sum += c * phase;
    }
    return sum.real();
  }

 private:
  TorusBox box_;
  int d_, kpa_, n_grid_;
  std::vector<std::pair<int, double>> cells_, next_;
  std::vector<std::complex<double>> tw_;
  std::vector<int> mode_multi_;
  std::vector<int> gstride_;
};

}  // namespace toravg::detail

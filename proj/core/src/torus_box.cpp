#include "toravg/torus_box.hpp"

#include <sstream>

#include "toravg/errors.hpp"

namespace toravg {

TorusBox TorusBox::make(int dim, std::vector<double> action_lo,
                        std::vector<double> action_hi, int truncation,
                        int grid_points) {
  if (dim < 1) throw PreconditionError("TorusBox: dimension must be positive");
  if (truncation < 0) throw PreconditionError("TorusBox: truncation must be non-negative");
  if (grid_points < 4) throw PreconditionError("TorusBox: need at least 4 action grid points");
  if (static_cast<int>(action_lo.size()) != dim || static_cast<int>(action_hi.size()) != dim)
    throw PreconditionError("TorusBox: action bounds must have length d");
  for (int j = 0; j < dim; ++j) {
    if (!(action_lo[j] < action_hi[j])) {
      std::ostringstream os;
      os << "TorusBox: action_lo[" << j << "] must be < action_hi[" << j << "]";
      throw PreconditionError(os.str());
    }
  }

  TorusBox box;
  box.d_ = dim;
  box.K_ = truncation;
  box.N_ = grid_points;
  box.lo_ = std::move(action_lo);
  box.hi_ = std::move(action_hi);

  long modes = 1, grid = 1;
  for (int j = 0; j < dim; ++j) {
    modes *= box.modes_per_axis();
    grid *= grid_points;
  }
  box.n_modes_ = static_cast<int>(modes);
  box.n_grid_ = static_cast<int>(grid);

  std::vector<int> zero(dim, 0);
  box.zero_mode_ = box.mode_flat(zero);
  return box;
}

bool TorusBox::operator==(const TorusBox& other) const noexcept {
  return d_ == other.d_ && K_ == other.K_ && N_ == other.N_ &&
         lo_ == other.lo_ && hi_ == other.hi_;
}

void TorusBox::mode_multi(int flat, std::span<int> k) const {
  const int m = modes_per_axis();
  for (int j = d_ - 1; j >= 0; --j) {
    k[j] = flat % m - K_;
    flat /= m;
  }
}

int TorusBox::mode_flat(std::span<const int> k) const {
  const int m = modes_per_axis();
  int flat = 0;
  for (int j = 0; j < d_; ++j) flat = flat * m + (k[j] + K_);
  return flat;
}

int TorusBox::conjugate_mode(int flat) const {
  std::vector<int> k(d_);
  mode_multi(flat, k);
  for (int j = 0; j < d_; ++j) k[j] = -k[j];
  return mode_flat(k);
}

bool TorusBox::mode_in_band(std::span<const int> k) const {
  for (int j = 0; j < d_; ++j)
    if (k[j] < -K_ || k[j] > K_) return false;
  return true;
}

void TorusBox::grid_multi(int flat, std::span<int> g) const {
  for (int j = d_ - 1; j >= 0; --j) {
    g[j] = flat % N_;
    flat /= N_;
  }
}

int TorusBox::grid_flat(std::span<const int> g) const {
  int flat = 0;
  for (int j = 0; j < d_; ++j) flat = flat * N_ + g[j];
  return flat;
}

void TorusBox::grid_point(int flat, std::span<double> action) const {
  std::vector<int> g(d_);
  grid_multi(flat, g);
  for (int j = 0; j < d_; ++j) action[j] = grid_coord(j, g[j]);
}

bool TorusBox::inside(std::span<const double> action, bool strict) const {
  for (int j = 0; j < d_; ++j) {
    if (strict) {
      if (!(action[j] > lo_[j] && action[j] < hi_[j])) return false;
    } else {
      if (!(action[j] >= lo_[j] && action[j] <= hi_[j])) return false;
    }
  }
  return true;
}

TorusBox TorusBox::shrunk(double per_side_fraction) const {
  if (per_side_fraction < 0.0 || per_side_fraction >= 0.5)
    throw PreconditionError("TorusBox::shrunk: fraction must lie in [0, 0.5)");
  std::vector<double> lo(d_), hi(d_);
  for (int j = 0; j < d_; ++j) {
    const double margin = per_side_fraction * (hi_[j] - lo_[j]);
    lo[j] = lo_[j] + margin;
    hi[j] = hi_[j] - margin;
  }
  return with_action_box(std::move(lo), std::move(hi));
}

TorusBox TorusBox::with_action_box(std::vector<double> lo, std::vector<double> hi) const {
  for (int j = 0; j < d_; ++j) {
    if (lo[j] < lo_[j] || hi[j] > hi_[j])
      throw PreconditionError("TorusBox::with_action_box: new box not contained in B");
  }
  return make(d_, std::move(lo), std::move(hi), K_, N_);
}

bool TorusBox::contains_box(const TorusBox& inner) const {
  if (inner.d_ != d_) return false;
  for (int j = 0; j < d_; ++j)
    if (inner.lo_[j] < lo_[j] || inner.hi_[j] > hi_[j]) return false;
  return true;
}

}  // namespace toravg

#pragma once

#include "toravg/flow.hpp"

namespace toravg {

/// A regular deformation scenario: a family of fiberwise-constant base
/// functions J(eps) with J(0) = H_0, composed with the flow of a symplectic
/// generator family, H_eps = J(eps) o phi^eps.
class DeformationScenario {
 public:
  /// Validates that the base family is angle-independent (probed at a few
  /// epsilon values) and that the generator carries the symplectic flag.
  static DeformationScenario make(ScalarFamily base, TimeDepVectorField generator,
                                  std::optional<TorusBox> safe_box = {});

  const TorusBox& space() const noexcept { return generator_.space(); }
  const ScalarFamily& base() const noexcept { return base_; }
  const TimeDepVectorField& generator() const noexcept { return generator_; }
  double eps_max() const noexcept { return generator_.eps_max(); }
  const TorusBox& safe_box() const noexcept { return safe_box_; }

 private:
  DeformationScenario(ScalarFamily base, TimeDepVectorField generator, TorusBox safe_box)
      : base_(std::move(base)),
        generator_(std::move(generator)),
        safe_box_(std::move(safe_box)) {}

  ScalarFamily base_;
  TimeDepVectorField generator_;
  TorusBox safe_box_;
};

/// H_eps = J(eps) o phi^eps, resampled onto the grid over the safe box.
ScalarField realize_deformation(const DeformationScenario& s, double eps,
                                FlowParams params = {});

/// The Hamiltonian normal form H_eps = I_nf o phi_{X_G}^eps: I_nf is
/// fiberwise constant (J(eps) composed with the fiber-preserving factor of
/// the flow decomposition) and G has zero vertical average.
struct NormalFormResult {
  ScalarField i_nf;        // angle-independent, on the safe box
  ScalarField g;           // G(eps), zero vertical average
  FlowDecomposition flows; // the underlying flow decomposition
};

NormalFormResult normal_form(const DeformationScenario& s, double eps,
                             FlowParams params = {});

/// sup over samples of |H_eps(m) - I_nf(phi_{X_G}^eps(m))|.
double normal_form_residual(const DeformationScenario& s, double eps,
                            const NormalFormResult& nf,
                            std::span<const PhasePoint> samples,
                            FlowParams params = {});

}  // namespace toravg

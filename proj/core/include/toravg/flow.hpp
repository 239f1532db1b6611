#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>
#include <span>

#include "toravg/tensor_fields.hpp"

namespace toravg {

/// Controls for the fixed-step RK4 integrator with Richardson step halving.
struct FlowParams {
  double richardson_tol = 1e-9;    // pointwise accuracy target for the map
  int initial_steps = 64;          // first attempt: step eps / 64
  double min_step_fraction = 1e-5; // hard floor: step >= fraction * eps
};

/// Default interior safe box: B shrunk by 10% per side.
inline constexpr double kDefaultSafeShrink = 0.1;

/// A memoizing epsilon-indexed family of scalar fields.
class ScalarFamily {
 public:
  using Provider = std::function<ScalarField(double)>;

  ScalarFamily(TorusBox space, Provider provider, double eps_max);
  static ScalarFamily constant(ScalarField f, double eps_max);

  const TorusBox& space() const noexcept;
  double eps_max() const noexcept;
  ScalarField at(double eps) const;

 private:
  struct State;
  std::shared_ptr<State> state_;
};

/// A time-dependent vector field eps -> X_eps on a fixed TorusBox.
///
/// The provider is evaluated lazily and memoized at exact epsilon values;
/// `sampled` instead fixes a Chebyshev-Lobatto node set and interpolates
/// between nodes with 4-point Lagrange weights (node count is a knob,
/// default 17).  When `symplectic` is set, closedness of omega(X_eps) is
/// verified at every epsilon the family is realized at.
class TimeDepVectorField {
 public:
  using Provider = std::function<VectorField(double)>;

  TimeDepVectorField(TorusBox space, Provider provider, double eps_max, bool symplectic);
  static TimeDepVectorField constant(VectorField x, double eps_max, bool symplectic);
  static TimeDepVectorField sampled(TorusBox space, Provider provider, double eps_max,
                                    bool symplectic, int nodes = 17);

  const TorusBox& space() const noexcept;
  double eps_max() const noexcept;
  bool symplectic() const noexcept;
  bool time_independent() const noexcept;

  /// The realized field at eps (memoized; verified if symplectic).
  VectorField field_at(double eps) const;

  /// Generator of the inverse flow at time eps0: s -> -X(eps0 - s).
  TimeDepVectorField reversed(double eps0) const;

  struct Impl;
  const std::shared_ptr<const Impl>& impl() const noexcept { return impl_; }
  explicit TimeDepVectorField(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

 private:
  std::shared_ptr<const Impl> impl_;
};

/// The flow of a time-dependent vector field at time eps, evaluated
/// pointwise on demand by classical RK4 with Richardson step control, with
/// Jacobians from the variational equations.
///
/// At eps = 0 the map is the identity.  Trajectories must stay inside the
/// generator's action box; leaving it raises DomainEscapeError with the
/// offending point.  `safe_box` is the declared interior box flow-derived
/// fields are resampled over.
class FlowMap {
 public:
  FlowMap(TimeDepVectorField generator, double eps, TorusBox safe_box, FlowParams params);

  const TorusBox& space() const noexcept { return generator_.space(); }
  const TorusBox& safe_box() const noexcept { return safe_box_; }
  double eps() const noexcept { return eps_; }
  const TimeDepVectorField& generator() const noexcept { return generator_; }
  const FlowParams& params() const noexcept { return params_; }

  PhasePoint map(const PhasePoint& p) const;
  /// Image with angles left unwrapped (for winding-number bookkeeping).
  PhasePoint map_unwrapped(const PhasePoint& p) const;
  Eigen::MatrixXd jacobian(const PhasePoint& p) const;
  std::pair<PhasePoint, Eigen::MatrixXd> map_with_jacobian(const PhasePoint& p) const;

  PhasePoint inverse_map(const PhasePoint& p) const;
  /// (phi^{-1}(p), D(phi^{-1})(p)); the inverse flow is integrated with the
  /// time-reversed generator.
  std::pair<PhasePoint, Eigen::MatrixXd> inverse_map_with_jacobian(const PhasePoint& p) const;

 private:
  TimeDepVectorField generator_;
  double eps_;
  TorusBox safe_box_;
  FlowParams params_;
};

FlowMap integrate_flow(const TimeDepVectorField& x, double eps,
                       std::optional<TorusBox> safe_box = {}, FlowParams params = {});

enum class PushDirection { Forward, Inverse };

/// Pushforward (phi_* X)(m) = Dphi|_{phi^{-1}(m)} X(phi^{-1}(m)) (Forward)
/// or ((phi^{-1})_* X)(m) = (Dphi(m))^{-1} X(phi(m)) (Inverse), resampled
/// onto the spectral grid over the flow's safe box.
VectorField pushforward_vf(const FlowMap& phi, const VectorField& x, PushDirection dir);

/// Generator of the composed flow phi_{X1} o phi_{X2}:
/// X3(eps) = X1(eps) + (phi_{X1}^eps)_* X2(eps), on the safe box.
TimeDepVectorField compose_generator(const TimeDepVectorField& x1,
                                     const TimeDepVectorField& x2,
                                     std::optional<TorusBox> safe_box = {},
                                     FlowParams params = {});

/// Splitting of a symplectic flow into a fiber-preserving factor and a
/// Hamiltonian factor: phi_X^eps = Phi^eps o phi_Z^eps with Phi the flow of
/// the averaged family and Z(eps) = X_{G(eps)}, <G(eps)> = 0.
struct FlowDecomposition {
  TimeDepVectorField lift;  // <X(eps)>, generator of Phi
  ScalarFamily g;           // G(eps) on the safe box, zero vertical average
  TimeDepVectorField z;     // X_{G(eps)} on the safe box
};

FlowDecomposition decompose_flow(const TimeDepVectorField& x,
                                 std::optional<TorusBox> safe_box = {},
                                 FlowParams params = {});

/// sup over samples of the distance between phi_X^eps(m) and
/// Phi^eps(phi_Z^eps(m)) (torus metric in the angles, euclidean in the
/// actions).
double recomposition_residual(const TimeDepVectorField& x, const FlowDecomposition& dec,
                              double eps, std::span<const PhasePoint> samples,
                              FlowParams params = {});

/// Canonical matrix of omega = sum_j dI_j ^ dtheta_j in the packed
/// coordinate order (theta..., I...).
Eigen::MatrixXd canonical_omega_matrix(int d);

/// max-norm of J^T Omega J - Omega.
double symplectic_defect(const Eigen::MatrixXd& jac);

/// Distance on T^d x B: per-axis circle distance in the angles, euclidean
/// in the actions, combined euclidean.
double phase_distance(const PhasePoint& a, const PhasePoint& b);

}  // namespace toravg

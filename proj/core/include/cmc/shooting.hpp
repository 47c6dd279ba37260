#pragma once

// Half-period shooting: find (a, H, T) with f1(T) = 0 and theta(T) = pi for
// the solution starting at f1 = 0, f2 = a, theta = 0. By the reflection
// symmetry of the system such a solution closes up with period 2T.

#include <array>
#include <cstddef>
#include <optional>
#include <variant>

#include "cmc/dormand_prince.hpp"
#include "cmc/family.hpp"

namespace cmc {

using Vec3 = std::array<double, 3>;

struct ShootingJacobian {
  Vec3 grad_F1;     // (dF1/da, dF1/dH, dF1/dT)
  Vec3 grad_Theta;  // (dTheta/da, dTheta/dH, dTheta/dT)
};

struct ShootingPoint {
  double a = 0.0;
  double H = 0.0;
  double T = 0.0;
  double res_f1 = 0.0;     // F1(a, H, T)
  double res_theta = 0.0;  // Theta(a, H, T) - pi
  int iterations = 0;      // Newton updates applied by solve()
  std::optional<ShootingJacobian> jacobian = std::nullopt;

  Vec3 coords() const { return {a, H, T}; }
  double residual_norm() const;
};

struct ShootingOptions {
  ToleranceSpec ode{.rtol = 1e-12, .atol = 1e-12};
  double newton_tol = 1e-10;
  int max_iter = 20;
  int max_halvings = 8;
  double max_condition = 1e12;
};

/// Integrates to T and fills the residuals. Integration failures are
/// reported as NonAdmissible.
ShootingPoint evaluate(double a, double H, double T, const FamilyParams& p,
                       const ToleranceSpec& tol = {});

/// Residuals and gradients from the augmented (base + two sensitivity) system.
/// The returned point carries its Jacobian.
ShootingPoint evaluate_with_jacobian(double a, double H, double T, const FamilyParams& p,
                                     const ToleranceSpec& tol = {});

ShootingJacobian jacobian(double a, double H, double T, const FamilyParams& p,
                          const ToleranceSpec& tol = {});

/// Two-dimensional slice of (a, H, T) on which Newton acts.
struct FixA {
  double value;
};
struct FixH {
  double value;
};
struct FixT {
  double value;
};
/// Plane through `origin` orthogonal to `normal`.
struct Plane {
  Vec3 origin;
  Vec3 normal;
};
using Slice = std::variant<FixA, FixH, FixT, Plane>;

/// Damped Newton on (F1, Theta - pi) restricted to `slice`. The converged
/// point satisfies max(|res_f1|, |res_theta|) < newton_tol and carries the
/// Jacobian at the solution. Throws NoConvergence, SingularJacobian or
/// NonAdmissible.
ShootingPoint solve(const ShootingPoint& guess, const Slice& slice, const FamilyParams& p,
                    const ShootingOptions& opts = {});

struct Interval {
  double lo;
  double hi;
};

/// psi(a) = f1 at the first time theta reaches pi, or nullopt when theta
/// never gets there (before t_max or before the trajectory degenerates).
std::optional<double> seed_residual(double a, const FamilyParams& p, double H,
                                    const ToleranceSpec& tol = {}, double t_max = 8.0);

/// Scans psi over a_range at `resolution`, bisects each sign change and
/// polishes with solve() at fixed H. Returns the first bracket that converges.
/// Throws NoBracket when psi has no usable sign change.
ShootingPoint find_seed(const FamilyParams& p, double H, Interval a_range,
                        const ShootingOptions& opts = {}, double resolution = 1e-3);

/// Reflection-symmetry closure of a converged point, checked by direct
/// integration over [0, 2T].
struct SymmetryReport {
  double closure_f1;     // |f1(2T)|
  double closure_f2;     // |f2(2T) - a|
  double closure_theta;  // |theta(2T) - 2 pi|
  double max_odd_f1;     // max |f1(T+t) + f1(T-t)| on the grid
  double max_even_f2;    // max |f2(T+t) - f2(T-t)| on the grid
};

SymmetryReport symmetry_residuals(const ShootingPoint& point, const FamilyParams& p,
                                  std::size_t grid = 100, const ToleranceSpec& tol = {});

}  // namespace cmc

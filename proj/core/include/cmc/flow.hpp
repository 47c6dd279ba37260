#pragma once

// Integration of the profile system and its sensitivity systems.

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "cmc/dormand_prince.hpp"
#include "cmc/family.hpp"
#include "cmc/profile_ode.hpp"

namespace cmc {

struct ProfileRun {
  ProfileState final;
  /// Equally spaced samples over [t0, t_end] (both ends included) when
  /// requested; each lies on a step boundary, not on an interpolant.
  std::vector<TrajectorySample> samples;
  std::size_t steps = 0;
};

/// Integrates the profile system from `initial` over [0, t_end].
ProfileRun integrate(const ProfileState& initial, const FamilyParams& p, double H, double t_end,
                     const ToleranceSpec& tol = {}, std::size_t n_samples = 0);

/// Same, starting at time t0 (the system is autonomous; t0 only labels samples).
ProfileRun integrate_from(double t0, const ProfileState& initial, const FamilyParams& p, double H,
                          double t_end, const ToleranceSpec& tol = {},
                          std::size_t n_samples = 0);

/// Integrates a single sensitivity system (base + one tag) over [0, t_end].
SensitivityState integrate(const SensitivityState& initial, const FamilyParams& p, double H,
                           double t_end, const ToleranceSpec& tol = {});

/// Base state and both sensitivities, integrated jointly from f1 = 0, f2 = a,
/// theta = 0.
struct FlowJet {
  ProfileState base;
  std::array<double, 3> d_a;  // d(f1, f2, theta)/da
  std::array<double, 3> d_H;  // d(f1, f2, theta)/dH
  double K;                   // theta' at the final time
};

FlowJet integrate_jet(double a, const FamilyParams& p, double H, double t_end,
                      const ToleranceSpec& tol = {});

struct ThetaEvent {
  double t;
  ProfileState state;
};

/// Integrates from (0, a, 0) until theta first crosses `target` upward,
/// located by bisection on the dense output to `t_tol`. Returns nullopt if
/// no crossing occurs before t_max.
std::optional<ThetaEvent> integrate_until_theta(double a, const FamilyParams& p, double H,
                                                double target, double t_max,
                                                const ToleranceSpec& tol = {},
                                                double t_tol = 1e-12);

}  // namespace cmc

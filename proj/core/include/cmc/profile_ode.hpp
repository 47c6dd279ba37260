#pragma once

// The profile-curve system: an arc-length parametrized curve (f1, f2) with
// tangent angle theta generates phi(y, z, t) = (f y, f2 z, f1) of constant
// mean curvature H exactly when theta' equals the turning rate K below.

#include <span>
#include <vector>

#include "cmc/family.hpp"

namespace cmc {

/// Guard on f2 and f^2; states closer to the boundary are rejected.
inline constexpr double kDomainEpsilon = 1e-12;

struct ProfileState {
  double f1 = 0.0;
  double f2 = 0.0;
  double theta = 0.0;
};

/// f = sqrt(1 - f1^2 - f2^2), g = f2 cos(theta) - f1 sin(theta), h = sqrt(1 - g^2).
struct DerivedScalars {
  double f;
  double g;
  double h;
};

/// Throws DomainBreach when f2 or f^2 is below kDomainEpsilon.
DerivedScalars derived_scalars(const ProfileState& s);

/// Same formulas without the domain guard (for diagnostics on given samples).
DerivedScalars derived_scalars_unchecked(const ProfileState& s) noexcept;

struct ProfileRate {
  double df1;
  double df2;
  double dtheta;
};

/// (cos theta, sin theta, K).
ProfileRate vector_field(const ProfileState& s, const FamilyParams& p, double H);

/// K = h^2 / (f2 f^2) * (n f1 f2 sin + n H f2 h - n f2^2 cos + l cos).
double turning_rate(const ProfileState& s, const FamilyParams& p, double H);

/// K and its analytic partial derivatives.
struct TurningRateJet {
  double K;
  double d_f1;
  double d_f2;
  double d_theta;
  double d_H;
};

TurningRateJet turning_rate_jet(const ProfileState& s, const FamilyParams& p, double H);

enum class SensitivityTag { wrt_a, wrt_H };

/// Base state plus derivatives of (f1, f2, theta) with respect to the
/// initial height a or the mean curvature H.
struct SensitivityState {
  ProfileState base;
  double s_f1 = 0.0;
  double s_f2 = 0.0;
  double s_theta = 0.0;
  SensitivityTag tag = SensitivityTag::wrt_a;

  /// Initial data at t = 0 for f2(0) = a: (0, 1, 0) for wrt_a, zeros for wrt_H.
  static SensitivityState initial(double a, SensitivityTag tag);
};

struct SensitivityRate {
  ProfileRate base;
  double ds_f1;
  double ds_f2;
  double ds_theta;
};

/// Linearized flow. For wrt_H the explicit forcing dK/dH is added to the
/// theta equation; without it the H-sensitivities would vanish identically.
SensitivityRate variational_field(const SensitivityState& s, const FamilyParams& p, double H);

struct CurvatureDiagnostics {
  double kappa1;
  double kappa2;
  double g;
  double h;
  double f;
  double H_reconstructed;
};

/// Evaluates the mean-curvature expression
///   n H = (n g + kappa1 + l kappa2) / h - kappa1 (f f')^2 / h^3
/// at a state, given the profile curvature kappa1 from an independent source.
CurvatureDiagnostics curvature_diagnostics(const ProfileState& s, double kappa1,
                                           const FamilyParams& p);

struct TrajectorySample {
  double t;
  ProfileState state;
};

/// Max |H_reconstructed - H| over equally spaced samples. kappa1 = theta' is
/// obtained by 7-point finite differences of the sampled angle, so the check
/// is independent of the vector field that produced the trajectory.
double curvature_residual(std::span<const TrajectorySample> samples, const FamilyParams& p,
                          double H);

/// Unit normal xi = h^{-1}(-g f y, (-g f2 + f1') z, -g f1 - f2') in R^{n+2}.
/// y and z must be unit vectors in R^{k+1} and R^{l+1}.
std::vector<double> gauss_map(const ProfileState& s, std::span<const double> y,
                              std::span<const double> z, const FamilyParams& p);

}  // namespace cmc

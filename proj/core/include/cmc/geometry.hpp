#pragma once

// Full profile curves, embeddedness, the immersion, and volumes.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cmc/family.hpp"
#include "cmc/shooting.hpp"

namespace cmc {

struct ProfileSample {
  double t;
  double f1;
  double f2;
  double theta;
  double f;
  double g;
  double h;
};

struct ProfileCurve {
  FamilyParams params = FamilyParams::from_kl(1, 1);
  ShootingPoint point;
  /// Samples over [0, 2T]; index half_intervals is t = T, the last is t = 2T.
  std::vector<ProfileSample> samples;
  std::size_t half_intervals = 0;
  /// Second half obtained by integrating on from t = T (same grid).
  std::vector<ProfileSample> direct_tail;
  /// max |reflected - integrated| over the second half, in (f1, f2, theta).
  double reflection_deviation = 0.0;

  std::span<const ProfileSample> first_half() const {
    return std::span(samples).first(half_intervals + 1);
  }
};

/// Samples [0, T] on `half_intervals` equal steps (rounded up to a multiple of
/// 4), extends to [T, 2T] by f1(T+t) = -f1(T-t), f2(T+t) = f2(T-t),
/// theta(T+t) = 2 pi - theta(T-t), and records the deviation from direct
/// integration. Throws NonAdmissible if the curve leaves the domain.
ProfileCurve reconstruct(const ShootingPoint& point, const FamilyParams& p,
                         std::size_t half_intervals = 2000, const ToleranceSpec& tol = {});

ProfileSample make_sample(double t, double f1, double f2, double theta);

struct EmbeddingVerdict {
  bool embedded = true;
  std::optional<std::pair<std::size_t, std::size_t>> crossing;  // segment indices
  std::string reason;
};

/// Simple-closed-polygon test: pairwise tests of non-adjacent segments,
/// pruned by a uniform grid. The polygon is closed implicitly (last -> first);
/// a repeated closing vertex is ignored.
EmbeddingVerdict check_simple_closed(std::span<const std::array<double, 2>> polygon);

/// Profile polyline (f1, f2) over [0, 2T] is simple, with f2 > 0 and inside
/// the unit disk.
EmbeddingVerdict check_embedded(const ProfileCurve& curve);

/// phi(y, z, t) = (f y, f2 z, f1), a point of S^{n+1} in R^{n+2}.
std::vector<double> immersion_point(const ProfileSample& s, std::span<const double> y,
                                    std::span<const double> z);

/// f2^l f^{k-1} h, using 1 + (df/dt)^2 = h^2 / f^2.
double volume_integrand(const ProfileSample& s, const FamilyParams& p);

/// f2^l f^k sqrt(1 + (df/dt)^2) with df/dt = -(f1 cos + f2 sin) / f.
double volume_integrand_unsimplified(const ProfileSample& s, const FamilyParams& p);

/// 2 sigma_k sigma_l times the composite Simpson integral of the integrand over
/// equally spaced samples (even number of intervals). `error` receives the
/// Richardson estimate against the half-resolution rule when that is also
/// Simpson-compatible, otherwise 0.
double volume_over(std::span<const ProfileSample> samples, const FamilyParams& p,
                   double* error = nullptr);

struct CliffordComparison {
  int l;
  double volume;
};

struct VolumeReport {
  double vol = 0.0;
  std::vector<CliffordComparison> clifford;
  bool yau_ok = false;
  double quadrature_error_estimate = 0.0;
};

VolumeReport volume(const ProfileCurve& curve);

struct YauMargin {
  int l;
  double clifford_volume;
  double margin;  // vol - VolC(n, l)
};

struct YauVerdict {
  bool holds = false;  // vol exceeds every listed Clifford volume
  std::vector<YauMargin> margins;
  double sphere_volume = 0.0;  // sigma_n, volume of the totally geodesic S^n
  bool above_sphere = false;
};

YauVerdict yau_check(const FamilyParams& p, const VolumeReport& report);

}  // namespace cmc

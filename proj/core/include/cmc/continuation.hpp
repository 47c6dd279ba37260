#pragma once

// Pseudo-arclength continuation of the solution curve Gamma of
// F1(a, H, T) = 0, Theta(a, H, T) = pi, and extraction of its special points.

#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "cmc/errors.hpp"
#include "cmc/family.hpp"
#include "cmc/shooting.hpp"

namespace cmc {

/// Normalized grad F1 x grad Theta; throws RankDrop when the raw cross
/// product is shorter than 1e-10.
Vec3 tangent(const ShootingPoint& point, const FamilyParams& p, const ToleranceSpec& tol = {});

enum class StopReason { none, a_floor, T_floor, H_cap, budget, stalled };

std::string to_string(StopReason r);

struct EndpointDiagnostic {
  double a = std::numeric_limits<double>::quiet_NaN();  // smallest a reached
  double H = std::numeric_limits<double>::quiet_NaN();
  double T = std::numeric_limits<double>::quiet_NaN();
};

struct SpecialPoints {
  double a_H0 = std::numeric_limits<double>::quiet_NaN();
  double T_H0 = std::numeric_limits<double>::quiet_NaN();
  double a_Hmin = std::numeric_limits<double>::quiet_NaN();
  double T_Hmin = std::numeric_limits<double>::quiet_NaN();
  double H_min = std::numeric_limits<double>::quiet_NaN();
  std::pair<double, double> a_star_bracket{std::numeric_limits<double>::quiet_NaN(),
                                           std::numeric_limits<double>::quiet_NaN()};
  EndpointDiagnostic endpoint_a_to_0;
};

struct GammaCurve {
  FamilyParams params = FamilyParams::from_kl(1, 1);
  std::vector<ShootingPoint> points;
  std::vector<Vec3> tangents;  // unit, consistently oriented along the curve
  SpecialPoints special;
  StopReason stop_low = StopReason::none;   // how the small-a end terminated
  StopReason stop_high = StopReason::none;  // how the large-a end terminated
  std::string stall_note;
};

struct TraceOptions {
  double h_init = 1e-2;
  double h_min = 1e-5;
  double h_max = 5e-2;
  double growth = 1.3;
  int slow_iterations = 5;  // more corrector iterations than this halves h
  int fast_iterations = 2;  // at most this many grows h
  std::size_t max_points = 6000;
  double a_floor = 1e-3;
  double T_floor = 5e-3;
  double H_cap = 50.0;
  ShootingOptions solver{.max_iter = 10};
};

/// Thrown when the step size underflows; carries everything traced so far.
class StallError : public Error {
 public:
  StallError(const std::string& what, GammaCurve partial)
      : Error(what), partial_(std::move(partial)) {}
  const GammaCurve& partial() const noexcept { return partial_; }

 private:
  GammaCurve partial_;
};

/// Traces Gamma from a converged `start`. direction = +1 follows increasing a
/// at the start, -1 decreasing a. Points are stored in tracing order.
GammaCurve trace(const ShootingPoint& start, const FamilyParams& p, int direction,
                 const TraceOptions& opts = {});

/// Traces both directions and joins them into a single curve ordered by
/// increasing a at the start point. A direction that stalls keeps its partial
/// branch and reports StopReason::stalled (with the message in stall_note).
GammaCurve trace_both(const ShootingPoint& start, const FamilyParams& p,
                      const TraceOptions& opts = {});

/// Locates the H = 0 crossing, the H minimum and the collapse bracket.
/// Expects a curve ordered as trace_both() produces. Throws NotSpanned when a
/// feature is not bracketed by the curve.
SpecialPoints detect_special(const GammaCurve& curve, const ShootingOptions& opts = {});

/// 0 < a_Hmin < a_H0 < a*_low < a*_high < 1 and H_min < 0.
bool ordering_holds(const SpecialPoints& s);

/// Convenience pipeline: H = 0 seed, trace both ways, special points.
GammaCurve trace_family(const FamilyParams& p, const TraceOptions& opts = {},
                        Interval seed_range = {0.01, 0.95});

}  // namespace cmc

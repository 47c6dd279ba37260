#include "cmc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "cmc/errors.hpp"
#include "cmc/flow.hpp"

namespace cmc {

namespace {

using Point2 = std::array<double, 2>;

double orient(const Point2& a, const Point2& b, const Point2& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

bool on_segment(const Point2& a, const Point2& b, const Point2& c) {
  return std::min(a[0], b[0]) <= c[0] && c[0] <= std::max(a[0], b[0]) &&
         std::min(a[1], b[1]) <= c[1] && c[1] <= std::max(a[1], b[1]);
}

bool segments_intersect(const Point2& p1, const Point2& p2, const Point2& q1, const Point2& q2) {
  const double d1 = orient(q1, q2, p1);
  const double d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1);
  const double d4 = orient(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

ProfileSample reflect(const ProfileSample& s, double t) {
  return make_sample(t, -s.f1, s.f2, 2.0 * std::numbers::pi - s.theta);
}

}  // namespace

ProfileSample make_sample(double t, double f1, double f2, double theta) {
  const DerivedScalars d = derived_scalars_unchecked({f1, f2, theta});
  return {t, f1, f2, theta, d.f, d.g, d.h};
}

ProfileCurve reconstruct(const ShootingPoint& point, const FamilyParams& p,
                         std::size_t half_intervals, const ToleranceSpec& tol) {
  const std::size_t n = std::max<std::size_t>(4, (half_intervals + 3) / 4 * 4);
  ProfileCurve curve;
  curve.params = p;
  curve.point = point;
  curve.half_intervals = n;

  ProfileRun head;
  ProfileRun tail;
  try {
    head = integrate(ProfileState{0.0, point.a, 0.0}, p, point.H, point.T, tol, n);
    tail = integrate_from(point.T, head.final, p, point.H, 2.0 * point.T, tol, n);
  } catch (const DomainBreach& e) {
    throw NonAdmissible(std::string("reconstruct: ") + e.what());
  } catch (const StepSizeUnderflow& e) {
    throw NonAdmissible(std::string("reconstruct: ") + e.what());
  }

  curve.samples.reserve(2 * n + 1);
  for (const auto& s : head.samples) {
    curve.samples.push_back(make_sample(s.t, s.state.f1, s.state.f2, s.state.theta));
  }
  for (std::size_t j = 1; j <= n; ++j) {
    curve.samples.push_back(reflect(curve.samples[n - j], tail.samples[j].t));
  }
  curve.direct_tail.reserve(n + 1);
  for (const auto& s : tail.samples) {
    curve.direct_tail.push_back(make_sample(s.t, s.state.f1, s.state.f2, s.state.theta));
  }
  for (std::size_t j = 0; j <= n; ++j) {
    const ProfileSample& r = curve.samples[n + j];
    const ProfileSample& d = curve.direct_tail[j];
    curve.reflection_deviation =
        std::max({curve.reflection_deviation, std::abs(r.f1 - d.f1), std::abs(r.f2 - d.f2),
                  std::abs(r.theta - d.theta)});
  }
  for (const auto& s : curve.samples) {
    if (!(s.f2 > 0.0) || !(s.f1 * s.f1 + s.f2 * s.f2 < 1.0)) {
      throw NonAdmissible("reconstruct: sample at t=" + std::to_string(s.t) +
                          " violates f2 > 0, f1^2 + f2^2 < 1");
    }
  }
  return curve;
}

EmbeddingVerdict check_simple_closed(std::span<const Point2> polygon) {
  std::vector<Point2> pts(polygon.begin(), polygon.end());
  if (pts.size() >= 2 && pts.front() == pts.back()) pts.pop_back();
  const std::size_t m = pts.size();
  if (m < 3) return {false, std::nullopt, "fewer than three distinct vertices"};

  double xmin = pts[0][0], xmax = xmin, ymin = pts[0][1], ymax = ymin, total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Point2& a = pts[i];
    const Point2& b = pts[(i + 1) % m];
    xmin = std::min(xmin, a[0]);
    xmax = std::max(xmax, a[0]);
    ymin = std::min(ymin, a[1]);
    ymax = std::max(ymax, a[1]);
    total += std::hypot(b[0] - a[0], b[1] - a[1]);
  }
  const double cell = std::max(2.0 * total / static_cast<double>(m), 1e-12);
  const auto nx = static_cast<long long>((xmax - xmin) / cell) + 1;

  std::unordered_map<long long, std::vector<std::size_t>> grid;
  for (std::size_t i = 0; i < m; ++i) {
    const Point2& a = pts[i];
    const Point2& b = pts[(i + 1) % m];
    const auto cx0 = static_cast<long long>((std::min(a[0], b[0]) - xmin) / cell);
    const auto cx1 = static_cast<long long>((std::max(a[0], b[0]) - xmin) / cell);
    const auto cy0 = static_cast<long long>((std::min(a[1], b[1]) - ymin) / cell);
    const auto cy1 = static_cast<long long>((std::max(a[1], b[1]) - ymin) / cell);
    for (long long cy = cy0; cy <= cy1; ++cy) {
      for (long long cx = cx0; cx <= cx1; ++cx) grid[cy * nx + cx].push_back(i);
    }
  }

  std::optional<std::pair<std::size_t, std::size_t>> first;
  for (const auto& [key, segs] : grid) {
    for (std::size_t u = 0; u < segs.size(); ++u) {
      for (std::size_t v = u + 1; v < segs.size(); ++v) {
        const std::size_t i = std::min(segs[u], segs[v]);
        const std::size_t j = std::max(segs[u], segs[v]);
        if (j == i + 1 || (i == 0 && j == m - 1)) continue;
        if (first && std::pair(i, j) >= *first) continue;
        if (segments_intersect(pts[i], pts[(i + 1) % m], pts[j], pts[(j + 1) % m])) {
          first = std::pair(i, j);
        }
      }
    }
  }
  if (first) {
    return {false, first,
            "segments " + std::to_string(first->first) + " and " + std::to_string(first->second) +
                " intersect"};
  }
  return {true, std::nullopt, ""};
}

EmbeddingVerdict check_embedded(const ProfileCurve& curve) {
  std::vector<Point2> poly;
  poly.reserve(curve.samples.size());
  for (std::size_t i = 0; i < curve.samples.size(); ++i) {
    const ProfileSample& s = curve.samples[i];
    if (!(s.f2 > 0.0)) {
      return {false, std::nullopt, "f2 <= 0 at sample " + std::to_string(i)};
    }
    if (!(s.f1 * s.f1 + s.f2 * s.f2 < 1.0)) {
      return {false, std::nullopt, "sample " + std::to_string(i) + " leaves the unit disk"};
    }
    poly.push_back({s.f1, s.f2});
  }
  // The sample at 2T closes the curve; compare it to t = 0 instead of drawing it.
  if (poly.size() > 1) poly.pop_back();
  return check_simple_closed(poly);
}

std::vector<double> immersion_point(const ProfileSample& s, std::span<const double> y,
                                    std::span<const double> z) {
  std::vector<double> x;
  x.reserve(y.size() + z.size() + 1);
  for (double yi : y) x.push_back(s.f * yi);
  for (double zi : z) x.push_back(s.f2 * zi);
  x.push_back(s.f1);
  return x;
}

double volume_integrand(const ProfileSample& s, const FamilyParams& p) {
  return std::pow(s.f2, p.l()) * std::pow(s.f, p.k() - 1) * s.h;
}

double volume_integrand_unsimplified(const ProfileSample& s, const FamilyParams& p) {
  const double dfdt = -(s.f1 * std::cos(s.theta) + s.f2 * std::sin(s.theta)) / s.f;
  return std::pow(s.f2, p.l()) * std::pow(s.f, p.k()) * std::sqrt(1.0 + dfdt * dfdt);
}

double volume_over(std::span<const ProfileSample> samples, const FamilyParams& p, double* error) {
  const std::size_t n = samples.empty() ? 0 : samples.size() - 1;
  if (n < 2 || n % 2 != 0) {
    throw InvalidArgument("volume_over: need an even, positive number of intervals");
  }
  const double dt = (samples.back().t - samples.front().t) / static_cast<double>(n);
  auto simpson = [&](std::size_t stride) {
    const std::size_t m = n / stride;
    double acc = volume_integrand(samples[0], p) + volume_integrand(samples[n], p);
    for (std::size_t i = 1; i < m; ++i) {
      acc += (i % 2 == 1 ? 4.0 : 2.0) * volume_integrand(samples[i * stride], p);
    }
    return acc * dt * static_cast<double>(stride) / 3.0;
  };
  const double fine = simpson(1);
  double value = fine;
  double err = 0.0;
  if (n % 4 == 0) {
    const double coarse = simpson(2);
    err = (fine - coarse) / 15.0;
    value = fine + err;
  }
  const double scale = 2.0 * sphere_volume(p.k()) * sphere_volume(p.l());
  if (error) *error = std::abs(err) * scale;
  return value * scale;
}

VolumeReport volume(const ProfileCurve& curve) {
  const FamilyParams& p = curve.params;
  VolumeReport rep;
  rep.vol = volume_over(curve.first_half(), p, &rep.quadrature_error_estimate);
  double worst = 0.0;
  for (int l : clifford_comparison_set(p.n())) {
    const double vc = clifford_volume(p.n(), l);
    rep.clifford.push_back({l, vc});
    worst = std::max(worst, vc);
  }
  rep.yau_ok = rep.vol > worst;
  return rep;
}

YauVerdict yau_check(const FamilyParams& p, const VolumeReport& report) {
  YauVerdict v;
  v.holds = !report.clifford.empty();
  for (const auto& c : report.clifford) {
    const double margin = report.vol - c.volume;
    v.margins.push_back({c.l, c.volume, margin});
    if (!(margin > 0.0)) v.holds = false;
  }
  v.sphere_volume = sphere_volume(p.n());
  v.above_sphere = report.vol > v.sphere_volume;
  return v;
}

}  // namespace cmc

#include "cmc/continuation.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace cmc {

namespace {

double dot(const Vec3& u, const Vec3& v) { return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]; }

double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

Vec3 cross(const Vec3& u, const Vec3& v) {
  return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

Vec3 axpy(double s, const Vec3& v, const Vec3& x) {
  return {x[0] + s * v[0], x[1] + s * v[1], x[2] + s * v[2]};
}

Vec3 negate(const Vec3& v) { return {-v[0], -v[1], -v[2]}; }

ShootingPoint at(const Vec3& x) {
  ShootingPoint pt;
  pt.a = x[0];
  pt.H = x[1];
  pt.T = x[2];
  return pt;
}

// Corrector solve seeded at `x`, constrained to the plane through x normal to d.
ShootingPoint correct(const Vec3& x, const Vec3& d, const FamilyParams& p,
                      const ShootingOptions& opts) {
  return solve(at(x), Plane{x, d}, p, opts);
}

// Least-squares fit of a = c0 + c1 s + c2 s^2; returns c0.
double quadratic_intercept(const std::vector<double>& s, const std::vector<double>& a) {
  std::array<std::array<double, 3>, 3> N{};
  std::array<double, 3> r{};
  for (std::size_t i = 0; i < s.size(); ++i) {
    const std::array<double, 3> phi{1.0, s[i], s[i] * s[i]};
    for (std::size_t u = 0; u < 3; ++u) {
      r[u] += phi[u] * a[i];
      for (std::size_t v = 0; v < 3; ++v) N[u][v] += phi[u] * phi[v];
    }
  }
  // Cramer's rule on the 3x3 normal equations.
  auto det3 = [](const std::array<std::array<double, 3>, 3>& M) {
    return M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
           M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
           M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
  };
  auto M0 = N;
  for (std::size_t u = 0; u < 3; ++u) M0[u][0] = r[u];
  return det3(M0) / det3(N);
}

}  // namespace

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::none: return "none";
    case StopReason::a_floor: return "a_floor";
    case StopReason::T_floor: return "T_floor";
    case StopReason::H_cap: return "H_cap";
    case StopReason::budget: return "budget";
    case StopReason::stalled: return "stalled";
  }
  return "unknown";
}

Vec3 tangent(const ShootingPoint& point, const FamilyParams& p, const ToleranceSpec& tol) {
  const ShootingJacobian J =
      point.jacobian ? *point.jacobian : jacobian(point.a, point.H, point.T, p, tol);
  const Vec3 v = cross(J.grad_F1, J.grad_Theta);
  const double len = norm(v);
  if (!(len >= 1e-10)) {
    throw RankDrop("tangent: grad F1 x grad Theta vanishes at a=" + std::to_string(point.a) +
                   " H=" + std::to_string(point.H));
  }
  return {v[0] / len, v[1] / len, v[2] / len};
}

GammaCurve trace(const ShootingPoint& start, const FamilyParams& p, int direction,
                 const TraceOptions& opts) {
  if (direction != 1 && direction != -1) throw InvalidArgument("trace: direction must be +1 or -1");

  ShootingPoint first = start.jacobian
                            ? start
                            : evaluate_with_jacobian(start.a, start.H, start.T, p, opts.solver.ode);
  Vec3 v = tangent(first, p);
  if (v[0] * direction < 0.0) v = negate(v);

  GammaCurve curve;
  curve.params = p;
  curve.points.push_back(first);
  curve.tangents.push_back(v);
  StopReason& stop = (direction > 0) ? curve.stop_high : curve.stop_low;

  double h = std::clamp(opts.h_init, opts.h_min, opts.h_max);
  while (true) {
    const ShootingPoint& last = curve.points.back();
    if (last.a < opts.a_floor) {
      stop = StopReason::a_floor;
      break;
    }
    if (last.T < opts.T_floor) {
      stop = StopReason::T_floor;
      break;
    }
    if (last.H > opts.H_cap) {
      stop = StopReason::H_cap;
      break;
    }
    if (curve.points.size() >= opts.max_points) {
      stop = StopReason::budget;
      break;
    }

    const Vec3 x = last.coords();
    const Vec3 pred = axpy(h, v, x);
    bool accepted = false;
    ShootingPoint next;
    Vec3 w{};
    try {
      next = correct(pred, v, p, opts.solver);
      w = tangent(next, p);
      if (dot(w, v) < 0.0) w = negate(w);
      const Vec3 shift{next.a - pred[0], next.H - pred[1], next.T - pred[2]};
      // Reject corrections that wander off or turn sharply: likely a jump.
      accepted = norm(shift) <= h && dot(w, v) > 0.8;
    } catch (const Error&) {
      accepted = false;
    }

    if (!accepted) {
      h *= 0.5;
      if (h < opts.h_min) {
        const std::string msg = "trace: step size underflow near a=" + std::to_string(last.a) +
                                " H=" + std::to_string(last.H) + " T=" + std::to_string(last.T);
        throw StallError(msg, std::move(curve));
      }
      continue;
    }

    curve.points.push_back(std::move(next));
    curve.tangents.push_back(w);
    v = w;
    const int iters = curve.points.back().iterations;
    if (iters > opts.slow_iterations) {
      h = std::max(0.5 * h, opts.h_min);
    } else if (iters <= opts.fast_iterations) {
      h = std::min(h * opts.growth, opts.h_max);
    }
  }
  return curve;
}

GammaCurve trace_both(const ShootingPoint& start, const FamilyParams& p,
                      const TraceOptions& opts) {
  std::string stalled;
  auto run = [&](int direction) {
    try {
      return trace(start, p, direction, opts);
    } catch (const StallError& e) {
      stalled += std::string(stalled.empty() ? "" : "; ") + e.what();
      GammaCurve partial = e.partial();
      (direction > 0 ? partial.stop_high : partial.stop_low) = StopReason::stalled;
      return partial;
    }
  };
  GammaCurve low = run(-1);
  GammaCurve high = run(+1);

  GammaCurve joined;
  joined.params = p;
  joined.stop_low = low.stop_low;
  joined.stop_high = high.stop_high;
  joined.stall_note = stalled;
  for (std::size_t i = low.points.size(); i-- > 1;) {
    joined.points.push_back(low.points[i]);
    joined.tangents.push_back(negate(low.tangents[i]));
  }
  joined.points.insert(joined.points.end(), high.points.begin(), high.points.end());
  joined.tangents.insert(joined.tangents.end(), high.tangents.begin(), high.tangents.end());
  return joined;
}

SpecialPoints detect_special(const GammaCurve& curve, const ShootingOptions& opts) {
  const auto& pts = curve.points;
  const FamilyParams& p = curve.params;
  if (pts.size() < 3) throw NotSpanned("detect_special: curve has fewer than 3 points");
  SpecialPoints sp;

  // H = 0 crossing.
  std::size_t i0 = pts.size();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if ((pts[i].H <= 0.0) != (pts[i + 1].H <= 0.0)) {
      i0 = i;
      break;
    }
  }
  if (i0 == pts.size()) throw NotSpanned("detect_special: H does not change sign along the curve");
  {
    const double w = pts[i0].H / (pts[i0].H - pts[i0 + 1].H);
    ShootingPoint guess = at({pts[i0].a + w * (pts[i0 + 1].a - pts[i0].a), 0.0,
                              pts[i0].T + w * (pts[i0 + 1].T - pts[i0].T)});
    const ShootingPoint z = solve(guess, FixH{0.0}, p, opts);
    sp.a_H0 = z.a;
    sp.T_H0 = z.T;
  }

  // H minimum: the tangent's H component turns from negative to non-negative.
  std::size_t im = pts.size();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (curve.tangents[i][1] < 0.0 && curve.tangents[i + 1][1] >= 0.0) {
      im = i;
      break;
    }
  }
  if (im == pts.size()) throw NotSpanned("detect_special: no interior minimum of H on the curve");
  {
    const Vec3 x0 = pts[im].coords();
    const Vec3 x1 = pts[im + 1].coords();
    const Vec3 chord{x1[0] - x0[0], x1[1] - x0[1], x1[2] - x0[2]};
    const double len = norm(chord);
    const Vec3 d{chord[0] / len, chord[1] / len, chord[2] / len};

    auto point_at = [&](double s) { return correct(axpy(s, d, x0), d, p, opts); };
    constexpr double kInvPhi = 0.6180339887498949;
    double lo = 0.0;
    double hi = len;
    double c = hi - kInvPhi * (hi - lo);
    double e = lo + kInvPhi * (hi - lo);
    ShootingPoint pc = point_at(c);
    ShootingPoint pe = point_at(e);
    ShootingPoint best = pts[im].H < pts[im + 1].H ? pts[im] : pts[im + 1];
    for (int iter = 0; iter < 80; ++iter) {
      if (pc.H < best.H) best = pc;
      if (pe.H < best.H) best = pe;
      if (std::abs(pc.H - pe.H) < 1e-8 && hi - lo < 1e-6) break;
      if (pc.H < pe.H) {
        hi = e;
        e = c;
        pe = pc;
        c = hi - kInvPhi * (hi - lo);
        pc = point_at(c);
      } else {
        lo = c;
        c = e;
        pc = pe;
        e = lo + kInvPhi * (hi - lo);
        pe = point_at(e);
      }
    }
    if (pc.H < best.H) best = pc;
    if (pe.H < best.H) best = pe;
    sp.a_Hmin = best.a;
    sp.T_Hmin = best.T;
    sp.H_min = best.H;
  }

  // Collapse limit a*: a(T) = a* + c1 T + c2 T^2 fitted on 10 points spread
  // over the tail T in [T_last, 3 T_last], then extrapolated to T = 0.
  constexpr std::size_t kFit = 10;
  {
    const double t_last = pts.back().T;
    std::size_t first = pts.size() - 1;
    while (first > i0 + 1 && pts[first - 1].T <= 3.0 * t_last) --first;
    const std::size_t available = pts.size() - first;
    if (available < kFit) {
      throw NotSpanned("detect_special: too few points toward the collapse end to bracket a*");
    }
    std::vector<double> ts;
    std::vector<double> as;
    for (std::size_t j = 0; j < kFit; ++j) {
      const std::size_t i = first + j * (available - 1) / (kFit - 1);
      ts.push_back(pts[i].T / t_last);
      as.push_back(pts[i].a);
    }
    const double a_last = pts.back().a;
    const double a_extrap = quadratic_intercept(ts, as);
    sp.a_star_bracket = {std::min(a_last, a_extrap), std::max(a_last, a_extrap)};
  }

  const auto smallest =
      std::min_element(pts.begin(), pts.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
  sp.endpoint_a_to_0 = {smallest->a, smallest->H, smallest->T};
  return sp;
}

bool ordering_holds(const SpecialPoints& s) {
  return 0.0 < s.a_Hmin && s.a_Hmin < s.a_H0 && s.a_H0 < s.a_star_bracket.first &&
         s.a_star_bracket.first < s.a_star_bracket.second && s.a_star_bracket.second < 1.0 &&
         s.H_min < 0.0;
}

GammaCurve trace_family(const FamilyParams& p, const TraceOptions& opts, Interval seed_range) {
  const ShootingPoint seed = find_seed(p, 0.0, seed_range, opts.solver);
  GammaCurve curve = trace_both(seed, p, opts);
  curve.special = detect_special(curve, opts.solver);
  return curve;
}

}  // namespace cmc

#include "cmc/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "cmc/errors.hpp"
#include "cmc/flow.hpp"

namespace cmc {

namespace {

constexpr double kPi = std::numbers::pi;

template <std::size_t M>
using Mat = std::array<std::array<double, M>, M>;

// Gaussian elimination with partial pivoting; returns false if singular.
template <std::size_t M>
bool solve_linear(Mat<M> A, std::array<double, M> b, std::array<double, M>& x) {
  for (std::size_t col = 0; col < M; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < M; ++r) {
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    }
    if (A[piv][col] == 0.0) return false;
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < M; ++r) {
      const double m = A[r][col] / A[col][col];
      for (std::size_t c = col; c < M; ++c) A[r][c] -= m * A[col][c];
      b[r] -= m * b[col];
    }
  }
  for (std::size_t i = M; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < M; ++c) s -= A[i][c] * x[c];
    x[i] = s / A[i][i];
  }
  return true;
}

template <std::size_t M>
double norm1(const Mat<M>& A) {
  double best = 0.0;
  for (std::size_t c = 0; c < M; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < M; ++r) s += std::abs(A[r][c]);
    best = std::max(best, s);
  }
  return best;
}

// 1-norm condition number; infinity when singular.
template <std::size_t M>
double condition_number(const Mat<M>& A) {
  Mat<M> inv{};
  for (std::size_t c = 0; c < M; ++c) {
    std::array<double, M> e{};
    e[c] = 1.0;
    std::array<double, M> col{};
    if (!solve_linear(A, e, col)) return std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < M; ++r) inv[r][c] = col[r];
  }
  return norm1(A) * norm1(inv);
}

double dot(const Vec3& u, const Vec3& v) { return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]; }

struct SliceView {
  const Slice& slice;

  // Index of the frozen coordinate, or -1 for a plane.
  int frozen() const {
    if (std::holds_alternative<FixA>(slice)) return 0;
    if (std::holds_alternative<FixH>(slice)) return 1;
    if (std::holds_alternative<FixT>(slice)) return 2;
    return -1;
  }

  double frozen_value() const {
    return std::visit(
        [](const auto& s) -> double {
          if constexpr (requires { s.value; }) {
            return s.value;
          } else {
            return 0.0;
          }
        },
        slice);
  }

  double plane_residual(const Vec3& x) const {
    if (const auto* pl = std::get_if<Plane>(&slice)) {
      return dot(pl->normal, {x[0] - pl->origin[0], x[1] - pl->origin[1], x[2] - pl->origin[2]});
    }
    return 0.0;
  }
};

double merit(const ShootingPoint& pt, double plane_res) {
  return std::max({std::abs(pt.res_f1), std::abs(pt.res_theta), std::abs(plane_res)});
}

std::string describe(const Vec3& x) {
  std::ostringstream os;
  os.precision(10);
  os << "(a=" << x[0] << ", H=" << x[1] << ", T=" << x[2] << ")";
  return os.str();
}

}  // namespace

double ShootingPoint::residual_norm() const {
  return std::max(std::abs(res_f1), std::abs(res_theta));
}

ShootingPoint evaluate(double a, double H, double T, const FamilyParams& p,
                       const ToleranceSpec& tol) {
  if (!(a > 0.0 && a < 1.0)) throw NonAdmissible("evaluate: a must lie in (0,1), got " + describe({a, H, T}));
  if (!(T > 0.0)) throw NonAdmissible("evaluate: T must be positive, got " + describe({a, H, T}));
  ShootingPoint pt{.a = a, .H = H, .T = T};
  try {
    const ProfileRun run = integrate(ProfileState{0.0, a, 0.0}, p, H, T, tol);
    pt.res_f1 = run.final.f1;
    pt.res_theta = run.final.theta - kPi;
  } catch (const DomainBreach& e) {
    throw NonAdmissible(std::string("evaluate ") + describe({a, H, T}) + ": " + e.what());
  } catch (const StepSizeUnderflow& e) {
    throw NonAdmissible(std::string("evaluate ") + describe({a, H, T}) + ": " + e.what());
  }
  return pt;
}

ShootingPoint evaluate_with_jacobian(double a, double H, double T, const FamilyParams& p,
                                     const ToleranceSpec& tol) {
  if (!(a > 0.0 && a < 1.0) || !(T > 0.0)) {
    throw NonAdmissible("jacobian: point outside a in (0,1), T > 0: " + describe({a, H, T}));
  }
  ShootingPoint pt{.a = a, .H = H, .T = T};
  try {
    const FlowJet jet = integrate_jet(a, p, H, T, tol);
    pt.res_f1 = jet.base.f1;
    pt.res_theta = jet.base.theta - kPi;
    pt.jacobian = ShootingJacobian{{jet.d_a[0], jet.d_H[0], std::cos(jet.base.theta)},
                                   {jet.d_a[2], jet.d_H[2], jet.K}};
  } catch (const DomainBreach& e) {
    throw NonAdmissible(std::string("jacobian ") + describe({a, H, T}) + ": " + e.what());
  } catch (const StepSizeUnderflow& e) {
    throw NonAdmissible(std::string("jacobian ") + describe({a, H, T}) + ": " + e.what());
  }
  return pt;
}

ShootingJacobian jacobian(double a, double H, double T, const FamilyParams& p,
                          const ToleranceSpec& tol) {
  return *evaluate_with_jacobian(a, H, T, p, tol).jacobian;
}

ShootingPoint solve(const ShootingPoint& guess, const Slice& slice, const FamilyParams& p,
                    const ShootingOptions& opts) {
  const SliceView view{slice};
  Vec3 x = guess.coords();
  if (const int fz = view.frozen(); fz >= 0) x[static_cast<std::size_t>(fz)] = view.frozen_value();

  double best = std::numeric_limits<double>::infinity();
  int stagnant = 0;
  for (int it = 0;; ++it) {
    ShootingPoint cur = evaluate_with_jacobian(x[0], x[1], x[2], p, opts.ode);
    const double plane_res = view.plane_residual(x);
    if (cur.residual_norm() < opts.newton_tol && std::abs(plane_res) < 1e3 * opts.newton_tol) {
      cur.iterations = it;
      return cur;
    }
    // Residual stuck at the integration noise floor: further steps are futile.
    if (cur.residual_norm() < 0.5 * best) {
      best = cur.residual_norm();
      stagnant = 0;
    } else if (++stagnant >= 4) {
      throw NoConvergence("solve: residual stagnated at " + std::to_string(cur.residual_norm()) +
                          " near " + describe(x));
    }
    if (it >= opts.max_iter) {
      throw NoConvergence("solve: no convergence after " + std::to_string(opts.max_iter) +
                          " iterations at " + describe(x) +
                          ", residual=" + std::to_string(cur.residual_norm()));
    }

    const ShootingJacobian& J = *cur.jacobian;
    Vec3 dx{};
    if (const int fz = view.frozen(); fz >= 0) {
      std::array<std::size_t, 2> free{};
      for (std::size_t i = 0, j = 0; i < 3; ++i) {
        if (static_cast<int>(i) != fz) free[j++] = i;
      }
      const Mat<2> A{{{J.grad_F1[free[0]], J.grad_F1[free[1]]},
                      {J.grad_Theta[free[0]], J.grad_Theta[free[1]]}}};
      const double cond = condition_number(A);
      if (!(cond <= opts.max_condition)) {
        throw SingularJacobian("solve: slice Jacobian condition " + std::to_string(cond) +
                               " at " + describe(x));
      }
      std::array<double, 2> step{};
      solve_linear(A, {-cur.res_f1, -cur.res_theta}, step);
      dx[free[0]] = step[0];
      dx[free[1]] = step[1];
    } else {
      const Plane& pl = std::get<Plane>(slice);
      const Mat<3> A{{J.grad_F1, J.grad_Theta, pl.normal}};
      const double cond = condition_number(A);
      if (!(cond <= opts.max_condition)) {
        throw SingularJacobian("solve: bordered Jacobian condition " + std::to_string(cond) +
                               " at " + describe(x));
      }
      solve_linear(A, {-cur.res_f1, -cur.res_theta, -plane_res}, dx);
    }

    // Step halving until the residual decreases.
    const double m0 = merit(cur, plane_res);
    double lambda = 1.0;
    Vec3 accepted = x;
    bool improved = false;
    for (int halving = 0; halving <= opts.max_halvings; ++halving, lambda *= 0.5) {
      const Vec3 trial{x[0] + lambda * dx[0], x[1] + lambda * dx[1], x[2] + lambda * dx[2]};
      accepted = trial;
      try {
        const ShootingPoint tp = evaluate(trial[0], trial[1], trial[2], p, opts.ode);
        if (merit(tp, view.plane_residual(trial)) < m0) {
          improved = true;
          break;
        }
      } catch (const NonAdmissible&) {
        if (halving == opts.max_halvings) {
          throw NoConvergence("solve: every damped step left the admissible set from " +
                              describe(x));
        }
      }
    }
    (void)improved;
    x = accepted;
  }
}

std::optional<double> seed_residual(double a, const FamilyParams& p, double H,
                                    const ToleranceSpec& tol, double t_max) {
  try {
    const auto hit = integrate_until_theta(a, p, H, kPi, t_max, tol);
    if (!hit) return std::nullopt;
    return hit->state.f1;
  } catch (const DomainBreach&) {
    return std::nullopt;
  } catch (const StepSizeUnderflow&) {
    return std::nullopt;
  }
}

ShootingPoint find_seed(const FamilyParams& p, double H, Interval a_range,
                        const ShootingOptions& opts, double resolution) {
  if (!(a_range.lo > 0.0 && a_range.hi < 1.0 && a_range.lo < a_range.hi)) {
    throw InvalidArgument("find_seed: a_range must be an increasing subinterval of (0,1)");
  }
  const auto count = static_cast<std::size_t>(std::ceil((a_range.hi - a_range.lo) / resolution));
  std::vector<double> as(count + 1);
  std::vector<std::optional<double>> psi(count + 1);
  for (std::size_t i = 0; i <= count; ++i) {
    as[i] = std::min(a_range.lo + resolution * static_cast<double>(i), a_range.hi);
    psi[i] = seed_residual(as[i], p, H, opts.ode);
  }

  std::string failures;
  for (std::size_t i = 0; i < count; ++i) {
    if (!psi[i] || !psi[i + 1] || (*psi[i] > 0.0) == (*psi[i + 1] > 0.0)) continue;
    double lo = as[i];
    double hi = as[i + 1];
    double psi_lo = *psi[i];
    bool defined = true;
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      const auto pm = seed_residual(mid, p, H, opts.ode);
      if (!pm) {
        defined = false;
        break;
      }
      if ((*pm > 0.0) == (psi_lo > 0.0)) {
        lo = mid;
        psi_lo = *pm;
      } else {
        hi = mid;
      }
    }
    if (!defined) continue;
    const double a0 = 0.5 * (lo + hi);
    const auto hit = integrate_until_theta(a0, p, H, kPi, 8.0, opts.ode);
    if (!hit) continue;
    try {
      return solve(ShootingPoint{.a = a0, .H = H, .T = hit->t}, FixH{H}, p, opts);
    } catch (const Error& e) {
      failures += std::string(" [a~") + std::to_string(a0) + ": " + e.what() + "]";
    }
  }
  throw NoBracket("find_seed: no convergent sign change of psi on [" + std::to_string(a_range.lo) +
                  ", " + std::to_string(a_range.hi) + "]" + failures);
}

SymmetryReport symmetry_residuals(const ShootingPoint& point, const FamilyParams& p,
                                  std::size_t grid, const ToleranceSpec& tol) {
  // 2*grid intervals over [0, 2T], so t = T +- j T / grid are all samples.
  const ProfileRun run = integrate(ProfileState{0.0, point.a, 0.0}, p, point.H, 2.0 * point.T,
                                   tol, 2 * grid);
  SymmetryReport rep{};
  const ProfileState& end = run.final;
  rep.closure_f1 = std::abs(end.f1);
  rep.closure_f2 = std::abs(end.f2 - point.a);
  rep.closure_theta = std::abs(end.theta - 2.0 * kPi);
  for (std::size_t j = 0; j <= grid; ++j) {
    const ProfileState& plus = run.samples[grid + j].state;
    const ProfileState& minus = run.samples[grid - j].state;
    rep.max_odd_f1 = std::max(rep.max_odd_f1, std::abs(plus.f1 + minus.f1));
    rep.max_even_f2 = std::max(rep.max_even_f2, std::abs(plus.f2 - minus.f2));
  }
  return rep;
}

}  // namespace cmc

#pragma once

// Adaptive Dormand-Prince 5(4) integrator with the 4th-order continuous
// extension. Header-only and templated on the state dimension so the base
// profile system (3) and the augmented sensitivity systems (6, 9) share it.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "cmc/errors.hpp"

namespace cmc {

struct ToleranceSpec {
  double rtol = 1e-10;
  double atol = 1e-10;
  double h_init = 1e-3;
  double h_min = 1e-14;
  std::size_t max_steps = 2'000'000;
};

template <std::size_t N>
using Vec = std::array<double, N>;

/// One accepted step together with its dense-output coefficients.
template <std::size_t N>
struct DenseStep {
  double t0 = 0.0;
  double h = 0.0;
  Vec<N> y0{};
  Vec<N> y1{};
  std::array<Vec<N>, 5> rcont{};

  double t1() const { return t0 + h; }

  Vec<N> operator()(double t) const {
    const double s = (t - t0) / h;
    const double s1 = 1.0 - s;
    Vec<N> y{};
    for (std::size_t i = 0; i < N; ++i) {
      y[i] = rcont[0][i] +
             s * (rcont[1][i] + s1 * (rcont[2][i] + s * (rcont[3][i] + s1 * rcont[4][i])));
    }
    return y;
  }

  double component(std::size_t i, double t) const {
    const double s = (t - t0) / h;
    const double s1 = 1.0 - s;
    return rcont[0][i] +
           s * (rcont[1][i] + s1 * (rcont[2][i] + s * (rcont[3][i] + s1 * rcont[4][i])));
  }
};

namespace dp {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                        d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                        d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
}  // namespace dp

/// Stateful stepper: remembers the last accepted step size so that a run
/// split into consecutive segments (sampling on a grid) keeps its rhythm.
///
/// `Rhs` is callable as `rhs(const Vec<N>& y, Vec<N>& dydt)` (the systems
/// here are autonomous). A DomainBreach thrown from a stage evaluation rejects
/// the step; only a breach at the step's initial state propagates.
template <std::size_t N, class Rhs>
class DormandPrince {
 public:
  DormandPrince(Rhs rhs, ToleranceSpec tol) : rhs_(std::move(rhs)), tol_(tol), h_(tol.h_init) {}

  std::size_t steps_accepted() const noexcept { return accepted_; }
  std::size_t steps_rejected() const noexcept { return rejected_; }

  /// Advances y from t to exactly t_end. `observer(const DenseStep<N>&)` is
  /// called after each accepted step; returning false stops the run early and
  /// the current step's end state is returned (t is updated accordingly).
  template <class Observer>
  Vec<N> advance(double& t, Vec<N> y, double t_end, Observer&& observer) {
    if (!(t_end >= t)) throw InvalidArgument("integrate: t_end must not precede t0");
    if (t_end == t) return y;

    Vec<N> k1{};
    rhs_(y, k1);  // a breach here is genuine and propagates

    DenseStep<N> step;
    Vec<N> k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, ytmp{}, ynew{};
    while (t < t_end) {
      if (accepted_ + rejected_ >= tol_.max_steps) {
        throw StepSizeUnderflow("integrate: step budget exhausted at t=" + std::to_string(t));
      }
      if (h_ < tol_.h_min) {
        throw StepSizeUnderflow("integrate: step size underflow at t=" + std::to_string(t));
      }
      const double remaining = t_end - t;
      double h = h_;
      bool last = false;
      if (h >= remaining || remaining - h < 1e-10 * remaining) {
        h = remaining;
        last = true;
      }

      bool stage_ok = true;
      try {
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * dp::a21 * k1[i];
        rhs_(ytmp, k2);
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (dp::a31 * k1[i] + dp::a32 * k2[i]);
        rhs_(ytmp, k3);
        for (std::size_t i = 0; i < N; ++i)
          ytmp[i] = y[i] + h * (dp::a41 * k1[i] + dp::a42 * k2[i] + dp::a43 * k3[i]);
        rhs_(ytmp, k4);
        for (std::size_t i = 0; i < N; ++i)
          ytmp[i] = y[i] + h * (dp::a51 * k1[i] + dp::a52 * k2[i] + dp::a53 * k3[i] + dp::a54 * k4[i]);
        rhs_(ytmp, k5);
        for (std::size_t i = 0; i < N; ++i)
          ytmp[i] = y[i] + h * (dp::a61 * k1[i] + dp::a62 * k2[i] + dp::a63 * k3[i] +
                                dp::a64 * k4[i] + dp::a65 * k5[i]);
        rhs_(ytmp, k6);
        for (std::size_t i = 0; i < N; ++i)
          ynew[i] = y[i] + h * (dp::a71 * k1[i] + dp::a73 * k3[i] + dp::a74 * k4[i] +
                                dp::a75 * k5[i] + dp::a76 * k6[i]);
        rhs_(ynew, k7);
      } catch (const DomainBreach&) {
        stage_ok = false;
      }

      if (!stage_ok) {
        ++rejected_;
        h_ = 0.25 * h;
        continue;
      }

      double err = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const double e = h * (dp::e1 * k1[i] + dp::e3 * k3[i] + dp::e4 * k4[i] + dp::e5 * k5[i] +
                              dp::e6 * k6[i] + dp::e7 * k7[i]);
        const double sc = tol_.atol + tol_.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        err += (e / sc) * (e / sc);
      }
      err = std::sqrt(err / static_cast<double>(N));
      if (!std::isfinite(err)) {
        ++rejected_;
        h_ = 0.25 * h;
        continue;
      }

      const double factor = std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
      if (err > 1.0) {
        ++rejected_;
        h_ = h * std::max(factor, 0.2);
        continue;
      }

      step.t0 = t;
      step.h = h;
      step.y0 = y;
      step.y1 = ynew;
      for (std::size_t i = 0; i < N; ++i) {
        const double ydiff = ynew[i] - y[i];
        const double bspl = h * k1[i] - ydiff;
        step.rcont[0][i] = y[i];
        step.rcont[1][i] = ydiff;
        step.rcont[2][i] = bspl;
        step.rcont[3][i] = ydiff - h * k7[i] - bspl;
        step.rcont[4][i] = h * (dp::d1 * k1[i] + dp::d3 * k3[i] + dp::d4 * k4[i] + dp::d5 * k5[i] +
                                dp::d6 * k6[i] + dp::d7 * k7[i]);
      }

      ++accepted_;
      t = last ? t_end : t + h;
      y = ynew;
      k1 = k7;
      // Keep the controller's proposal even when the last step was clipped.
      if (!last || factor < 1.0) h_ = h * factor;

      if (!observer(step)) return y;
    }
    return y;
  }

  Vec<N> advance(double& t, Vec<N> y, double t_end) {
    return advance(t, y, t_end, [](const DenseStep<N>&) { return true; });
  }

 private:
  Rhs rhs_;
  ToleranceSpec tol_;
  double h_;
  std::size_t accepted_ = 0;
  std::size_t rejected_ = 0;
};

}  // namespace cmc

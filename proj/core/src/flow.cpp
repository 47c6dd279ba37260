#include "cmc/flow.hpp"

#include <cmath>

#include "cmc/errors.hpp"

namespace cmc {

namespace {

ProfileState to_state(const Vec<3>& y) { return {y[0], y[1], y[2]}; }

auto base_rhs(const FamilyParams& p, double H) {
  return [p, H](const Vec<3>& y, Vec<3>& dy) {
    const ProfileRate r = vector_field(to_state(y), p, H);
    dy = {r.df1, r.df2, r.dtheta};
  };
}

}  // namespace

ProfileRun integrate_from(double t0, const ProfileState& initial, const FamilyParams& p, double H,
                          double t_end, const ToleranceSpec& tol, std::size_t n_samples) {
  if (!(t_end >= t0)) throw InvalidArgument("integrate: t_end must not precede t0");
  (void)derived_scalars(initial);

  DormandPrince<3, decltype(base_rhs(p, H))> stepper(base_rhs(p, H), tol);
  ProfileRun run;
  Vec<3> y{initial.f1, initial.f2, initial.theta};
  double t = t0;

  if (n_samples == 0) {
    y = stepper.advance(t, y, t_end);
  } else {
    run.samples.reserve(n_samples + 1);
    run.samples.push_back({t0, initial});
    const double span = t_end - t0;
    for (std::size_t i = 1; i <= n_samples; ++i) {
      const double ti = (i == n_samples) ? t_end : t0 + span * static_cast<double>(i) / n_samples;
      y = stepper.advance(t, y, ti);
      t = ti;
      run.samples.push_back({ti, to_state(y)});
    }
  }
  run.final = to_state(y);
  run.steps = stepper.steps_accepted();
  return run;
}

ProfileRun integrate(const ProfileState& initial, const FamilyParams& p, double H, double t_end,
                     const ToleranceSpec& tol, std::size_t n_samples) {
  return integrate_from(0.0, initial, p, H, t_end, tol, n_samples);
}

SensitivityState integrate(const SensitivityState& initial, const FamilyParams& p, double H,
                           double t_end, const ToleranceSpec& tol) {
  const SensitivityTag tag = initial.tag;
  auto rhs = [p, H, tag](const Vec<6>& y, Vec<6>& dy) {
    SensitivityState s{{y[0], y[1], y[2]}, y[3], y[4], y[5], tag};
    const SensitivityRate r = variational_field(s, p, H);
    dy = {r.base.df1, r.base.df2, r.base.dtheta, r.ds_f1, r.ds_f2, r.ds_theta};
  };
  DormandPrince<6, decltype(rhs)> stepper(rhs, tol);
  double t = 0.0;
  const Vec<6> y = stepper.advance(t,
                                   {initial.base.f1, initial.base.f2, initial.base.theta,
                                    initial.s_f1, initial.s_f2, initial.s_theta},
                                   t_end);
  return {{y[0], y[1], y[2]}, y[3], y[4], y[5], tag};
}

FlowJet integrate_jet(double a, const FamilyParams& p, double H, double t_end,
                      const ToleranceSpec& tol) {
  auto rhs = [p, H](const Vec<9>& y, Vec<9>& dy) {
    const ProfileState s{y[0], y[1], y[2]};
    const TurningRateJet jet = turning_rate_jet(s, p, H);
    const double c = std::cos(s.theta);
    const double sn = std::sin(s.theta);
    dy[0] = c;
    dy[1] = sn;
    dy[2] = jet.K;
    dy[3] = -y[5] * sn;
    dy[4] = y[5] * c;
    dy[5] = jet.d_f1 * y[3] + jet.d_f2 * y[4] + jet.d_theta * y[5];
    dy[6] = -y[8] * sn;
    dy[7] = y[8] * c;
    dy[8] = jet.d_f1 * y[6] + jet.d_f2 * y[7] + jet.d_theta * y[8] + jet.d_H;
  };
  DormandPrince<9, decltype(rhs)> stepper(rhs, tol);
  double t = 0.0;
  const Vec<9> y = stepper.advance(t, {0.0, a, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0}, t_end);
  FlowJet out;
  out.base = {y[0], y[1], y[2]};
  out.d_a = {y[3], y[4], y[5]};
  out.d_H = {y[6], y[7], y[8]};
  out.K = turning_rate(out.base, p, H);
  return out;
}

std::optional<ThetaEvent> integrate_until_theta(double a, const FamilyParams& p, double H,
                                                double target, double t_max,
                                                const ToleranceSpec& tol, double t_tol) {
  DormandPrince<3, decltype(base_rhs(p, H))> stepper(base_rhs(p, H), tol);
  std::optional<ThetaEvent> hit;
  double t = 0.0;
  stepper.advance(t, {0.0, a, 0.0}, t_max, [&](const DenseStep<3>& step) {
    if (!(step.y0[2] < target && step.y1[2] >= target)) return true;
    double lo = step.t0;
    double hi = step.t1();
    while (hi - lo > t_tol) {
      const double mid = 0.5 * (lo + hi);
      if (step.component(2, mid) < target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double te = 0.5 * (lo + hi);
    const Vec<3> ye = step(te);
    hit = ThetaEvent{te, {ye[0], ye[1], ye[2]}};
    return false;
  });
  return hit;
}

}  // namespace cmc

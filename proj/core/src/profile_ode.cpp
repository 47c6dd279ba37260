#include "cmc/profile_ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "cmc/errors.hpp"

namespace cmc {

namespace {

void check_domain(const ProfileState& s, double f_sq) {
  if (!(s.f2 > kDomainEpsilon) || !(f_sq > kDomainEpsilon)) {
    throw DomainBreach("profile state left the admissible set: f1=" + std::to_string(s.f1) +
                       " f2=" + std::to_string(s.f2));
  }
}

// Finite-difference weights for the first derivative at x0 on the nodes xs
// (Fornberg's recursion, derivative order 1).
template <std::size_t M>
std::array<double, M> first_derivative_weights(const std::array<double, M>& xs, double x0) {
  std::array<std::array<double, 2>, M> c{};
  double c1 = 1.0;
  double c4 = xs[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < M; ++i) {
    const std::size_t mn = std::min<std::size_t>(i, 1);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k) {
          c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k) {
        c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
      }
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::array<double, M> w{};
  for (std::size_t i = 0; i < M; ++i) w[i] = c[i][1];
  return w;
}

}  // namespace

DerivedScalars derived_scalars_unchecked(const ProfileState& s) noexcept {
  const double f_sq = 1.0 - s.f1 * s.f1 - s.f2 * s.f2;
  const double g = s.f2 * std::cos(s.theta) - s.f1 * std::sin(s.theta);
  return {std::sqrt(std::max(f_sq, 0.0)), g, std::sqrt(std::max(1.0 - g * g, 0.0))};
}

DerivedScalars derived_scalars(const ProfileState& s) {
  const double f_sq = 1.0 - s.f1 * s.f1 - s.f2 * s.f2;
  check_domain(s, f_sq);
  return derived_scalars_unchecked(s);
}

double turning_rate(const ProfileState& s, const FamilyParams& p, double H) {
  const double f_sq = 1.0 - s.f1 * s.f1 - s.f2 * s.f2;
  check_domain(s, f_sq);
  const double c = std::cos(s.theta);
  const double sn = std::sin(s.theta);
  const double g = s.f2 * c - s.f1 * sn;
  const double h_sq = 1.0 - g * g;
  const double h = std::sqrt(h_sq);
  const double n = p.n();
  const double bracket = n * s.f1 * s.f2 * sn + n * H * s.f2 * h - n * s.f2 * s.f2 * c + p.l() * c;
  return h_sq / (s.f2 * f_sq) * bracket;
}

ProfileRate vector_field(const ProfileState& s, const FamilyParams& p, double H) {
  return {std::cos(s.theta), std::sin(s.theta), turning_rate(s, p, H)};
}

TurningRateJet turning_rate_jet(const ProfileState& s, const FamilyParams& p, double H) {
  const double f1 = s.f1;
  const double f2 = s.f2;
  const double F = 1.0 - f1 * f1 - f2 * f2;  // f^2
  check_domain(s, F);
  const double c = std::cos(s.theta);
  const double sn = std::sin(s.theta);
  const double g = f2 * c - f1 * sn;
  const double Q = 1.0 - g * g;  // h^2
  const double h = std::sqrt(Q);
  if (!(h > kDomainEpsilon)) throw DomainBreach("turning_rate_jet: h vanished");
  const double n = p.n();
  const double l = p.l();

  const double g_f1 = -sn;
  const double g_f2 = c;
  const double g_th = -f2 * sn - f1 * c;
  const double h_f1 = -g * g_f1 / h;
  const double h_f2 = -g * g_f2 / h;
  const double h_th = -g * g_th / h;

  // K = P * B with P = Q / (f2 F).
  const double P = Q / (f2 * F);
  const double B = n * f1 * f2 * sn + n * H * f2 * h - n * f2 * f2 * c + l * c;

  const double P_f1 = P * (-2.0 * g * g_f1 / Q + 2.0 * f1 / F);
  const double P_f2 = P * (-2.0 * g * g_f2 / Q - 1.0 / f2 + 2.0 * f2 / F);
  const double P_th = P * (-2.0 * g * g_th / Q);

  const double B_f1 = n * f2 * sn + n * H * f2 * h_f1;
  const double B_f2 = n * f1 * sn + n * H * (h + f2 * h_f2) - 2.0 * n * f2 * c;
  const double B_th = n * f1 * f2 * c + n * H * f2 * h_th + n * f2 * f2 * sn - l * sn;
  const double B_H = n * f2 * h;

  return {P * B, P_f1 * B + P * B_f1, P_f2 * B + P * B_f2, P_th * B + P * B_th, P * B_H};
}

SensitivityState SensitivityState::initial(double a, SensitivityTag tag) {
  SensitivityState s;
  s.base = {0.0, a, 0.0};
  s.tag = tag;
  s.s_f2 = (tag == SensitivityTag::wrt_a) ? 1.0 : 0.0;
  return s;
}

SensitivityRate variational_field(const SensitivityState& s, const FamilyParams& p, double H) {
  const TurningRateJet jet = turning_rate_jet(s.base, p, H);
  const double c = std::cos(s.base.theta);
  const double sn = std::sin(s.base.theta);
  double ds_theta = jet.d_f1 * s.s_f1 + jet.d_f2 * s.s_f2 + jet.d_theta * s.s_theta;
  if (s.tag == SensitivityTag::wrt_H) ds_theta += jet.d_H;
  return {{c, sn, jet.K}, -s.s_theta * sn, s.s_theta * c, ds_theta};
}

CurvatureDiagnostics curvature_diagnostics(const ProfileState& s, double kappa1,
                                           const FamilyParams& p) {
  const DerivedScalars d = derived_scalars_unchecked(s);
  const double c = std::cos(s.theta);
  const double sn = std::sin(s.theta);
  const double kappa2 = -c / s.f2;
  const double ffp = -(s.f1 * c + s.f2 * sn);  // f f'
  const double n = p.n();
  const double nH = (n * d.g + kappa1 + p.l() * kappa2) / d.h -
                    kappa1 * ffp * ffp / (d.h * d.h * d.h);
  return {kappa1, kappa2, d.g, d.h, d.f, nH / n};
}

double curvature_residual(std::span<const TrajectorySample> samples, const FamilyParams& p,
                          double H) {
  constexpr std::size_t kStencil = 7;
  if (samples.size() < kStencil) {
    throw InvalidArgument("curvature_residual: need at least 7 samples");
  }
  double worst = 0.0;
  const std::size_t m = samples.size();
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t first = std::min(i >= 3 ? i - 3 : 0, m - kStencil);
    std::array<double, kStencil> ts{};
    for (std::size_t j = 0; j < kStencil; ++j) ts[j] = samples[first + j].t;
    const auto w = first_derivative_weights(ts, samples[i].t);
    double kappa1 = 0.0;
    for (std::size_t j = 0; j < kStencil; ++j) kappa1 += w[j] * samples[first + j].state.theta;
    const auto diag = curvature_diagnostics(samples[i].state, kappa1, p);
    worst = std::max(worst, std::abs(diag.H_reconstructed - H));
  }
  return worst;
}

std::vector<double> gauss_map(const ProfileState& s, std::span<const double> y,
                              std::span<const double> z, const FamilyParams& p) {
  if (y.size() != static_cast<std::size_t>(p.k() + 1) ||
      z.size() != static_cast<std::size_t>(p.l() + 1)) {
    throw InvalidArgument("gauss_map: y must lie in R^{k+1} and z in R^{l+1}");
  }
  const DerivedScalars d = derived_scalars(s);
  if (!(d.h > kDomainEpsilon)) throw DomainBreach("gauss_map: h vanished");
  const double c = std::cos(s.theta);
  const double sn = std::sin(s.theta);
  std::vector<double> xi;
  xi.reserve(y.size() + z.size() + 1);
  for (double yi : y) xi.push_back(-d.g * d.f * yi / d.h);
  for (double zi : z) xi.push_back((-d.g * s.f2 + c) * zi / d.h);
  xi.push_back((-d.g * s.f1 - sn) / d.h);
  return xi;
}

}  // namespace cmc

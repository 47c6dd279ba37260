#include <cmc/errors.hpp>
#include <cmc/geometry.hpp>
#include <cmc/shooting.hpp>

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace cmc;
using std::numbers::pi;

namespace {

const FamilyParams p31 = FamilyParams::from_nl(3, 1);
const FamilyParams p52 = FamilyParams::from_nl(5, 2);

const ProfileCurve& q0_curve() {
  static const ProfileCurve c = reconstruct(find_seed(p31, 0.0, {0.05, 0.5}), p31);
  return c;
}

std::vector<double> random_unit(std::mt19937& rng, int dim) {
  std::normal_distribution<double> g;
  std::vector<double> v(dim);
  double n2 = 0.0;
  for (auto& x : v) {
    x = g(rng);
    n2 += x * x;
  }
  for (auto& x : v) x /= std::sqrt(n2);
  return v;
}

}  // namespace

TEST_CASE("reconstructed minimal torus profile") {
  const auto& c = q0_curve();
  const auto& s = c.samples;
  REQUIRE(s.size() == 2 * c.half_intervals + 1);
  CHECK(s.front().t == 0.0);
  CHECK(s.front().f1 == 0.0);
  CHECK(s.front().f2 == doctest::Approx(c.point.a));
  CHECK(s.back().t == doctest::Approx(2 * 1.15925).epsilon(1e-5));
  CHECK(std::abs(s.back().f1 - s.front().f1) < 1e-6);
  CHECK(std::abs(s.back().f2 - s.front().f2) < 1e-6);
  CHECK(std::abs(s.back().theta - 2 * pi) < 1e-6);
  CHECK(c.reflection_deviation < 1e-7);
  const auto& mid = s[c.half_intervals];
  CHECK(std::abs(mid.f1) < 1e-8);
  CHECK(std::abs(mid.theta - pi) < 1e-8);
  CHECK(c.first_half().size() == c.half_intervals + 1);
  for (const auto& x : s) {
    CHECK(x.f2 > 0.0);
    CHECK(x.f1 * x.f1 + x.f2 * x.f2 < 1.0);
  }
  CHECK(check_embedded(c).embedded);
}

TEST_CASE("reconstruct rounds the grid and rejects non-solutions") {
  const auto q = find_seed(p31, 0.0, {0.05, 0.5});
  const auto c = reconstruct(q, p31, 101);
  CHECK(c.half_intervals % 4 == 0);
  CHECK(c.half_intervals >= 101);
  CHECK_THROWS_AS(reconstruct({.a = 1.5, .H = 0.0, .T = 1.0}, p31), NonAdmissible);
}

TEST_CASE("simple closed polygon test") {
  using P = std::array<double, 2>;
  const std::vector<P> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(check_simple_closed(square).embedded);

  // Figure eight: two loops meeting at the origin.
  std::vector<P> eight;
  for (int i = 0; i < 200; ++i) {
    const double t = 2 * pi * i / 200;
    eight.push_back({std::sin(t), std::sin(t) * std::cos(t)});
  }
  const auto v = check_simple_closed(eight);
  CHECK_FALSE(v.embedded);
  REQUIRE(v.crossing);
  CHECK(v.crossing->first != v.crossing->second);

  const std::vector<P> bowtie{{0, 0}, {1, 1}, {1, 0}, {0, 1}};
  CHECK_FALSE(check_simple_closed(bowtie).embedded);

  std::vector<P> circle;
  for (int i = 0; i < 1000; ++i) {
    const double t = 2 * pi * i / 1000;
    circle.push_back({std::cos(t), 0.5 + 0.3 * std::sin(t)});
  }
  CHECK(check_simple_closed(circle).embedded);
}

TEST_CASE("immersion points lie on the unit sphere") {
  std::mt19937 rng(23);
  const auto& c = q0_curve();
  for (int i = 0; i < 100; ++i) {
    const auto& s = c.samples[(i * 37) % c.samples.size()];
    const auto y = random_unit(rng, 2), z = random_unit(rng, 2);
    const auto x = immersion_point(s, y, z);
    REQUIRE(x.size() == 5);
    double n2 = 0.0;
    for (double v : x) n2 += v * v;
    CHECK(std::sqrt(n2) == doctest::Approx(1.0).epsilon(1e-12));
  }
  const std::vector<double> y{1.0, 0.0}, z{0.0, 1.0}, mz{0.0, -1.0};
  const auto x0 = immersion_point(c.samples.front(), y, z);
  CHECK(x0.back() == 0.0);
  const auto x1 = immersion_point(c.samples.front(), y, mz);
  CHECK(x1[0] == x0[0]);
  CHECK(x1[1] == x0[1]);
  CHECK(x1[3] == -x0[3]);
  CHECK(x1[4] == x0[4]);
}

TEST_CASE("embedded profiles give well separated immersion points") {
  // Spot check on a coarse (y, z, t) grid: distinct grid points never coincide.
  const auto& c = q0_curve();
  std::vector<std::vector<double>> pts;
  for (int iy = 0; iy < 10; ++iy) {
    const double u = 2 * pi * iy / 10;
    for (int iz = 0; iz < 10; ++iz) {
      const double w = 2 * pi * iz / 10;
      for (int it = 0; it < 10; ++it) {
        const auto& s = c.samples[it * (c.samples.size() - 1) / 10];
        pts.push_back(immersion_point(s, std::vector<double>{std::cos(u), std::sin(u)},
                                      std::vector<double>{std::cos(w), std::sin(w)}));
      }
    }
  }
  double best = INFINITY;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double d2 = 0.0;
      for (std::size_t m = 0; m < pts[i].size(); ++m) d2 += std::pow(pts[i][m] - pts[j][m], 2);
      best = std::min(best, d2);
    }
  }
  CHECK(best > 1e-6);
}

TEST_CASE("simplified and unsimplified volume integrands agree") {
  for (const auto& p : {p31, p52}) {
    const auto c = reconstruct(find_seed(p, 0.0, {0.05, 0.6}), p, 400);
    for (const auto& s : c.samples) {
      CHECK(std::abs(volume_integrand(s, p) - volume_integrand_unsimplified(s, p)) < 1e-10);
    }
  }
}

TEST_CASE("volumes of the minimal examples") {
  const auto& c = q0_curve();
  const auto r = volume(c);
  CHECK(std::abs(r.vol - 37.8540) < 1e-3);
  REQUIRE(r.clifford.size() == 1);
  CHECK(r.clifford[0].volume == doctest::Approx(30.3905).epsilon(1e-5));
  CHECK(r.yau_ok);
  CHECK(r.quadrature_error_estimate < 1e-8);

  const auto y = yau_check(p31, r);
  CHECK(y.holds);
  CHECK(y.above_sphere);
  CHECK(y.sphere_volume == doctest::Approx(2 * pi * pi));
  CHECK(y.margins[0].margin == doctest::Approx(7.4635).epsilon(1e-3));

  const auto c52 = reconstruct(find_seed(p52, 0.0, {0.05, 0.6}), p52);
  CHECK(std::abs(volume(c52).vol - 56.9862) < 1e-3);
}

TEST_CASE("volume quadrature self-converges and is symmetric") {
  const auto q = find_seed(p52, 0.0, {0.05, 0.6});
  const auto coarse = reconstruct(q, p52, 1000);
  const auto fine = reconstruct(q, p52, 2000);
  const double vc = volume(coarse).vol, vf = volume(fine).vol;
  CHECK(std::abs(vc - vf) / vf < 1e-6);

  // Same integral over the second half period.
  const auto& s = fine.samples;
  const std::span<const ProfileSample> second(s.data() + fine.half_intervals,
                                              fine.half_intervals + 1);
  const double v1 = volume_over(fine.first_half(), p52);
  const double v2 = volume_over(second, p52);
  CHECK(std::abs(v1 - v2) < 1e-8);
  CHECK(v1 == doctest::Approx(vf).epsilon(1e-12));
}

TEST_CASE("Yau verdict against a small volume") {
  VolumeReport r;
  r.vol = 20.0;
  r.clifford = {{1, 30.3905}};
  const auto y = yau_check(p31, r);
  CHECK_FALSE(y.holds);
  CHECK(y.above_sphere);
  CHECK(y.margins[0].margin == doctest::Approx(20.0 - 30.3905));
}

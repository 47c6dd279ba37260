#include "cmc/family.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cmc/errors.hpp"

namespace cmc {

namespace {

void require_open_unit(double r, const char* what) {
  if (!(r > 0.0 && r < 1.0)) {
    throw InvalidArgument(std::string(what) + ": radius must lie in (0,1), got " + std::to_string(r));
  }
}

}  // namespace

FamilyParams FamilyParams::from_kl(int k, int l) {
  if (k < 1 || l < 1) {
    throw InvalidArgument("family needs k >= 1 and l >= 1, got k=" + std::to_string(k) +
                          " l=" + std::to_string(l));
  }
  return FamilyParams(k, l);
}

FamilyParams FamilyParams::from_nl(int n, int l) {
  const int k = n - l - 1;
  if (l < 1 || k < 1) {
    throw InvalidArgument("family (n,l)=(" + std::to_string(n) + "," + std::to_string(l) +
                          ") needs 1 <= l <= n-2");
  }
  return FamilyParams(k, l);
}

double sphere_volume(int m) {
  if (m < 0) throw InvalidArgument("sphere_volume: negative dimension");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double even = 2.0;     // sigma_0
  double odd = two_pi;   // sigma_1
  if (m == 0) return even;
  if (m == 1) return odd;
  double result = 0.0;
  for (int j = 2; j <= m; ++j) {
    if (j % 2 == 0) {
      even = two_pi * even / (j - 1);
      result = even;
    } else {
      odd = two_pi * odd / (j - 1);
      result = odd;
    }
  }
  return result;
}

double clifford_volume(int n, int l) {
  if (l < 1 || l > n - 1) {
    throw InvalidArgument("clifford_volume: need 1 <= l <= n-1, got n=" + std::to_string(n) +
                          " l=" + std::to_string(l));
  }
  const int m = n - l;
  const double nd = n;
  return std::pow(std::sqrt(m / nd), m) * sphere_volume(m) *
         std::pow(std::sqrt(l / nd), l) * sphere_volume(l);
}

double clifford_mean_curvature(int k, int l, double r) {
  require_open_unit(r, "clifford_mean_curvature");
  const double s = std::sqrt(1.0 - r * r);
  return (k * s / r - l * r / s) / (k + l);
}

double umbilical_mean_curvature(double r) {
  require_open_unit(r, "umbilical_mean_curvature");
  return std::sqrt(1.0 - r * r) / r;
}

CliffordDatum clifford_datum(int k, int l, double r) {
  const double H = clifford_mean_curvature(k, l, r);
  const double s = std::sqrt(1.0 - r * r);
  return {r, H, std::pow(r, k) * sphere_volume(k) * std::pow(s, l) * sphere_volume(l)};
}

double minimal_clifford_radius(int k, int l) {
  if (k < 1 || l < 1) throw InvalidArgument("minimal_clifford_radius: k, l must be positive");
  return std::sqrt(static_cast<double>(k) / (k + l));
}

std::vector<int> clifford_comparison_set(int n) {
  std::vector<int> out;
  for (int l = 1; 2 * l <= n; ++l) out.push_back(l);
  return out;
}

}  // namespace cmc

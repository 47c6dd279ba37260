#pragma once

#include <vector>

namespace cmc {

/// Integer data of a family S^k x S^l x S^1 -> S^{n+1} with n = k + l + 1.
///
/// Tables index families by (n, l); both constructors validate and agree.
class FamilyParams {
 public:
  static FamilyParams from_kl(int k, int l);
  static FamilyParams from_nl(int n, int l);

  int k() const noexcept { return k_; }
  int l() const noexcept { return l_; }
  int n() const noexcept { return k_ + l_ + 1; }

  friend bool operator==(const FamilyParams&, const FamilyParams&) = default;

 private:
  FamilyParams(int k, int l) : k_(k), l_(l) {}
  int k_;
  int l_;
};

/// Volume of the unit m-sphere, sigma_0 = 2, sigma_1 = 2 pi,
/// sigma_m = 2 pi sigma_{m-2} / (m - 1).
double sphere_volume(int m);

/// n-volume of the minimal Clifford hypersurface S^{n-l}(sqrt((n-l)/n)) x S^l(sqrt(l/n)).
double clifford_volume(int n, int l);

/// Mean curvature of S^k(r) x S^l(sqrt(1-r^2)) in S^{k+l+1} for the Gauss map
/// (-sqrt(1-r^2) y, r z).
double clifford_mean_curvature(int k, int l, double r);

/// Mean curvature of the small sphere S^k(r) in S^{k+1}, Gauss map (-sqrt(1-r^2) y, r).
double umbilical_mean_curvature(double r);

struct CliffordDatum {
  double r;
  double H;
  double volume;
};

CliffordDatum clifford_datum(int k, int l, double r);

/// Radius of the first factor for which S^k(r) x S^l(sqrt(1-r^2)) is minimal.
double minimal_clifford_radius(int k, int l);

/// The l' used for Clifford comparisons in dimension n: 1 <= l' <= n/2.
/// VolC(n, l') is symmetric under l' -> n - l', so this covers every product.
std::vector<int> clifford_comparison_set(int n);

}  // namespace cmc

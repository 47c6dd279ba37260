#pragma once

// Published reference values used to flag mismatches in reproduced tables.

#include <cmc/continuation.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cmc::cli {

struct TableRow {
  int n;
  int l;
  double a_Hmin;
  double a_H0;
  double a_star_lo;
  double a_star_hi;
  double H_min;
};

std::span<const TableRow> reference_rows();

/// Special values of the traced families for every tabulated (n, l).
std::optional<TableRow> reference_row(int n, int l);

/// Printed volume of the minimal example of family (n, l), if tabulated.
std::optional<double> reference_volume(int n, int l);

/// Printed decimal of VolC(n, l), if tabulated.
std::optional<double> reference_clifford_volume(int n, int l);

/// Agreement of computed special points with a printed row.
struct RowCheck {
  bool a_Hmin_ok = false;
  bool a_H0_ok = false;
  bool H_min_ok = false;
  bool a_star_overlap = false;
  std::vector<std::string> notes;  // one per failed check

  bool all_ok() const { return a_Hmin_ok && a_H0_ok && H_min_ok && a_star_overlap; }
};

RowCheck check_row(const SpecialPoints& sp, const TableRow& ref, double tol = 2e-3);

}  // namespace cmc::cli

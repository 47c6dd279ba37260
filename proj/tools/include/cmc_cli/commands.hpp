#pragma once

#include <cmc/continuation.hpp>
#include <cmc/shooting.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cmc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNoConvergence = 2;
inline constexpr int kExitInvalid = 3;

struct Tolerances {
  double ode = 1e-12;  // used for both rtol and atol
  double newton = 1e-10;
};

struct SolveArgs {
  int n = 0;
  int l = 0;
  double H = 0.0;
  std::optional<double> a_guess;
  std::optional<double> t_guess;
  std::optional<Interval> scan;
  std::filesystem::path json_out;  // empty: solve_n<n>_l<l>.json
  Tolerances tol;
};

struct TraceArgs {
  int n = 0;
  int l = 0;
  int direction = 0;  // 0 traces both ways from the H=0 seed
  Interval scan{0.01, 0.95};
  TraceOptions trace;
  std::string prefix;  // empty: trace_n<n>_l<l>
  bool svg = true;
  Tolerances tol;
};

struct TableArgs {
  std::vector<std::pair<int, int>> pairs;
  unsigned jobs = 0;  // 0: hardware concurrency
  std::filesystem::path csv_out;
  std::filesystem::path json_out;
  TraceOptions trace;
  Tolerances tol;
};

struct VolumeArgs {
  int n = 0;
  int l = 0;
  Interval scan{0.01, 0.95};
  std::size_t half_intervals = 2000;
  bool force = false;  // compute families with l > k as well
  std::filesystem::path json_out;
  Tolerances tol;
};

enum class Frozen { a, H, T };

struct ProfileArgs {
  int n = 0;
  int l = 0;
  double a = 0.0;
  double H = 0.0;
  std::optional<double> t;
  Frozen freeze = Frozen::H;
  std::size_t half_intervals = 2000;
  std::filesystem::path csv_out;  // empty: profile_n<n>_l<l>.csv
  std::filesystem::path svg_out;  // empty: next to the CSV
  Tolerances tol;
};

int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err);
int cmd_trace(const TraceArgs& args, std::ostream& out, std::ostream& err);
int cmd_table(const TableArgs& args, std::ostream& out, std::ostream& err);
int cmd_volume(const VolumeArgs& args, std::ostream& out, std::ostream& err);
int cmd_profile(const ProfileArgs& args, std::ostream& out, std::ostream& err);

/// Parses "(3,1),(4,1)" style lists. Throws InvalidArgument on malformed text.
std::vector<std::pair<int, int>> parse_pairs(const std::string& text);

/// Parses "lo,hi". Throws InvalidArgument unless lo < hi.
Interval parse_interval(const std::string& text);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cmc::cli

#include "cmc_cli/commands.hpp"

#include "cmc_cli/io.hpp"
#include "cmc_cli/reference_table.hpp"

#include <cmc/errors.hpp>
#include <cmc/family.hpp>
#include <cmc/flow.hpp>
#include <cmc/geometry.hpp>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <future>
#include <numbers>
#include <ostream>
#include <regex>
#include <sstream>
#include <thread>

namespace cmc::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

ShootingOptions solver_options(const Tolerances& tol, ShootingOptions base = {}) {
  if (!(tol.ode > 0.0) || !(tol.newton > 0.0)) {
    throw InvalidArgument("tolerances must be positive");
  }
  base.ode.rtol = tol.ode;
  base.ode.atol = tol.ode;
  base.newton_tol = tol.newton;
  return base;
}

RunManifest manifest(const std::string& command, const FamilyParams& p,
                     const ShootingOptions& so, json seed, Clock::time_point start) {
  RunManifest m;
  m.command = command;
  m.n = p.n();
  m.l = p.l();
  m.ode = so.ode;
  m.newton_tol = so.newton_tol;
  m.seed = std::move(seed);
  m.version = tool_version();
  m.wall_time_s = seconds_since(start);
  return m;
}

void require_unit(double a, const char* what) {
  if (!(a > 0.0 && a < 1.0)) throw InvalidArgument(fmt::format("{} must lie in (0,1)", what));
}

// First time theta reaches pi, a guess for the half period.
double half_period_guess(double a, const FamilyParams& p, double H, const ToleranceSpec& tol) {
  const auto ev = integrate_until_theta(a, p, H, std::numbers::pi, 8.0, tol);
  if (!ev) throw NoBracket(fmt::format("theta never reaches pi for a={} H={}", a, H));
  return ev->t;
}

std::string fmt_vec(const Vec3& v) { return fmt::format("({:.10g}, {:.10g}, {:.10g})", v[0], v[1], v[2]); }

Vec3 cross(const Vec3& x, const Vec3& y) {
  return {x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]};
}

template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const InvalidArgument& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitInvalid;
  } catch (const Error& e) {
    fmt::print(err, "convergence failure: {}\n", e.what());
    return kExitNoConvergence;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return 1;
  }
}

std::string family_tag(const FamilyParams& p) { return fmt::format("n{}_l{}", p.n(), p.l()); }

void print_special(std::ostream& out, const SpecialPoints& sp) {
  fmt::print(out, "a^(H=0)    = {:.10g}  (T = {:.10g})\n", sp.a_H0, sp.T_H0);
  fmt::print(out, "a^(H_min)  = {:.10g}  (T = {:.10g})\n", sp.a_Hmin, sp.T_Hmin);
  fmt::print(out, "H_min      = {:.10g}\n", sp.H_min);
  fmt::print(out, "a* bracket = ({:.10g}, {:.10g})\n", sp.a_star_bracket.first,
             sp.a_star_bracket.second);
  fmt::print(out, "small-a end reached a = {:.6g}, H = {:.6g}, T = {:.6g}\n",
             sp.endpoint_a_to_0.a, sp.endpoint_a_to_0.H, sp.endpoint_a_to_0.T);
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::vector<std::pair<int, int>> parse_pairs(const std::string& text) {
  static const std::regex pair_re(R"(\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)\s*(,|$))");
  std::vector<std::pair<int, int>> out;
  auto it = text.cbegin();
  if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) {
    return out;
  }
  std::smatch m;
  while (it != text.cend()) {
    if (!std::regex_search(it, text.cend(), m, pair_re, std::regex_constants::match_continuous)) {
      throw InvalidArgument("malformed pair list near '" + std::string(it, text.cend()) +
                            "', expected (n,l),(n,l),...");
    }
    out.emplace_back(std::stoi(m[1].str()), std::stoi(m[2].str()));
    it = m[0].second;
  }
  return out;
}

Interval parse_interval(const std::string& text) {
  std::istringstream is(text);
  double lo = 0.0, hi = 0.0;
  char comma = 0;
  if (!(is >> lo >> comma >> hi) || comma != ',' || !(is >> std::ws).eof()) {
    throw InvalidArgument("expected lo,hi but got '" + text + "'");
  }
  if (!(lo < hi)) throw InvalidArgument("interval needs lo < hi");
  return {lo, hi};
}

int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto start = Clock::now();
    const FamilyParams p = FamilyParams::from_nl(args.n, args.l);
    const ShootingOptions so = solver_options(args.tol);
    if (args.scan && (args.a_guess || args.t_guess)) {
      throw InvalidArgument("give either --scan or --a-guess/--t-guess, not both");
    }
    if (!args.scan && !args.a_guess) throw InvalidArgument("solve needs --scan or --a-guess");

    ShootingPoint pt;
    json seed;
    if (args.scan) {
      require_unit(args.scan->lo, "scan lower end");
      require_unit(args.scan->hi, "scan upper end");
      pt = find_seed(p, args.H, *args.scan, so);
      seed = {{"scan", {args.scan->lo, args.scan->hi}}};
    } else {
      require_unit(*args.a_guess, "--a-guess");
      const double t =
          args.t_guess ? *args.t_guess : half_period_guess(*args.a_guess, p, args.H, so.ode);
      if (!(t > 0.0)) throw InvalidArgument("--t-guess must be positive");
      pt = solve({.a = *args.a_guess, .H = args.H, .T = t}, FixH{args.H}, p, so);
      seed = {{"a_guess", *args.a_guess}, {"t_guess", t}};
    }
    ShootingPoint full = evaluate_with_jacobian(pt.a, pt.H, pt.T, p, so.ode);
    full.iterations = pt.iterations;
    const Vec3 v = cross(full.jacobian->grad_F1, full.jacobian->grad_Theta);

    fmt::print(out, "family (n,l) = ({},{}), k = {}\n", p.n(), p.l(), p.k());
    fmt::print(out, "a = {:.12g}\nH = {:.12g}\nT = {:.12g}\n", full.a, full.H, full.T);
    fmt::print(out, "residuals: F1 = {:.3e}, Theta - pi = {:.3e}\n", full.res_f1, full.res_theta);
    fmt::print(out, "grad F1    = {}\n", fmt_vec(full.jacobian->grad_F1));
    fmt::print(out, "grad Theta = {}\n", fmt_vec(full.jacobian->grad_Theta));
    fmt::print(out, "tangent v  = {}\n", fmt_vec(v));
    fmt::print(out, "newton iterations = {}\n", full.iterations);

    const std::filesystem::path path =
        args.json_out.empty() ? std::filesystem::path("solve_" + family_tag(p) + ".json") : args.json_out;
    write_json(path, {{"manifest", manifest("solve", p, so, seed, start)},
                      {"point", full},
                      {"tangent", {v[0], v[1], v[2]}}});
    fmt::print(out, "wrote {}\n", path.string());
    return kExitOk;
  });
}

namespace {

GammaCurve increasing_a(GammaCurve c) {
  if (c.points.size() > 1 && c.points.front().a > c.points.back().a) {
    std::reverse(c.points.begin(), c.points.end());
    std::reverse(c.tangents.begin(), c.tangents.end());
    for (auto& t : c.tangents) t = {-t[0], -t[1], -t[2]};
  }
  return c;
}

}  // namespace

int cmd_trace(const TraceArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto start = Clock::now();
    const FamilyParams p = FamilyParams::from_nl(args.n, args.l);
    TraceOptions opts = args.trace;
    opts.solver = solver_options(args.tol, opts.solver);
    if (args.direction < -1 || args.direction > 1) {
      throw InvalidArgument("--direction must be -1, 0 or 1");
    }
    require_unit(args.scan.lo, "scan lower end");
    require_unit(args.scan.hi, "scan upper end");

    const ShootingPoint seed = find_seed(p, 0.0, args.scan, opts.solver);
    GammaCurve curve;
    if (args.direction == 0) {
      curve = trace_both(seed, p, opts);
    } else {
      try {
        curve = trace(seed, p, args.direction, opts);
      } catch (const StallError& e) {
        curve = e.partial();
        (args.direction > 0 ? curve.stop_high : curve.stop_low) = StopReason::stalled;
        curve.stall_note = e.what();
      }
      curve = increasing_a(std::move(curve));
    }
    if (!curve.stall_note.empty()) {
      fmt::print(err, "warning: continuation stalled, results are partial: {}\n",
                 curve.stall_note);
    }

    bool complete = true;
    try {
      curve.special = detect_special(curve, opts.solver);
    } catch (const NotSpanned& e) {
      complete = false;
      fmt::print(err, "warning: special points incomplete: {}\n", e.what());
    }

    const std::string prefix = args.prefix.empty() ? "trace_" + family_tag(p) : args.prefix;
    const json seed_json = {{"scan", {args.scan.lo, args.scan.hi}},
                            {"a_H0_seed", seed.a},
                            {"T_H0_seed", seed.T},
                            {"direction", args.direction}};
    const RunManifest m = manifest("trace", p, opts.solver, seed_json, start);

    std::ostringstream csv;
    write_gamma_csv(csv, curve);
    write_text(prefix + "_gamma.csv", csv.str());
    json j = {{"manifest", m},
              {"points", curve.points.size()},
              {"stop_low", to_string(curve.stop_low)},
              {"stop_high", to_string(curve.stop_high)},
              {"stall_note", curve.stall_note},
              {"complete", complete},
              {"special", curve.special},
              {"ordering_holds", complete && ordering_holds(curve.special)}};
    if (const auto ref = reference_row(p.n(), p.l()); ref && complete) {
      const RowCheck c = check_row(curve.special, *ref);
      j["reference_check"] = {{"all_ok", c.all_ok()}, {"notes", c.notes}};
    }
    write_json(prefix + "_special.json", j);
    if (args.svg) {
      write_text(prefix + "_TH.svg", gamma_svg(curve, Projection::T_H, m));
      write_text(prefix + "_aH.svg", gamma_svg(curve, Projection::a_H, m));
    }

    fmt::print(out, "family (n,l) = ({},{}): {} points, small-a end {}, large-a end {}\n", p.n(),
               p.l(), curve.points.size(), to_string(curve.stop_low), to_string(curve.stop_high));
    if (complete) print_special(out, curve.special);
    if (j.contains("reference_check")) {
      const auto& notes = j["reference_check"]["notes"];
      fmt::print(out, "reference row: {}\n",
                 notes.empty() ? std::string("agrees within 2e-3") : notes.dump());
    }
    fmt::print(out, "wrote {}_gamma.csv, {}_special.json{}\n", prefix, prefix,
               args.svg ? fmt::format(", {0}_TH.svg, {0}_aH.svg", prefix) : "");
    if (!complete && args.direction == 0) return kExitNoConvergence;
    return kExitOk;
  });
}

namespace {

struct PairOutcome {
  int n = 0;
  int l = 0;
  std::optional<SpecialPoints> special;
  std::size_t points = 0;
  std::string stall_note;
  std::string error;
  double seconds = 0.0;
};

PairOutcome run_pair(int n, int l, const TraceOptions& opts) {
  const auto start = Clock::now();
  PairOutcome r;
  r.n = n;
  r.l = l;
  try {
    const GammaCurve c = trace_family(FamilyParams::from_nl(n, l), opts);
    r.special = c.special;
    r.points = c.points.size();
    r.stall_note = c.stall_note;
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.seconds = seconds_since(start);
  return r;
}

}  // namespace

int cmd_table(const TableArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto start = Clock::now();
    for (const auto& [n, l] : args.pairs) (void)FamilyParams::from_nl(n, l);
    TraceOptions opts = args.trace;
    opts.solver = solver_options(args.tol, opts.solver);

    // Pairs are independent, so a small worker pool evaluates them concurrently.
    std::vector<PairOutcome> results(args.pairs.size());
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers =
        std::min<unsigned>(args.jobs ? args.jobs : hw, static_cast<unsigned>(args.pairs.size()));
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.push_back(std::async(std::launch::async, [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < args.pairs.size();) {
          results[i] = run_pair(args.pairs[i].first, args.pairs[i].second, opts);
        }
      }));
    }
    for (auto& f : pool) f.get();

    fmt::print(out, "| (n,l) | a^(H_min) | a^(H=0) | a* in (A,B) | H_min | check |\n");
    fmt::print(out, "|---|---|---|---|---|---|\n");
    std::string csv =
        "n,l,a_Hmin,a_H0,a_star_lo,a_star_hi,H_min,ref_a_Hmin,ref_a_H0,ref_a_star_lo,"
        "ref_a_star_hi,ref_H_min,status,notes\n";
    json rows = json::array();
    bool any_failed = false;
    for (const auto& r : results) {
      const auto ref = reference_row(r.n, r.l);
      std::string status;
      std::vector<std::string> notes;
      if (!r.special) {
        any_failed = true;
        status = "failed";
        notes.push_back(r.error);
        fmt::print(err, "pair ({},{}) failed: {}\n", r.n, r.l, r.error);
      } else if (!ref) {
        status = "no reference";
      } else {
        const RowCheck c = check_row(*r.special, *ref);
        status = c.all_ok() ? "ok" : "mismatch";
        notes = c.notes;
      }
      if (!r.stall_note.empty()) notes.push_back("stalled: " + r.stall_note);
      std::string joined;
      for (const auto& s : notes) joined += (joined.empty() ? "" : "; ") + s;

      const SpecialPoints sp = r.special.value_or(SpecialPoints{});
      fmt::print(out, "| ({},{}) | {:.6g} | {:.6g} | ({:.6g},{:.6g}) | {:.6g} | {}{} |\n", r.n,
                 r.l, sp.a_Hmin, sp.a_H0, sp.a_star_bracket.first, sp.a_star_bracket.second,
                 sp.H_min, status, joined.empty() ? "" : ": " + joined);
      const auto refv = [&](double TableRow::*field) {
        return ref ? exact((*ref).*field) : std::string();
      };
      csv += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.n, r.l, exact(sp.a_Hmin),
                         exact(sp.a_H0), exact(sp.a_star_bracket.first),
                         exact(sp.a_star_bracket.second), exact(sp.H_min),
                         refv(&TableRow::a_Hmin), refv(&TableRow::a_H0),
                         refv(&TableRow::a_star_lo), refv(&TableRow::a_star_hi),
                         refv(&TableRow::H_min), status, csv_quote(joined));
      rows.push_back({{"n", r.n},
                      {"l", r.l},
                      {"special", r.special ? json(*r.special) : json(nullptr)},
                      {"points", r.points},
                      {"status", status},
                      {"notes", notes},
                      {"seconds", r.seconds}});
    }

    if (!args.csv_out.empty()) write_text(args.csv_out, csv);
    if (!args.json_out.empty()) {
      RunManifest m;
      m.command = "table";
      m.ode = opts.solver.ode;
      m.newton_tol = opts.solver.newton_tol;
      m.seed = {{"scan", {0.01, 0.95}}};
      m.version = tool_version();
      m.wall_time_s = seconds_since(start);
      write_json(args.json_out, {{"manifest", m}, {"rows", rows}});
    }
    return any_failed ? kExitNoConvergence : kExitOk;
  });
}

int cmd_volume(const VolumeArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto start = Clock::now();
    const FamilyParams p = FamilyParams::from_nl(args.n, args.l);
    if (p.l() > p.k() && !args.force) {
      fmt::print(err,
                 "notice: no minimal example of family ({},{}) is tabulated; tabulated families "
                 "have l <= n-l-1 (use --force to compute it anyway)\n",
                 p.n(), p.l());
      return kExitInvalid;
    }
    const ShootingOptions so = solver_options(args.tol);
    require_unit(args.scan.lo, "scan lower end");
    require_unit(args.scan.hi, "scan upper end");

    const ShootingPoint seed = find_seed(p, 0.0, args.scan, so);
    const ProfileCurve curve = reconstruct(seed, p, args.half_intervals, so.ode);
    const VolumeReport report = volume(curve);
    const YauVerdict yau = yau_check(p, report);

    fmt::print(out, "family (n,l) = ({},{}), minimal example a = {:.10g}, T = {:.10g}\n", p.n(),
               p.l(), seed.a, seed.T);
    fmt::print(out, "Vol        = {:.10g}  (quadrature error ~ {:.1e})\n", report.vol,
               report.quadrature_error_estimate);
    for (const auto& c : report.clifford) {
      fmt::print(out, "VolC({},{}) = {:.10g}\n", p.n(), c.l, c.volume);
    }
    fmt::print(out, "sigma_{}    = {:.10g}\n", p.n(), yau.sphere_volume);
    fmt::print(out, "yau_ok     = {}  (above every Clifford volume: {}, above sphere: {})\n",
               report.yau_ok && yau.holds && yau.above_sphere, yau.holds, yau.above_sphere);
    json reference = json::object();
    if (const auto rv = reference_volume(p.n(), p.l())) {
      fmt::print(out, "printed Vol = {:.4f}, difference {:.2e}\n", *rv, report.vol - *rv);
      reference["vol"] = *rv;
    }

    const std::filesystem::path path =
        args.json_out.empty() ? std::filesystem::path("volume_" + family_tag(p) + ".json") : args.json_out;
    write_json(path, {{"manifest", manifest("volume", p, so,
                                            {{"scan", {args.scan.lo, args.scan.hi}},
                                             {"half_intervals", curve.half_intervals}},
                                            start)},
                      {"point", seed},
                      {"volume", report},
                      {"yau", yau},
                      {"reference", reference}});
    fmt::print(out, "wrote {}\n", path.string());
    return kExitOk;
  });
}

int cmd_profile(const ProfileArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto start = Clock::now();
    const FamilyParams p = FamilyParams::from_nl(args.n, args.l);
    const ShootingOptions so = solver_options(args.tol);
    require_unit(args.a, "--a");
    const double t = args.t ? *args.t : half_period_guess(args.a, p, args.H, so.ode);
    if (!(t > 0.0)) throw InvalidArgument("--t must be positive");

    Slice slice = FixH{args.H};
    if (args.freeze == Frozen::a) slice = FixA{args.a};
    if (args.freeze == Frozen::T) slice = FixT{t};
    const ShootingPoint pt = solve({.a = args.a, .H = args.H, .T = t}, slice, p, so);
    const ProfileCurve curve = reconstruct(pt, p, args.half_intervals, so.ode);
    const EmbeddingVerdict emb = check_embedded(curve);

    const std::filesystem::path csv_path =
        args.csv_out.empty() ? std::filesystem::path("profile_" + family_tag(p) + ".csv") : args.csv_out;
    std::filesystem::path svg_path = args.svg_out;
    if (svg_path.empty()) svg_path = std::filesystem::path(csv_path).replace_extension(".svg");
    std::filesystem::path json_path = std::filesystem::path(csv_path).replace_extension(".json");

    const char* frozen = args.freeze == Frozen::a ? "a" : args.freeze == Frozen::T ? "T" : "H";
    const RunManifest m = manifest(
        "profile", p, so, {{"a", args.a}, {"H", args.H}, {"t", t}, {"freeze", frozen}}, start);
    std::ostringstream csv;
    write_profile_csv(csv, curve);
    write_text(csv_path, csv.str());
    write_text(svg_path, profile_svg(curve, m));
    write_json(json_path, {{"manifest", m},
                           {"point", pt},
                           {"half_intervals", curve.half_intervals},
                           {"reflection_deviation", curve.reflection_deviation},
                           {"embedded", emb.embedded},
                           {"embedding_note", emb.reason}});

    fmt::print(out, "family (n,l) = ({},{}): a = {:.12g}, H = {:.12g}, T = {:.12g}\n", p.n(), p.l(),
               pt.a, pt.H, pt.T);
    fmt::print(out, "embedded: {}{}\n", emb.embedded ? "yes" : "no",
               emb.reason.empty() ? "" : " (" + emb.reason + ")");
    fmt::print(out, "wrote {}, {}, {}\n", csv_path.string(), svg_path.string(), json_path.string());
    return kExitOk;
  });
}

namespace {

void add_tolerances(CLI::App* sub, Tolerances& tol) {
  sub->add_option("--tol-ode", tol.ode, "ODE relative and absolute tolerance")
      ->capture_default_str();
  sub->add_option("--tol-newton", tol.newton, "Newton residual tolerance")->capture_default_str();
}

void add_family(CLI::App* sub, int& n, int& l) {
  sub->add_option("--n", n, "ambient dimension parameter n = k + l + 1")->required();
  sub->add_option("--l", l, "dimension of the second sphere factor")->required();
}

void add_trace_knobs(CLI::App* sub, TraceOptions& t) {
  sub->add_option("--max-points", t.max_points, "point budget per direction")
      ->capture_default_str();
  sub->add_option("--h-init,--step", t.h_init, "initial arclength step")->capture_default_str();
  sub->add_option("--h-max", t.h_max, "largest arclength step")->capture_default_str();
  sub->add_option("--H-cap", t.H_cap, "stop once H exceeds this")->capture_default_str();
  sub->add_option("--a-floor", t.a_floor, "stop once a falls below this")->capture_default_str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Embedded CMC hypersurfaces S^k x S^l x S^1 in S^(n+1): shooting, continuation "
               "and volumes"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  SolveArgs solve_args;
  std::string solve_scan, solve_json;
  auto* s = app.add_subcommand("solve", "solve the half-period problem at fixed H");
  add_family(s, solve_args.n, solve_args.l);
  s->add_option("--H", solve_args.H, "mean curvature")->capture_default_str();
  s->add_option("--a-guess", solve_args.a_guess, "initial height a");
  s->add_option("--t-guess", solve_args.t_guess, "half period guess (default: first theta=pi)");
  s->add_option("--scan", solve_scan, "scan a over lo,hi for a sign change");
  s->add_option("--json", solve_json, "output JSON path");
  add_tolerances(s, solve_args.tol);

  TraceArgs trace_args;
  std::string trace_scan;
  auto* t = app.add_subcommand("trace", "trace the solution curve Gamma and its special points");
  add_family(t, trace_args.n, trace_args.l);
  t->add_option("--direction", trace_args.direction, "-1, +1 or 0 for both")
      ->check(CLI::IsMember({-1, 0, 1}))
      ->capture_default_str();
  t->add_option("--scan", trace_scan, "a range searched for the H=0 seed (default 0.01,0.95)");
  t->add_option("--out", trace_args.prefix, "output prefix");
  t->add_flag("!--no-svg", trace_args.svg, "skip the SVG projections");
  add_trace_knobs(t, trace_args.trace);
  add_tolerances(t, trace_args.tol);

  TableArgs table_args;
  std::string pairs_text;
  bool all_rows = false;
  std::string table_csv, table_json;
  auto* tb = app.add_subcommand("table", "reproduce the special-value table for (n,l) pairs");
  auto* pairs_opt = tb->add_option("--pairs", pairs_text, "list such as \"(3,1),(4,1)\"");
  tb->add_flag("--all", all_rows, "every tabulated pair")->excludes(pairs_opt);
  tb->add_option("--jobs", table_args.jobs, "worker threads (0: all cores)");
  tb->add_option("--csv", table_csv, "also write the table as CSV");
  tb->add_option("--json", table_json, "also write the table as JSON");
  add_trace_knobs(tb, table_args.trace);
  add_tolerances(tb, table_args.tol);

  VolumeArgs volume_args;
  std::string volume_scan, volume_json;
  auto* v = app.add_subcommand("volume", "volume of the minimal example and Clifford comparison");
  add_family(v, volume_args.n, volume_args.l);
  v->add_option("--scan", volume_scan, "a range searched for the H=0 point (default 0.01,0.95)");
  v->add_option("--half-intervals", volume_args.half_intervals, "samples per half period")
      ->capture_default_str();
  v->add_flag("--force", volume_args.force, "also compute untabulated families with l > k");
  v->add_option("--json", volume_json, "output JSON path");
  add_tolerances(v, volume_args.tol);

  ProfileArgs profile_args;
  std::string freeze = "H", profile_csv, profile_svg_path;
  auto* pr = app.add_subcommand("profile", "export one profile curve as CSV and SVG");
  add_family(pr, profile_args.n, profile_args.l);
  pr->add_option("--a", profile_args.a, "initial height a")->required();
  pr->add_option("--H", profile_args.H, "mean curvature")->capture_default_str();
  pr->add_option("--t", profile_args.t, "half period guess (default: first theta=pi)");
  pr->add_option("--freeze", freeze, "coordinate held fixed while solving")
      ->check(CLI::IsMember({"a", "H", "T"}))
      ->capture_default_str();
  pr->add_option("--half-intervals", profile_args.half_intervals, "samples per half period")
      ->capture_default_str();
  pr->add_option("--csv", profile_csv, "CSV path");
  pr->add_option("--svg", profile_svg_path, "SVG path");
  add_tolerances(pr, profile_args.tol);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (s->parsed()) {
      if (!solve_scan.empty()) solve_args.scan = parse_interval(solve_scan);
      solve_args.json_out = solve_json;
      return cmd_solve(solve_args, out, err);
    }
    if (t->parsed()) {
      if (!trace_scan.empty()) trace_args.scan = parse_interval(trace_scan);
      return cmd_trace(trace_args, out, err);
    }
    if (tb->parsed()) {
      if (all_rows) {
        for (const auto& r : reference_rows()) table_args.pairs.emplace_back(r.n, r.l);
      } else {
        table_args.pairs = parse_pairs(pairs_text);
      }
      table_args.csv_out = table_csv;
      table_args.json_out = table_json;
      return cmd_table(table_args, out, err);
    }
    if (v->parsed()) {
      if (!volume_scan.empty()) volume_args.scan = parse_interval(volume_scan);
      volume_args.json_out = volume_json;
      return cmd_volume(volume_args, out, err);
    }
    if (pr->parsed()) {
      profile_args.freeze = freeze == "a" ? Frozen::a : freeze == "T" ? Frozen::T : Frozen::H;
      profile_args.csv_out = profile_csv;
      profile_args.svg_out = profile_svg_path;
      return cmd_profile(profile_args, out, err);
    }
  } catch (const InvalidArgument& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitInvalid;
  }
  return kExitInvalid;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("cmc");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace cmc::cli

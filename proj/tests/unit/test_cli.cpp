#include <cmc_cli/commands.hpp>
#include <cmc_cli/io.hpp>
#include <cmc_cli/reference_table.hpp>

#include <cmc/errors.hpp>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace cmc;
using namespace cmc::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("cmc_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  return {std::istreambuf_iterator<char>(is), {}};
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream is(p);
  std::vector<std::vector<std::string>> rows;
  for (std::string line; std::getline(is, line);) {
    std::vector<std::string> row;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

// Parses an SVG file and checks the standalone document shape.
boost::property_tree::ptree parse_svg(const fs::path& p) {
  boost::property_tree::ptree tree;
  REQUIRE_NOTHROW(boost::property_tree::read_xml(p.string(), tree));
  CHECK(tree.count("svg") == 1);
  CHECK(tree.get<std::string>("svg.<xmlattr>.viewBox").size() > 0);
  CHECK(tree.get<std::string>("svg.<xmlattr>.xmlns") == "http://www.w3.org/2000/svg");
  return tree;
}

bool same_bits(double x, double y) { return std::memcmp(&x, &y, sizeof x) == 0; }

}  // namespace

TEST_CASE("pair and interval parsing") {
  CHECK(parse_pairs("").empty());
  CHECK(parse_pairs("   ").empty());
  CHECK(parse_pairs("(3,1)") == std::vector<std::pair<int, int>>{{3, 1}});
  CHECK(parse_pairs("(3,1),(4,1), ( 12 , 5 )") ==
        std::vector<std::pair<int, int>>{{3, 1}, {4, 1}, {12, 5}});
  CHECK_THROWS_AS(parse_pairs("(3,1"), InvalidArgument);
  CHECK_THROWS_AS(parse_pairs("(3,1)(4,1)"), InvalidArgument);
  CHECK_THROWS_AS(parse_pairs("3,1"), InvalidArgument);

  const auto i = parse_interval("0.05,0.5");
  CHECK(i.lo == 0.05);
  CHECK(i.hi == 0.5);
  CHECK_THROWS_AS(parse_interval("0.5,0.05"), InvalidArgument);
  CHECK_THROWS_AS(parse_interval("0.5"), InvalidArgument);
  CHECK_THROWS_AS(parse_interval("0.1,0.2,0.3"), InvalidArgument);
}

TEST_CASE("reference data") {
  CHECK(reference_rows().size() == 30);
  const auto r = reference_row(3, 1);
  REQUIRE(r);
  CHECK(r->a_H0 == 0.1876);
  CHECK(r->H_min == -0.07989);
  CHECK_FALSE(reference_row(4, 2));
  CHECK(reference_volume(12, 5) == 21.0516);
  CHECK(reference_clifford_volume(9, 1) == 38.8158);

  SpecialPoints sp;
  sp.a_Hmin = 0.0749;
  sp.a_H0 = 0.1876;
  sp.H_min = -0.0799;
  sp.a_star_bracket = {0.70, 0.7071};
  CHECK(check_row(sp, *r).all_ok());
  sp.a_star_bracket = {0.72, 0.73};
  const auto c = check_row(sp, *r);
  CHECK_FALSE(c.a_star_overlap);
  CHECK(c.notes.size() == 1);
  CHECK(check_row(SpecialPoints{}, *r).notes.size() == 4);
}

TEST_CASE("JSON round trips are lossless") {
  ShootingPoint q{.a = 0.1, .H = -1.0 / 3.0, .T = std::numbers::pi, .res_f1 = 1e-300,
                  .res_theta = -2.5e-17, .iterations = 4};
  q.jacobian = ShootingJacobian{{0.1, 0.2, 1.0 / 7.0}, {-0.3, 5e-310, 9.999999999999999e22}};
  const json j = q;
  const auto back = json::parse(j.dump()).get<ShootingPoint>();
  CHECK(same_bits(back.a, q.a));
  CHECK(same_bits(back.H, q.H));
  CHECK(same_bits(back.T, q.T));
  CHECK(same_bits(back.res_f1, q.res_f1));
  CHECK(same_bits(back.res_theta, q.res_theta));
  CHECK(back.iterations == 4);
  REQUIRE(back.jacobian);
  for (int i = 0; i < 3; ++i) {
    CHECK(same_bits(back.jacobian->grad_F1[i], q.jacobian->grad_F1[i]));
    CHECK(same_bits(back.jacobian->grad_Theta[i], q.jacobian->grad_Theta[i]));
  }
  CHECK(json(back) == j);

  // Missing values travel as null.
  SpecialPoints sp;
  sp.a_H0 = 0.25;
  const json js = sp;
  CHECK(js["H_min"].is_null());
  const auto sb = json::parse(js.dump()).get<SpecialPoints>();
  CHECK(sb.a_H0 == 0.25);
  CHECK(std::isnan(sb.H_min));
  CHECK(std::isnan(sb.a_star_bracket.second));
  CHECK(json(sb) == js);

  VolumeReport vr{.vol = 37.85400123456789, .clifford = {{1, 30.39}}, .yau_ok = true,
                  .quadrature_error_estimate = 1e-14};
  CHECK(json(json::parse(json(vr).dump()).get<VolumeReport>()) == json(vr));
  YauVerdict yv{.holds = true, .margins = {{1, 30.0, 7.5}}, .sphere_volume = 19.7, .above_sphere = true};
  CHECK(json(json::parse(json(yv).dump()).get<YauVerdict>()) == json(yv));

  RunManifest m;
  m.command = "solve";
  m.n = 3;
  m.l = 1;
  m.newton_tol = 1e-10;
  m.seed = {{"scan", {0.05, 0.5}}};
  m.version = tool_version();
  m.wall_time_s = 0.123456789;
  CHECK(json(json::parse(json(m).dump()).get<RunManifest>()) == json(m));

  // several families in one run
  m.command = "table";
  m.n = m.l = 0;
  CHECK(json(m).at("params").is_null());
  CHECK(json(json::parse(json(m).dump()).get<RunManifest>()) == json(m));

  CHECK(exact(0.1) == "0.10000000000000001");
  CHECK(std::stod(exact(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("solve command") {
  const auto path = scratch() / "q0.json";
  const auto r = run({"solve", "--n", "3", "--l", "1", "--H", "0", "--scan", "0.05,0.5", "--json",
                      path.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("a = 0.1876054") != std::string::npos);
  const json j = json::parse(slurp(path));
  const auto q = j.at("point").get<ShootingPoint>();
  CHECK(std::abs(q.a - 0.187605) < 1e-5);
  CHECK(std::abs(q.T - 1.15925) < 1e-5);
  REQUIRE(q.jacobian);
  CHECK(q.jacobian->grad_Theta[2] == doctest::Approx(1.92866).epsilon(1e-4));
  CHECK(j.at("manifest").at("command") == "solve");
  CHECK(j.at("manifest").at("params").at("k") == 1);
  CHECK(j.at("tangent").size() == 3);

  const auto g = run({"solve", "--n", "3", "--l", "1", "--H", "0", "--a-guess", "0.187605",
                      "--t-guess", "1.15925", "--json", (scratch() / "g.json").string()});
  CHECK(g.code == kExitOk);
  CHECK(json::parse(slurp(scratch() / "g.json")).at("point").at("iterations").get<int>() <= 2);

  const auto a41 = run({"solve", "--n", "4", "--l", "1", "--scan", "0.05,0.5", "--json",
                        (scratch() / "q41.json").string()});
  CHECK(a41.code == kExitOk);
  CHECK(std::abs(json::parse(slurp(scratch() / "q41.json"))["point"]["a"].get<double>() - 0.16853) <
        1e-5);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == kExitInvalid);
  CHECK(run({"bogus"}).code == kExitInvalid);
  CHECK(run({"solve", "--l", "1", "--scan", "0.05,0.5"}).code == kExitInvalid);
  CHECK(run({"solve", "--n", "3", "--l", "3", "--scan", "0.05,0.5"}).code == kExitInvalid);
  CHECK(run({"solve", "--n", "3", "--l", "1"}).code == kExitInvalid);
  CHECK(run({"solve", "--n", "3", "--l", "1", "--scan", "0.5,0.05"}).code == kExitInvalid);
  CHECK(run({"solve", "--n", "3", "--l", "1", "--a-guess", "1.5"}).code == kExitInvalid);
  CHECK(run({"solve", "--n", "3", "--l", "1", "--scan", "0.05,0.5", "--tol-ode", "-1"}).code ==
        kExitInvalid);
  CHECK(run({"trace", "--n", "3", "--l", "1", "--direction", "2"}).code == kExitInvalid);
  CHECK(run({"table", "--pairs", "(3,1"}).code == kExitInvalid);
  CHECK(run({"--help"}).code == kExitOk);

  const auto nb = run({"solve", "--n", "3", "--l", "1", "--scan", "0.3,0.5", "--json",
                       (scratch() / "nb.json").string()});
  CHECK(nb.code == kExitNoConvergence);
  CHECK(nb.err.find("convergence failure") != std::string::npos);

  const auto v42 = run({"volume", "--n", "4", "--l", "2"});
  CHECK(v42.code == kExitInvalid);
  CHECK(v42.err.find("(4,2)") != std::string::npos);
}

TEST_CASE("volume command") {
  const auto path = scratch() / "v31.json";
  const auto r = run({"volume", "--n", "3", "--l", "1", "--json", path.string()});
  CHECK(r.code == kExitOk);
  const json j = json::parse(slurp(path));
  const auto vr = j.at("volume").get<VolumeReport>();
  CHECK(std::abs(vr.vol - 37.8540) < 1e-3);
  CHECK(vr.clifford.at(0).volume == doctest::Approx(30.3905).epsilon(1e-5));
  CHECK(vr.yau_ok);
  CHECK(j.at("yau").get<YauVerdict>().above_sphere);
  CHECK(j.at("reference").at("vol") == 37.8540);

  const auto forced = run({"volume", "--n", "4", "--l", "2", "--force", "--json",
                           (scratch() / "v42.json").string()});
  CHECK(forced.code == kExitOk);
}

TEST_CASE("profile command writes CSV, SVG and manifest") {
  const auto csv = scratch() / "prof.csv";
  const auto svg = scratch() / "prof.svg";
  const auto r = run({"profile", "--n", "3", "--l", "1", "--a", "0.187605", "--H", "0", "--t",
                      "1.15925", "--half-intervals", "400", "--csv", csv.string(), "--svg",
                      svg.string()});
  REQUIRE(r.code == kExitOk);
  const auto rows = read_csv(csv);
  REQUIRE(rows.size() == 2 + 2 * 400);
  CHECK(rows[0] == std::vector<std::string>{"t", "f1", "f2", "theta", "f", "g", "h"});
  const json side = json::parse(slurp(scratch() / "prof.json"));
  const double a = side.at("point").at("a").get<double>();
  CHECK(std::stod(rows[1][0]) == 0.0);
  CHECK(std::stod(rows[1][1]) == 0.0);
  CHECK(std::stod(rows[1][2]) == a);
  CHECK(std::stod(rows[1][3]) == 0.0);
  const auto& mid = rows[1 + 400];
  CHECK(std::stod(mid[0]) == doctest::Approx(side["point"]["T"].get<double>()).epsilon(1e-14));
  CHECK(std::abs(std::stod(mid[1])) < 1e-8);
  CHECK(std::abs(std::stod(mid[3]) - std::numbers::pi) < 1e-8);
  CHECK(side.at("embedded") == true);

  const auto tree = parse_svg(svg);
  bool closed = false;
  for (const auto& g : tree.get_child("svg")) {
    if (g.first != "g") continue;
    for (const auto& el : g.second) {
      if (el.first == "path") {
        const auto d = el.second.get<std::string>("<xmlattr>.d");
        closed = d.front() == 'M' && d.back() == 'Z';
      }
    }
  }
  CHECK(closed);
  CHECK(tree.get<std::string>("svg.metadata").find("\"command\"") != std::string::npos);
}

TEST_CASE("trace command artifacts are consistent") {
  const auto prefix = (scratch() / "t31").string();
  const auto r = run({"trace", "--n", "3", "--l", "1", "--out", prefix});
  REQUIRE(r.code == kExitOk);
  const auto rows = read_csv(prefix + "_gamma.csv");
  REQUIRE(rows.size() > 2);
  CHECK(rows[0] == std::vector<std::string>{"idx", "a", "H", "T", "tan_a", "tan_H", "tan_T",
                                            "res_f1", "res_theta"});
  const json j = json::parse(slurp(prefix + "_special.json"));
  CHECK(rows.size() - 1 == j.at("points").get<std::size_t>());
  CHECK(j.at("complete") == true);
  CHECK(j.at("ordering_holds") == true);
  CHECK(j.at("reference_check").at("all_ok") == true);
  const auto sp = j.at("special").get<SpecialPoints>();
  CHECK(std::abs(sp.a_H0 - 0.1876) < 1e-3);
  CHECK(std::abs(sp.a_Hmin - 0.07488) < 1e-3);
  CHECK(std::abs(sp.H_min + 0.07989) < 1e-3);
  parse_svg(prefix + "_TH.svg");
  parse_svg(prefix + "_aH.svg");

  const auto one = run({"trace", "--n", "3", "--l", "1", "--direction", "-1", "--no-svg", "--out",
                        (scratch() / "t31d").string()});
  CHECK(one.code == kExitOk);
  CHECK(one.err.find("warning") != std::string::npos);
  CHECK_FALSE(fs::exists(scratch() / "t31d_TH.svg"));
  const json jd = json::parse(slurp(scratch() / "t31d_special.json"));
  CHECK(jd.at("complete") == false);
  CHECK(jd.at("special").at("H_min").is_null());
}

TEST_CASE("table command") {
  const auto empty = run({"table", "--pairs", ""});
  CHECK(empty.code == kExitOk);
  CHECK(std::count(empty.out.begin(), empty.out.end(), '\n') == 2);

  const auto csv = scratch() / "table.csv";
  const auto r = run({"table", "--pairs", "(3,1),(6,2)", "--csv", csv.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("| (3,1) |") != std::string::npos);
  CHECK(r.out.find("| (6,2) |") != std::string::npos);
  const auto rows = read_csv(csv);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1][0] == "3");
  CHECK(rows[1][12] == "ok");
  CHECK(std::abs(std::stod(rows[2][6]) + 0.12072) < 2e-3);
}

TEST_CASE("SVG writers produce valid documents for degenerate input") {
  GammaCurve empty;
  RunManifest m;
  m.command = "test<&>\"";
  const auto path = scratch() / "empty.svg";
  write_text(path, gamma_svg(empty, Projection::a_H, m));
  const auto tree = parse_svg(path);
  CHECK(tree.get<std::string>("svg.metadata").find("test<&>") != std::string::npos);
}

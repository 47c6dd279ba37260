#include "cmc_cli/io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

#ifndef CMC_TOOL_VERSION
#define CMC_TOOL_VERSION "unknown"
#endif

namespace cmc::cli {

std::string tool_version() { return CMC_TOOL_VERSION; }

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double number_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

void to_json(json& j, const RunManifest& m) {
  j = json{{"command", m.command},
           // n = 0 marks a run over several families (table)
           {"params", m.n == 0 ? json(nullptr) : json{{"n", m.n}, {"l", m.l}, {"k", m.n - m.l - 1}}},
           {"tolerances",
            {{"ode_rtol", m.ode.rtol},
             {"ode_atol", m.ode.atol},
             {"ode_h_min", m.ode.h_min},
             {"newton_tol", m.newton_tol}}},
           {"seed", m.seed},
           {"version", m.version},
           {"wall_time_s", m.wall_time_s}};
}

void from_json(const json& j, RunManifest& m) {
  m.command = j.at("command").get<std::string>();
  if (const json& params = j.at("params"); !params.is_null()) {
    m.n = params.at("n").get<int>();
    m.l = params.at("l").get<int>();
  } else {
    m.n = m.l = 0;
  }
  const json& t = j.at("tolerances");
  m.ode.rtol = t.at("ode_rtol").get<double>();
  m.ode.atol = t.at("ode_atol").get<double>();
  m.ode.h_min = t.at("ode_h_min").get<double>();
  m.newton_tol = t.at("newton_tol").get<double>();
  m.seed = j.at("seed");
  m.version = j.at("version").get<std::string>();
  m.wall_time_s = j.at("wall_time_s").get<double>();
}

}  // namespace cmc::cli

namespace cmc {

using cli::number;
using cli::number_from;

namespace {

json vec3(const Vec3& v) { return json::array({number(v[0]), number(v[1]), number(v[2])}); }

Vec3 vec3_from(const json& j) {
  return {number_from(j.at(0)), number_from(j.at(1)), number_from(j.at(2))};
}

}  // namespace

void to_json(json& j, const ShootingJacobian& g) {
  j = json{{"grad_F1", vec3(g.grad_F1)}, {"grad_Theta", vec3(g.grad_Theta)}};
}

void from_json(const json& j, ShootingJacobian& g) {
  g.grad_F1 = vec3_from(j.at("grad_F1"));
  g.grad_Theta = vec3_from(j.at("grad_Theta"));
}

void to_json(json& j, const ShootingPoint& s) {
  j = json{{"a", number(s.a)},
           {"H", number(s.H)},
           {"T", number(s.T)},
           {"res_f1", number(s.res_f1)},
           {"res_theta", number(s.res_theta)},
           {"iterations", s.iterations},
           {"jacobian", s.jacobian ? json(*s.jacobian) : json(nullptr)}};
}

void from_json(const json& j, ShootingPoint& s) {
  s.a = number_from(j.at("a"));
  s.H = number_from(j.at("H"));
  s.T = number_from(j.at("T"));
  s.res_f1 = number_from(j.at("res_f1"));
  s.res_theta = number_from(j.at("res_theta"));
  s.iterations = j.at("iterations").get<int>();
  if (j.at("jacobian").is_null()) {
    s.jacobian.reset();
  } else {
    s.jacobian = j.at("jacobian").get<ShootingJacobian>();
  }
}

void to_json(json& j, const SpecialPoints& s) {
  j = json{{"a_H0", number(s.a_H0)},
           {"T_H0", number(s.T_H0)},
           {"a_Hmin", number(s.a_Hmin)},
           {"T_Hmin", number(s.T_Hmin)},
           {"H_min", number(s.H_min)},
           {"a_star_bracket", {number(s.a_star_bracket.first), number(s.a_star_bracket.second)}},
           {"endpoint_a_to_0",
            {{"a", number(s.endpoint_a_to_0.a)},
             {"H", number(s.endpoint_a_to_0.H)},
             {"T", number(s.endpoint_a_to_0.T)}}}};
}

void from_json(const json& j, SpecialPoints& s) {
  s.a_H0 = number_from(j.at("a_H0"));
  s.T_H0 = number_from(j.at("T_H0"));
  s.a_Hmin = number_from(j.at("a_Hmin"));
  s.T_Hmin = number_from(j.at("T_Hmin"));
  s.H_min = number_from(j.at("H_min"));
  s.a_star_bracket = {number_from(j.at("a_star_bracket").at(0)),
                      number_from(j.at("a_star_bracket").at(1))};
  const json& e = j.at("endpoint_a_to_0");
  s.endpoint_a_to_0 = {number_from(e.at("a")), number_from(e.at("H")), number_from(e.at("T"))};
}

void to_json(json& j, const VolumeReport& r) {
  json cl = json::array();
  for (const auto& c : r.clifford) cl.push_back({{"l", c.l}, {"volume", number(c.volume)}});
  j = json{{"vol", number(r.vol)},
           {"clifford", cl},
           {"yau_ok", r.yau_ok},
           {"quadrature_error_estimate", number(r.quadrature_error_estimate)}};
}

void from_json(const json& j, VolumeReport& r) {
  r.vol = number_from(j.at("vol"));
  r.clifford.clear();
  for (const auto& c : j.at("clifford")) {
    r.clifford.push_back({c.at("l").get<int>(), number_from(c.at("volume"))});
  }
  r.yau_ok = j.at("yau_ok").get<bool>();
  r.quadrature_error_estimate = number_from(j.at("quadrature_error_estimate"));
}

void to_json(json& j, const YauVerdict& y) {
  json ms = json::array();
  for (const auto& m : y.margins) {
    ms.push_back({{"l", m.l},
                  {"clifford_volume", number(m.clifford_volume)},
                  {"margin", number(m.margin)}});
  }
  j = json{{"holds", y.holds},
           {"margins", ms},
           {"sphere_volume", number(y.sphere_volume)},
           {"above_sphere", y.above_sphere}};
}

void from_json(const json& j, YauVerdict& y) {
  y.holds = j.at("holds").get<bool>();
  y.margins.clear();
  for (const auto& m : j.at("margins")) {
    y.margins.push_back(
        {m.at("l").get<int>(), number_from(m.at("clifford_volume")), number_from(m.at("margin"))});
  }
  y.sphere_volume = number_from(j.at("sphere_volume"));
  y.above_sphere = j.at("above_sphere").get<bool>();
}

}  // namespace cmc

namespace cmc::cli {

std::string exact(double x) { return fmt::format("{:.17g}", x); }

void write_gamma_csv(std::ostream& os, const GammaCurve& curve) {
  os << "idx,a,H,T,tan_a,tan_H,tan_T,res_f1,res_theta\n";
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const auto& q = curve.points[i];
    const Vec3 v = i < curve.tangents.size() ? curve.tangents[i] : Vec3{NAN, NAN, NAN};
    os << fmt::format("{},{},{},{},{},{},{},{},{}\n", i, exact(q.a), exact(q.H), exact(q.T),
                      exact(v[0]), exact(v[1]), exact(v[2]), exact(q.res_f1), exact(q.res_theta));
  }
}

void write_profile_csv(std::ostream& os, const ProfileCurve& curve) {
  os << "t,f1,f2,theta,f,g,h\n";
  for (const auto& s : curve.samples) {
    os << fmt::format("{},{},{},{},{},{},{}\n", exact(s.t), exact(s.f1), exact(s.f2),
                      exact(s.theta), exact(s.f), exact(s.g), exact(s.h));
  }
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string svg_open(const std::string& view_box, int width, int height, const RunManifest& m) {
  return fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" "
      "viewBox=\"{}\">\n<metadata>{}</metadata>\n",
      width, height, view_box, xml_escape(json(m).dump()));
}

// Readable tick values for [lo, hi].
std::vector<double> ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double f : {1.0, 2.0, 5.0, 10.0}) {
    step = f * mag;
    if (step >= raw) break;
  }
  std::vector<double> out;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) {
    out.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
  }
  return out;
}

}  // namespace

std::string profile_svg(const ProfileCurve& curve, const RunManifest& m) {
  std::string out = svg_open("-1.15 -1.15 2.3 2.3", 600, 600, m);
  out += "<rect x=\"-1.15\" y=\"-1.15\" width=\"2.3\" height=\"2.3\" fill=\"white\"/>\n";
  // Flip so that f2 points up.
  out += "<g transform=\"scale(1,-1)\">\n";
  out += "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#888\" stroke-width=\"0.006\"/>\n";
  out += "<line x1=\"-1.1\" y1=\"0\" x2=\"1.1\" y2=\"0\" stroke=\"#444\" stroke-width=\"0.004\"/>\n";
  out += "<line x1=\"0\" y1=\"-1.1\" x2=\"0\" y2=\"1.1\" stroke=\"#444\" stroke-width=\"0.004\"/>\n";
  out += "<path fill=\"none\" stroke=\"#c0392b\" stroke-width=\"0.008\" d=\"";
  // The last sample repeats the first, Z closes the path instead.
  const std::size_t count = curve.samples.empty() ? 0 : curve.samples.size() - 1;
  for (std::size_t i = 0; i < count; ++i) {
    const auto& s = curve.samples[i];
    out += fmt::format("{}{:.6f} {:.6f} ", i == 0 ? "M" : "L", s.f1, s.f2);
  }
  out += "Z\"/>\n</g>\n";
  out += fmt::format(
      "<text x=\"-1.1\" y=\"-1.05\" font-size=\"0.06\" font-family=\"sans-serif\">"
      "(n,l)=({},{}) a={:.6g} H={:.6g} T={:.6g}</text>\n",
      curve.params.n(), curve.params.l(), curve.point.a, curve.point.H, curve.point.T);
  out += "</svg>\n";
  return out;
}

std::string gamma_svg(const GammaCurve& curve, Projection proj, const RunManifest& m) {
  constexpr int W = 640;
  constexpr int Hgt = 480;
  constexpr double left = 70.0, right = 20.0, top = 30.0, bottom = 50.0;
  const auto xval = [&](const ShootingPoint& q) { return proj == Projection::T_H ? q.T : q.a; };
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& q : curve.points) {
    x0 = std::min(x0, xval(q));
    x1 = std::max(x1, xval(q));
    y0 = std::min(y0, q.H);
    y1 = std::max(y1, q.H);
  }
  if (curve.points.empty()) {
    x0 = y0 = 0.0;
    x1 = y1 = 1.0;
  }
  if (x1 - x0 < 1e-12) x1 = x0 + 1.0;
  if (y1 - y0 < 1e-12) y1 = y0 + 1.0;
  const double px = 0.03 * (x1 - x0), py = 0.03 * (y1 - y0);
  x0 -= px;
  x1 += px;
  y0 -= py;
  y1 += py;
  const auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * (W - left - right); };
  const auto sy = [&](double y) { return top + (y1 - y) / (y1 - y0) * (Hgt - top - bottom); };

  std::string out = svg_open(fmt::format("0 0 {} {}", W, Hgt), W, Hgt, m);
  out += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", W, Hgt);
  out += fmt::format(
      "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", left,
      top, W - left - right, Hgt - top - bottom);
  const char* font = "font-family=\"sans-serif\" font-size=\"11\"";
  for (double t : ticks(x0, x1)) {
    out += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>"
        "<text x=\"{0:.2f}\" y=\"{3:.2f}\" text-anchor=\"middle\" {4}>{5:.6g}</text>\n",
        sx(t), Hgt - bottom, Hgt - bottom + 5, Hgt - bottom + 18, font, t);
  }
  for (double t : ticks(y0, y1)) {
    out += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"black\"/>"
        "<text x=\"{3:.2f}\" y=\"{4:.2f}\" text-anchor=\"end\" {5}>{6:.6g}</text>\n",
        left - 5, sy(t), left, left - 8, sy(t) + 4, font, t);
  }
  if (y0 < 0.0 && y1 > 0.0) {
    out += fmt::format(
        "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#aaa\" "
        "stroke-dasharray=\"4 3\"/>\n",
        left, sy(0.0), W - right, sy(0.0));
  }
  out += fmt::format(
      "<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      "font-size=\"13\">{}</text>\n",
      left + 0.5 * (W - left - right), Hgt - 12, proj == Projection::T_H ? "T" : "a");
  out += fmt::format(
      "<text x=\"18\" y=\"{:.2f}\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      "font-size=\"13\" transform=\"rotate(-90 18 {:.2f})\">H</text>\n",
      top + 0.5 * (Hgt - top - bottom), top + 0.5 * (Hgt - top - bottom));
  out += fmt::format(
      "<text x=\"{}\" y=\"20\" font-family=\"sans-serif\" font-size=\"13\">"
      "Gamma for (n,l)=({},{}), {} projection</text>\n",
      left, curve.params.n(), curve.params.l(), proj == Projection::T_H ? "(T,H)" : "(a,H)");
  if (!curve.points.empty()) {
    out += "<path fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" d=\"";
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
      const auto& q = curve.points[i];
      out += fmt::format("{}{:.2f} {:.2f} ", i == 0 ? "M" : "L", sx(xval(q)), sy(q.H));
    }
    out += "\"/>\n";
  }
  const SpecialPoints& sp = curve.special;
  const auto mark = [&](double a, double T, double H, const char* colour) {
    if (!std::isfinite(a) || !std::isfinite(H)) return;
    const double x = proj == Projection::T_H ? T : a;
    out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"4\" fill=\"{}\"/>\n", sx(x), sy(H),
                       colour);
  };
  mark(sp.a_H0, sp.T_H0, 0.0, "#2e8b57");
  mark(sp.a_Hmin, sp.T_Hmin, sp.H_min, "#c0392b");
  out += "</svg>\n";
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << text;
  if (!os) throw std::runtime_error("failed writing " + path.string());
}

void write_json(const std::filesystem::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

}  // namespace cmc::cli

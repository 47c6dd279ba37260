#pragma once

#include <cmc/continuation.hpp>
#include <cmc/geometry.hpp>
#include <cmc/shooting.hpp>

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>

namespace cmc {

// Serializers for core types live beside them so that nlohmann finds them.
using nlohmann::json;

void to_json(json& j, const ShootingJacobian& g);
void from_json(const json& j, ShootingJacobian& g);
void to_json(json& j, const ShootingPoint& s);
void from_json(const json& j, ShootingPoint& s);
void to_json(json& j, const SpecialPoints& s);
void from_json(const json& j, SpecialPoints& s);
void to_json(json& j, const VolumeReport& r);
void from_json(const json& j, VolumeReport& r);
void to_json(json& j, const YauVerdict& y);
void from_json(const json& j, YauVerdict& y);

}  // namespace cmc

namespace cmc::cli {

using nlohmann::json;

/// Provenance record attached to every artifact a command writes.
struct RunManifest {
  std::string command;
  int n = 0;
  int l = 0;
  ToleranceSpec ode;
  double newton_tol = 0.0;
  json seed = json::object();  // whatever guesses or scan range were used
  std::string version;
  double wall_time_s = 0.0;
};

std::string tool_version();

// Non-finite doubles are stored as null and read back as quiet NaN.
json number(double x);
double number_from(const json& j);

void to_json(json& j, const RunManifest& m);
void from_json(const json& j, RunManifest& m);

/// Shortest text that parses back to exactly the same double.
std::string exact(double x);

void write_gamma_csv(std::ostream& os, const GammaCurve& curve);
void write_profile_csv(std::ostream& os, const ProfileCurve& curve);

enum class Projection { T_H, a_H };

std::string profile_svg(const ProfileCurve& curve, const RunManifest& m);
std::string gamma_svg(const GammaCurve& curve, Projection proj, const RunManifest& m);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const json& j);

}  // namespace cmc::cli

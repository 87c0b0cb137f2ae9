#include "ecmlfd/config.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "ecmlfd/errors.hpp"

namespace ecmlfd {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  return obj.at(key);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(where + ": not finite");
  return x;
}

template <std::size_t N>
std::array<double, N> numbers(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != N) {
    throw ConfigError(where + ": expected an array of " + std::to_string(N) + " numbers");
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = number(v[i], where);
  return out;
}

Transform parse_transform(const json& v) {
  const std::string where = "base_to_rcm";
  if (!v.is_object()) throw ConfigError(where + ": expected an object");
  reject_unknown(v, {"rotation", "translation"}, where);
  const auto r = numbers<9>(require(v, "rotation", where), where + ".rotation");
  const auto t = numbers<3>(require(v, "translation", where), where + ".translation");
  try {
    return {Rotation3::from_row_major(r), Vec3(t[0], t[1], t[2])};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ".rotation: " + e.what());
  }
}

EcmDhTable parse_dh(const json& v) {
  if (!v.is_array() || v.size() != 4) throw ConfigError("dh: expected an array of 4 rows");
  EcmDhTable table;
  for (std::size_t i = 0; i < 4; ++i) {
    const std::string where = "dh[" + std::to_string(i) + "]";
    const json& row = v[i];
    if (!row.is_object()) throw ConfigError(where + ": expected an object");
    reject_unknown(row, {"kind", "d", "theta", "a", "alpha"}, where);
    const json& kind = require(row, "kind", where);
    if (kind == "R") {
      table.rows[i].kind = JointKind::Revolute;
    } else if (kind == "P") {
      table.rows[i].kind = JointKind::Prismatic;
    } else {
      throw ConfigError(where + ".kind: expected \"R\" or \"P\"");
    }
    table.rows[i].d = number(require(row, "d", where), where + ".d");
    table.rows[i].theta = number(require(row, "theta", where), where + ".theta");
    table.rows[i].a = number(require(row, "a", where), where + ".a");
    table.rows[i].alpha = number(require(row, "alpha", where), where + ".alpha");
  }
  table.validate();
  return table;
}

JointLimits parse_limits(const json& v) {
  if (!v.is_object()) throw ConfigError("joint_limits: expected an object");
  reject_unknown(v, {"q1", "q2", "q3", "q4"}, "joint_limits");
  JointLimits limits;
  Interval* slots[] = {&limits.q1, &limits.q2, &limits.q3, &limits.q4};
  const char* names[] = {"q1", "q2", "q3", "q4"};
  for (int i = 0; i < 4; ++i) {
    if (!v.contains(names[i])) continue;
    const auto lh = numbers<2>(v.at(names[i]), std::string("joint_limits.") + names[i]);
    *slots[i] = {lh[0], lh[1]};
  }
  limits.validate();
  return limits;
}

}  // namespace

PipelineConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
  reject_unknown(doc, {"base_to_rcm", "dh", "joint_limits"}, "config");
  PipelineConfig cfg;
  cfg.rcm.base_to_rcm = parse_transform(require(doc, "base_to_rcm", "config"));
  if (doc.contains("dh")) cfg.dh = parse_dh(doc.at("dh"));
  if (doc.contains("joint_limits")) cfg.limits = parse_limits(doc.at("joint_limits"));
  return cfg;
}

PipelineConfig read_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const PipelineConfig& config) {
  json doc;
  const auto r = config.rcm.base_to_rcm.rotation().row_major();
  const Vec3& t = config.rcm.base_to_rcm.translation();
  doc["base_to_rcm"] = {{"rotation", r}, {"translation", {t.x(), t.y(), t.z()}}};
  json dh = json::array();
  for (const DhRow& row : config.dh.rows) {
    dh.push_back({{"kind", row.kind == JointKind::Revolute ? "R" : "P"},
                  {"d", row.d},
                  {"theta", row.theta},
                  {"a", row.a},
                  {"alpha", row.alpha}});
  }
  doc["dh"] = dh;
  const JointLimits& l = config.limits;
  doc["joint_limits"] = {{"q1", {l.q1.lower, l.q1.upper}},
                         {"q2", {l.q2.lower, l.q2.upper}},
                         {"q3", {l.q3.lower, l.q3.upper}},
                         {"q4", {l.q4.lower, l.q4.upper}}};
  return doc.dump(2) + "\n";
}

}  // namespace ecmlfd

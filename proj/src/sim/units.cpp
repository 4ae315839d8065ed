#include "ifgen/sim/units.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <shared_mutex>

#include <json.hpp>

#include "ifgen/error.hpp"

namespace ifgen::sim {

namespace {

struct Registry {
  std::shared_mutex mutex;
  std::map<std::string, UnitInfo, std::less<>> units{
      {"dBm", {"dBm", "power", 1.0, true}},
      {"mW", {"mW", "power", 1.0, false}},
      {"Mbps", {"Mbps", "rate", 1000.0, false}},
      {"kbps", {"kbps", "rate", 1.0, false}},
      {"ms", {"ms", "time", 1.0, false}},
      {"s", {"s", "time", 1000.0, false}},
      {"unitless", {"unitless", "none", 1.0, false}},
  };
};

Registry& registry() {
  static Registry r;
  return r;
}

double to_base(const UnitInfo& u, double v) {
  if (u.logarithmic) return std::pow(10.0, v / 10.0);
  return v * u.to_base;
}

double from_base(const UnitInfo& u, double v) {
  if (u.logarithmic) return 10.0 * std::log10(v);
  return v / u.to_base;
}

}  // namespace

bool is_known_unit(std::string_view unit) { return unit_info(unit).has_value(); }

std::optional<UnitInfo> unit_info(std::string_view unit) {
  auto& r = registry();
  std::shared_lock lock(r.mutex);
  auto it = r.units.find(unit);
  if (it == r.units.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> known_units() {
  auto& r = registry();
  std::shared_lock lock(r.mutex);
  std::vector<std::string> out;
  for (const auto& [name, _] : r.units) out.push_back(name);
  return out;
}

std::string dimension_of(std::string_view unit) {
  auto info = unit_info(unit);
  return info ? info->dimension : std::string{};
}

bool same_dimension(std::string_view a, std::string_view b) {
  auto da = dimension_of(a);
  return !da.empty() && da == dimension_of(b);
}

void register_linear_unit(const std::string& name, const std::string& dimension, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw Error(ErrorCode::config, "unit '" + name + "' needs a positive to_base factor");
  }
  auto& r = registry();
  std::unique_lock lock(r.mutex);
  if (auto it = r.units.find(name); it != r.units.end()) {
    if (it->second.dimension == dimension && it->second.to_base == factor && !it->second.logarithmic) {
      return;
    }
    throw Error(ErrorCode::config, "unit '" + name + "' already registered");
  }
  r.units.emplace(name, UnitInfo{name, dimension, factor, false});
}

void load_units_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open units config " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::syntax, e.what(), path);
  }
  for (const auto& u : j.value("units", nlohmann::json::array())) {
    register_linear_unit(u.at("name").get<std::string>(), u.at("dimension").get<std::string>(),
                         u.at("to_base").get<double>());
  }
}

double convert_unit(double value, std::string_view from, std::string_view to) {
  auto f = unit_info(from);
  auto t = unit_info(to);
  if (!f || !t) {
    throw Error(ErrorCode::unit_mismatch,
                "unknown unit in conversion " + std::string(from) + " -> " + std::string(to));
  }
  if (f->dimension != t->dimension) {
    throw Error(ErrorCode::unit_mismatch, "cannot convert " + f->name + " (" + f->dimension + ") to " +
                                              t->name + " (" + t->dimension + ")");
  }
  if (f->name == t->name) return value;
  return from_base(*t, to_base(*f, value));
}

}  // namespace ifgen::sim

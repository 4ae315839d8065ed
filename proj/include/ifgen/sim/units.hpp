#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ifgen::sim {

/// Unit tags understood by documents and the adaptation runtime.
///
/// Built-ins: dBm, mW (power); Mbps, kbps (rate); ms, s (time); unitless.
/// Power conversion is logarithmic (mW = 10^(dBm/10)); every other unit is a
/// linear multiple of its dimension's base unit. Additional linear units can
/// be registered at startup, e.g. from a config file.
struct UnitInfo {
  std::string name;
  std::string dimension;
  // Multiplier to the dimension's base unit. Unused for dBm.
  double to_base = 1.0;
  bool logarithmic = false;
};

bool is_known_unit(std::string_view unit);
std::optional<UnitInfo> unit_info(std::string_view unit);
std::vector<std::string> known_units();

// Dimension of `unit`, empty when unknown.
std::string dimension_of(std::string_view unit);
bool same_dimension(std::string_view a, std::string_view b);

/// Registers a linear unit. Throws Error(config) on a clash with an existing
/// name or on a non-positive factor.
void register_linear_unit(const std::string& name, const std::string& dimension, double to_base);

/// Loads `{"units": [{"name", "dimension", "to_base"}]}` and registers each.
void load_units_config(const std::string& path);

/// Converts between units of one dimension. Cross-dimension or unknown units
/// throw Error(unit_mismatch).
double convert_unit(double value, std::string_view from, std::string_view to);

}  // namespace ifgen::sim

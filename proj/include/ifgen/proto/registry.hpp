#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ifgen::proto {

struct NfEndpoint {
  std::string nf_id;
  std::string host = "127.0.0.1";
  int provisioning_port = 0;  // 0 = pick an ephemeral port at boot
  int control_port = 0;
  std::string trust_token;

  bool operator==(const NfEndpoint&) const = default;
};

/// Static discovery table. Ports must be distinct within an endpoint and
/// across the table (zero ports excepted).
struct Registry {
  std::vector<NfEndpoint> endpoints;

  static Registry parse(std::string_view text);
  static Registry load(const std::string& path);
  /// data/config/registry.json: the ten simulated NFs.
  static Registry standard();

  void validate() const;
  const NfEndpoint* find(std::string_view nf_id) const;
};

std::string serialize(const Registry& registry);

/// Throws Error(unknown_nf).
NfEndpoint resolve_nf(const Registry& registry, std::string_view nf_id);

}  // namespace ifgen::proto

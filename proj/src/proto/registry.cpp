#include "ifgen/proto/registry.hpp"

#include <map>

#include "ifgen/doc/codec.hpp"
#include "ifgen/doc/documents.hpp"
#include "ifgen/doc/json_io.hpp"
#include "ifgen/error.hpp"
#include "ifgen/paths.hpp"

namespace ifgen::proto {

namespace json_io = doc::json_io;
using json_io::Json;

Registry Registry::parse(std::string_view text) {
  auto j = json_io::parse_text(text);
  json_io::require_object(j, "");
  json_io::check_kind(j, "nf_registry");
  json_io::check_schema_version(j);
  const auto& nfs = json_io::require(j, "nfs", "");
  if (!nfs.is_array()) throw Error(ErrorCode::schema, "expected array", "nfs");
  Registry r;
  for (std::size_t i = 0; i < nfs.size(); ++i) {
    auto path = "nfs[" + std::to_string(i) + "]";
    json_io::require_object(nfs[i], path);
    NfEndpoint e;
    e.nf_id = json_io::read_string(nfs[i], "nf_id", path);
    if (!doc::is_nf_identifier(e.nf_id)) throw Error(ErrorCode::schema, "not an NF identifier: '" + e.nf_id + "'", path + ".nf_id");
    e.host = json_io::read_string(nfs[i], "host", path);
    for (auto [key, slot] : {std::pair{"provisioning_port", &e.provisioning_port}, std::pair{"control_port", &e.control_port}}) {
      const auto& v = json_io::require(nfs[i], key, path);
      if (!v.is_number_integer() || v.get<std::int64_t>() < 0 || v.get<std::int64_t>() > 65535) {
        throw Error(ErrorCode::schema, "port must be an integer in [0, 65535]", path + "." + key);
      }
      *slot = v.get<int>();
    }
    r.endpoints.push_back(std::move(e));
  }
  r.validate();
  return r;
}

Registry Registry::load(const std::string& path) { return parse(doc::read_file(path)); }

Registry Registry::standard() { return load(data_path("config/registry.json")); }

void Registry::validate() const {
  std::map<int, std::string> owners;
  std::map<std::string, int> ids;
  for (const auto& e : endpoints) {
    if (ids[e.nf_id]++) throw Error(ErrorCode::config, "duplicate NF id " + e.nf_id);
    if (e.provisioning_port != 0 && e.provisioning_port == e.control_port) {
      throw Error(ErrorCode::config, e.nf_id + ": provisioning and control ports collide");
    }
    for (int port : {e.provisioning_port, e.control_port}) {
      if (port == 0) continue;
      auto [it, fresh] = owners.emplace(port, e.nf_id);
      if (!fresh && it->second != e.nf_id) {
        throw Error(ErrorCode::config, "port " + std::to_string(port) + " used by " + it->second + " and " + e.nf_id);
      }
    }
  }
}

const NfEndpoint* Registry::find(std::string_view nf_id) const {
  for (const auto& e : endpoints) {
    if (e.nf_id == nf_id) return &e;
  }
  return nullptr;
}

std::string serialize(const Registry& registry) {
  Json nfs = Json::array();
  for (const auto& e : registry.endpoints) {
    nfs.push_back({{"nf_id", e.nf_id}, {"host", e.host}, {"provisioning_port", e.provisioning_port},
                   {"control_port", e.control_port}});
  }
  return json_io::dump_canonical({{"kind", "nf_registry"}, {"schema_version", "1.0.0"}, {"nfs", nfs}});
}

NfEndpoint resolve_nf(const Registry& registry, std::string_view nf_id) {
  if (const auto* e = registry.find(nf_id)) return *e;
  throw Error(ErrorCode::unknown_nf, "no registry entry for " + std::string(nf_id));
}

}  // namespace ifgen::proto

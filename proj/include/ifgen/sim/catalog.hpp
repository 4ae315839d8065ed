#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include "ifgen/doc/documents.hpp"
#include "ifgen/sim/state.hpp"

namespace ifgen::sim {

/// State transition or query over base-unit arguments. Throws
/// Error(domain) without touching the state when arguments are out of range
/// or name an unknown entity.
using Behavior = std::function<ArgMap(NfState&, const ArgMap&, Timestamp now)>;

/// A logical control function: its base signature (names in snake_case,
/// base units dBm / Mbps / ms) and behavior.
struct CatalogEntry {
  doc::ControlCapability capability;
  Behavior behavior;
};

/// The 30 authored functions of an NF class. Throws Error(precondition)
/// for NfClass::other.
const std::vector<CatalogEntry>& base_catalog(doc::NfClass nf_class);

const CatalogEntry* find_logical(doc::NfClass nf_class, std::string_view name);

/// Checks `args` against the base signature and runs the behavior, appending
/// an Event on success. Throws Error(unknown_function), Error(arity_mismatch)
/// or Error(domain).
ArgMap invoke_logical(NfState& state, std::string_view name, const ArgMap& args, Timestamp now);

}  // namespace ifgen::sim

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ifgen/doc/documents.hpp"
#include "ifgen/value.hpp"

namespace ifgen::sim {

/// An AP radio or a gNB cell. Fields that do not apply to a class keep
/// their defaults.
struct RadioState {
  std::int64_t channel = 0;  // WLAN channel number or NR-ARFCN
  double tx_power_mw = 100.0;
  double rate_kbps = 0.0;
  std::int64_t rate_updates = 0;
  std::int64_t bandwidth_mhz = 20;
  std::string ssid;
  bool enabled = true;
  bool barred = false;
  std::int64_t beacon_interval_ms = 100;
  std::int64_t rts_threshold = 2347;
  std::int64_t max_sessions = 64;
  std::int64_t dtim_period = 1;
  double noise_floor_mw = 1e-9;
  double utilization = 0.0;
  std::int64_t prb_quota = 100;
  std::string scheduler_policy = "proportional_fair";
  std::int64_t inactivity_timer_ms = 10000;
  double ue_power_target_dbm = -90.0;
  double ul_rate_kbps = 0.0;
  std::vector<std::string> neighbors;

  bool operator==(const RadioState&) const = default;
};

/// An associated WLAN station or an attached UE.
struct SessionState {
  std::string attached_to;
  double signal_mw = 1e-6;  // RSSI or RSRP
  std::int64_t tx_bytes = 0;
  std::int64_t rx_bytes = 0;
  std::int64_t priority = 0;
  std::int64_t drx_cycle_ms = 320;
  double rate_limit_kbps = 0.0;
  std::int64_t cqi = 10;

  bool operator==(const SessionState&) const = default;
};

/// One successful internal invocation, recorded with logical names and
/// base-unit arguments.
struct Event {
  std::string function;
  ArgMap args;
  Timestamp at;

  bool operator==(const Event&) const = default;
};

struct Counters {
  std::int64_t reboots = 0;
  std::int64_t releases = 0;
  std::int64_t handovers = 0;

  bool operator==(const Counters&) const = default;
};

struct NfState {
  doc::NfClass nf_class = doc::NfClass::other;
  std::map<std::string, RadioState> radios;
  std::map<std::string, SessionState> sessions;
  std::set<std::string> blocked;
  Counters counters;
  Timestamp boot_time;
  std::vector<Event> log;

  bool operator==(const NfState&) const = default;
};

/// Default state: radios/cells r0, r1 (AP) or c0, c1 (gNB), sessions
/// sta1, sta2 or ue1, ue2, and the dummy entities t0 and t1 in both
/// tables so generated test vectors address something that exists.
NfState initial_state(doc::NfClass nf_class, Timestamp boot_time);

/// Field-by-field comparison with relative tolerance on reals. On mismatch
/// returns false and, when `diff` is set, describes the first difference.
bool equivalent(const NfState& a, const NfState& b, double rel_tol = 1e-9, std::string* diff = nullptr);

bool approx_equal(const Value& a, const Value& b, double rel_tol = 1e-9);

}  // namespace ifgen::sim

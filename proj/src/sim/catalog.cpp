#include "ifgen/sim/catalog.hpp"

#include <algorithm>
#include <cmath>

#include "ifgen/error.hpp"
#include "ifgen/sim/units.hpp"

namespace ifgen::sim {

namespace {

using doc::ControlCapability;
using doc::ParamSpec;
using T = SemanticType;

ParamSpec P(std::string name, T type, std::string description, std::optional<std::string> unit = std::nullopt) {
  return ParamSpec{std::move(name), type, std::move(unit), std::move(description)};
}

const ParamSpec kOk = P("ok", T::boolean, "true when the change was applied");

[[noreturn]] void domain(const std::string& msg) { throw Error(ErrorCode::domain, msg); }

const std::string& text(const ArgMap& a, const char* k) { return a.at(k).as_text(); }
std::int64_t integer(const ArgMap& a, const char* k) { return a.at(k).as_integer(); }
double real(const ArgMap& a, const char* k) { return a.at(k).as_real(); }

RadioState& radio(NfState& s, const ArgMap& a, const char* key) {
  const auto& id = text(a, key);
  auto it = s.radios.find(id);
  if (it == s.radios.end()) domain("unknown " + std::string(s.nf_class == doc::NfClass::gnb ? "cell" : "radio") + " '" + id + "'");
  return it->second;
}

SessionState& session(NfState& s, const ArgMap& a, const char* key) {
  const auto& id = text(a, key);
  auto it = s.sessions.find(id);
  if (it == s.sessions.end()) domain("unknown " + std::string(s.nf_class == doc::NfClass::gnb ? "UE" : "station") + " '" + id + "'");
  return it->second;
}

void in_range(std::int64_t v, std::int64_t lo, std::int64_t hi, const char* what) {
  if (v < lo || v > hi) domain(std::string(what) + " " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

void in_range(double v, double lo, double hi, const char* what) {
  if (!std::isfinite(v) || v < lo || v > hi) domain(std::string(what) + " " + std::to_string(v) + " out of range");
}

double dbm(double mw) { return convert_unit(mw, "mW", "dBm"); }
double mw(double dbm_value) { return convert_unit(dbm_value, "dBm", "mW"); }

ArgMap ok() { return {{"ok", true}}; }

bool valid_wlan_channel(std::int64_t ch) {
  if (ch >= 1 && ch <= 13) return true;
  if (ch >= 36 && ch <= 64) return ch % 4 == 0;
  if (ch >= 100 && ch <= 144) return ch % 4 == 0;
  if (ch >= 149 && ch <= 165) return (ch - 149) % 4 == 0;
  return false;
}

std::vector<CatalogEntry> build_ap() {
  const ParamSpec radio_id = P("radio_id", T::text, "radio identifier");
  const ParamSpec sta_id = P("sta_id", T::text, "station identifier (MAC or alias)");
  std::vector<CatalogEntry> c;
  auto add = [&](std::string name, std::string desc, std::vector<ParamSpec> params, std::vector<ParamSpec> rets,
                 std::vector<std::string> tags, Behavior b) {
    c.push_back({ControlCapability{std::move(name), std::move(desc), std::move(params), std::move(rets), std::move(tags)},
                 std::move(b)});
  };

  add("set_channel", "Set the operating channel of a radio.", {radio_id, P("channel", T::integer, "channel number")},
      {kOk}, {"radio"}, [](NfState& s, const ArgMap& a, Timestamp) {
        auto& r = radio(s, a, "radio_id");
        auto ch = integer(a, "channel");
        if (!valid_wlan_channel(ch)) domain("invalid channel " + std::to_string(ch));
        r.channel = ch;
        return ok();
      });
  add("get_channel", "Get the current operating channel of a radio.", {radio_id},
      {P("channel", T::integer, "channel number")}, {"radio"},
      [](NfState& s, const ArgMap& a, Timestamp) { return ArgMap{{"channel", radio(s, a, "radio_id").channel}}; });
  add("set_tx_power", "Set the transmit power of a radio.", {radio_id, P("power", T::real, "transmit power", "dBm")},
      {kOk}, {"radio"}, [](NfState& s, const ArgMap& a, Timestamp) {
        auto& r = radio(s, a, "radio_id");
        auto p = real(a, "power");
        in_range(p, -20.0, 30.0, "tx power (dBm)");
        r.tx_power_mw = mw(p);
        return ok();
      });
  add("get_tx_power", "Get the transmit power of a radio.", {radio_id},
      {P("power", T::real, "transmit power", "dBm")}, {"radio"},
      [](NfState& s, const ArgMap& a, Timestamp) { return ArgMap{{"power", dbm(radio(s, a, "radio_id").tx_power_mw)}}; });
  add("set_rate", "Set the data rate of a radio link.", {radio_id, P("rate", T::real, "link data rate", "Mbps")},
      {kOk}, {"radio", "rate"}, [](NfState& s, const ArgMap& a, Timestamp) {
        auto& r = radio(s, a, "radio_id");
        auto v = real(a, "rate");
        in_range(v, 0.0, 10000.0, "rate (Mbps)");
        r.rate_kbps = convert_unit(v, "Mbps", "kbps");
        ++r.rate_updates;
        return ok();
      });
  add("get_link_stats", "Get link statistics of a radio: configured data rate and number of rate updates.",
      {radio_id}, {P("rate", T::real, "configured data rate", "Mbps"), P("rate_updates", T::integer, "rate changes since boot")},
      {"telemetry", "rate"}, [](NfState& s, const ArgMap& a, Timestamp) {
        const auto& r = radio(s, a, "radio_id");
        return ArgMap{{"rate", convert_unit(r.rate_kbps, "kbps", "Mbps")}, {"rate_updates", r.rate_updates}};
      });
  add("set_bandwidth", "Set the channel bandwidth of a radio in MHz.", {radio_id, P("bandwidth", T::integer, "20, 40, 80 or 160")},
      {kOk}, {"radio"}, [](NfState& s, const ArgMap& a, Timestamp) {
        auto& r = radio(s, a, "radio_id");
        auto bw = integer(a, "bandwidth");
        if (bw != 20 && bw != 40 && bw != 80 && bw != 160) domain("unsupported bandwidth " + std::to_string(bw));
        r.bandwidth_mhz = bw;
        return ok();
      });
  add("get_bandwidth", "Get the channel bandwidth of a radio in MHz.", {radio_id},
      {P("bandwidth", T::integer, "channel width")}, {"radio"},
      [](NfState& s, const ArgMap& a, Timestamp) { return ArgMap{{"bandwidth", radio(s, a, "radio_id").bandwidth_mhz}}; });
  add("set_ssid", "Set the network name (SSID) broadcast by a radio.", {radio_id, P("ssid", T::text, "1 to 32 bytes")},
      {kOk}, {"radio"}, [](NfState& s, const ArgMap& a, Timestamp) {
        auto& r = radio(s, a, "radio_id");
        const auto& ssid = text(a, "ssid");
        if (ssid.empty() || ssid.size() > 32) domain("SSID must be 1 to 32 bytes");
        r.ssid = ssid;
        return ok();
      });
  add("get_ssid", "Get the network name (SSID) broadcast by a radio.", {radio_id}, {P("ssid", T::text, "network name")},
      {"radio"}, [](NfState& s, const ArgMap& a, Timestamp) { return ArgMap{{"ssid", radio(s, a, "radio_id").ssid}}; });
  add("enable_radio", "Enable a radio so that it starts transmitting.", {radio_id}, {kOk}, {"radio", "admin"},
      [](NfState& s, const ArgMap& a, Timestamp) {
        radio(s, a, "radio_id").enabled = true;
        return ok();
      });
  add("disable_radio", "Disable a radio and stop its transmissions.", {radio_id}, {kOk}, {"radio", "admin"},
      [](NfState& s, const ArgMap& a, Timestamp) {
        radio(s, a, "radio_id").enabled = false;
        return ok();
      });
  add("get_radio_status", "Get whether a radio is enabled and which channel it uses.", {radio_id},
      {P("enabled", T::boolean, "radio is transmitting"), P("channel", T::integer, "channel number")}, {"radio"},
      [](NfState& s, const ArgMap& a, Timestamp) {
        const auto& r = radio(s, a, "radio_id");
        return ArgMap{{"enabled", r.enabled}, {"channel", r.channel}};
      });
  add("list_stations", "List the stations associated with the access point.", {},
      {P("stations", T::text_list, "station identifiers")}, {"session"}, [](NfState& s, const ArgMap&, Timestamp) {
        TextList out;
        for (const auto& [id, _] : s.sessions) out.push_back(id);
        return ArgMap{{"stations", out}};
      });
  add("disassociate_sta", "Disconnect an associated station from the access point.", {sta_id}, {kOk}, {"session"},
      [](NfState& s, const ArgMap& a, Timestamp) {
        session(s, a, "sta_id");
        s.sessions.erase(text(a, "sta_id"));
        ++s.counters.releases;
        return ok();
      });
  add("get_sta_stats", "Get signal strength and traffic counters of an associated station.", {sta_id},
      {P("rssi", T::real, "received signal strength", "dBm"), P("tx_bytes", T::integer, "bytes sent to the station"),
       P("rx_bytes", T::integer, "bytes received from the station")},
      {"telemetry", "session"}, [](NfState& s, const ArgMap& a, Timestamp) {
        const auto& st = session(s, a, "sta_id");
        return ArgMap{{"rssi", dbm(st.signal_mw)}, {"tx_bytes", st.tx_bytes}, {"rx_bytes", st.rx_bytes}};
      });
  add("set_beacon_interval", "Set the beacon interval of a radio.",
      {radio_id, P("interval", T::integer, "time between beacons", "ms")}, {kOk}, {"radio"},
      [](NfState& s, const ArgMap& a, Timestamp) {
        auto& r = radio(s, a, "radio_id");
        auto v = integer(a, "interval");
        in_range(v, 1, 10000, "beacon interval (ms)");
        r.beacon_interval_ms = v;
        return ok();
      });
  add("get_beacon_interval", "Get the beacon interval of a radio.", {radio_id},
      {P("interval", T::integer, "time between beacons", "ms")}, {"radio"},
      [](NfState& s, const ArgMap& a, Timestamp) { return ArgMap{{"interval", radio(s, a, "radio_id").beacon_interval_ms}}; });
  add("set_rts_threshold", "Set the RTS/CTS threshold of a radio in bytes.",
      {radio_id, P("threshold", T::integer, "frame size above which RTS/CTS is used")}, {kOk}, {"radio"},
      [](NfState& s, const ArgMap& a, Timestamp) {
        auto& r = radio(s, a, "radio_id");
        auto v = integer(a, "threshold");
        in_range(v, 0, 2347, "RTS threshold");
        r.rts_threshold = v;
        return ok();
      });
  add("set_max_stations", "Set the maximum number of stations a radio accepts.",
      {radio_id, P("limit", T::integer, "station limit")}, {kOk}, {"radio", "session"},
      [](NfState& s, const ArgMap& a, Timestamp) {
        auto& r = radio(s, a, "radio_id");
        auto v = integer(a, "limit");
        in_range(v, 1, 512, "station limit");
        r.max_sessions = v;
        return ok();
      });
  add("block_sta", "Block a station from associating with the access point.", {sta_id}, {kOk}, {"session"},
      [](NfState& s, const ArgMap& a, Timestamp) {
        const auto& id = text(a, "sta_id");
        if (id.empty()) domain("empty station identifier");
        s.blocked.insert(id);
        s.sessions.erase(id);
        return ok();
      });
  add("unblock_sta", "Allow a previously blocked station to associate again.", {sta_id}, {kOk}, {"session"},
      [](NfState& s, const ArgMap& a, Timestamp) {
        if (s.blocked.erase(text(a, "sta_id")) == 0) domain("station '" + text(a, "sta_id") + "' is not blocked");
        return ok();
      });
  add("get_blocklist", "Get the list of blocked stations.", {}, {P("stations", T::text_list, "blocked station identifiers")},
      {"session"}, [](NfState& s, const ArgMap&, Timestamp) {
        return ArgMap{{"stations", TextList(s.blocked.begin(), s.blocked.end())}};
      });
  add("set_qos_priority", "Set the QoS access category priority (0 to 7) of a station.",
      {sta_id, P("priority", T::integer, "user priority 0..7")}, {kOk}, {"session"},
      [](NfState& s, const ArgMap& a, Timestamp) {
        auto& st = session(s, a, "sta_id");
        auto v = integer(a, "priority");
        in_range(v, 0, 7, "priority");
        st.priority = v;
        return ok();
      });
  add("get_uptime", "Get the time since the access point last booted.", {},
      {P("uptime", T::integer, "time since boot", "ms")}, {"admin"},
      [](NfState& s, const ArgMap&, Timestamp now) { return ArgMap{{"uptime", now.ms - s.boot_time.ms}}; });
  add("reboot", "Reboot the access point.", {}, {kOk}, {"admin"}, [](NfState& s, const ArgMap&, Timestamp now) {
    s.boot_time = now;
    ++s.counters.reboots;
    for (auto& [_, r] : s.radios) r.enabled = true;
    return ok();
  });
  add("get_capabilities", "Report the hardware capabilities of the access point: frequency bands and station limit.",
      {}, {P("bands", T::text_list, "supported bands"), P("max_stations", T::integer, "largest station limit")},
      {"admin"}, [](NfState& s, const ArgMap&, Timestamp) {
        std::int64_t most = 0;
        for (const auto& [_, r] : s.radios) most = std::max(most, r.max_sessions);
        return ArgMap{{"bands", TextList{"2.4GHz", "5GHz"}}, {"max_stations", most}};
      });
  add("get_noise_floor", "Get the measured noise floor of a radio.", {radio_id},
      {P("noise", T::real, "noise floor", "dBm")}, {"telemetry", "radio"},
      [](NfState& s, const ArgMap& a, Timestamp) { return ArgMap{{"noise", dbm(radio(s, a, "radio_id").noise_floor_mw)}}; });
  add("get_channel_utilization", "Get the fraction of airtime in use on a radio's channel.", {radio_id},
      {P("utilization", T::real, "busy fraction 0..1")}, {"telemetry", "radio"},
      [](NfState& s, const ArgMap& a, Timestamp) { return ArgMap{{"utilization", radio(s, a, "radio_id").utilization}}; });
  add("set_dtim_period", "Set the DTIM period of a radio in beacon intervals.",
      {radio_id, P("period", T::integer, "beacons between DTIMs")}, {kOk}, {"radio"},
      [](NfState& s, const ArgMap& a, Timestamp) {
        auto& r = radio(s, a, "radio_id");
        auto v = integer(a, "period");
        in_range(v, 1, 255, "DTIM period");
        r.dtim_period = v;
        return ok();
      });
  return c;
}

const std::int64_t kDrxCycles[] = {10, 20, 32, 40, 64, 80, 128, 160, 256, 320, 512, 640, 1024, 1280, 2048, 2560, 5120, 10240};

std::vector<CatalogEntry> build_gnb() {
  const ParamSpec cell_id = P("cell_id", T::text, "cell identifier");
  const ParamSpec ue_id = P("ue_id", T::text, "UE identifier");
  std::vector<CatalogEntry> c;
  auto add = [&](std::string name, std::string desc, std::vector<ParamSpec> params, std::vector<ParamSpec> rets,
                 std::vector<std::string> tags, Behavior b) {
    c.push_back({ControlCapability{std::move(name), std::move(desc), std::move(params), std::move(rets), std::move(tags)},
                 std::move(b)});
  };
  auto active_cell = [](NfState& s, const std::string& id) -> RadioState& {
    auto it = s.radios.find(id);
    if (it == s.radios.end()) domain("unknown cell '" + id + "'");
    return it->second;
  };

  add("release_ue", "Release a UE context and free its radio resources.", {ue_id}, {kOk}, {"session"},
      [](NfState& s, const ArgMap& a, Timestamp) {
        session(s, a, "ue_id");
        s.sessions.erase(text(a, "ue_id"));
        ++s.counters.releases;
        return ok();
      });
  add("get_rate_stats", "Get aggregate downlink and uplink rate statistics of a cell.", {cell_id},
      {P("dl_rate", T::real, "sum of UE downlink rate limits", "Mbps"), P("ul_rate", T::real, "uplink rate", "Mbps"),
       P("rate_updates", T::integer, "rate changes since boot")},
      {"telemetry", "rate"}, [](NfState& s, const ArgMap& a, Timestamp) {
        const auto& id = text(a, "cell_id");
        const auto& cell = radio(s, a, "cell_id");
        double dl = 0.0;
        for (const auto& [_, ue] : s.sessions) {
          if (ue.attached_to == id) dl += ue.rate_limit_kbps;
        }
        return ArgMap{{"dl_rate", convert_unit(dl, "kbps", "Mbps")},
                      {"ul_rate", convert_unit(cell.ul_rate_kbps, "kbps", "Mbps")},
                      {"rate_updates", cell.rate_updates}};
      });
  add("set_rate_limit", "Set the maximum downlink bit rate of a UE.", {ue_id, P("max_rate", T::real, "bit rate cap", "Mbps")},
      {kOk}, {"session", "rate"}, [](NfState& s, const ArgMap& a, Timestamp) {
        auto& ue = session(s, a, "ue_id");
        auto v = real(a, "max_rate");
        in_range(v, 0.0, 20000.0, "rate limit (Mbps)");
        auto cell = s.radios.find(ue.attached_to);
        if (cell == s.radios.end()) domain("UE is not attached to a cell");
        ue.rate_limit_kbps = convert_unit(v, "Mbps", "kbps");
        ++cell->second.rate_updates;
        return ok();
      });
  add("get_ue_stats", "Get channel quality and traffic counters of a UE.", {ue_id},
      {P("cqi", T::integer, "channel quality indicator"), P("dl_bytes", T::integer, "downlink bytes"),
       P("ul_bytes", T::integer, "uplink bytes")},
      {"telemetry", "session"}, [](NfState& s, const ArgMap& a, Timestamp) {
        const auto& ue = session(s, a, "ue_id");
        return ArgMap{{"cqi", ue.cqi}, {"dl_bytes", ue.rx_bytes}, {"ul_bytes", ue.tx_bytes}};
      });
  add("set_arfcn", "Set the NR-ARFCN carrier frequency of a cell.", {cell_id, P("arfcn", T::integer, "absolute radio frequency channel number")},
      {kOk}, {"radio"}, [](NfState& s, const ArgMap& a, Timestamp) {
        auto& cell = radio(s, a, "cell_id");
        auto v = integer(a, "arfcn");
        in_range(v, 0, 3279165, "NR-ARFCN");
        cell.channel = v;
        return ok();
      });
  add("get_arfcn", "Get the NR-ARFCN carrier frequency of a cell.", {cell_id},
      {P("arfcn", T::integer, "absolute radio frequency channel number")}, {"radio"},
      [](NfState& s, const ArgMap& a, Timestamp) { return ArgMap{{"arfcn", radio(s, a, "cell_id").channel}}; });
  add("set_cell_tx_power", "Set the downlink transmit power of a cell.",
      {cell_id, P("power", T::real, "transmit power", "dBm")}, {kOk}, {"radio"},
      [](NfState& s, const ArgMap& a, Timestamp) {
        auto& cell = radio(s, a, "cell_id");
        auto p = real(a, "power");
        in_range(p, -20.0, 46.0, "cell power (dBm)");
        cell.tx_power_mw = mw(p);
        return ok();
      });
  add("get_cell_tx_power", "Get the downlink transmit power of a cell.", {cell_id},
      {P("power", T::real, "transmit power", "dBm")}, {"radio"},
      [](NfState& s, const ArgMap& a, Timestamp) { return ArgMap{{"power", dbm(radio(s, a, "cell_id").tx_power_mw)}}; });
  add("handover_ue", "Hand over a UE to a target cell.", {ue_id, P("target_cell", T::text, "destination cell identifier")},
      {kOk}, {"session", "mobility"}, [active_cell](NfState& s, const ArgMap& a, Timestamp) {
        auto& ue = session(s, a, "ue_id");
        const auto& target = text(a, "target_cell");
        auto& cell = active_cell(s, target);
        if (!cell.enabled || cell.barred) domain("target cell '" + target + "' does not accept UEs");
        if (ue.attached_to == target) domain("UE already served by '" + target + "'");
        ue.attached_to = target;
        ++s.counters.handovers;
        return ok();
      });
  add("list_ues", "List the UEs attached to a cell.", {cell_id}, {P("ues", T::text_list, "UE identifiers")},
      {"session"}, [](NfState& s, const ArgMap& a, Timestamp) {
        const auto& id = text(a, "cell_id");
        radio(s, a, "cell_id");
        TextList out;
        for (const auto& [ue_name, ue] : s.sessions) {
          if (ue.attached_to == id) out.push_back(ue_name);
        }
        return ArgMap{{"ues", out}};
      });
  add("set_prb_quota", "Set the share of physical resource blocks (percent) a cell may schedule.",
      {cell_id, P("quota", T::integer, "percent of PRBs")}, {kOk}, {"radio"},
      [](NfState& s, const ArgMap& a, Timestamp) {
        auto& cell = radio(s, a, "cell_id");
        auto v = integer(a, "quota");
        in_range(v, 0, 100, "PRB quota");
        cell.prb_quota = v;
        return ok();
      });
  add("get_prb_usage", "Get the percentage of physical resource blocks in use in a cell.", {cell_id},
      {P("used", T::integer, "percent of PRBs in use")}, {"telemetry", "radio"},
      [](NfState& s, const ArgMap& a, Timestamp) {
        const auto& id = text(a, "cell_id");
        const auto& cell = radio(s, a, "cell_id");
        std::int64_t n = 0;
        for (const auto& [_, ue] : s.sessions) n += ue.attached_to == id ? 1 : 0;
        return ArgMap{{"used", std::min<std::int64_t>(cell.prb_quota, 10 * n)}};
      });
  add("activate_cell", "Activate a cell so it serves UEs.", {cell_id}, {kOk}, {"admin", "radio"},
      [](NfState& s, const ArgMap& a, Timestamp) {
        radio(s, a, "cell_id").enabled = true;
        return ok();
      });
  add("deactivate_cell", "Deactivate a cell and stop serving UEs.", {cell_id}, {kOk}, {"admin", "radio"},
      [](NfState& s, const ArgMap& a, Timestamp) {
        radio(s, a, "cell_id").enabled = false;
        return ok();
      });
  add("get_cell_status", "Get whether a cell is active and its NR-ARFCN.", {cell_id},
      {P("active", T::boolean, "cell serves UEs"), P("arfcn", T::integer, "carrier")}, {"radio"},
      [](NfState& s, const ArgMap& a, Timestamp) {
        const auto& cell = radio(s, a, "cell_id");
        return ArgMap{{"active", cell.enabled}, {"arfcn", cell.channel}};
      });
  add("set_scheduler_policy", "Set the MAC scheduler policy of a cell (round_robin, proportional_fair or max_cqi).",
      {cell_id, P("policy", T::text, "scheduler name")}, {kOk}, {"radio"},
      [](NfState& s, const ArgMap& a, Timestamp) {
        auto& cell = radio(s, a, "cell_id");
        const auto& p = text(a, "policy");
        if (p != "round_robin" && p != "proportional_fair" && p != "max_cqi") domain("unknown scheduler policy '" + p + "'");
        cell.scheduler_policy = p;
        return ok();
      });
  add("get_scheduler_policy", "Get the MAC scheduler policy of a cell.", {cell_id},
      {P("policy", T::text, "scheduler name")}, {"radio"},
      [](NfState& s, const ArgMap& a, Timestamp) { return ArgMap{{"policy", radio(s, a, "cell_id").scheduler_policy}}; });
  add("set_drx_cycle", "Set the discontinuous reception (DRX) cycle of a UE.",
      {ue_id, P("cycle", T::integer, "DRX long cycle", "ms")}, {kOk}, {"session"},
      [](NfState& s, const ArgMap& a, Timestamp) {
        auto& ue = session(s, a, "ue_id");
        auto v = integer(a, "cycle");
        if (std::find(std::begin(kDrxCycles), std::end(kDrxCycles), v) == std::end(kDrxCycles)) {
          domain("unsupported DRX cycle " + std::to_string(v));
        }
        ue.drx_cycle_ms = v;
        return ok();
      });
  add("get_drx_cycle", "Get the discontinuous reception (DRX) cycle of a UE.", {ue_id},
      {P("cycle", T::integer, "DRX long cycle", "ms")}, {"session"},
      [](NfState& s, const ArgMap& a, Timestamp) { return ArgMap{{"cycle", session(s, a, "ue_id").drx_cycle_ms}}; });
  add("set_inactivity_timer", "Set how long a UE may stay idle in a cell before release.",
      {cell_id, P("timeout", T::integer, "inactivity timeout", "ms")}, {kOk}, {"session"},
      [](NfState& s, const ArgMap& a, Timestamp) {
        auto& cell = radio(s, a, "cell_id");
        auto v = integer(a, "timeout");
        in_range(v, 1, 86'400'000, "inactivity timer (ms)");
        cell.inactivity_timer_ms = v;
        return ok();
      });
  add("set_max_ues", "Set the maximum number of UEs a cell admits.", {cell_id, P("limit", T::integer, "UE limit")},
      {kOk}, {"session"}, [](NfState& s, const ArgMap& a, Timestamp) {
        auto& cell = radio(s, a, "cell_id");
        auto v = integer(a, "limit");
        in_range(v, 1, 1024, "UE limit");
        cell.max_sessions = v;
        return ok();
      });
  add("bar_cell", "Bar a cell so that UEs cannot camp on it.", {cell_id}, {kOk}, {"admin"},
      [](NfState& s, const ArgMap& a, Timestamp) {
        radio(s, a, "cell_id").barred = true;
        return ok();
      });
  add("unbar_cell", "Lift the barring of a cell so UEs may camp on it again.", {cell_id}, {kOk}, {"admin"},
      [](NfState& s, const ArgMap& a, Timestamp) {
        radio(s, a, "cell_id").barred = false;
        return ok();
      });
  add("get_neighbor_cells", "Get the neighbor relation list of a cell.", {cell_id},
      {P("neighbors", T::text_list, "neighbor cell identifiers")}, {"mobility"},
      [](NfState& s, const ArgMap& a, Timestamp) { return ArgMap{{"neighbors", radio(s, a, "cell_id").neighbors}}; });
  add("add_neighbor_cell", "Add a neighbor relation from a cell to another cell.",
      {cell_id, P("neighbor_id", T::text, "neighbor cell identifier")}, {kOk}, {"mobility"},
      [active_cell](NfState& s, const ArgMap& a, Timestamp) {
        auto& cell = radio(s, a, "cell_id");
        const auto& n = text(a, "neighbor_id");
        active_cell(s, n);
        if (n == text(a, "cell_id")) domain("a cell cannot neighbor itself");
        if (std::find(cell.neighbors.begin(), cell.neighbors.end(), n) != cell.neighbors.end()) {
          domain("neighbor '" + n + "' already present");
        }
        cell.neighbors.push_back(n);
        return ok();
      });
  add("get_ue_rsrp", "Get the reference signal received power (RSRP) reported by a UE.", {ue_id},
      {P("rsrp", T::real, "reference signal received power", "dBm")}, {"telemetry", "session"},
      [](NfState& s, const ArgMap& a, Timestamp) { return ArgMap{{"rsrp", dbm(session(s, a, "ue_id").signal_mw)}}; });
  add("restart_du", "Restart the distributed unit of the gNB.", {}, {kOk}, {"admin"},
      [](NfState& s, const ArgMap&, Timestamp now) {
        s.boot_time = now;
        ++s.counters.reboots;
        for (auto& [_, cell] : s.radios) cell.enabled = true;
        return ok();
      });
  add("get_du_uptime", "Get the time since the distributed unit last restarted.", {},
      {P("uptime", T::integer, "time since restart", "ms")}, {"admin"},
      [](NfState& s, const ArgMap&, Timestamp now) { return ArgMap{{"uptime", now.ms - s.boot_time.ms}}; });
  add("get_gnb_info", "Report gNB identity and configured cells.", {},
      {P("gnb_id", T::text, "gNB identifier"), P("cells", T::text_list, "cell identifiers")}, {"admin"},
      [](NfState& s, const ArgMap&, Timestamp) {
        TextList cells;
        for (const auto& [id, _] : s.radios) cells.push_back(id);
        return ArgMap{{"gnb_id", "gnb-0001"}, {"cells", cells}};
      });
  add("set_ue_power_target", "Set the nominal uplink power target (P0) of a cell.",
      {cell_id, P("target", T::real, "nominal received power", "dBm")}, {kOk}, {"radio"},
      [](NfState& s, const ArgMap& a, Timestamp) {
        auto& cell = radio(s, a, "cell_id");
        auto v = real(a, "target");
        in_range(v, -202.0, 24.0, "P0 (dBm)");
        cell.ue_power_target_dbm = v;
        return ok();
      });
  return c;
}

void check_args(const doc::ControlCapability& cap, const ArgMap& args) {
  if (args.size() != cap.params.size()) {
    throw Error(ErrorCode::arity_mismatch, cap.name + " expects " + std::to_string(cap.params.size()) + " arguments, got " +
                                               std::to_string(args.size()));
  }
  for (const auto& p : cap.params) {
    auto it = args.find(p.name);
    if (it == args.end()) throw Error(ErrorCode::arity_mismatch, cap.name + ": missing argument '" + p.name + "'");
    if (it->second.type() != p.type) {
      throw Error(ErrorCode::arity_mismatch, cap.name + ": argument '" + p.name + "' must be " +
                                                 std::string(to_string(p.type)) + ", got " +
                                                 std::string(to_string(it->second.type())));
    }
  }
}

}  // namespace

const std::vector<CatalogEntry>& base_catalog(doc::NfClass nf_class) {
  static const std::vector<CatalogEntry> ap = build_ap();
  static const std::vector<CatalogEntry> gnb = build_gnb();
  switch (nf_class) {
    case doc::NfClass::wlan_ap: return ap;
    case doc::NfClass::gnb: return gnb;
    case doc::NfClass::other: break;
  }
  throw Error(ErrorCode::precondition, "no catalog for NF class 'other'");
}

const CatalogEntry* find_logical(doc::NfClass nf_class, std::string_view name) {
  for (const auto& e : base_catalog(nf_class)) {
    if (e.capability.name == name) return &e;
  }
  return nullptr;
}

ArgMap invoke_logical(NfState& state, std::string_view name, const ArgMap& args, Timestamp now) {
  const auto* entry = find_logical(state.nf_class, name);
  if (!entry) throw Error(ErrorCode::unknown_function, "no function '" + std::string(name) + "'");
  check_args(entry->capability, args);
  auto result = entry->behavior(state, args, now);
  state.log.push_back(Event{entry->capability.name, args, now});
  return result;
}

}  // namespace ifgen::sim

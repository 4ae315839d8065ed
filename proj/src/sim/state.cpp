#include "ifgen/sim/state.hpp"

#include <algorithm>
#include <cmath>

namespace ifgen::sim {

namespace {

bool close(double a, double b, double tol) {
  if (a == b) return true;
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  return std::fabs(a - b) <= tol * std::max({std::fabs(a), std::fabs(b), 1e-300});
}

struct Comparer {
  double tol;
  std::string* diff;

  bool fail(const std::string& what) {
    if (diff) *diff = what;
    return false;
  }
  template <typename T>
  bool eq(const T& a, const T& b, const std::string& what) {
    if constexpr (std::is_same_v<T, double>) {
      return close(a, b, tol) || fail(what + ": " + std::to_string(a) + " vs " + std::to_string(b));
    } else {
      return a == b || fail(what);
    }
  }
};

bool radios_equal(const RadioState& a, const RadioState& b, const std::string& p, Comparer& c) {
  return c.eq(a.channel, b.channel, p + ".channel") && c.eq(a.tx_power_mw, b.tx_power_mw, p + ".tx_power_mw") &&
         c.eq(a.rate_kbps, b.rate_kbps, p + ".rate_kbps") && c.eq(a.rate_updates, b.rate_updates, p + ".rate_updates") &&
         c.eq(a.bandwidth_mhz, b.bandwidth_mhz, p + ".bandwidth_mhz") && c.eq(a.ssid, b.ssid, p + ".ssid") &&
         c.eq(a.enabled, b.enabled, p + ".enabled") && c.eq(a.barred, b.barred, p + ".barred") &&
         c.eq(a.beacon_interval_ms, b.beacon_interval_ms, p + ".beacon_interval_ms") &&
         c.eq(a.rts_threshold, b.rts_threshold, p + ".rts_threshold") &&
         c.eq(a.max_sessions, b.max_sessions, p + ".max_sessions") && c.eq(a.dtim_period, b.dtim_period, p + ".dtim") &&
         c.eq(a.noise_floor_mw, b.noise_floor_mw, p + ".noise_floor_mw") &&
         c.eq(a.utilization, b.utilization, p + ".utilization") && c.eq(a.prb_quota, b.prb_quota, p + ".prb_quota") &&
         c.eq(a.scheduler_policy, b.scheduler_policy, p + ".scheduler_policy") &&
         c.eq(a.inactivity_timer_ms, b.inactivity_timer_ms, p + ".inactivity_timer_ms") &&
         c.eq(a.ue_power_target_dbm, b.ue_power_target_dbm, p + ".ue_power_target_dbm") &&
         c.eq(a.ul_rate_kbps, b.ul_rate_kbps, p + ".ul_rate_kbps") && c.eq(a.neighbors, b.neighbors, p + ".neighbors");
}

bool sessions_equal(const SessionState& a, const SessionState& b, const std::string& p, Comparer& c) {
  return c.eq(a.attached_to, b.attached_to, p + ".attached_to") && c.eq(a.signal_mw, b.signal_mw, p + ".signal_mw") &&
         c.eq(a.tx_bytes, b.tx_bytes, p + ".tx_bytes") && c.eq(a.rx_bytes, b.rx_bytes, p + ".rx_bytes") &&
         c.eq(a.priority, b.priority, p + ".priority") && c.eq(a.drx_cycle_ms, b.drx_cycle_ms, p + ".drx_cycle_ms") &&
         c.eq(a.rate_limit_kbps, b.rate_limit_kbps, p + ".rate_limit_kbps") && c.eq(a.cqi, b.cqi, p + ".cqi");
}

template <typename M, typename F>
bool maps_equal(const M& a, const M& b, const std::string& p, Comparer& c, F&& item) {
  if (a.size() != b.size()) return c.fail(p + " size " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) {
    if (ia->first != ib->first) return c.fail(p + " key " + ia->first + " vs " + ib->first);
    if (!item(ia->second, ib->second, p + "[" + ia->first + "]", c)) return false;
  }
  return true;
}

}  // namespace

bool approx_equal(const Value& a, const Value& b, double rel_tol) {
  if (a.type() != b.type()) return false;
  if (a.type() == SemanticType::real) return close(a.as_real(), b.as_real(), rel_tol);
  return a == b;
}

NfState initial_state(doc::NfClass nf_class, Timestamp boot_time) {
  NfState s;
  s.nf_class = nf_class;
  s.boot_time = boot_time;
  if (nf_class == doc::NfClass::gnb) {
    std::int64_t arfcn = 630000;
    for (const char* id : {"c0", "c1", "t0", "t1"}) {
      RadioState cell;
      cell.channel = arfcn;
      arfcn += 2000;
      cell.tx_power_mw = 10000.0;  // 40 dBm
      cell.bandwidth_mhz = 100;
      cell.max_sessions = 256;
      cell.ul_rate_kbps = 20000.0;
      s.radios[id] = cell;
    }
    s.radios["c0"].neighbors = {"c1"};
    s.radios["c1"].neighbors = {"c0"};
    const std::pair<const char*, const char*> ues[] = {{"ue1", "c0"}, {"ue2", "c1"}, {"t0", "c0"}, {"t1", "c1"}};
    std::int64_t n = 1;
    for (auto [id, cell] : ues) {
      SessionState ue;
      ue.attached_to = cell;
      ue.signal_mw = 1e-10 * static_cast<double>(n);
      ue.tx_bytes = 1000 * n;
      ue.rx_bytes = 5000 * n;
      ue.rate_limit_kbps = 10000.0;
      ue.cqi = 8 + n;
      s.sessions[id] = ue;
      ++n;
    }
  } else {
    const std::pair<const char*, std::int64_t> radios[] = {{"r0", 6}, {"r1", 36}, {"t0", 1}, {"t1", 44}};
    for (auto [id, ch] : radios) {
      RadioState r;
      r.channel = ch;
      r.bandwidth_mhz = ch > 14 ? 80 : 20;
      r.ssid = std::string("net-") + id;
      r.rate_kbps = 54000.0;
      r.noise_floor_mw = std::pow(10.0, -9.5);  // -95 dBm
      r.utilization = 0.25;
      s.radios[id] = r;
    }
    const std::pair<const char*, const char*> stas[] = {{"sta1", "r0"}, {"sta2", "r1"}, {"t0", "r0"}, {"t1", "r1"}};
    std::int64_t n = 1;
    for (auto [id, radio] : stas) {
      SessionState sta;
      sta.attached_to = radio;
      sta.signal_mw = 1e-6 * static_cast<double>(n);
      sta.tx_bytes = 2000 * n;
      sta.rx_bytes = 3000 * n;
      s.sessions[id] = sta;
      ++n;
    }
  }
  return s;
}

bool equivalent(const NfState& a, const NfState& b, double rel_tol, std::string* diff) {
  Comparer c{rel_tol, diff};
  if (!c.eq(a.nf_class, b.nf_class, "nf_class")) return false;
  if (!maps_equal(a.radios, b.radios, "radios", c, radios_equal)) return false;
  if (!maps_equal(a.sessions, b.sessions, "sessions", c, sessions_equal)) return false;
  if (!c.eq(a.blocked, b.blocked, "blocked") || !c.eq(a.counters, b.counters, "counters") ||
      !c.eq(a.boot_time, b.boot_time, "boot_time")) {
    return false;
  }
  if (a.log.size() != b.log.size()) {
    return c.fail("log length " + std::to_string(a.log.size()) + " vs " + std::to_string(b.log.size()));
  }
  for (std::size_t i = 0; i < a.log.size(); ++i) {
    const auto& ea = a.log[i];
    const auto& eb = b.log[i];
    auto p = "log[" + std::to_string(i) + "]";
    if (ea.function != eb.function || ea.at != eb.at || ea.args.size() != eb.args.size()) return c.fail(p);
    for (auto ia = ea.args.begin(), ib = eb.args.begin(); ia != ea.args.end(); ++ia, ++ib) {
      if (ia->first != ib->first || !approx_equal(ia->second, ib->second, rel_tol)) return c.fail(p + "." + ia->first);
    }
  }
  return true;
}

}  // namespace ifgen::sim

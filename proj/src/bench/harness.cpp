#include "ifgen/bench/harness.hpp"

#include <random>

#include "ifgen/codegen/runtime.hpp"
#include "ifgen/codegen/validation.hpp"
#include "ifgen/error.hpp"
#include "ifgen/match/agent.hpp"
#include "ifgen/sim/executor.hpp"
#include "ifgen/sim/variant.hpp"

namespace ifgen::bench {

namespace {

constexpr int kVendors = 5;

std::string vendor_id(doc::NfClass nf_class, int index) {
  return std::string(nf_class == doc::NfClass::gnb ? "gnb" : "ap") + "-vendor" + std::to_string(index);
}

bool rules_empty(const ParaphraseRules& r) { return r.substitutions.empty() && r.padding.empty() && r.articles.empty(); }

gen::Money priced(const gen::TokenUsage& usage, const gen::PriceTable& prices, const std::string& backend_id) {
  return gen::cost_of(usage, prices.at(backend_id));
}

doc::ControlFunctionRequirement variation(const doc::ControlFunctionRequirement& req, int k,
                                          const VariationOptions& options, gen::TokenUsage* usage) {
  const auto& rules = options.rules ? *options.rules : ParaphraseRules::standard();
  if (options.mode == VariationMode::backend) {
    if (!options.backend) throw Error(ErrorCode::precondition, "backend variation mode needs a backend");
    return vary_with_backend(req, k, *options.backend, usage);
  }
  return rules_empty(rules) ? req : vary(req, k, rules);
}

match::CapabilitySource fixed_source(const doc::CapabilityDocument& caps) {
  return [caps] { return caps; };
}

}  // namespace

std::string_view to_string(Task t) {
  switch (t) {
    case Task::matching: return "matching";
    case Task::codegen: return "codegen";
    case Task::augmentation: return "augmentation";
  }
  return "?";
}

std::optional<Task> parse_task(std::string_view s) {
  for (auto t : {Task::matching, Task::codegen, Task::augmentation}) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

std::vector<doc::ControlFunctionRequirement> generate_variations(const doc::ControlFunctionRequirement& req, int n,
                                                                 const VariationOptions& options,
                                                                 gen::TokenUsage* usage) {
  if (n < 0) throw Error(ErrorCode::precondition, "variation count must be non-negative");
  std::vector<doc::ControlFunctionRequirement> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out.push_back(variation(req, k, options, usage));
  return out;
}

std::vector<std::string> label_violations(const Corpus& corpus, int variations, const match::Scorer& scorer) {
  std::vector<std::string> out;
  for (const auto& e : corpus.entries) {
    auto vs = generate_variations(e.requirement, variations);
    for (int k = 0; k < variations; ++k) {
      auto nf = vendor_id(e.nf_class, k % kVendors + 1);
      auto profile = sim::standard_profile(nf);
      auto ranked = match::rank_candidates(vs[static_cast<std::size_t>(k)], profile->capability_doc, scorer);
      const auto* rw = profile->by_logical(e.label);
      if (ranked.empty() || !rw || ranked.front().name != rw->capability_name) {
        out.push_back(e.requirement.name + "#" + std::to_string(k) + "@" + nf);
      }
    }
  }
  return out;
}

MatchingBenchResult run_matching_benchmark(const Corpus& corpus, gen::Backend& backend, const gen::PriceTable& prices,
                                           const MatchingBenchOptions& options) {
  if (corpus.entries.empty()) throw Error(ErrorCode::precondition, "matching benchmark needs a non-empty corpus");
  if (options.variations < 1) throw Error(ErrorCode::precondition, "variation count must be positive");
  const auto& config = match::MatchingConfig::standard();
  const auto& scorer = match::Scorer::standard();
  VariationOptions vopts{options.mode, nullptr, &backend};

  MatchingBenchResult result;
  for (int k = 0; k < options.variations; ++k) {
    for (auto nf_class : {doc::NfClass::wlan_ap, doc::NfClass::gnb}) {
      auto entries = corpus.for_class(nf_class);
      if (entries.empty()) continue;
      auto nf = vendor_id(nf_class, k % kVendors + 1);
      auto profile = sim::standard_profile(nf);

      std::vector<doc::ControlFunctionRequirement> reqs;
      std::vector<gen::TokenUsage> variation_usage;
      for (const auto* e : entries) {
        gen::TokenUsage u;
        reqs.push_back(variation(e->requirement, k, vopts, &u));
        variation_usage.push_back(u);
      }
      auto session = match::run_matching_session(reqs, fixed_source(profile->capability_doc), config, backend, scorer);

      for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& o = session.outcomes[i];
        const auto* rw = profile->by_logical(entries[i]->label);
        bool correct = o.decision != match::Decision::unsupported && rw && o.capability_name == rw->capability_name;
        MetricsRecord r;
        r.task = Task::matching;
        r.series = backend.id();
        r.subject = entries[i]->requirement.name + "#" + std::to_string(k) + "@" + nf;
        r.attempts = o.attempts;
        r.wall_time = o.wall_time;
        r.usage = o.usage;
        r.usage += variation_usage[i];
        r.cost = priced(r.usage, prices, backend.id());
        r.success = correct;
        r.note = std::string(match::to_string(o.decision)) + " " + o.capability_name.value_or("-");
        result.records.push_back(std::move(r));
        ++result.total;
        result.correct += correct ? 1 : 0;
      }
    }
  }
  return result;
}

std::vector<doc::ControlFunctionRequirement> codegen_requirements(const Corpus& corpus, doc::NfClass nf_class) {
  std::vector<doc::ControlFunctionRequirement> out;
  for (const auto* e : corpus.for_class(nf_class)) {
    if (out.size() == 10) break;
    out.push_back(e->requirement);
  }
  for (const auto& e : corpus.augmented) {
    if (e.nf_class == nf_class) out.push_back(e.requirement);
  }
  return out;
}

std::vector<MetricsRecord> run_codegen_benchmark(const Corpus& corpus, gen::Backend& backend,
                                                 const gen::PriceTable& prices, const CodegenBenchOptions& options) {
  auto refs = references(corpus);
  const auto& config = match::MatchingConfig::standard();
  const auto& scorer = match::Scorer::standard();
  std::vector<MetricsRecord> out;
  for (const auto& profile : sim::standard_profiles()) {
    MetricsRecord r;
    r.task = Task::codegen;
    r.series = backend.id();
    r.subject = profile->vendor;
    auto reqs = codegen_requirements(corpus, profile->nf_class);
    if (reqs.empty()) throw Error(ErrorCode::precondition, "no requirements for " + profile->vendor);
    auto session = match::run_matching_session(reqs, fixed_source(profile->capability_doc), config, backend, scorer);
    if (!session.cfr) {
      r.note = session.failure ? session.failure->what() : "no CFR";
      out.push_back(std::move(r));
      continue;
    }
    codegen::RepairOptions ro;
    ro.max_attempts = options.max_attempts;
    auto rr = codegen::repair_loop(*session.cfr, *profile, refs, backend, ro);
    r.attempts = rr.attempts;
    r.wall_time = rr.wall_time;
    r.usage = rr.usage;
    r.cost = priced(r.usage, prices, backend.id());
    r.success = rr.converged;
    r.note = std::to_string(session.cfr->entries.size()) + " functions, " + std::to_string(rr.faults_injected) +
             " faults";
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

struct Provisioned {
  MetricsRecord record;
  std::unique_ptr<codegen::BindingRuntime> runtime;
  std::shared_ptr<sim::VendorExecutor> executor;
};

Provisioned provision_one(const doc::ControlFunctionRequirement& req, const std::string& subject,
                          std::shared_ptr<const sim::VendorProfile> profile, std::shared_ptr<sim::SimClock> clock,
                          const codegen::ReferenceMap& refs, gen::Backend& backend, const gen::PriceTable& prices) {
  Provisioned p;
  p.record.task = Task::augmentation;
  p.record.series = backend.id();
  p.record.subject = subject;
  auto session = match::run_matching_session({req}, fixed_source(profile->capability_doc),
                                             match::MatchingConfig::standard(), backend, match::Scorer::standard());
  for (const auto& o : session.outcomes) {
    p.record.usage += o.usage;
    p.record.wall_time += o.wall_time;
  }
  if (!session.cfr) {
    p.record.note = session.failure ? session.failure->what() : "no CFR";
    return p;
  }
  auto rr = codegen::repair_loop(*session.cfr, *profile, refs, backend);
  p.record.attempts = rr.attempts;
  p.record.wall_time += rr.wall_time;
  p.record.usage += rr.usage;
  p.record.cost = priced(p.record.usage, prices, backend.id());
  p.record.success = rr.converged;
  if (!rr.converged) {
    p.record.note = "did not converge";
    return p;
  }
  p.executor = std::make_shared<sim::VendorExecutor>(profile, clock);
  p.runtime = std::make_unique<codegen::BindingRuntime>(rr.binding, *session.cfr, p.executor);
  return p;
}

class Checker {
 public:
  explicit Checker(ScenarioResult& result) : result_(result) {}

  void fail(int vector, const std::string& what) {
    ok_ = false;
    if (result_.failures.size() < 5) result_.failures.push_back("vector " + std::to_string(vector) + ": " + what);
  }
  void expect(bool cond, int vector, const std::string& what) {
    if (!cond) fail(vector, what);
  }
  void begin() { ok_ = true; }
  void end() { result_.passed += ok_ ? 1 : 0; }

 private:
  ScenarioResult& result_;
  bool ok_ = true;
};

void states_match(Checker& check, int i, const Provisioned& a, const Provisioned& b) {
  std::string diff;
  check.expect(sim::equivalent(a.executor->state(), b.executor->state(), 1e-9, &diff), i, "state differs: " + diff);
}

void drive_aoi(ScenarioResult& res, Provisioned& aug, Provisioned& base, sim::SimClock& clock, std::mt19937_64& rng,
               int vectors) {
  static const char* radios[] = {"r0", "r1", "t0", "t1"};
  std::uniform_int_distribution<int> pick(0, 3);
  std::uniform_real_distribution<double> rate(0.5, 9000.0);
  std::uniform_int_distribution<std::int64_t> offset(-60'000, 60'000);
  std::uniform_int_distribution<std::int64_t> step(0, 5'000);
  std::bernoulli_distribution at_boundary(0.1);
  Checker check(res);
  for (int i = 0; i < vectors; ++i) {
    clock.advance(step(rng));
    std::string radio = radios[pick(rng)];
    double mbps = rate(rng);
    auto now = clock.now();
    std::int64_t delta = at_boundary(rng) ? 0 : offset(rng);
    check.begin();
    auto before = aug.executor->invocation_count();
    auto r = aug.runtime->call("setRateAoI",
                               {{"radioID", Value(radio)}, {"rate", Value(mbps)}, {"deadline", Value(Timestamp{now.ms + delta})}});
    if (delta < 0) {
      ++res.guarded;
      check.expect(r.status == codegen::CallStatus::guard_rejected, i,
                   "stale deadline gave " + std::string(codegen::to_string(r.status)));
      check.expect(aug.executor->invocation_count() == before, i, "stale deadline reached the NF");
    } else {
      check.expect(r.status == codegen::CallStatus::ok, i, "fresh deadline gave " + std::string(codegen::to_string(r.status)) + " " + r.message);
      auto b = base.runtime->call("setLinkRate", {{"radioID", Value(radio)}, {"rate", Value(mbps * 1000.0)}});
      check.expect(b.status == codegen::CallStatus::ok, i, "baseline call failed: " + b.message);
      check.expect(r.results == b.results, i, "results differ from baseline");
    }
    states_match(check, i, aug, base);
    check.end();
  }
}

void drive_telemetry(ScenarioResult& res, Provisioned& aug, Provisioned& base, sim::SimClock& clock,
                     std::mt19937_64& rng, int vectors) {
  static const char* ues[] = {"ue1", "ue2", "t0", "t1"};
  std::uniform_int_distribution<int> pick(0, 3);
  std::uniform_int_distribution<std::int64_t> step(0, 120'000);
  Checker check(res);
  for (int i = 0; i < vectors; ++i) {
    clock.advance(step(rng));
    std::string ue = ues[pick(rng)];
    check.begin();
    auto r = aug.runtime->call("getUEStatsTimestamped", {{"ueID", Value(ue)}});
    auto b = base.runtime->call("ueStats", {{"ueID", Value(ue)}});
    check.expect(r.status == codegen::CallStatus::ok && b.status == codegen::CallStatus::ok, i,
                 "call failed: " + r.message + b.message);
    auto it = r.results.find("timestamp");
    check.expect(it != r.results.end() && it->second == Value(clock.now()), i, "timestamp is not the clock reading");
    auto rest = r.results;
    rest.erase("timestamp");
    check.expect(rest == b.results, i, "counters differ from baseline");
    states_match(check, i, aug, base);
    check.end();
  }
}

}  // namespace

std::vector<MetricsRecord> AugmentationBenchResult::records() const {
  std::vector<MetricsRecord> out;
  for (const auto& s : scenarios) {
    out.push_back(s.augmented);
    out.push_back(s.baseline);
  }
  return out;
}

bool AugmentationBenchResult::all_passed() const {
  for (const auto& s : scenarios) {
    if (s.passed != s.vectors || !s.augmented.success || !s.baseline.success) return false;
  }
  return !scenarios.empty();
}

AugmentationBenchResult run_augmentation_scenarios(const Corpus& corpus, gen::Backend& backend,
                                                   const gen::PriceTable& prices, std::uint64_t seed, int vectors) {
  if (vectors < 1) throw Error(ErrorCode::precondition, "vector count must be positive");
  struct Pair {
    const char* scenario;
    const char* augmented;
    const char* baseline;
  };
  const Pair pairs[] = {{"aoi", "setRateAoI", "setLinkRate"}, {"telemetry", "getUEStatsTimestamped", "ueStats"}};
  auto refs = references(corpus);
  std::mt19937_64 rng(seed);
  AugmentationBenchResult out;
  for (const auto& pair : pairs) {
    const auto* aug_entry = corpus.find(pair.augmented);
    const auto* base_entry = corpus.find(pair.baseline);
    if (!aug_entry || !base_entry) {
      throw Error(ErrorCode::precondition, std::string("corpus lacks ") + pair.augmented + " or " + pair.baseline);
    }
    for (int v = 1; v <= kVendors; ++v) {
      auto nf = vendor_id(aug_entry->nf_class, v);
      auto profile = sim::standard_profile(nf);
      auto clock = std::make_shared<sim::SimClock>(sim::SimClock::manual());
      ScenarioResult res;
      res.scenario = pair.scenario;
      res.nf_id = nf;
      res.vectors = vectors;
      auto aug = provision_one(aug_entry->requirement, std::string(pair.scenario) + "/" + pair.augmented + "@" + nf,
                               profile, clock, refs, backend, prices);
      auto base = provision_one(base_entry->requirement, std::string(pair.scenario) + "/" + pair.baseline + "@" + nf,
                                profile, clock, refs, backend, prices);
      if (aug.runtime && base.runtime) {
        if (std::string_view(pair.scenario) == "aoi") {
          drive_aoi(res, aug, base, *clock, rng, vectors);
        } else {
          drive_telemetry(res, aug, base, *clock, rng, vectors);
        }
      } else {
        res.failures.push_back("provisioning failed");
      }
      res.augmented = std::move(aug.record);
      res.baseline = std::move(base.record);
      out.scenarios.push_back(std::move(res));
    }
  }
  return out;
}

}  // namespace ifgen::bench

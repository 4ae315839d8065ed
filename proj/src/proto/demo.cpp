#include "ifgen/proto/demo.hpp"

#include <algorithm>

#include "ifgen/backends.hpp"
#include "ifgen/bench/corpus.hpp"
#include "ifgen/error.hpp"
#include "ifgen/gen/hash.hpp"

namespace ifgen::proto {

NodeFleet::NodeFleet(const FleetOptions& options, std::vector<std::string> nf_ids) {
  if (nf_ids.empty()) {
    for (const auto& p : sim::standard_profiles()) nf_ids.push_back(p->vendor);
  }
  if (options.registry) options.registry->validate();
  auto refs = bench::references(bench::Corpus::standard());
  std::shared_ptr<gen::Backend> backend = make_backend(options.backend, options.seed, options.fault_rate);
  for (const auto& id : nf_ids) {
    auto profile = sim::standard_profile(id);
    if (!profile) throw Error(ErrorCode::unknown_nf, "no simulated NF named " + id);
    NodeOptions no;
    if (options.registry) {
      if (const auto* e = options.registry->find(id)) {
        no.host = e->host;
        no.provisioning_port = e->provisioning_port;
        no.control_port = e->control_port;
      }
    }
    no.codegen_delay = options.codegen_delay;
    no.repair.max_attempts = options.max_attempts;
    no.repair.validation.clock_start_ms = options.clock_start_ms;
    no.token_seed = options.seed ^ gen::fnv1a64(id);
    Member m;
    m.clock = std::make_shared<sim::SimClock>(sim::SimClock::manual(options.clock_start_ms));
    m.node = std::make_unique<NfNode>(profile, m.clock, backend, refs, no);
    members_.emplace_back(id, std::move(m));
  }
  try {
    for (auto& [id, m] : members_) m.node->start();
  } catch (...) {
    stop();
    throw;
  }
}

NodeFleet::~NodeFleet() { stop(); }

NfNode& NodeFleet::node(std::string_view nf_id) {
  for (auto& [id, m] : members_) {
    if (id == nf_id) return *m.node;
  }
  throw Error(ErrorCode::unknown_nf, "fleet has no NF named " + std::string(nf_id));
}

std::shared_ptr<sim::SimClock> NodeFleet::clock(std::string_view nf_id) {
  for (auto& [id, m] : members_) {
    if (id == nf_id) return m.clock;
  }
  throw Error(ErrorCode::unknown_nf, "fleet has no NF named " + std::string(nf_id));
}

Registry NodeFleet::registry() const {
  Registry r;
  for (const auto& [id, m] : members_) r.endpoints.push_back(m.node->endpoint());
  return r;
}

void NodeFleet::stop() {
  for (auto& [id, m] : members_) m.node->stop();
}

std::vector<doc::ControlFunctionRequirement> demo_requirements(doc::NfClass nf_class) {
  const auto& corpus = bench::Corpus::standard();
  std::vector<doc::ControlFunctionRequirement> out;
  for (const auto* e : corpus.for_class(nf_class)) {
    if (out.size() == 9) break;
    out.push_back(e->requirement);
  }
  for (const auto& e : corpus.augmented) {
    if (e.nf_class == nf_class) {
      out.push_back(e.requirement);
      break;
    }
  }
  return out;
}

bool DemoReport::ok() const {
  return !targets.empty() && std::all_of(targets.begin(), targets.end(), [](const DemoTarget& t) {
    return t.provisioned && t.failure.empty();
  });
}

std::string DemoReport::render() const {
  std::string out;
  for (const auto& t : targets) {
    out += "== " + t.nf_id + (t.session_id.empty() ? "" : " session " + t.session_id) + "\n";
    out += proto::render(t.transcript);
    if (!t.failure.empty()) out += "failed: " + t.failure + "\n";
  }
  return out;
}

DemoReport run_demo(const DemoOptions& options) {
  NodeFleet fleet(options.fleet);
  auto registry = fleet.registry();
  auto backend = make_backend(options.fleet.backend, options.fleet.seed, options.fleet.fault_rate);
  DemoReport report;
  for (const auto& target : options.targets) {
    DemoTarget t;
    t.nf_id = target;
    Transcript transcript;
    try {
      auto endpoint = resolve_nf(registry, target);
      auto& node = fleet.node(target);
      FlowOptions fo;
      fo.source_nf = options.source_nf;
      fo.timeout = options.timeout;
      auto flow = provision_interface(endpoint, demo_requirements(node.profile().nf_class), *backend, transcript, fo);
      t.session_id = flow.session_id;
      t.encoding = flow.client_spec.encoding_scheme;
      t.codegen_attempts = flow.completion.attempts;
      for (const auto& o : flow.matching.outcomes) t.matching_attempts += o.attempts;
      t.provisioned = flow.completion.complete;
      if (!t.provisioned) {
        t.failure = "step 7: provisioning failed after " + std::to_string(flow.completion.attempts) +
                    " attempt(s): " + flow.completion.reason;
      } else {
        auto clock = fleet.clock(target);
        t.state_before_calls = node.executor()->state();
        for (const auto& f : flow.client_spec.functions) {
          auto vectors = codegen::make_test_vectors(*[&] {
            for (const auto& e : flow.matching.cfr->entries) {
              if (e.requirement.name == f.name) return &e.requirement;
            }
            return static_cast<const doc::ControlFunctionRequirement*>(nullptr);
          }(), clock->now());
          auto args = vectors.front().args;
          if (const auto* ce = bench::Corpus::standard().find(f.name)) {
            for (const auto& [k, v] : ce->example) args[k] = v;
          }
          std::vector<ArgMap> calls = {args};
          for (const auto& p : f.params) {
            // A stale deadline shows the guard.
            if (p.type == SemanticType::timestamp) {
              auto stale = args;
              stale[p.name] = Value(Timestamp{clock->now().ms - 1});
              calls.push_back(stale);
            }
          }
          for (const auto& args : calls) {
            DemoCall c{f.name, args, clock->now(), flow.client->call(f.name, args)};
            t.calls.push_back(std::move(c));
            clock->advance(1000);
          }
        }
        t.state_after_calls = node.executor()->state();
        flow.client->close();
      }
    } catch (const Error& e) {
      t.failure = std::string(to_string(e.code())) + ": " + e.what();
    }
    t.transcript = merge({transcript.entries(), t.session_id.empty() ? std::vector<TranscriptEntry>{}
                                                                     : fleet.node(target).session_transcript(t.session_id)});
    report.targets.push_back(std::move(t));
  }
  return report;
}

}  // namespace ifgen::proto

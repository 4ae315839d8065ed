#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>

#include "ifgen/backends.hpp"
#include "ifgen/bench/report.hpp"
#include "ifgen/bench/variation.hpp"
#include "ifgen/codegen/binding.hpp"
#include "ifgen/doc/codec.hpp"
#include "ifgen/doc/json_io.hpp"
#include "ifgen/error.hpp"
#include "ifgen/gen/cost.hpp"
#include "ifgen/match/agent.hpp"
#include "ifgen/match/synonyms.hpp"
#include "ifgen/proto/demo.hpp"
#include "ifgen/proto/source.hpp"
#include "ifgen/sim/variant.hpp"

namespace ifgen::cli {

namespace {

std::optional<proto::Registry> registry_from(const Common& common) {
  if (common.config.empty()) return std::nullopt;
  return proto::Registry::load(common.config);
}

doc::CapabilityDocument capabilities_from(const std::string& arg) {
  if (std::filesystem::exists(arg)) return doc::parse_capability_document(doc::read_file(arg));
  auto profile = sim::standard_profile(arg);
  if (!profile) throw Error(ErrorCode::unknown_nf, "'" + arg + "' is neither a file nor a known NF");
  return profile->capability_doc;
}

std::vector<doc::ControlFunctionRequirement> requirements_from(const std::string& path) {
  auto set = doc::parse_requirement_set(doc::read_file(path));
  auto report = doc::validate_requirements(set);
  if (!report.ok()) {
    const auto& v = report.violations.front();
    throw Error(ErrorCode::invariant, v.message, v.path);
  }
  return set.requirements;
}

std::string utc_stamp() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

std::string ratio(std::int64_t num, std::int64_t den) {
  if (den == 0) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", static_cast<double>(num) / static_cast<double>(den));
  return buf;
}

}  // namespace

int run_demo(const Common& common, const DemoArgs& args) {
  proto::DemoOptions o;
  o.fleet.backend = common.backend;
  o.fleet.seed = common.seed;
  o.fleet.fault_rate = common.fault_rate;
  o.fleet.registry = registry_from(common);
  o.targets = args.targets;
  auto report = proto::run_demo(o);
  auto text = report.render();
  std::cout << text;
  if (!common.out.empty()) doc::write_file(common.out, text);
  return report.ok() ? 0 : 1;
}

int run_match(const Common& common, const MatchArgs& args) {
  auto reqs = requirements_from(args.requirements);
  auto caps = capabilities_from(args.capabilities);
  auto backend = make_backend(common.backend, common.seed, common.fault_rate);
  auto session = match::run_matching_session(reqs, [&] { return caps; }, match::MatchingConfig::standard(), *backend,
                                             match::Scorer::standard());
  std::cout << match::render_outcomes(session.outcomes);
  if (session.failure) throw *session.failure;
  auto cfr = doc::serialize_cfr(*session.cfr);
  if (common.out.empty()) {
    std::cout << cfr;
  } else {
    doc::write_file(common.out, cfr);
  }
  return 0;
}

int run_provision(const Common& common, const ProvisionArgs& args) {
  auto profile = sim::standard_profile(args.target);
  if (!profile) throw Error(ErrorCode::unknown_nf, "no NF named '" + args.target + "'");
  auto reqs = args.requirements.empty() ? proto::demo_requirements(profile->nf_class) : requirements_from(args.requirements);

  proto::FleetOptions fo;
  fo.backend = common.backend;
  fo.seed = common.seed;
  fo.fault_rate = common.fault_rate;
  fo.registry = registry_from(common);
  proto::NodeFleet fleet(fo, {args.target});
  auto backend = make_backend(common.backend, common.seed, common.fault_rate);
  proto::Transcript transcript;
  auto endpoint = proto::resolve_nf(fleet.registry(), args.target);
  auto flow = proto::provision_interface(endpoint, reqs, *backend, transcript);
  if (flow.client) flow.client->close();
  auto entries = proto::merge({transcript.entries(), fleet.node(args.target).session_transcript(flow.session_id)});
  std::cout << proto::render(entries);
  if (!common.out.empty() && flow.matching.cfr) doc::write_file(common.out, doc::serialize_cfr(*flow.matching.cfr));
  if (!flow.completion.complete) {
    std::cerr << "error: provisioning_failed: " << flow.completion.reason << "\n";
    return 1;
  }
  return 0;
}

int run_bench(const Common& common, const BenchArgs& args) {
  auto task = bench::parse_task(args.task);
  if (!task) throw Error(ErrorCode::config, "unknown benchmark task '" + args.task + "'");
  auto backend = make_backend(common.backend, common.seed, common.fault_rate);
  const auto& corpus = bench::Corpus::standard();
  const auto& prices = gen::PriceTable::standard();

  std::vector<bench::MetricsRecord> records;
  std::vector<std::string> notes;
  bool ok = true;
  switch (*task) {
    case bench::Task::matching: {
      bench::MatchingBenchOptions o;
      o.variations = args.variations;
      o.mode = args.variation_mode == "backend" ? bench::VariationMode::backend : bench::VariationMode::rule;
      auto res = bench::run_matching_benchmark(corpus, *backend, prices, o);
      records = std::move(res.records);
      char buf[64];
      std::snprintf(buf, sizeof buf, "accuracy: %.4f (%d/%d)", res.accuracy(), res.correct, res.total);
      notes.push_back(buf);
      break;
    }
    case bench::Task::codegen: {
      records = bench::run_codegen_benchmark(corpus, *backend, prices);
      int converged = 0;
      for (const auto& r : records) converged += r.success ? 1 : 0;
      notes.push_back("converged: " + std::to_string(converged) + "/" + std::to_string(records.size()));
      break;
    }
    case bench::Task::augmentation: {
      auto res = bench::run_augmentation_scenarios(corpus, *backend, prices, common.seed, args.vectors);
      records = res.records();
      for (const auto& s : res.scenarios) {
        notes.push_back(s.scenario + " " + s.nf_id + ": " + std::to_string(s.passed) + "/" + std::to_string(s.vectors) +
                        " vectors" + (s.scenario == "aoi" ? ", " + std::to_string(s.guarded) + " guarded" : "") +
                        ", cost ratio " + ratio(s.augmented.cost.picos(), s.baseline.cost.picos()) + ", time ratio " +
                        ratio(s.augmented.wall_time.count(), s.baseline.wall_time.count()));
        for (const auto& f : s.failures) notes.push_back("  " + f);
      }
      ok = res.all_passed();
      break;
    }
  }
  auto dir = std::filesystem::path(common.out) / args.task / utc_stamp();
  bench::emit_results(records, dir, args.task + " benchmark (" + backend->id() + ")", notes);
  std::cout << bench::render_summary(records, notes) << "results: " << dir.string() << "\n";
  return ok ? 0 : 1;
}

int run_validate(const Common&, const ValidateArgs& args) {
  int bad = 0;
  for (const auto& path : args.files) {
    auto text = doc::read_file(path);
    auto kind = doc::detect_kind(text);
    doc::ValidationReport report;
    std::string kind_name(doc::to_string(kind));
    try {
      switch (kind) {
        case doc::DocumentKind::capability_document: report = doc::validate(doc::parse_capability_document(text)); break;
        case doc::DocumentKind::requirement_set: report = doc::validate_requirements(doc::parse_requirement_set(text)); break;
        case doc::DocumentKind::cfr_document: report = doc::validate(doc::parse_cfr(text)); break;
        case doc::DocumentKind::vendor_api: report = doc::validate(doc::parse_vendor_api(text)); break;
        case doc::DocumentKind::binding_spec: codegen::parse_binding_spec(text); break;
        case doc::DocumentKind::vendor_profile: sim::parse_vendor_profile(text); break;
        case doc::DocumentKind::benchmark_corpus: bench::validate(bench::Corpus::parse(text)); break;
        case doc::DocumentKind::unknown: {
          auto j = doc::json_io::parse_text(text);
          kind_name = j.contains("kind") && j["kind"].is_string() ? j["kind"].get<std::string>() : "unknown";
          if (kind_name == "nf_registry") {
            proto::Registry::parse(text);
          } else if (kind_name == "matching_config") {
            match::MatchingConfig::parse(text);
          } else if (kind_name == "price_table") {
            gen::PriceTable::parse(text);
          } else if (kind_name == "synonym_table") {
            match::SynonymTable::parse(text);
          } else if (kind_name == "paraphrase_rules") {
            bench::ParaphraseRules::parse(text);
          } else {
            throw Error(ErrorCode::schema, "unrecognised document kind '" + kind_name + "'");
          }
          break;
        }
      }
    } catch (const Error& e) {
      report.violations.push_back({"", std::string(to_string(e.code())) + ": " + e.what()});
    }
    if (report.ok()) {
      std::cout << path << ": ok (" << kind_name << ")\n";
      continue;
    }
    ++bad;
    for (const auto& v : report.violations) {
      std::cout << path << ": " << (v.path.empty() ? "" : v.path + ": ") << v.message << "\n";
    }
  }
  return bad == 0 ? 0 : 1;
}

}  // namespace ifgen::cli

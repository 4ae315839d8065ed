#include "ifgen/match/agent.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <cstdio>

#include "ifgen/doc/codec.hpp"
#include "ifgen/text.hpp"

namespace ifgen::match {

namespace {

constexpr const char* kConfirmSystemPrompt =
    "You match a control function requirement from a source network function against the control "
    "functions advertised in a destination capability document. Names, units and data types may differ "
    "between vendors; judge by meaning. Reply with exactly one candidate name from the list, or the word "
    "none if no candidate provides the requested behavior. Reply with the name only.";

std::string fmt_score(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", s);
  return buf;
}

std::string render_params(const std::vector<doc::ParamSpec>& ps) {
  std::string out;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) out += ", ";
    out += ps[i].name + " " + std::string(doc::signature_type_name(ps[i].type));
    if (ps[i].unit) out += " " + *ps[i].unit;
  }
  return out;
}

std::string render_requirement(const doc::ControlFunctionRequirement& r) {
  std::string out = "func " + r.name + " (" + render_params(r.params) + ")(" + render_params(r.returns) + "): " + r.description;
  if (r.augmentation_hint) {
    const auto& h = *r.augmentation_hint;
    out += "\nAugmentation requested: " + (h.structured() ? h.kind + " on " + h.target : h.text);
  }
  return out;
}

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c) && c != '`' && c != '"' && c != '\''; };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

struct Pick {
  std::optional<std::string> name;  // empty = "none"
};

// Decision for a chosen candidate under the thresholds.
void decide(MatchOutcome& out, const doc::ControlFunctionRequirement& req, const doc::CapabilityDocument& caps,
            const Scorer& scorer, const MatchingConfig& config, const std::optional<std::string>& pick) {
  const auto& th = config.thresholds;
  if (!pick) {
    out.decision = Decision::unsupported;
    out.score = out.candidates.empty() ? 0.0 : std::min(out.candidates.front().score, 1.0 - 1e-9);
    out.rationale = "no candidate provides the requested behavior (best score " + fmt_score(out.score) + ")";
    return;
  }
  const auto* cap = caps.find(*pick);
  double s = scorer.score(req, *cap);
  bool full = signature_compatible(req.params, req.returns, cap->params, cap->returns);
  if (s >= th.exact_floor && full) {
    out.decision = Decision::exact;
    out.capability_name = *pick;
    out.score = 1.0;
    out.rationale = "score " + fmt_score(s) + " with a fully compatible signature";
  } else if (s >= th.closest_floor) {
    out.decision = Decision::closest;
    out.capability_name = *pick;
    out.score = std::min(s, 1.0 - 1e-9);
    out.rationale = "closest match, score " + fmt_score(s) + (full ? "" : ", signature differs");
  } else {
    out.decision = Decision::unsupported;
    out.score = s;
    out.rationale = "best candidate " + *pick + " scores " + fmt_score(s) + ", below the closest floor";
  }
}

}  // namespace

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::exact: return "exact";
    case Decision::closest: return "closest";
    case Decision::unsupported: return "unsupported";
  }
  return "unsupported";
}

std::string render_capability(const doc::ControlCapability& cap) {
  return "func " + cap.name + " (" + render_params(cap.params) + ")(" + render_params(cap.returns) + "): " + cap.description;
}

std::vector<Candidate> rank_candidates(const doc::ControlFunctionRequirement& req, const doc::CapabilityDocument& caps,
                                       const Scorer& scorer) {
  std::vector<Candidate> all;
  all.reserve(caps.capabilities.size());
  for (const auto& cap : caps.capabilities) all.push_back({cap.name, scorer.score(req, cap)});
  std::stable_sort(all.begin(), all.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.name < b.name;
  });
  return all;
}

MatchOutcome classify(const doc::ControlFunctionRequirement& req, const doc::CapabilityDocument& caps,
                      const Scorer& scorer, const MatchingConfig& config, gen::Backend& backend) {
  if (caps.capabilities.empty()) throw Error(ErrorCode::precondition, "capability document lists no functions");
  MatchOutcome out;
  out.requirement_name = req.name;
  auto ranked = rank_candidates(req, caps, scorer);
  ranked.resize(std::min(ranked.size(), config.top_k));
  out.candidates = ranked;

  gen::GenerationRequest request;
  request.task = "match.confirm";
  request.system_prompt = kConfirmSystemPrompt;
  request.max_output_tokens = 64;
  request.max_context_chunks = config.top_k;
  std::string listing;
  nlohmann::json names = nlohmann::json::array(), scores = nlohmann::json::array();
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const auto* cap = caps.find(ranked[i].name);
    request.context_chunks.push_back(render_capability(*cap));
    listing += std::to_string(i + 1) + ". " + ranked[i].name + " (similarity " + fmt_score(ranked[i].score) + ")\n";
    names.push_back(ranked[i].name);
    scores.push_back(ranked[i].score);
  }
  request.hints = {{"requirement", req.name},
                   {"candidates", names},
                   {"scores", scores},
                   {"closest_floor", config.thresholds.closest_floor}};
  std::string base_prompt = "Requirement:\n" + render_requirement(req) + "\n\nCandidates:\n" + listing;
  request.user_prompt = base_prompt;

  auto started = std::chrono::steady_clock::now();
  std::chrono::milliseconds synthetic{0};
  std::optional<Pick> answer;
  for (out.attempts = 1;; ++out.attempts) {
    std::string reply;
    bool ok = true;
    try {
      auto response = backend.generate(request);
      out.usage += response.usage;
      synthetic += response.latency;
      reply = trim(response.text);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::malformed_response && e.code() != ErrorCode::token_limit) throw;
      ok = false;
      reply = std::string("<") + e.what() + ">";
    }
    if (ok) {
      if (text::to_lower(reply) == "none") {
        answer = Pick{std::nullopt};
      } else if (std::any_of(ranked.begin(), ranked.end(), [&](const Candidate& c) { return c.name == reply; })) {
        answer = Pick{reply};
      }
    }
    if (answer || out.attempts >= config.max_attempts) break;
    request.user_prompt = base_prompt + "\nYour previous reply \"" + reply +
                          "\" is not one of the candidate names. Answer with one name from the list or none.";
  }
  out.wall_time = backend.deterministic()
                      ? synthetic
                      : std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);

  if (answer) {
    decide(out, req, caps, scorer, config, answer->name);
  } else {
    out.fell_back = true;
    std::optional<std::string> top;
    if (!ranked.empty() && ranked.front().score >= config.thresholds.closest_floor) top = ranked.front().name;
    decide(out, req, caps, scorer, config, top);
    out.rationale += " (ranking fallback after " + std::to_string(out.attempts) + " invalid replies)";
  }
  return out;
}

std::string EncodingNegotiation::choose() const {
  for (const auto& pref : source_preference) {
    if (std::find(dest_supported.begin(), dest_supported.end(), pref) != dest_supported.end()) return pref;
  }
  throw Error(ErrorCode::no_common_encoding, "no common encoding between source [" + text::join(source_preference, ", ") +
                                                 "] and destination [" + text::join(dest_supported, ", ") + "]");
}

doc::CfrDocument build_cfr(const std::vector<MatchOutcome>& outcomes,
                           const std::vector<doc::ControlFunctionRequirement>& reqs,
                           const EncodingNegotiation& encodings, const std::string& source_nf, const std::string& dest_nf) {
  if (outcomes.size() != reqs.size()) throw Error(ErrorCode::precondition, "one outcome per requirement expected");
  doc::CfrDocument cfr;
  cfr.source_nf = source_nf;
  cfr.dest_nf = dest_nf;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    if (o.decision == Decision::unsupported) continue;
    doc::CfrEntry e;
    e.requirement = reqs[i];
    e.matched_capability_name = *o.capability_name;
    if (o.decision == Decision::exact) {
      e.match_kind = doc::MatchKind::exact;
    } else {
      e.match_kind = reqs[i].augmentation_hint ? doc::MatchKind::augmented : doc::MatchKind::closest;
    }
    e.match_score = o.score;
    e.notes = o.rationale;
    cfr.entries.push_back(std::move(e));
  }
  if (cfr.entries.empty()) {
    throw Error(ErrorCode::all_unsupported, "unable to support required control functions");
  }
  cfr.encoding_scheme = encodings.choose();
  return cfr;
}

const ClientFunction* ClientSpec::find(std::string_view name) const {
  for (const auto& f : functions) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

ClientSpec make_client_spec(const doc::CfrDocument& cfr, std::string host, int port) {
  ClientSpec spec;
  spec.dest_nf = cfr.dest_nf;
  spec.host = std::move(host);
  spec.port = port;
  spec.encoding_scheme = cfr.encoding_scheme;
  for (const auto& e : cfr.entries) spec.functions.push_back({e.requirement.name, e.requirement.params, e.requirement.returns});
  return spec;
}

CapabilitySource file_capability_source(const std::string& path) {
  return [path] { return doc::parse_capability_document(doc::read_file(path)); };
}

MatchingSessionResult run_matching_session(const std::vector<doc::ControlFunctionRequirement>& reqs,
                                           const CapabilitySource& source, const MatchingConfig& config,
                                           gen::Backend& backend, const Scorer& scorer, const SessionOptions& options) {
  if (reqs.empty()) throw Error(ErrorCode::precondition, "requirement set is empty");
  MatchingSessionResult result;
  try {
    result.capabilities = source();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::unreachable) throw;
    throw Error(ErrorCode::unreachable, std::string("capability document unavailable: ") + e.what(), e.path());
  }
  for (const auto& r : reqs) result.outcomes.push_back(classify(r, result.capabilities, scorer, config, backend));
  try {
    result.cfr = build_cfr(result.outcomes, reqs, {options.source_encodings, result.capabilities.supported_encodings},
                           options.source_nf, result.capabilities.nf_id);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::all_unsupported && e.code() != ErrorCode::no_common_encoding) throw;
    result.failure = e;
  }
  return result;
}

std::string confirm_rule(const gen::GenerationRequest& request) {
  const auto& h = request.hints;
  if (!h.contains("candidates") || !h.contains("scores") || !h.contains("closest_floor")) {
    throw Error(ErrorCode::precondition, "match.confirm hints missing");
  }
  const auto& names = h["candidates"];
  const auto& scores = h["scores"];
  if (names.empty() || scores.empty()) return "none";
  if (scores[0].get<double>() >= h["closest_floor"].get<double>()) return names[0].get<std::string>();
  return "none";
}

std::string confirm_fault(const std::string& clean, const gen::GenerationRequest&, std::uint64_t h) {
  static const char* const kChatter[] = {
      "The best match appears to be %s.",
      "Answer: %s (high confidence)",
      "I would pick %s, although the units differ.",
  };
  char buf[256];
  std::snprintf(buf, sizeof buf, kChatter[h % 3], clean.c_str());
  return buf;
}

std::string render_outcomes(const std::vector<MatchOutcome>& outcomes) {
  std::string out;
  for (const auto& o : outcomes) {
    out += o.requirement_name + " -> " + std::string(to_string(o.decision));
    if (o.capability_name) out += " " + *o.capability_name;
    out += " score=" + fmt_score(o.score) + " attempts=" + std::to_string(o.attempts) + "\n";
  }
  return out;
}

}  // namespace ifgen::match

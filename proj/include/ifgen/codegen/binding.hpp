#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ifgen/doc/documents.hpp"
#include "ifgen/value.hpp"

namespace ifgen::codegen {

// A binding maps each CFR function onto one vendor internal function through
// two pipelines of adaptation steps over named slots:
//   in.<p>   requirement arguments      arg.<q>  internal arguments
//   ret.<q>  internal results           out.<p>  requirement results
//   tmp.<x>  scratch
// The parameter pipeline fills arg.*, the return pipeline fills out.*.

enum class OpKind { rename, unit_convert, type_cast, clock_read, compare_timestamps, append_field, constant };
std::string_view to_string(OpKind op);
std::optional<OpKind> parse_op(std::string_view s);

struct Step {
  OpKind op = OpKind::rename;
  std::vector<std::string> in;
  std::string out;
  std::optional<std::string> from;  // unit_convert source unit
  std::optional<std::string> to;    // unit_convert target unit, type_cast target type
  std::optional<Value> value;       // constant

  bool operator==(const Step&) const = default;
};

enum class AugmentationKind { none, aoi_guard, telemetry_timestamp };
std::string_view to_string(AugmentationKind k);

/// AoI guards run before the parameter pipeline and must leave a boolean in
/// tmp.guard; telemetry steps run after the return pipeline.
struct Augmentation {
  AugmentationKind kind = AugmentationKind::none;
  std::string on_guard_fail = "reject_with_error";
  std::vector<Step> steps;

  bool operator==(const Augmentation&) const = default;
};

inline constexpr std::string_view kGuardSlot = "tmp.guard";

struct FunctionBinding {
  std::string function;  // requirement name as the client calls it
  std::string target;    // vendor internal function
  std::vector<Step> param_pipeline;
  std::vector<Step> return_pipeline;
  Augmentation augmentation;

  bool operator==(const FunctionBinding&) const = default;
};

struct BindingSpec {
  std::string encoding_scheme;
  std::vector<FunctionBinding> functions;

  const FunctionBinding* find(std::string_view function) const;
  FunctionBinding* find(std::string_view function);
  bool operator==(const BindingSpec&) const = default;
};

std::string serialize(const BindingSpec& spec);
BindingSpec parse_binding_spec(std::string_view text);

struct BindingIssue {
  std::string function;
  std::string message;
};

/// Static checks against the CFR and vendor API: one binding per CFR entry,
/// existing targets, slots defined before use, slot types and units that
/// agree with both signatures, and well-formed augmentation.
std::vector<BindingIssue> check_binding(const BindingSpec& spec, const doc::CfrDocument& cfr, const doc::VendorApiDoc& api);

}  // namespace ifgen::codegen

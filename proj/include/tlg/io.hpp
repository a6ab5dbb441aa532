#pragma once

#include "tlg/crepant.hpp"
#include "tlg/fan.hpp"
#include "tlg/ifunction.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace tlg::io {

using Json = nlohmann::ordered_json;

/// Input document. Indices are 1-based in JSON and 0-based here.
struct FanDocument {
  StackyFan fan{0, {}, {}};
  std::optional<std::vector<IntVec>> extra_generators; ///< default: Gen(Σ)
  std::optional<std::vector<IntVec>> p_basis;          ///< lifts of p_a to functionals on ℤ^n
  std::optional<std::vector<IntVec>> q_basis;          ///< q_a in 𝕃* coordinates
};

/// Schema check only; errors carry JSON-pointer paths. Fan axioms are checked later.
FanDocument parse_fan(const Json &doc);
FanDocument parse_fan_text(std::string_view text);
Json to_json(const FanDocument &doc);

/// Validated fan extended by the document's generators (or Gen(Σ)).
std::shared_ptr<const ExtendedStackyFan> extended_fan(const FanDocument &doc);

/// Reads {"p_basis": …, "q_basis": …} into the document, replacing what it had.
void apply_basis_overrides(FanDocument &doc, const Json &overrides);

std::uint64_t fnv1a64(std::string_view bytes);
std::string digest_string(std::string_view bytes);

Json rat_json(const Rat &q);
Json rat_vec_json(const RatVec &v);
Json int_json(const Int &x);
Json int_vec_json(const IntVec &v);
Json index_set_json(const IndexSet &s);
Json operator_json(const LogDiffOp &op);
Json series_json(const LogSeries &s, const GradedQuotientRing &ring);

struct Options {
  std::string command;
  std::string fan_text;
  std::optional<std::string> resolution_text;
  std::optional<std::string> basis_text;
  int order = 3;
  bool emit_certificates = false;
  bool timing = false;
};

struct Outcome {
  int exit_code = 0;
  Json report;           ///< null when the command could not produce one
  std::optional<Json> error;
};

/// {"error": {kind, exit_code, message}}
Json error_json(ErrorKind kind, const std::string &msg);

const std::vector<std::string> &commands();
/// Never throws for bad input: errors become an exit code and an error object.
Outcome run(const Options &opts);
/// Two-space indented JSON followed by a newline.
std::string dump(const Json &j);

} // namespace tlg::io

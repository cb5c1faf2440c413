#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <edgeroute/trace.hpp>

namespace edgeroute {

// Trace files are JSON Lines, one TraceRecord per line:
//
//   {"session_id":"s0","turn_index":0,"prompt_len":42,"semantic_score":0.7,
//    "slm_resp_len":136.3,"edge_resp_len":460.1,"slm_quality":0,
//    "edge_quality":1}
//
// semantic_score may be absent or null. Blank lines are skipped. Sessions
// come back in order of first appearance; turns are sorted by turn_index.

/// Throws TraceParseError (with the 1-based line number) on malformed input
/// and TraceValidationError when records break a trace invariant.
Trace parse_trace(std::istream& in);

/// parse_trace on a file. Throws std::runtime_error if it cannot be opened.
Trace load_trace(const std::filesystem::path& path);

void write_trace(std::ostream& out, const Trace& trace);
void write_trace(const std::filesystem::path& path, const Trace& trace);

/// Throws TraceValidationError naming the first offending record.
void validate(const Trace& trace);

/// Target statistics for a synthetic counterfactual trace.
///
/// Each record's quality for model k is quality_high with the exact quota
/// round(n * k_acc) and quality_low otherwise. score_correlation mixes an
/// ideal discriminator (score > 0.5 exactly on records only the edge model
/// gets right) with uniform noise, per record.
struct SynthSpec {
  std::size_t n_records = 1000;
  double slm_acc = 0.5;
  double edge_acc = 0.5;
  double slm_resp_len = 100.0;
  double edge_resp_len = 100.0;
  double prompt_len_mean = 50.0;
  double score_correlation = 1.0;
  std::uint64_t seed = 0;
  std::size_t turns_per_session = 1;
  double quality_low = 0.0;
  double quality_high = 1.0;

  friend bool operator==(const SynthSpec&, const SynthSpec&) = default;
};

/// Throws std::invalid_argument on an unusable spec.
void validate(const SynthSpec& spec);

Trace synth_trace(const SynthSpec& spec);

/// Benchmark-shaped defaults: a synth spec reproducing the per-model
/// accuracy (or score) and response lengths, and the matching latency
/// weight.
struct Preset {
  std::string name;
  SynthSpec synth;
  double alpha = 0.0;
};

/// "mmlu", "gsm8k" or "mtbench"; nullopt for anything else.
std::optional<Preset> find_preset(std::string_view name);

std::vector<std::string> preset_names();

}  // namespace edgeroute

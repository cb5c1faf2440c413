#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace edgeroute {

/// One dialogue turn with counterfactual outcomes for both models.
/// Lengths are word counts.
struct TraceRecord {
  std::string session_id;
  std::size_t turn_index = 0;
  double prompt_len = 0.0;
  std::optional<double> semantic_score;
  double slm_resp_len = 0.0;
  double edge_resp_len = 0.0;
  double slm_quality = 0.0;
  double edge_quality = 0.0;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

/// Turns of one dialogue, ordered by turn_index. Single-turn benchmarks are
/// sessions of length one.
struct SessionTrace {
  std::string session_id;
  std::vector<TraceRecord> turns;

  friend bool operator==(const SessionTrace&, const SessionTrace&) = default;
};

using Trace = std::vector<SessionTrace>;

std::size_t turn_count(const Trace& trace) noexcept;

}  // namespace edgeroute

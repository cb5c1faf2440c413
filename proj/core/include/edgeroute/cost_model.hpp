#pragma once

#include <edgeroute/params.hpp>

namespace edgeroute {

enum class PathChoice { device, edge };

const char* to_string(PathChoice choice) noexcept;

/// Token quantities for one turn. Lengths are real-valued because expected
/// response lengths are averages.
struct TurnInput {
  double prompt_len = 0.0;      // current prompt
  double context_len = 0.0;     // accumulated prior-turn context
  double reprefill_slm = 0.0;   // context the SLM must re-prefill if chosen
  double reprefill_edge = 0.0;  // context the edge must receive and re-prefill
  double resp_len_slm = 0.0;
  double resp_len_edge = 0.0;

  friend bool operator==(const TurnInput&, const TurnInput&) = default;
};

/// Throws std::invalid_argument if any length is negative or non-finite, a
/// re-prefill exceeds the context, or a re-prefill is set with no context.
void validate(const TurnInput& turn);

struct LatencyBreakdown {
  double comp = 0.0;
  double comm = 0.0;
  double router = 0.0;
  double gen = 0.0;
  double total = 0.0;
};

struct PathCosts {
  LatencyBreakdown slm;
  LatencyBreakdown edge;

  double gap() const noexcept { return edge.total - slm.total; }
};

// Component latencies. Each throws std::invalid_argument on a negative or
// non-finite input.

/// Prefill: gamma_k * (reprefill + prompt_len).
double prefill_latency(double gamma_k, double reprefill, double prompt_len);

/// Offload round trip: upload/B + overhead + response/B. The device path has
/// no communication term; path_latencies sets it to zero directly.
double comm_latency_edge(double upload_tokens, double resp_len_edge,
                         double bandwidth, double overhead);

/// Router: tau_r * (context_len + prompt_len).
double router_latency(double tau_r, double context_len, double prompt_len);

/// Decode: gamma_k * resp_len.
double gen_latency(double gamma_k, double resp_len);

/// Both execution paths for one turn. The edge upload is
/// reprefill_edge + prompt_len: context already cached at the edge is not
/// sent again.
PathCosts path_latencies(const SystemParams& params, const TurnInput& turn);

/// Latency actually paid for `choice`.
double realized_latency(PathChoice choice, const LatencyBreakdown& slm,
                        const LatencyBreakdown& edge) noexcept;

inline double realized_latency(PathChoice choice,
                               const PathCosts& costs) noexcept {
  return realized_latency(choice, costs.slm, costs.edge);
}

}  // namespace edgeroute

#pragma once

#include <edgeroute/cost_model.hpp>
#include <edgeroute/router.hpp>

namespace edgeroute {

enum class ServedBy { none, device, edge };

const char* to_string(ServedBy served) noexcept;

/// Dialogue state between turns: how much history exists and which model
/// holds it in its KV cache.
///
/// `context_aware` only affects what the router is told (see
/// estimator_view); the latency actually paid always reflects the real
/// context and cache location.
struct SessionState {
  double context_len = 0.0;
  ServedBy last_model = ServedBy::none;
  bool context_aware = true;

  friend bool operator==(const SessionState&, const SessionState&) = default;
};

/// The physical turn: a model that did not serve the previous turn has a
/// cold cache and must re-prefill the whole accumulated context. Throws
/// std::invalid_argument on negative lengths.
TurnInput resolve_turn_input(const SessionState& state, double prompt_len,
                             double resp_len_slm, double resp_len_edge);

/// What the router's cost estimate sees. A context-agnostic session hides
/// the history, i.e. every turn looks like a fresh single-turn query.
TurnInput estimator_view(const SessionState& state, const TurnInput& physical);

/// History grows by the prompt and the served response.
SessionState advance(const SessionState& state, double prompt_len,
                     const RoutingDecision& decision, double chosen_resp_len);

SessionState advance(const SessionState& state, double prompt_len,
                     PathChoice choice, double chosen_resp_len);

}  // namespace edgeroute

#include <edgeroute/session.hpp>

#include <cmath>
#include <stdexcept>

namespace edgeroute {

const char* to_string(ServedBy served) noexcept {
  switch (served) {
    case ServedBy::none:
      return "none";
    case ServedBy::device:
      return "device";
    case ServedBy::edge:
      return "edge";
  }
  return "?";
}

TurnInput resolve_turn_input(const SessionState& state, double prompt_len,
                             double resp_len_slm, double resp_len_edge) {
  if (!(prompt_len >= 0) || !std::isfinite(prompt_len)) {
    throw std::invalid_argument("prompt_len must be finite and >= 0");
  }
  TurnInput t;
  t.prompt_len = prompt_len;
  t.context_len = state.context_len;
  t.reprefill_slm = state.last_model == ServedBy::edge ? state.context_len : 0;
  t.reprefill_edge =
      state.last_model == ServedBy::device ? state.context_len : 0;
  t.resp_len_slm = resp_len_slm;
  t.resp_len_edge = resp_len_edge;
  return t;
}

TurnInput estimator_view(const SessionState& state,
                         const TurnInput& physical) {
  if (state.context_aware) return physical;
  TurnInput t = physical;
  t.context_len = 0;
  t.reprefill_slm = 0;
  t.reprefill_edge = 0;
  return t;
}

SessionState advance(const SessionState& state, double prompt_len,
                     PathChoice choice, double chosen_resp_len) {
  SessionState next = state;
  next.context_len = state.context_len + prompt_len + chosen_resp_len;
  next.last_model =
      choice == PathChoice::edge ? ServedBy::edge : ServedBy::device;
  return next;
}

SessionState advance(const SessionState& state, double prompt_len,
                     const RoutingDecision& decision, double chosen_resp_len) {
  return advance(state, prompt_len, decision.choice, chosen_resp_len);
}

}  // namespace edgeroute

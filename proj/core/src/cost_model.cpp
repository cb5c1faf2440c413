#include <edgeroute/cost_model.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace edgeroute {

namespace {

void require_non_negative(double value, const char* name) {
  if (!std::isfinite(value) || value < 0) {
    throw std::invalid_argument(std::string(name) +
                                " must be finite and >= 0, got " +
                                std::to_string(value));
  }
}

}  // namespace

const char* to_string(PathChoice choice) noexcept {
  return choice == PathChoice::edge ? "edge" : "device";
}

void validate(const TurnInput& t) {
  require_non_negative(t.prompt_len, "prompt_len");
  require_non_negative(t.context_len, "context_len");
  require_non_negative(t.reprefill_slm, "reprefill_slm");
  require_non_negative(t.reprefill_edge, "reprefill_edge");
  require_non_negative(t.resp_len_slm, "resp_len_slm");
  require_non_negative(t.resp_len_edge, "resp_len_edge");
  if (t.reprefill_slm > t.context_len || t.reprefill_edge > t.context_len) {
    throw std::invalid_argument("re-prefill length exceeds context_len");
  }
}

double prefill_latency(double gamma_k, double reprefill, double prompt_len) {
  require_non_negative(gamma_k, "gamma_k");
  require_non_negative(reprefill, "reprefill");
  require_non_negative(prompt_len, "prompt_len");
  return gamma_k * (reprefill + prompt_len);
}

double comm_latency_edge(double upload_tokens, double resp_len_edge,
                         double bandwidth, double overhead) {
  if (!std::isfinite(bandwidth) || bandwidth <= 0) {
    throw std::invalid_argument("bandwidth must be > 0");
  }
  require_non_negative(upload_tokens, "upload_tokens");
  require_non_negative(resp_len_edge, "resp_len_edge");
  require_non_negative(overhead, "overhead");
  return upload_tokens / bandwidth + overhead + resp_len_edge / bandwidth;
}

double router_latency(double tau_r, double context_len, double prompt_len) {
  require_non_negative(tau_r, "tau_r");
  require_non_negative(context_len, "context_len");
  require_non_negative(prompt_len, "prompt_len");
  return tau_r * (context_len + prompt_len);
}

double gen_latency(double gamma_k, double resp_len) {
  require_non_negative(gamma_k, "gamma_k");
  require_non_negative(resp_len, "resp_len");
  return gamma_k * resp_len;
}

PathCosts path_latencies(const SystemParams& params, const TurnInput& turn) {
  validate(turn);
  const double router =
      router_latency(params.tau_r, turn.context_len, turn.prompt_len);

  PathCosts costs;
  LatencyBreakdown& slm = costs.slm;
  slm.comp = prefill_latency(params.gamma_s, turn.reprefill_slm,
                             turn.prompt_len);
  slm.comm = 0.0;
  slm.router = router;
  slm.gen = gen_latency(params.gamma_s, turn.resp_len_slm);
  slm.total = slm.comp + slm.comm + slm.router + slm.gen;

  LatencyBreakdown& edge = costs.edge;
  edge.comp = prefill_latency(params.gamma_e, turn.reprefill_edge,
                              turn.prompt_len);
  edge.comm = comm_latency_edge(turn.reprefill_edge + turn.prompt_len,
                                turn.resp_len_edge, params.bandwidth,
                                params.overhead);
  edge.router = router;
  edge.gen = gen_latency(params.gamma_e, turn.resp_len_edge);
  edge.total = edge.comp + edge.comm + edge.router + edge.gen;
  return costs;
}

double realized_latency(PathChoice choice, const LatencyBreakdown& slm,
                        const LatencyBreakdown& edge) noexcept {
  return choice == PathChoice::device ? slm.total : edge.total;
}

}  // namespace edgeroute

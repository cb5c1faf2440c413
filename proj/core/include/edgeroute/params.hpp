#pragma once

namespace edgeroute {

/// Scalar constants of the latency cost model and the routing rule.
/// Rates are per token; times are seconds; bandwidth is tokens per second.
struct SystemParams {
  double gamma_s = 0.04;     // SLM compute, s/token
  double gamma_e = 0.02;     // edge LLM compute, s/token
  double tau_r = 0.0;        // router processing, s/token
  double bandwidth = 2.0e7;  // wireless link, tokens/s
  double overhead = 0.02;    // fixed per-offload transmission overhead, s
  double alpha = 0.03;       // latency penalty weight, 1/s
  double theta = 0.5;        // decision threshold

  friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

/// Measured values for the collaborative deployment (Qwen2.5-3B on device,
/// QwQ-32B at the edge, 5G-class link). alpha is the MMLU setting.
SystemParams default_params();

/// Throws std::invalid_argument naming the first violated constraint.
/// theta is only range-checked when `check_theta` is set, since sweeps use
/// thresholds outside [0, 1] to pin the all-edge endpoint.
void validate(const SystemParams& params, bool check_theta = false);

}  // namespace edgeroute

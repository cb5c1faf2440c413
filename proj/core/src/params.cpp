#include <edgeroute/params.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace edgeroute {

SystemParams default_params() {
  return SystemParams{
      .gamma_s = 0.04,
      .gamma_e = 0.02,
      .tau_r = 0.0,
      .bandwidth = 2.0e7,
      .overhead = 0.02,
      .alpha = 0.03,
      .theta = 0.5,
  };
}

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

void validate(const SystemParams& p, bool check_theta) {
  require(std::isfinite(p.gamma_s) && p.gamma_s > 0, "gamma_s must be > 0");
  require(std::isfinite(p.gamma_e) && p.gamma_e > 0, "gamma_e must be > 0");
  require(std::isfinite(p.bandwidth) && p.bandwidth > 0,
          "bandwidth must be > 0");
  require(std::isfinite(p.tau_r) && p.tau_r >= 0, "tau_r must be >= 0");
  require(std::isfinite(p.overhead) && p.overhead >= 0,
          "overhead must be >= 0");
  require(std::isfinite(p.alpha) && p.alpha >= 0, "alpha must be >= 0");
  require(std::isfinite(p.theta), "theta must be finite");
  if (check_theta) {
    require(p.theta >= 0 && p.theta <= 1, "theta must be in [0, 1]");
  }
}

}  // namespace edgeroute

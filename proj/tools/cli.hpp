#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <edgeroute/evaluator.hpp>
#include <edgeroute/workload.hpp>

namespace edgeroute::cli {

/// Exit statuses of the command-line tool.
enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2 };

/// Environment variable naming a default params JSON file.
inline constexpr const char* kParamsEnv = "EDGEROUTE_PARAMS";

/// Thrown for malformed flag values that CLI11 cannot catch itself.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses "start:end:count" (both ends included) or a single number.
std::vector<double> parse_theta_grid(std::string_view text);

/// Parses "label:provider[:ctx|:noctx]", provider one of trace, random,
/// constant. Seed and constant score come from the shared flags.
RouterConfig parse_router(std::string_view text, std::uint64_t seed,
                          double constant);

/// Applies keys of a params JSON object onto `params`. Unknown keys and
/// non-numeric values throw ConfigError.
SystemParams load_params_file(const std::string& path, SystemParams params);

/// Applies keys of a synth JSON config onto `spec`.
SynthSpec load_synth_file(const std::string& path, SynthSpec spec);

std::string sweep_csv(std::span<const SweepPoint> points);
std::string compare_csv(std::span<const LabeledCurve> curves);

/// Runs the tool. `args` excludes the program name.
int main(const std::vector<std::string>& args, std::ostream& out,
         std::ostream& err);

}  // namespace edgeroute::cli

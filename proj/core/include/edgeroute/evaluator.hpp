#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <edgeroute/cost_model.hpp>
#include <edgeroute/params.hpp>
#include <edgeroute/router.hpp>
#include <edgeroute/session.hpp>
#include <edgeroute/trace.hpp>

namespace edgeroute {

/// Aggregate outcome of replaying a trace under one routing configuration.
/// The means are empty when the trace has no turns.
struct RunMetrics {
  std::optional<double> avg_latency;  // seconds per turn, realized
  std::optional<double> avg_quality;  // mean quality of the served answers
  std::optional<double> llm_usage;    // fraction of turns served at the edge
  std::size_t switch_count = 0;       // turns served by a different model than the previous one
  std::size_t turn_count = 0;

  friend bool operator==(const RunMetrics&, const RunMetrics&) = default;
};

struct SweepPoint {
  double theta = 0.0;
  RunMetrics metrics;

  friend bool operator==(const SweepPoint&, const SweepPoint&) = default;
};

/// Response lengths the router assumes when estimating both paths.
struct ExpectedLengths {
  double slm = 0.0;
  double edge = 0.0;
};

/// Per-model mean response length over all turns; zeros for an empty trace.
ExpectedLengths mean_response_lengths(const Trace& trace) noexcept;

struct RunOptions {
  /// Worker threads; 0 picks std::thread::hardware_concurrency(). Results
  /// do not depend on this value.
  std::size_t threads = 0;
  /// Overrides mean_response_lengths(trace) for the router's estimate.
  std::optional<ExpectedLengths> expected;
};

/// Everything that happened on one turn of a replay.
struct TurnOutcome {
  TurnInput physical;       // what the hardware actually does
  TurnInput estimate;       // what the router was told
  PathCosts realized;
  RoutingDecision decision;
  double latency = 0.0;     // realized latency of the chosen path
  double quality = 0.0;     // quality of the chosen model's answer
  bool switched = false;    // previous turn was served by the other model
};

/// Turn-by-turn replay; outer index follows trace sessions.
std::vector<std::vector<TurnOutcome>> replay(const Trace& trace,
                                             const SystemParams& params,
                                             ScoreProvider& provider,
                                             bool context_aware,
                                             const RunOptions& options = {});

/// Replays one session with the decisions fixed in advance (no router).
/// `choices` must have one entry per turn. Router latency is charged at
/// params.tau_r.
std::vector<TurnOutcome> replay_forced(const SessionTrace& session,
                                       const SystemParams& params,
                                       std::span<const PathChoice> choices);

/// Mean metrics over every turn of the trace. Resets `provider` first, so
/// repeated calls see the same scores. Throws ConfigError when the trace
/// provider meets a record without a semantic score.
RunMetrics run(const Trace& trace, const SystemParams& params,
               ScoreProvider& provider, bool context_aware,
               const RunOptions& options = {});

RunMetrics summarize(const std::vector<std::vector<TurnOutcome>>& outcomes);

/// One run per threshold, in the given order. Throws std::invalid_argument
/// if `thetas` is empty.
std::vector<SweepPoint> sweep(const Trace& trace, const SystemParams& params,
                              ScoreProvider& provider, bool context_aware,
                              std::span<const double> thetas,
                              const RunOptions& options = {});

struct RouterConfig {
  std::string label;
  ProviderSpec provider;
  bool context_aware = true;
};

struct LabeledCurve {
  RouterConfig config;
  std::vector<SweepPoint> points;
};

/// Sweeps every configuration over the same trace and thresholds. Throws
/// ConfigError on an empty config list or duplicate labels.
std::vector<LabeledCurve> compare(const Trace& trace,
                                  const SystemParams& params,
                                  std::span<const RouterConfig> configs,
                                  std::span<const double> thetas,
                                  const RunOptions& options = {});

/// `count` evenly spaced thresholds from `start` to `end`, both included.
/// A count of 1 yields {start}. Throws std::invalid_argument if count is 0
/// or a bound is not finite.
std::vector<double> theta_grid(double start, double end, std::size_t count);

/// The quality-constrained operating point: the lowest-latency sweep point
/// whose average quality reaches `target`. Empty if none does.
std::optional<SweepPoint> select_operating_point(
    std::span<const SweepPoint> points, double target);

/// Smallest edge usage among sweep points whose quality reaches `target`.
std::optional<double> usage_at_quality(std::span<const SweepPoint> points,
                                       double target);

}  // namespace edgeroute

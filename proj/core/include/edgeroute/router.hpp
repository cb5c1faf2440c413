#pragma once

#include <cstdint>
#include <memory>
#include <random>

#include <edgeroute/cost_model.hpp>
#include <edgeroute/params.hpp>
#include <edgeroute/trace.hpp>

namespace edgeroute {

/// Source of the semantic difficulty score p in [0, 1]: the estimated
/// probability that a turn needs the edge model.
///
/// Providers may be stateful (the random baseline advances an RNG per call),
/// so an instance must stay on one thread. `reset()` rewinds to the initial
/// state; the evaluator calls it at the start of every run so each point of a
/// threshold sweep sees the same score sequence.
class ScoreProvider {
 public:
  virtual ~ScoreProvider() = default;

  virtual double next(const TraceRecord& record) = 0;
  virtual void reset() {}

  /// Whether the router's own processing time is charged. The random
  /// baseline does no computation, so its router latency is zero.
  virtual bool charges_router_latency() const noexcept { return true; }
};

/// Replays the score recorded in the trace. Throws ConfigError on a record
/// without one.
class TraceScoreProvider final : public ScoreProvider {
 public:
  double next(const TraceRecord& record) override;
};

/// Uniform scores on [0, 1), deterministic for a given seed.
class RandomScoreProvider final : public ScoreProvider {
 public:
  explicit RandomScoreProvider(std::uint64_t seed) : seed_(seed), rng_(seed) {}

  double next(const TraceRecord& record) override;
  void reset() override { rng_.seed(seed_); }
  bool charges_router_latency() const noexcept override { return false; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 rng_;
};

class ConstantScoreProvider final : public ScoreProvider {
 public:
  /// Throws std::invalid_argument if `score` is outside [0, 1].
  explicit ConstantScoreProvider(double score);

  double next(const TraceRecord& record) override;

 private:
  double score_;
};

enum class ProviderKind { trace, random, constant };

/// Value description of a provider, so configurations can be copied and a
/// fresh provider built per worker or per run.
struct ProviderSpec {
  ProviderKind kind = ProviderKind::trace;
  std::uint64_t seed = 0;
  double constant = 0.5;

  friend bool operator==(const ProviderSpec&, const ProviderSpec&) = default;
};

std::unique_ptr<ScoreProvider> make_provider(const ProviderSpec& spec);
const char* to_string(ProviderKind kind) noexcept;

struct RoutingDecision {
  double raw_score = 0.0;
  double latency_gap = 0.0;  // edge total - device total, seconds
  double fused_score = 0.0;
  PathChoice choice = PathChoice::device;
};

/// p - alpha * gap, unclamped. Throws std::invalid_argument unless p is in
/// [0, 1] and alpha >= 0.
double fuse(double p, double alpha, double gap);

/// Edge iff fused > theta; a tie stays on the device.
PathChoice decide(double fused, double theta) noexcept;

/// Fuse-and-threshold for an already obtained score.
RoutingDecision route(double p, const SystemParams& params,
                      const PathCosts& costs);

/// Pulls the score for `record` from `provider` and routes it.
RoutingDecision route_turn(ScoreProvider& provider, const TraceRecord& record,
                           const SystemParams& params, const PathCosts& costs);

}  // namespace edgeroute

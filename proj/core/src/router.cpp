#include <edgeroute/router.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

#include <edgeroute/errors.hpp>
#include <edgeroute/random.hpp>

namespace edgeroute {

double TraceScoreProvider::next(const TraceRecord& record) {
  if (!record.semantic_score) {
    throw ConfigError("trace score provider: record (session " +
                      record.session_id + ", turn " +
                      std::to_string(record.turn_index) +
                      ") has no semantic_score");
  }
  return *record.semantic_score;
}

double RandomScoreProvider::next(const TraceRecord&) {
  return uniform01(rng_);
}

ConstantScoreProvider::ConstantScoreProvider(double score) : score_(score) {
  if (!(score >= 0 && score <= 1)) {
    throw std::invalid_argument("constant score must be in [0, 1]");
  }
}

double ConstantScoreProvider::next(const TraceRecord&) { return score_; }

std::unique_ptr<ScoreProvider> make_provider(const ProviderSpec& spec) {
  switch (spec.kind) {
    case ProviderKind::trace:
      return std::make_unique<TraceScoreProvider>();
    case ProviderKind::random:
      return std::make_unique<RandomScoreProvider>(spec.seed);
    case ProviderKind::constant:
      return std::make_unique<ConstantScoreProvider>(spec.constant);
  }
  throw std::invalid_argument("unknown provider kind");
}

const char* to_string(ProviderKind kind) noexcept {
  switch (kind) {
    case ProviderKind::trace:
      return "trace";
    case ProviderKind::random:
      return "random";
    case ProviderKind::constant:
      return "constant";
  }
  return "?";
}

double fuse(double p, double alpha, double gap) {
  if (!(p >= 0 && p <= 1)) {
    throw std::invalid_argument("score must be in [0, 1], got " +
                                std::to_string(p));
  }
  if (!(alpha >= 0)) throw std::invalid_argument("alpha must be >= 0");
  return p - alpha * gap;
}

PathChoice decide(double fused, double theta) noexcept {
  return fused > theta ? PathChoice::edge : PathChoice::device;
}

RoutingDecision route(double p, const SystemParams& params,
                      const PathCosts& costs) {
  RoutingDecision d;
  d.raw_score = p;
  d.latency_gap = costs.gap();
  d.fused_score = fuse(p, params.alpha, d.latency_gap);
  d.choice = decide(d.fused_score, params.theta);
  return d;
}

RoutingDecision route_turn(ScoreProvider& provider, const TraceRecord& record,
                           const SystemParams& params, const PathCosts& costs) {
  return route(provider.next(record), params, costs);
}

}  // namespace edgeroute

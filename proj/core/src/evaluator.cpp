#include <edgeroute/evaluator.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include <edgeroute/errors.hpp>

namespace edgeroute {

ExpectedLengths mean_response_lengths(const Trace& trace) noexcept {
  ExpectedLengths sum;
  std::size_t n = 0;
  for (const auto& s : trace) {
    for (const auto& r : s.turns) {
      sum.slm += r.slm_resp_len;
      sum.edge += r.edge_resp_len;
      ++n;
    }
  }
  if (n == 0) return {};
  return {sum.slm / static_cast<double>(n), sum.edge / static_cast<double>(n)};
}

namespace {

double chosen_resp_len(const TraceRecord& r, PathChoice choice) {
  return choice == PathChoice::device ? r.slm_resp_len : r.edge_resp_len;
}

double chosen_quality(const TraceRecord& r, PathChoice choice) {
  return choice == PathChoice::device ? r.slm_quality : r.edge_quality;
}

bool is_switch(ServedBy last, PathChoice choice) {
  return (last == ServedBy::device && choice == PathChoice::edge) ||
         (last == ServedBy::edge && choice == PathChoice::device);
}

std::vector<TurnOutcome> replay_session(const SessionTrace& session,
                                        const SystemParams& params,
                                        const std::vector<double>& scores,
                                        bool context_aware,
                                        const ExpectedLengths& expected) {
  std::vector<TurnOutcome> out;
  out.reserve(session.turns.size());
  SessionState state{.context_aware = context_aware};
  for (std::size_t i = 0; i < session.turns.size(); ++i) {
    const TraceRecord& r = session.turns[i];
    TurnOutcome t;
    t.physical = resolve_turn_input(state, r.prompt_len, r.slm_resp_len,
                                    r.edge_resp_len);
    t.estimate = estimator_view(
        state,
        resolve_turn_input(state, r.prompt_len, expected.slm, expected.edge));
    t.decision = route(scores[i], params, path_latencies(params, t.estimate));
    t.realized = path_latencies(params, t.physical);
    t.latency = realized_latency(t.decision.choice, t.realized);
    t.quality = chosen_quality(r, t.decision.choice);
    t.switched = is_switch(state.last_model, t.decision.choice);
    state = advance(state, r.prompt_len, t.decision,
                    chosen_resp_len(r, t.decision.choice));
    out.push_back(t);
  }
  return out;
}

// Runs fn(i) for i in [0, n) on a small worker pool. If any call throws, the
// exception from the lowest index is rethrown, so failures are reported the
// same way regardless of scheduling.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> cursor{0};
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = cursor++; i < n; i = cursor++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

std::vector<std::vector<TurnOutcome>> replay(const Trace& trace,
                                             const SystemParams& params,
                                             ScoreProvider& provider,
                                             bool context_aware,
                                             const RunOptions& options) {
  validate(params);
  const ExpectedLengths expected =
      options.expected.value_or(mean_response_lengths(trace));

  SystemParams effective = params;
  if (!provider.charges_router_latency()) effective.tau_r = 0.0;

  // Scores are drawn sequentially in trace order; the per-session replays
  // are then independent of each other.
  provider.reset();
  std::vector<std::vector<double>> scores(trace.size());
  for (std::size_t s = 0; s < trace.size(); ++s) {
    scores[s].reserve(trace[s].turns.size());
    for (const auto& r : trace[s].turns) scores[s].push_back(provider.next(r));
  }

  std::vector<std::vector<TurnOutcome>> outcomes(trace.size());
  parallel_for(trace.size(), options.threads, [&](std::size_t s) {
    outcomes[s] = replay_session(trace[s], effective, scores[s],
                                 context_aware, expected);
  });
  return outcomes;
}

std::vector<TurnOutcome> replay_forced(const SessionTrace& session,
                                       const SystemParams& params,
                                       std::span<const PathChoice> choices) {
  validate(params);
  if (choices.size() != session.turns.size()) {
    throw std::invalid_argument("replay_forced: one choice per turn required");
  }
  std::vector<TurnOutcome> out;
  out.reserve(choices.size());
  SessionState state;
  for (std::size_t i = 0; i < choices.size(); ++i) {
    const TraceRecord& r = session.turns[i];
    TurnOutcome t;
    t.physical = resolve_turn_input(state, r.prompt_len, r.slm_resp_len,
                                    r.edge_resp_len);
    t.estimate = t.physical;
    t.realized = path_latencies(params, t.physical);
    t.decision.latency_gap = t.realized.gap();
    t.decision.choice = choices[i];
    t.latency = realized_latency(choices[i], t.realized);
    t.quality = chosen_quality(r, choices[i]);
    t.switched = is_switch(state.last_model, choices[i]);
    state = advance(state, r.prompt_len, choices[i],
                    chosen_resp_len(r, choices[i]));
    out.push_back(t);
  }
  return out;
}

RunMetrics summarize(const std::vector<std::vector<TurnOutcome>>& outcomes) {
  // Sum per session, then across sessions in trace order.
  double latency = 0.0;
  double quality = 0.0;
  std::size_t edge = 0;
  RunMetrics m;
  for (const auto& session : outcomes) {
    double session_latency = 0.0;
    double session_quality = 0.0;
    for (const auto& t : session) {
      session_latency += t.latency;
      session_quality += t.quality;
      if (t.decision.choice == PathChoice::edge) ++edge;
      if (t.switched) ++m.switch_count;
    }
    latency += session_latency;
    quality += session_quality;
    m.turn_count += session.size();
  }
  if (m.turn_count > 0) {
    const auto n = static_cast<double>(m.turn_count);
    m.avg_latency = latency / n;
    m.avg_quality = quality / n;
    m.llm_usage = static_cast<double>(edge) / n;
  }
  return m;
}

RunMetrics run(const Trace& trace, const SystemParams& params,
               ScoreProvider& provider, bool context_aware,
               const RunOptions& options) {
  return summarize(replay(trace, params, provider, context_aware, options));
}

std::vector<SweepPoint> sweep(const Trace& trace, const SystemParams& params,
                              ScoreProvider& provider, bool context_aware,
                              std::span<const double> thetas,
                              const RunOptions& options) {
  if (thetas.empty()) throw std::invalid_argument("sweep: no thresholds");
  std::vector<SweepPoint> points;
  points.reserve(thetas.size());
  for (double theta : thetas) {
    SystemParams p = params;
    p.theta = theta;
    points.push_back({theta, run(trace, p, provider, context_aware, options)});
  }
  return points;
}

std::vector<LabeledCurve> compare(const Trace& trace,
                                  const SystemParams& params,
                                  std::span<const RouterConfig> configs,
                                  std::span<const double> thetas,
                                  const RunOptions& options) {
  if (configs.empty()) throw ConfigError("compare: no router configurations");
  std::unordered_set<std::string> labels;
  for (const auto& c : configs) {
    if (!labels.insert(c.label).second) {
      throw ConfigError("compare: duplicate label \"" + c.label + "\"");
    }
  }
  std::vector<LabeledCurve> curves;
  curves.reserve(configs.size());
  for (const auto& c : configs) {
    auto provider = make_provider(c.provider);
    curves.push_back(
        {c, sweep(trace, params, *provider, c.context_aware, thetas, options)});
  }
  return curves;
}

std::vector<double> theta_grid(double start, double end, std::size_t count) {
  if (count == 0) throw std::invalid_argument("theta grid needs count >= 1");
  if (!std::isfinite(start) || !std::isfinite(end)) {
    throw std::invalid_argument("theta grid bounds must be finite");
  }
  if (count == 1) return {start};
  std::vector<double> grid(count);
  const double steps = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = start + (end - start) * (static_cast<double>(i) / steps);
  }
  grid.back() = end;
  return grid;
}

std::optional<SweepPoint> select_operating_point(
    std::span<const SweepPoint> points, double target) {
  std::optional<SweepPoint> best;
  for (const auto& p : points) {
    if (!p.metrics.avg_quality || *p.metrics.avg_quality < target) continue;
    if (!best || *p.metrics.avg_latency < *best->metrics.avg_latency) best = p;
  }
  return best;
}

std::optional<double> usage_at_quality(std::span<const SweepPoint> points,
                                       double target) {
  std::optional<double> best;
  for (const auto& p : points) {
    if (!p.metrics.avg_quality || *p.metrics.avg_quality < target) continue;
    if (!best || *p.metrics.llm_usage < *best) best = *p.metrics.llm_usage;
  }
  return best;
}

}  // namespace edgeroute

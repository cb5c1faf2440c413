// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include <edgeroute/cost_model.hpp>
#include <edgeroute/evaluator.hpp>
#include <edgeroute/router.hpp>
#include <edgeroute/workload.hpp>

#include "adversarial.hpp"
#include "oracles.hpp"

namespace {

using namespace edgeroute;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
  void check(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// 1. Sweep endpoints reproduce each benchmark's per-model quality.
Outcome endpoints() {
  Outcome o;
  const auto start = Clock::now();
  struct Row {
    const char* preset;
    double device;
    double edge;
  };
  std::vector<std::string> parts;
  for (const Row& row : {Row{"mmlu", 0.6579, 0.8524}, Row{"gsm8k", 0.7309, 0.8901},
                         Row{"mtbench", 9.29, 9.78}}) {
    const Preset preset = *find_preset(row.preset);
    SynthSpec spec = preset.synth;
    spec.n_records = 10000;
    spec.seed = 7;
    const Trace trace = synth_trace(spec);
    SystemParams p = default_params();
    p.alpha = preset.alpha;
    TraceScoreProvider provider;

    SystemParams all_edge = p;
    all_edge.theta = -10;
    const RunMetrics e = run(trace, all_edge, provider, true);
    SystemParams all_device = p;
    all_device.theta = 1;
    all_device.alpha = 0;
    const RunMetrics d = run(trace, all_device, provider, true);

    o.check(std::abs(*d.avg_quality - row.device) <= 1e-4,
            fmt::format("{} device quality {:.6f} != {}", row.preset, *d.avg_quality, row.device));
    o.check(std::abs(*e.avg_quality - row.edge) <= 1e-4,
            fmt::format("{} edge quality {:.6f} != {}", row.preset, *e.avg_quality, row.edge));
    o.check(*d.llm_usage == 0.0, fmt::format("{} device llm_usage {}", row.preset, *d.llm_usage));
    o.check(*e.llm_usage == 1.0, fmt::format("{} edge llm_usage {}", row.preset, *e.llm_usage));
    parts.push_back(fmt::format("{} {:.4f}/{:.4f}", row.preset, *d.avg_quality, *e.avg_quality));
  }
  const double elapsed = seconds_since(start);
  o.check(elapsed < 5.0, fmt::format("took {:.2f} s (limit 5 s)", elapsed));
  if (o.pass) o.detail = fmt::format("{}, {}, {}; {:.2f} s", parts[0], parts[1], parts[2], elapsed);
  return o;
}

// 2. Cost model against the single-expression oracle.
Outcome oracle_equivalence() {
  Outcome o;
  const auto start = Clock::now();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const SystemParams p = testing::random_params(rng);
    TurnInput t;
    t.prompt_len = 1000 * u(rng);
    t.context_len = u(rng) < 0.25 ? 0 : 8000 * u(rng);
    const double which = u(rng);
    if (which < 0.33) t.reprefill_slm = t.context_len;
    else if (which < 0.66) t.reprefill_edge = t.context_len;
    t.resp_len_slm = 2000 * u(rng);
    t.resp_len_edge = 5000 * u(rng);
    const PathCosts c = path_latencies(p, t);
    const auto ref = testing::oracle_totals(p, t.prompt_len, t.context_len, t.reprefill_slm,
                                            t.reprefill_edge, t.resp_len_slm, t.resp_len_edge);
    worst = std::max({worst, std::abs(c.slm.total - ref.slm), std::abs(c.edge.total - ref.edge)});
  }
  const double elapsed = seconds_since(start);
  o.check(worst <= 1e-9, fmt::format("max deviation {:.3e}", worst));
  o.check(elapsed < 1.0, fmt::format("took {:.3f} s (limit 1 s)", elapsed));
  if (o.pass) o.detail = fmt::format("max |diff| {:.2e} over 1000 pairs; {:.3f} s", worst, elapsed);
  return o;
}

// 3. GSM8K-shaped single turn with the measured deployment parameters.
Outcome worked_latency() {
  Outcome o;
  SystemParams p = default_params();
  p.tau_r = 0;
  const TurnInput t{.prompt_len = 100, .context_len = 0, .resp_len_slm = 136.3,
                    .resp_len_edge = 460.1};
  const PathCosts c = path_latencies(p, t);
  o.check(std::abs(c.slm.total - 9.452) <= 1e-9, fmt::format("SLM total {:.12f}", c.slm.total));
  o.check(std::abs(c.edge.total - 11.222028005) <= 1e-9,
          fmt::format("edge total {:.12f}", c.edge.total));
  if (o.pass) o.detail = fmt::format("SLM {:.9f} s, edge {:.9f} s", c.slm.total, c.edge.total);
  return o;
}

// 4. Decision rule: monotone usage in theta, ties to device, alpha = 0
//    decisions independent of the latency model.
Outcome decision_rule() {
  Outcome o;
  std::mt19937_64 rng(4);
  const auto grid = theta_grid(0, 1, 101);
  int curves = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const bool multi_turn = trial % 2 == 1;
    const Trace trace = testing::random_scored_trace(rng, 60, multi_turn ? 6 : 1);
    const SystemParams p = testing::random_params(rng);
    for (ProviderKind kind : {ProviderKind::trace, ProviderKind::random}) {
      for (bool aware : {true, false}) {
        auto provider = make_provider({.kind = kind, .seed = rng()});
        const auto points = sweep(trace, p, *provider, aware, grid);
        ++curves;
        for (std::size_t i = 1; i < points.size(); ++i) {
          if (*points[i].metrics.llm_usage > *points[i - 1].metrics.llm_usage) {
            o.fail(fmt::format("(a) trace {} ({}-turn, {}, {}): usage rises {:.4f} -> {:.4f} at "
                               "theta {:.2f}",
                               trial, multi_turn ? "multi" : "single", to_string(kind),
                               aware ? "ctx" : "noctx", *points[i - 1].metrics.llm_usage,
                               *points[i].metrics.llm_usage, grid[i]));
            break;
          }
        }
      }
    }
  }

  // (b) fused score exactly equal to theta.
  o.check(decide(0.5, 0.5) == PathChoice::device, "(b) decide(0.5, 0.5) != device");
  {
    SystemParams p = default_params();
    p.alpha = 0;
    p.theta = 0.5;
    ConstantScoreProvider half(0.5);
    const Trace trace = synth_trace(find_preset("gsm8k")->synth);
    o.check(*run(trace, p, half, true).llm_usage == 0.0, "(b) tie routed to edge in replay");
  }

  // (c) alpha = 0: perturb B, delta and both gammas.
  for (int trial = 0; trial < 20; ++trial) {
    const Trace trace = testing::random_scored_trace(rng, 30, 5);
    SystemParams a = testing::random_params(rng);
    a.alpha = 0;
    SystemParams b = a;
    b.bandwidth *= 0.001;
    b.overhead += 3.0;
    b.gamma_s *= 7.0;
    b.gamma_e *= 0.1;
    TraceScoreProvider provider;
    const auto ra = replay(trace, a, provider, true);
    const auto rb = replay(trace, b, provider, true);
    for (std::size_t s = 0; s < ra.size(); ++s) {
      for (std::size_t i = 0; i < ra[s].size(); ++i) {
        if (ra[s][i].decision.choice != rb[s][i].decision.choice) {
          o.fail(fmt::format("(c) decision changed with latency parameters (trial {})", trial));
        }
      }
    }
  }
  if (o.pass) o.detail = fmt::format("{} monotone curves, tie->device, alpha=0 invariant", curves);
  return o;
}

// 5. Exhaustive decision sequences through the session state machine.
Outcome multi_turn_switching() {
  Outcome o;
  std::mt19937_64 rng(5);
  std::size_t sequences = 0;
  double worst = 0;
  for (std::size_t turns = 1; turns <= 8; ++turns) {
    for (int rep = 0; rep < 3; ++rep) {
      SessionTrace session{"enum", {}};
      const Trace pool = testing::random_trace(rng, turns, 1);
      for (std::size_t i = 0; i < turns; ++i) {
        TraceRecord r = pool[i].turns[0];
        r.session_id = "enum";
        r.turn_index = i;
        session.turns.push_back(r);
      }
      const SystemParams p = testing::random_params(rng);
      for (unsigned mask = 0; mask < (1u << turns); ++mask) {
        std::vector<PathChoice> choices;
        std::vector<bool> edge;
        for (std::size_t i = 0; i < turns; ++i) {
          edge.push_back((mask >> i) & 1u);
          choices.push_back(edge.back() ? PathChoice::edge : PathChoice::device);
        }
        const auto got = replay_forced(session, p, choices);
        const auto want = testing::oracle_forced_replay(p, session.turns, edge);
        double total_got = 0, total_want = 0;
        for (std::size_t i = 0; i < turns; ++i) {
          total_got += got[i].latency;
          total_want += want[i].latency;
          const double paid = edge[i] ? got[i].physical.reprefill_edge
                                      : got[i].physical.reprefill_slm;
          if (i > 0 && edge[i] == edge[i - 1] && paid != 0.0) {
            o.fail(fmt::format("(b) re-prefill {} without a switch (T={}, mask={})", paid,
                               turns, mask));
          }
        }
        worst = std::max(worst, std::abs(total_got - total_want));
        ++sequences;
      }
    }
  }
  o.check(worst <= 1e-9, fmt::format("(a) realized latency off by {:.3e}", worst));
  if (o.pass) o.detail = fmt::format("{} sequences, max |diff| {:.2e}", sequences, worst);
  return o;
}

// 6. Context-aware semantic routing uses the edge least at every quality
//    level reachable by all three configurations.
Outcome ablation_ordering() {
  Outcome o;
  const Trace trace = testing::adversarial_switch_trace(1000, 6);
  SystemParams p = default_params();
  p.alpha = 0.05;
  const std::vector<RouterConfig> configs{
      {"semantic w/ context", {.kind = ProviderKind::trace}, true},
      {"semantic w/o context", {.kind = ProviderKind::trace}, false},
      {"random w/ context", {.kind = ProviderKind::random, .seed = 6}, true},
  };
  const auto grid = theta_grid(0, 1.5, 151);
  const auto curves = compare(trace, p, configs, grid);

  double reachable = 1e300;
  for (const auto& c : curves) {
    double best = -1e300;
    for (const auto& pt : c.points) best = std::max(best, *pt.metrics.avg_quality);
    reachable = std::min(reachable, best);
  }
  std::vector<double> levels;
  for (const auto& c : curves) {
    for (const auto& pt : c.points) {
      if (*pt.metrics.avg_quality <= reachable) levels.push_back(*pt.metrics.avg_quality);
    }
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  bool strict = false;
  std::string at_top;
  for (double q : levels) {
    const double ctx = *usage_at_quality(curves[0].points, q);
    const double noctx = *usage_at_quality(curves[1].points, q);
    const double rnd = *usage_at_quality(curves[2].points, q);
    if (!(ctx <= noctx && noctx <= rnd)) {
      o.fail(fmt::format("quality {:.4f}: usage {:.4f} / {:.4f} / {:.4f}", q, ctx, noctx, rnd));
      break;
    }
    strict = strict || ctx < noctx;
    at_top = fmt::format("at quality {:.4f}: {:.1f}% / {:.1f}% / {:.1f}%", q, 100 * ctx,
                         100 * noctx, 100 * rnd);
  }
  o.check(strict, "w/ context curve never strictly better than w/o context");
  o.check(levels.size() > 1, "no shared quality levels");
  if (o.pass) o.detail = fmt::format("{} matched levels; {}", levels.size(), at_top);
  return o;
}

// 7. Identical CLI invocations give identical bytes.
Outcome cli_determinism() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / "edgeroute_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cli = EDGEROUTE_CLI_PATH;
  const std::string trace = (dir / "trace.jsonl").string();
  auto sh = [&](const std::string& args, const std::string& out) {
    const std::string cmd = cli + " " + args + " > " + out + " 2>&1";
    return std::system(cmd.c_str());
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  if (sh("synth --preset mtbench --n 3000 --seed 11 --out " + trace, (dir / "log").string()) != 0) {
    o.fail("synth failed: " + slurp(dir / "log"));
    return o;
  }
  const std::vector<std::string> commands{
      "synth --preset mmlu --n 2000 --seed 7",
      "synth --preset gsm8k --n 2000 --score-correlation 0.3",
      "run --trace " + trace + " --provider trace --preset mtbench",
      "run --trace " + trace + " --provider random --seed 9 --no-context --format json",
      "sweep --trace " + trace + " --provider trace --thetas 0:1:101",
      "sweep --trace " + trace + " --provider random --seed 3 --format json --target-quality 9.5",
      "compare --trace " + trace + " --router a:trace:ctx --router b:trace:noctx "
      "--router c:random:ctx --seed 2 --thetas 0:1:21",
      "compare --trace " + trace + " --router a:trace --router c:random --format json",
  };
  int i = 0;
  for (const auto& args : commands) {
    const fs::path a = dir / fmt::format("a{}", i);
    const fs::path b = dir / fmt::format("b{}", i);
    ++i;
    const int ra = sh(args, a.string());
    const int rb = sh(args, b.string());
    const std::string ca = slurp(a);
    o.check(ra == 0 && rb == 0, "non-zero exit for: " + args + "\n" + ca);
    o.check(!ca.empty() && ca == slurp(b), "outputs differ for: " + args);
  }
  fs::remove_all(dir);
  if (o.pass) o.detail = fmt::format("{} commands, outputs byte-identical", commands.size());
  return o;
}

// 8. write_trace then parse_trace is lossless.
Outcome round_trip() {
  Outcome o;
  std::mt19937_64 rng(8);
  for (int i = 0; i < 1000; ++i) {
    const Trace t = testing::random_trace(rng, 1 + rng() % 8, 6, i % 2 == 0);
    std::stringstream buffer;
    write_trace(buffer, t);
    if (parse_trace(buffer) != t) {
      o.fail(fmt::format("trace {} changed after round trip", i));
      break;
    }
  }
  if (o.pass) o.detail = "1000 random traces";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> fn;
  };
  const std::vector<Criterion> criteria{
      {"AC1 endpoint reproduction", endpoints},
      {"AC2 cost-model oracle equivalence", oracle_equivalence},
      {"AC3 worked latency check", worked_latency},
      {"AC4 decision-rule properties", decision_rule},
      {"AC5 multi-turn switching enumeration", multi_turn_switching},
      {"AC6 ablation ordering", ablation_ordering},
      {"AC7 CLI determinism", cli_determinism},
      {"AC8 trace round trip", round_trip},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome r;
    try {
      r = c.fn();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %s: %s\n", r.pass ? "PASS" : "FAIL", c.name, r.detail.c_str());
    failed += r.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}

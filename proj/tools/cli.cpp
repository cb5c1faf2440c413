#include "cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <edgeroute/errors.hpp>
#include <edgeroute/workload.hpp>

namespace edgeroute::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

double parse_number(std::string_view text, std::string_view what) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || text.empty()) {
    throw UsageError(fmt::format("{}: expected a number, got \"{}\"", what, text));
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string format_opt(const std::optional<double>& v, const char* spec_ms) {
  if (!v) return "";
  return fmt::format(fmt::runtime(spec_ms), *v);
}

ordered_json json_opt(const std::optional<double>& v, double scale = 1.0) {
  if (!v) return nullptr;
  return *v * scale;
}

ordered_json metrics_json(double theta, const RunMetrics& m) {
  ordered_json j;
  j["theta"] = theta;
  j["avg_latency_ms"] = json_opt(m.avg_latency, 1000.0);
  j["avg_quality"] = json_opt(m.avg_quality);
  j["llm_usage"] = json_opt(m.llm_usage);
  j["switch_count"] = m.switch_count;
  j["turn_count"] = m.turn_count;
  return j;
}

ordered_json params_json(const SystemParams& p) {
  ordered_json j;
  j["gamma_s"] = p.gamma_s;
  j["gamma_e"] = p.gamma_e;
  j["tau_r"] = p.tau_r;
  j["bandwidth"] = p.bandwidth;
  j["overhead"] = p.overhead;
  j["alpha"] = p.alpha;
  j["theta"] = p.theta;
  return j;
}

ordered_json provider_json(const ProviderSpec& p) {
  ordered_json j;
  j["kind"] = to_string(p.kind);
  if (p.kind == ProviderKind::random) j["seed"] = p.seed;
  if (p.kind == ProviderKind::constant) j["score"] = p.constant;
  return j;
}

nlohmann::json read_json_object(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open {} file {}", what, path));
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(fmt::format("{} file {}: {}", what, path, e.what()));
  }
  if (!j.is_object()) {
    throw ConfigError(fmt::format("{} file {}: expected a JSON object", what, path));
  }
  return j;
}

void write_output(const std::string& path, const std::string& content,
                  std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw std::runtime_error(fmt::format(
        "cannot write output file {}: check that the directory exists and is "
        "writable",
        path));
  }
  file << content;
  file.flush();
  if (!file) throw std::runtime_error("error while writing " + path);
}

// Flags shared by run, sweep and compare.
struct EvalFlags {
  std::string trace;
  std::string params_file;
  std::string preset;
  std::map<std::string, double> param_values;
  std::map<std::string, CLI::Option*> param_opts;
  std::string provider = "trace";
  std::uint64_t seed = 0;
  double score = 0.5;
  bool no_context = false;
  double expected_slm = 0.0;
  double expected_edge = 0.0;
  CLI::Option* expected_slm_opt = nullptr;
  CLI::Option* expected_edge_opt = nullptr;
  std::size_t threads = 0;
  std::string out;
  std::string format = "csv";
};

constexpr const char* kParamKeys[] = {"gamma_s", "gamma_e",  "tau_r", "bandwidth",
                                      "overhead", "alpha", "theta"};

void add_eval_flags(CLI::App* cmd, EvalFlags& f, bool with_provider) {
  cmd->add_option("--trace", f.trace, "JSONL trace file")->required();
  cmd->add_option("--params", f.params_file,
                  std::string("JSON file with system parameters (default: $") +
                      kParamsEnv + ")");
  cmd->add_option("--preset", f.preset, "Take alpha from a benchmark preset")
      ->check(CLI::IsMember(preset_names()));
  for (const char* key : kParamKeys) {
    std::string flag = "--" + std::string(key);
    for (auto& c : flag) {
      if (c == '_') c = '-';
    }
    f.param_opts[key] = cmd->add_option(flag, f.param_values[key],
                                        std::string("Override ") + key);
  }
  if (with_provider) {
    cmd->add_option("--provider", f.provider, "Score provider")
        ->check(CLI::IsMember({"trace", "random", "constant"}));
    cmd->add_flag("--no-context", f.no_context,
                  "Hide dialogue context from the router's cost estimate");
  }
  cmd->add_option("--seed", f.seed, "Seed for the random provider");
  cmd->add_option("--score", f.score, "Score of the constant provider")
      ->check(CLI::Range(0.0, 1.0));
  f.expected_slm_opt = cmd->add_option(
      "--expected-slm-len", f.expected_slm,
      "SLM response length assumed by the router (default: trace mean)");
  f.expected_edge_opt = cmd->add_option(
      "--expected-edge-len", f.expected_edge,
      "Edge response length assumed by the router (default: trace mean)");
  cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores)");
  cmd->add_option("--out", f.out, "Output file (default: stdout)");
  cmd->add_option("--format", f.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
}

SystemParams resolve_params(const EvalFlags& f) {
  SystemParams params = default_params();
  if (!f.preset.empty()) params.alpha = find_preset(f.preset)->alpha;
  std::string file = f.params_file;
  if (file.empty()) {
    if (const char* env = std::getenv(kParamsEnv); env && *env) file = env;
  }
  if (!file.empty()) params = load_params_file(file, params);
  auto set = [&](const char* key, double& field) {
    if (f.param_opts.at(key)->count() > 0) field = f.param_values.at(key);
  };
  set("gamma_s", params.gamma_s);
  set("gamma_e", params.gamma_e);
  set("tau_r", params.tau_r);
  set("bandwidth", params.bandwidth);
  set("overhead", params.overhead);
  set("alpha", params.alpha);
  set("theta", params.theta);
  try {
    validate(params);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid parameters: ") + e.what());
  }
  return params;
}

ProviderSpec resolve_provider(const EvalFlags& f) {
  ProviderSpec p;
  if (f.provider == "random") p.kind = ProviderKind::random;
  if (f.provider == "constant") p.kind = ProviderKind::constant;
  p.seed = f.seed;
  p.constant = f.score;
  return p;
}

RunOptions resolve_options(const EvalFlags& f, const Trace& trace) {
  RunOptions options;
  options.threads = f.threads;
  if (f.expected_slm_opt->count() > 0 || f.expected_edge_opt->count() > 0) {
    ExpectedLengths e = mean_response_lengths(trace);
    if (f.expected_slm_opt->count() > 0) e.slm = f.expected_slm;
    if (f.expected_edge_opt->count() > 0) e.edge = f.expected_edge;
    if (!(e.slm >= 0) || !(e.edge >= 0)) {
      throw UsageError("expected response lengths must be >= 0");
    }
    options.expected = e;
  }
  return options;
}

Trace read_trace(const std::string& path) {
  try {
    return load_trace(path);
  } catch (const TraceParseError& e) {
    throw TraceParseError(e.line(), path + ": " + e.what());
  }
}

ordered_json config_json(const std::string& command, const EvalFlags& f,
                         const SystemParams& params, const Trace& trace,
                         const RunOptions& options) {
  ordered_json j;
  j["command"] = command;
  j["trace"] = f.trace;
  j["params"] = params_json(params);
  const ExpectedLengths e =
      options.expected.value_or(mean_response_lengths(trace));
  j["expected_resp_len"] = {{"slm", e.slm}, {"edge", e.edge}};
  return j;
}

std::string run_csv(const SystemParams& params, const RunMetrics& m) {
  std::string s = "theta,avg_latency_ms,avg_quality,llm_usage,switch_count,turn_count\n";
  const std::optional<double> ms =
      m.avg_latency ? std::optional<double>(*m.avg_latency * 1000.0) : std::nullopt;
  s += fmt::format("{:.6f},{},{},{},{},{}\n", params.theta, format_opt(ms, "{:.3f}"),
                   format_opt(m.avg_quality, "{:.6f}"),
                   format_opt(m.llm_usage, "{:.6f}"), m.switch_count,
                   m.turn_count);
  return s;
}

std::string point_row(const SweepPoint& p) {
  const RunMetrics& m = p.metrics;
  const std::optional<double> ms =
      m.avg_latency ? std::optional<double>(*m.avg_latency * 1000.0) : std::nullopt;
  return fmt::format("{:.6f},{},{},{},{}\n", p.theta, format_opt(ms, "{:.3f}"),
                     format_opt(m.avg_quality, "{:.6f}"),
                     format_opt(m.llm_usage, "{:.6f}"), m.switch_count);
}

int do_synth(const std::string& preset, const std::string& config,
             std::map<std::string, CLI::Option*>& opts, const SynthSpec& flags,
             const std::string& out_path, std::ostream& out) {
  SynthSpec spec;
  if (!preset.empty()) spec = find_preset(preset)->synth;
  if (!config.empty()) spec = load_synth_file(config, spec);
  auto set = [&](const char* key, auto& field, const auto& value) {
    if (opts.at(key)->count() > 0) field = value;
  };
  set("n", spec.n_records, flags.n_records);
  set("seed", spec.seed, flags.seed);
  set("slm_acc", spec.slm_acc, flags.slm_acc);
  set("edge_acc", spec.edge_acc, flags.edge_acc);
  set("slm_resp_len", spec.slm_resp_len, flags.slm_resp_len);
  set("edge_resp_len", spec.edge_resp_len, flags.edge_resp_len);
  set("prompt_len_mean", spec.prompt_len_mean, flags.prompt_len_mean);
  set("score_correlation", spec.score_correlation, flags.score_correlation);
  set("turns_per_session", spec.turns_per_session, flags.turns_per_session);
  set("quality_low", spec.quality_low, flags.quality_low);
  set("quality_high", spec.quality_high, flags.quality_high);
  try {
    validate(spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("invalid synth spec: ") + e.what());
  }
  std::ostringstream buffer;
  write_trace(buffer, synth_trace(spec));
  write_output(out_path, buffer.str(), out);
  return kOk;
}

}  // namespace

std::vector<double> parse_theta_grid(std::string_view text) {
  auto parts = split(text, ':');
  if (parts.size() == 1) return {parse_number(parts[0], "--thetas")};
  if (parts.size() != 3) {
    throw UsageError(fmt::format(
        "--thetas: expected start:end:count or a single value, got \"{}\"", text));
  }
  const double start = parse_number(parts[0], "--thetas start");
  const double end = parse_number(parts[1], "--thetas end");
  std::size_t count = 0;
  auto [ptr, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), count);
  if (ec != std::errc{} || ptr != parts[2].data() + parts[2].size() || count == 0) {
    throw UsageError(fmt::format("--thetas: count must be a positive integer, got \"{}\"",
                                 parts[2]));
  }
  try {
    return theta_grid(start, end, count);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--thetas: ") + e.what());
  }
}

RouterConfig parse_router(std::string_view text, std::uint64_t seed,
                          double constant) {
  auto parts = split(text, ':');
  if (parts.size() < 2 || parts.size() > 3 || parts[0].empty()) {
    throw UsageError(fmt::format(
        "--router: expected label:provider[:ctx|:noctx], got \"{}\"", text));
  }
  RouterConfig c;
  c.label = std::string(parts[0]);
  c.provider.seed = seed;
  c.provider.constant = constant;
  if (parts[1] == "trace") {
    c.provider.kind = ProviderKind::trace;
  } else if (parts[1] == "random") {
    c.provider.kind = ProviderKind::random;
  } else if (parts[1] == "constant") {
    c.provider.kind = ProviderKind::constant;
  } else {
    throw UsageError(fmt::format("--router: unknown provider \"{}\"", parts[1]));
  }
  if (parts.size() == 3) {
    if (parts[2] == "ctx") {
      c.context_aware = true;
    } else if (parts[2] == "noctx") {
      c.context_aware = false;
    } else {
      throw UsageError(fmt::format("--router: expected ctx or noctx, got \"{}\"", parts[2]));
    }
  }
  return c;
}

SystemParams load_params_file(const std::string& path, SystemParams params) {
  const auto j = read_json_object(path, "params");
  for (const auto& item : j.items()) {
    double* field = nullptr;
    const std::string& k = item.key();
    if (k == "gamma_s") field = &params.gamma_s;
    else if (k == "gamma_e") field = &params.gamma_e;
    else if (k == "tau_r") field = &params.tau_r;
    else if (k == "bandwidth") field = &params.bandwidth;
    else if (k == "overhead") field = &params.overhead;
    else if (k == "alpha") field = &params.alpha;
    else if (k == "theta") field = &params.theta;
    else throw ConfigError(fmt::format("params file {}: unknown key \"{}\"", path, k));
    if (!item.value().is_number()) {
      throw ConfigError(fmt::format("params file {}: \"{}\" must be a number", path, k));
    }
    *field = item.value().get<double>();
  }
  return params;
}

SynthSpec load_synth_file(const std::string& path, SynthSpec spec) {
  const auto j = read_json_object(path, "synth config");
  for (const auto& item : j.items()) {
    const std::string& k = item.key();
    const auto& v = item.value();
    auto number = [&]() {
      if (!v.is_number()) {
        throw ConfigError(fmt::format("synth config {}: \"{}\" must be a number", path, k));
      }
      return v.get<double>();
    };
    auto count = [&]() -> std::uint64_t {
      if (!v.is_number_unsigned()) {
        throw ConfigError(fmt::format(
            "synth config {}: \"{}\" must be a non-negative integer", path, k));
      }
      return v.get<std::uint64_t>();
    };
    if (k == "n_records") spec.n_records = count();
    else if (k == "seed") spec.seed = count();
    else if (k == "turns_per_session") spec.turns_per_session = count();
    else if (k == "slm_acc") spec.slm_acc = number();
    else if (k == "edge_acc") spec.edge_acc = number();
    else if (k == "slm_resp_len") spec.slm_resp_len = number();
    else if (k == "edge_resp_len") spec.edge_resp_len = number();
    else if (k == "prompt_len_mean") spec.prompt_len_mean = number();
    else if (k == "score_correlation") spec.score_correlation = number();
    else if (k == "quality_low") spec.quality_low = number();
    else if (k == "quality_high") spec.quality_high = number();
    else throw ConfigError(fmt::format("synth config {}: unknown key \"{}\"", path, k));
  }
  return spec;
}

std::string sweep_csv(std::span<const SweepPoint> points) {
  std::string s = "theta,avg_latency_ms,avg_quality,llm_usage,switch_count\n";
  for (const auto& p : points) s += point_row(p);
  return s;
}

std::string compare_csv(std::span<const LabeledCurve> curves) {
  std::string s = "label,theta,avg_latency_ms,avg_quality,llm_usage,switch_count\n";
  for (const auto& c : curves) {
    for (const auto& p : c.points) s += c.config.label + "," + point_row(p);
  }
  return s;
}

int main(const std::vector<std::string>& args, std::ostream& out,
         std::ostream& err) {
  CLI::App app{"Quality-latency aware routing between an on-device SLM and an "
               "edge LLM: trace synthesis, replay, threshold sweeps.",
               "edgeroute"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic counterfactual trace");
  std::string synth_preset, synth_config, synth_out;
  SynthSpec sf;
  std::map<std::string, CLI::Option*> synth_opts;
  synth->add_option("--preset", synth_preset, "Benchmark preset")
      ->check(CLI::IsMember(preset_names()));
  synth->add_option("--config", synth_config, "JSON synth spec (same field names)");
  synth_opts["n"] = synth->add_option("--n", sf.n_records, "Number of records");
  synth_opts["seed"] = synth->add_option("--seed", sf.seed, "RNG seed");
  synth_opts["slm_acc"] = synth->add_option("--slm-acc", sf.slm_acc, "SLM pass fraction");
  synth_opts["edge_acc"] = synth->add_option("--edge-acc", sf.edge_acc, "Edge pass fraction");
  synth_opts["slm_resp_len"] = synth->add_option("--slm-resp-len", sf.slm_resp_len);
  synth_opts["edge_resp_len"] = synth->add_option("--edge-resp-len", sf.edge_resp_len);
  synth_opts["prompt_len_mean"] = synth->add_option("--prompt-len-mean", sf.prompt_len_mean);
  synth_opts["score_correlation"] =
      synth->add_option("--score-correlation", sf.score_correlation);
  synth_opts["turns_per_session"] =
      synth->add_option("--turns-per-session", sf.turns_per_session);
  synth_opts["quality_low"] = synth->add_option("--quality-low", sf.quality_low);
  synth_opts["quality_high"] = synth->add_option("--quality-high", sf.quality_high);
  synth->add_option("--out", synth_out, "Output JSONL file (default: stdout)");

  // run
  auto* run_cmd = app.add_subcommand("run", "Replay a trace at one threshold");
  EvalFlags run_flags;
  add_eval_flags(run_cmd, run_flags, true);

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Replay a trace over a threshold grid");
  EvalFlags sweep_flags;
  add_eval_flags(sweep_cmd, sweep_flags, true);
  std::string sweep_thetas = "0:1:101";
  double target_quality = 0.0;
  sweep_cmd->add_option("--thetas", sweep_thetas, "Threshold grid start:end:count")
      ->capture_default_str();
  auto* target_opt = sweep_cmd->add_option(
      "--target-quality", target_quality,
      "Also report the lowest-latency point reaching this quality");

  // compare
  auto* compare_cmd =
      app.add_subcommand("compare", "Sweep several router configurations on one trace");
  EvalFlags compare_flags;
  add_eval_flags(compare_cmd, compare_flags, false);
  std::string compare_thetas = "0:1:101";
  std::vector<std::string> routers;
  compare_cmd->add_option("--thetas", compare_thetas, "Threshold grid start:end:count")
      ->capture_default_str();
  compare_cmd->add_option("--router", routers, "label:provider[:ctx|:noctx], repeatable")
      ->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (synth->parsed()) {
      return do_synth(synth_preset, synth_config, synth_opts, sf, synth_out, out);
    }

    EvalFlags& f = run_cmd->parsed() ? run_flags
                   : sweep_cmd->parsed() ? sweep_flags
                                         : compare_flags;
    const SystemParams params = resolve_params(f);
    std::vector<double> thetas;
    std::vector<RouterConfig> configs;
    if (sweep_cmd->parsed()) thetas = parse_theta_grid(sweep_thetas);
    if (compare_cmd->parsed()) {
      thetas = parse_theta_grid(compare_thetas);
      for (const auto& r : routers) configs.push_back(parse_router(r, f.seed, f.score));
    }

    const Trace trace = read_trace(f.trace);
    const RunOptions options = resolve_options(f, trace);
    const ProviderSpec provider_spec = resolve_provider(f);
    const bool context_aware = !f.no_context;
    const bool json = f.format == "json";
    std::string content;

    if (run_cmd->parsed()) {
      auto provider = make_provider(provider_spec);
      const RunMetrics m = run(trace, params, *provider, context_aware, options);
      if (json) {
        ordered_json j;
        j["config"] = config_json("run", f, params, trace, options);
        j["config"]["provider"] = provider_json(provider_spec);
        j["config"]["context_aware"] = context_aware;
        j["metrics"] = metrics_json(params.theta, m);
        content = j.dump(2) + "\n";
      } else {
        content = run_csv(params, m);
      }
    } else if (sweep_cmd->parsed()) {
      auto provider = make_provider(provider_spec);
      const auto points = sweep(trace, params, *provider, context_aware, thetas, options);
      std::optional<SweepPoint> selected;
      if (target_opt->count() > 0) selected = select_operating_point(points, target_quality);
      if (json) {
        ordered_json j;
        j["config"] = config_json("sweep", f, params, trace, options);
        j["config"]["provider"] = provider_json(provider_spec);
        j["config"]["context_aware"] = context_aware;
        j["config"]["thetas"] = thetas;
        ordered_json pts = ordered_json::array();
        for (const auto& p : points) pts.push_back(metrics_json(p.theta, p.metrics));
        j["points"] = std::move(pts);
        if (target_opt->count() > 0) {
          j["target_quality"] = target_quality;
          j["selected"] = selected ? metrics_json(selected->theta, selected->metrics)
                                   : ordered_json(nullptr);
        }
        content = j.dump(2) + "\n";
      } else {
        content = sweep_csv(points);
        if (target_opt->count() > 0) {
          if (selected) {
            err << fmt::format(
                "selected theta={:.6f} avg_latency_ms={:.3f} avg_quality={:.6f} "
                "llm_usage={:.6f}\n",
                selected->theta, *selected->metrics.avg_latency * 1000.0,
                *selected->metrics.avg_quality, *selected->metrics.llm_usage);
          } else {
            err << fmt::format("no sweep point reaches quality {}\n", target_quality);
          }
        }
      }
    } else {
      const auto curves = compare(trace, params, configs, thetas, options);
      if (json) {
        ordered_json j;
        j["config"] = config_json("compare", f, params, trace, options);
        j["config"]["thetas"] = thetas;
        ordered_json cs = ordered_json::array();
        for (const auto& c : curves) {
          ordered_json cj;
          cj["label"] = c.config.label;
          cj["provider"] = provider_json(c.config.provider);
          cj["context_aware"] = c.config.context_aware;
          ordered_json pts = ordered_json::array();
          for (const auto& p : c.points) pts.push_back(metrics_json(p.theta, p.metrics));
          cj["points"] = std::move(pts);
          cs.push_back(std::move(cj));
        }
        j["curves"] = std::move(cs);
        content = j.dump(2) + "\n";
      } else {
        content = compare_csv(curves);
      }
    }
    write_output(f.out, content, out);
    return kOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  }
}

}  // namespace edgeroute::cli

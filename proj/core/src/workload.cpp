#include <edgeroute/workload.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include <edgeroute/errors.hpp>
#include <edgeroute/random.hpp>

namespace edgeroute {

std::size_t turn_count(const Trace& trace) noexcept {
  std::size_t n = 0;
  for (const auto& s : trace) n += s.turns.size();
  return n;
}

namespace {

using nlohmann::json;

constexpr const char* kFields[] = {
    "session_id",   "turn_index",    "prompt_len",  "semantic_score",
    "slm_resp_len", "edge_resp_len", "slm_quality", "edge_quality",
};

std::string describe(const TraceRecord& r) {
  return "record (session " + r.session_id + ", turn " +
         std::to_string(r.turn_index) + ")";
}

// Range checks shared by the parser and validate(Trace).
void check_values(const TraceRecord& r) {
  auto fail = [&](const std::string& what) {
    throw TraceValidationError(describe(r) + ": " + what);
  };
  auto length = [&](double v, const char* name) {
    if (!std::isfinite(v) || v < 0) {
      fail(std::string(name) + " must be finite and >= 0");
    }
  };
  length(r.prompt_len, "prompt_len");
  length(r.slm_resp_len, "slm_resp_len");
  length(r.edge_resp_len, "edge_resp_len");
  if (r.semantic_score &&
      !(*r.semantic_score >= 0 && *r.semantic_score <= 1)) {
    fail("semantic_score must be in [0, 1]");
  }
  if (!std::isfinite(r.slm_quality)) fail("slm_quality must be finite");
  if (!std::isfinite(r.edge_quality)) fail("edge_quality must be finite");
}

void check_turn_order(const SessionTrace& s) {
  for (std::size_t i = 0; i < s.turns.size(); ++i) {
    if (s.turns[i].session_id != s.session_id) {
      throw TraceValidationError("record (session " + s.turns[i].session_id +
                                 ") filed under session " + s.session_id);
    }
    if (s.turns[i].turn_index != i) {
      const bool dup = i > 0 && s.turns[i].turn_index == s.turns[i - 1].turn_index;
      throw TraceValidationError(
          std::string(dup ? "duplicate" : "non-contiguous") +
          " turn_index in session " + s.session_id + " at " +
          describe(s.turns[i]));
    }
  }
}

double number_field(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw TraceParseError(line, std::string("missing field \"") + key + "\"");
  }
  if (!it->is_number()) {
    throw TraceParseError(line, std::string("field \"") + key +
                                    "\" must be a number");
  }
  return it->get<double>();
}

TraceRecord parse_record(const std::string& text, std::size_t line) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::parse_error& e) {
    throw TraceParseError(line, std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) throw TraceParseError(line, "expected a JSON object");
  for (const auto& item : obj.items()) {
    if (std::find(std::begin(kFields), std::end(kFields), item.key()) ==
        std::end(kFields)) {
      throw TraceParseError(line, "unknown field \"" + item.key() + "\"");
    }
  }

  TraceRecord r;
  auto sid = obj.find("session_id");
  if (sid == obj.end() || !sid->is_string()) {
    throw TraceParseError(line, "field \"session_id\" must be a string");
  }
  r.session_id = sid->get<std::string>();

  auto idx = obj.find("turn_index");
  if (idx == obj.end() || !idx->is_number_integer() ||
      (!idx->is_number_unsigned() && idx->get<std::int64_t>() < 0)) {
    throw TraceParseError(line,
                          "field \"turn_index\" must be a non-negative integer");
  }
  r.turn_index = idx->get<std::size_t>();

  r.prompt_len = number_field(obj, "prompt_len", line);
  r.slm_resp_len = number_field(obj, "slm_resp_len", line);
  r.edge_resp_len = number_field(obj, "edge_resp_len", line);
  r.slm_quality = number_field(obj, "slm_quality", line);
  r.edge_quality = number_field(obj, "edge_quality", line);

  auto score = obj.find("semantic_score");
  if (score != obj.end() && !score->is_null()) {
    if (!score->is_number()) {
      throw TraceParseError(line, "field \"semantic_score\" must be a number");
    }
    r.semantic_score = score->get<double>();
  }

  try {
    check_values(r);
  } catch (const TraceValidationError& e) {
    throw TraceValidationError("line " + std::to_string(line) + ": " +
                               e.what());
  }
  return r;
}

}  // namespace

Trace parse_trace(std::istream& in) {
  Trace trace;
  std::unordered_map<std::string, std::size_t> index;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    TraceRecord r = parse_record(text, line);
    auto [it, inserted] = index.try_emplace(r.session_id, trace.size());
    if (inserted) trace.push_back(SessionTrace{r.session_id, {}});
    trace[it->second].turns.push_back(std::move(r));
  }
  for (auto& s : trace) {
    std::stable_sort(s.turns.begin(), s.turns.end(),
                     [](const TraceRecord& a, const TraceRecord& b) {
                       return a.turn_index < b.turn_index;
                     });
    check_turn_order(s);
  }
  return trace;
}

Trace load_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace " + path.string());
  return parse_trace(in);
}

void write_trace(std::ostream& out, const Trace& trace) {
  for (const auto& s : trace) {
    for (const auto& r : s.turns) {
      nlohmann::ordered_json obj;
      obj["session_id"] = r.session_id;
      obj["turn_index"] = r.turn_index;
      obj["prompt_len"] = r.prompt_len;
      if (r.semantic_score) obj["semantic_score"] = *r.semantic_score;
      obj["slm_resp_len"] = r.slm_resp_len;
      obj["edge_resp_len"] = r.edge_resp_len;
      obj["slm_quality"] = r.slm_quality;
      obj["edge_quality"] = r.edge_quality;
      out << obj.dump() << '\n';
    }
  }
}

void write_trace(const std::filesystem::path& path, const Trace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write trace " + path.string());
  write_trace(out, trace);
  out.flush();
  if (!out) throw std::runtime_error("error writing trace " + path.string());
}

void validate(const Trace& trace) {
  std::unordered_set<std::string> seen;
  for (const auto& s : trace) {
    if (!seen.insert(s.session_id).second) {
      throw TraceValidationError("session " + s.session_id +
                                 " appears more than once");
    }
    for (const auto& r : s.turns) check_values(r);
    check_turn_order(s);
  }
}

void validate(const SynthSpec& spec) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
  };
  auto length = [](double v) { return std::isfinite(v) && v >= 0; };
  require(spec.n_records > 0, "n_records must be > 0");
  require(spec.slm_acc >= 0 && spec.slm_acc <= 1, "slm_acc must be in [0, 1]");
  require(spec.edge_acc >= 0 && spec.edge_acc <= 1,
          "edge_acc must be in [0, 1]");
  require(length(spec.slm_resp_len), "slm_resp_len must be >= 0");
  require(length(spec.edge_resp_len), "edge_resp_len must be >= 0");
  require(std::isfinite(spec.prompt_len_mean) && spec.prompt_len_mean >= 1,
          "prompt_len_mean must be >= 1");
  require(spec.score_correlation >= 0 && spec.score_correlation <= 1,
          "score_correlation must be in [0, 1]");
  require(spec.turns_per_session > 0, "turns_per_session must be > 0");
  require(std::isfinite(spec.quality_low) && std::isfinite(spec.quality_high),
          "quality values must be finite");
}

namespace {

enum class Outcome : unsigned char { both, edge_only, slm_only, neither };

}  // namespace

Trace synth_trace(const SynthSpec& spec) {
  validate(spec);
  const std::size_t n = spec.n_records;
  const auto quota = [n](double acc) {
    return static_cast<std::size_t>(std::llround(static_cast<double>(n) * acc));
  };
  const std::size_t n_slm = quota(spec.slm_acc);
  const std::size_t n_edge = quota(spec.edge_acc);

  // Nested outcomes: the weaker model's successes are a subset of the
  // stronger model's.
  std::vector<Outcome> outcomes;
  outcomes.reserve(n);
  outcomes.insert(outcomes.end(), std::min(n_slm, n_edge), Outcome::both);
  if (n_edge > n_slm) outcomes.insert(outcomes.end(), n_edge - n_slm, Outcome::edge_only);
  if (n_slm > n_edge) outcomes.insert(outcomes.end(), n_slm - n_edge, Outcome::slm_only);
  outcomes.resize(n, Outcome::neither);

  std::mt19937_64 rng(spec.seed);
  shuffle(std::span<Outcome>(outcomes), rng);

  const auto mean = static_cast<std::uint64_t>(std::llround(spec.prompt_len_mean));
  const std::uint64_t span = 2 * mean - 1;

  Trace trace;
  trace.reserve((n + spec.turns_per_session - 1) / spec.turns_per_session);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t turn = i % spec.turns_per_session;
    if (turn == 0) {
      trace.push_back(SessionTrace{"s" + std::to_string(trace.size()), {}});
    }
    const Outcome outcome = outcomes[i];

    TraceRecord r;
    r.session_id = trace.back().session_id;
    r.turn_index = turn;
    r.prompt_len = static_cast<double>(1 + uniform_below(rng, span));
    const bool informed = uniform01(rng) < spec.score_correlation;
    const double u = uniform01(rng);
    if (!informed) {
      r.semantic_score = u;
    } else if (outcome == Outcome::edge_only) {
      r.semantic_score = 0.5 + 0.5 * (1.0 - u);  // (0.5, 1]
    } else {
      r.semantic_score = 0.5 * u;  // [0, 0.5)
    }
    r.slm_resp_len = spec.slm_resp_len;
    r.edge_resp_len = spec.edge_resp_len;
    const bool slm_ok = outcome == Outcome::both || outcome == Outcome::slm_only;
    const bool edge_ok = outcome == Outcome::both || outcome == Outcome::edge_only;
    r.slm_quality = slm_ok ? spec.quality_high : spec.quality_low;
    r.edge_quality = edge_ok ? spec.quality_high : spec.quality_low;
    trace.back().turns.push_back(std::move(r));
  }
  return trace;
}

std::optional<Preset> find_preset(std::string_view name) {
  SynthSpec s;
  s.n_records = 10000;
  s.score_correlation = 0.8;
  if (name == "mmlu") {
    s.slm_acc = 0.6579;
    s.edge_acc = 0.8524;
    s.slm_resp_len = 1254.4;
    s.edge_resp_len = 4567.9;
    s.prompt_len_mean = 80;
    return Preset{"mmlu", s, 0.03};
  }
  if (name == "gsm8k") {
    s.slm_acc = 0.7309;
    s.edge_acc = 0.8901;
    s.slm_resp_len = 136.3;
    s.edge_resp_len = 460.1;
    s.prompt_len_mean = 50;
    return Preset{"gsm8k", s, 0.05};
  }
  if (name == "mtbench") {
    // Scores of 8 or 10 with pass fractions giving mean 9.29 / 9.78.
    s.quality_low = 8.0;
    s.quality_high = 10.0;
    s.slm_acc = 0.645;
    s.edge_acc = 0.89;
    s.slm_resp_len = 226.37;
    s.edge_resp_len = 879.16;
    s.prompt_len_mean = 40;
    s.turns_per_session = 3;
    return Preset{"mtbench", s, 0.05};
  }
  return std::nullopt;
}

std::vector<std::string> preset_names() { return {"mmlu", "gsm8k", "mtbench"}; }

}  // namespace edgeroute

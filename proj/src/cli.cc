#include "chainpool/cli.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "chainpool/analytic.h"
#include "chainpool/oracle.h"

namespace chainpool::cli {

namespace {

using nlohmann::json;

constexpr double kAgreementStderrs = 3.0;

struct Options {
  std::string gate = "cz";
  std::string strategy = "paired-greed";
  std::string p;
  std::string p_grid;
  int bins = 50;
  std::uint64_t steps = 50'000;
  std::uint64_t burn_in = 0;
  std::uint64_t seed = 1;
  std::uint64_t replicas = 1;
  unsigned threads = 1;
  std::string format = "csv";
  std::string output;
  std::string summary;
  std::string config;
  std::string dump;
  bool check = false;
  std::size_t state_cap = oracle::kDefaultStateCap;
};

/// Thrown for bad user input that CLI11 itself does not catch.
class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  return text.substr(first, text.find_last_not_of(" \t\r") - first + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

double parse_probability(const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + text + "'");
  }
  if (used != text.size()) throw UsageError("not a number: '" + text + "'");
  if (!(value > 0.0 && value <= 1.0)) {
    throw UsageError("probability " + text + " outside (0, 1]");
  }
  return value;
}

json number(double value) { return std::stod(format_number(value)); }

json to_json(const OutputRecord& r) {
  return {{"gate", r.gate},
          {"strategy", r.strategy},
          {"p_gate", std::stod(r.p_gate)},
          {"bins", r.bins},
          {"steps", r.steps},
          {"burn_in", r.burn_in},
          {"seed", r.seed},
          {"replica", r.replica},
          {"spilled_qubits", r.spilled_qubits},
          {"ops", r.ops},
          {"rate", number(r.rate)}};
}

json to_json(const AggregateRecord& r) {
  return {{"gate", r.gate},
          {"strategy", r.strategy},
          {"p_gate", std::stod(r.p_gate)},
          {"bins", r.bins},
          {"steps", r.steps},
          {"replicas", r.replicas},
          {"mean_rate", number(r.mean_rate)},
          {"stderr", number(r.stderr_rate)}};
}

/// Output target: the --output file when given, otherwise `fallback`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open '" + path + "' for writing");
      stream_ = &file_;
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void check_format(const Options& o) {
  if (o.format != "csv" && o.format != "json") {
    throw UsageError("--format must be csv or json");
  }
}

void warn_physical_limit(const GateModel& gate, const std::string& p_text, std::ostream& err) {
  if (gate.exceeds_physical_limit()) {
    err << "warning: EO physical maximum p=1/2 (got p=" << p_text << ")\n";
  }
}

SimConfig make_config(const Options& o, GateKind gate, StrategyKind strategy, double p) {
  SimConfig config{GateModel(gate, p), strategy, o.bins, o.steps, o.burn_in, o.seed};
  config.validate();
  return config;
}

OutputRecord make_record(const SimConfig& config, const std::string& p_text,
                         std::uint64_t seed, std::uint64_t replica, const SimResult& result) {
  return {std::string(gate_name(config.gate.kind())),
          std::string(strategy_name(config.strategy)),
          p_text,
          config.max_len,
          config.steps,
          config.burn_in,
          seed,
          replica,
          result.spilled_qubits,
          result.ops,
          result.rate};
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  check_format(o);
  if (o.p.empty()) throw UsageError("--p is required");
  const double p = parse_probability(o.p);
  const SimConfig config = make_config(o, parse_gate(o.gate), parse_strategy(o.strategy), p);
  warn_physical_limit(config.gate, o.p, err);

  const OutputRecord record = make_record(config, o.p, config.seed, 0, run(config));
  Sink sink(o.output, out);
  if (o.format == "json") {
    sink.stream() << to_json(record).dump() << '\n';
  } else {
    sink.stream() << kRecordHeader << '\n' << to_csv(record) << '\n';
  }
  return 0;
}

std::vector<Probability> sweep_points(const Options& o) {
  if (!o.p_grid.empty() && !o.p.empty()) throw UsageError("give --p or --p-grid, not both");
  if (!o.p_grid.empty()) return parse_p_grid(o.p_grid);
  if (!o.p.empty()) return parse_p_list(o.p);
  throw UsageError("--p or --p-grid is required");
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  check_format(o);
  if (o.replicas == 0) throw UsageError("--replicas must be positive");
  const auto points = sweep_points(o);
  std::vector<GateKind> gates;
  for (const auto& name : split(o.gate, ',')) gates.push_back(parse_gate(name));
  std::vector<StrategyKind> strategies;
  for (const auto& name : split(o.strategy, ',')) strategies.push_back(parse_strategy(name));
  if (gates.empty() || strategies.empty()) throw UsageError("empty gate or strategy list");

  std::vector<OutputRecord> records;
  std::vector<AggregateRecord> aggregates;
  for (GateKind gate : gates) {
    for (StrategyKind strategy : strategies) {
      for (const auto& point : points) {
        const SimConfig config = make_config(o, gate, strategy, point.value);
        warn_physical_limit(config.gate, point.text, err);
        const ReplicaSummary summary = run_replicas(config, o.replicas, o.threads);
        for (std::uint64_t k = 0; k < o.replicas; ++k) {
          records.push_back(make_record(config, point.text, derive_seed(config.seed, k), k,
                                        summary.replicas[k]));
        }
        aggregates.push_back({std::string(gate_name(gate)), std::string(strategy_name(strategy)),
                              point.text, config.max_len, config.steps, o.replicas,
                              summary.mean_rate, summary.stderr_rate});
      }
    }
  }

  Sink sink(o.output, out);
  std::optional<Sink> summary_sink;
  if (!o.summary.empty()) summary_sink.emplace(o.summary, out);

  if (o.format == "json") {
    json rec = json::array(), agg = json::array();
    for (const auto& r : records) rec.push_back(to_json(r));
    for (const auto& a : aggregates) agg.push_back(to_json(a));
    if (summary_sink) {
      sink.stream() << rec.dump() << '\n';
      summary_sink->stream() << agg.dump() << '\n';
    } else {
      sink.stream() << json{{"records", rec}, {"aggregates", agg}}.dump() << '\n';
    }
    return 0;
  }

  sink.stream() << kRecordHeader << '\n';
  for (const auto& r : records) sink.stream() << to_csv(r) << '\n';
  std::ostream& agg_out = summary_sink ? summary_sink->stream() : sink.stream();
  if (!summary_sink) agg_out << '\n';
  agg_out << kAggregateHeader << '\n';
  for (const auto& a : aggregates) agg_out << to_csv(a) << '\n';
  return 0;
}

int cmd_analytic(const Options& o, std::ostream& out, std::ostream&) {
  check_format(o);
  std::vector<Probability> points;
  if (!o.p.empty() && !o.p_grid.empty()) throw UsageError("give --p or --p-grid, not both");
  if (!o.p.empty()) {
    points = parse_p_list(o.p);
  } else {
    points = parse_p_grid(o.p_grid.empty() ? "0.05:1:0.05" : o.p_grid);
  }

  Sink sink(o.output, out);
  constexpr const char* kOutOfDomain = "out-of-domain";
  json rows = json::array();
  if (o.format == "csv") sink.stream() << "p_gate,barrett_kok_rate,duan_raussendorf_rate\n";
  for (const auto& point : points) {
    std::optional<double> bk;
    try {
      bk = analytic::barrett_kok_rate(point.value);
    } catch (const std::domain_error&) {
    }
    const double dr = analytic::duan_raussendorf_rate(point.value);
    if (o.format == "csv") {
      sink.stream() << point.text << ',' << (bk ? format_number(*bk) : kOutOfDomain) << ','
                    << format_number(dr) << '\n';
    } else {
      rows.push_back({{"p_gate", point.value},
                      {"barrett_kok_rate", bk ? number(*bk) : json(kOutOfDomain)},
                      {"duan_raussendorf_rate", number(dr)}});
    }
  }
  if (o.format == "json") sink.stream() << rows.dump() << '\n';
  return 0;
}

std::string_view method_name(oracle::SolveMethod method) {
  return method == oracle::SolveMethod::kDirect ? "direct" : "power-iteration";
}

int cmd_oracle(const Options& o, std::ostream& out, std::ostream& err) {
  check_format(o);
  if (o.p.empty()) throw UsageError("--p is required");
  const double p = parse_probability(o.p);
  const GateKind gate_kind = parse_gate(o.gate);
  const StrategyKind strategy = parse_strategy(o.strategy);
  if (o.bins < 2) throw UsageError("bins must be at least 2");
  const GateModel gate(gate_kind, p);
  warn_physical_limit(gate, o.p, err);

  const oracle::MarkovChain chain = oracle::build_chain(strategy, gate, o.bins, o.state_cap);
  const oracle::ExactRate exact = oracle::exact_rate(chain);

  if (!o.dump.empty()) {
    std::ofstream dump(o.dump);
    if (!dump) throw std::runtime_error("cannot open '" + o.dump + "' for writing");
    oracle::write_transitions(dump, chain);
  }

  json row = {{"gate", std::string(gate_name(gate_kind))},
              {"strategy", std::string(strategy_name(strategy))},
              {"p_gate", p},
              {"bins", o.bins},
              {"states", chain.states.size()},
              {"recurrent_states", exact.recurrent_states},
              {"method", std::string(method_name(exact.method))},
              {"exact_rate", number(exact.rate)}};
  std::string header = "gate,strategy,p_gate,bins,states,recurrent_states,method,exact_rate";
  std::ostringstream line;
  line << gate_name(gate_kind) << ',' << strategy_name(strategy) << ',' << o.p << ',' << o.bins
       << ',' << chain.states.size() << ',' << exact.recurrent_states << ','
       << method_name(exact.method) << ',' << format_number(exact.rate);

  if (o.check) {
    if (o.replicas < 2) throw UsageError("--check needs --replicas >= 2");
    const SimConfig config = make_config(o, gate_kind, strategy, p);
    const ReplicaSummary mc = run_replicas(config, o.replicas, o.threads);
    const double diff = mc.mean_rate - exact.rate;
    const double deviation =
        mc.stderr_rate > 0.0 ? std::abs(diff) / mc.stderr_rate : (diff == 0.0 ? 0.0 : INFINITY);
    const bool agree = deviation <= kAgreementStderrs;
    header += ",mc_steps,mc_replicas,mc_mean_rate,mc_stderr,deviation_stderr,agreement";
    line << ',' << config.steps << ',' << o.replicas << ',' << format_number(mc.mean_rate) << ','
         << format_number(mc.stderr_rate) << ',' << format_number(deviation) << ','
         << (agree ? "agree" : "disagree");
    row["mc_steps"] = config.steps;
    row["mc_replicas"] = o.replicas;
    row["mc_mean_rate"] = number(mc.mean_rate);
    row["mc_stderr"] = number(mc.stderr_rate);
    row["deviation_stderr"] = std::isfinite(deviation) ? number(deviation) : json(nullptr);
    row["agreement"] = agree ? "agree" : "disagree";
    err << (agree ? "agree" : "disagree") << " within " << format_number(kAgreementStderrs)
        << " stderr (deviation " << format_number(deviation) << " stderr)\n";
  }

  Sink sink(o.output, out);
  if (o.format == "json") {
    sink.stream() << row.dump() << '\n';
  } else {
    sink.stream() << header << '\n' << line.str() << '\n';
  }
  return 0;
}

/// Reads `key = value` lines into flag tokens. Blank lines and lines starting
/// with '#' are skipped. Boolean flags accept true/false.
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::vector<std::string> tokens;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string v = trim(line.substr(eq + 1));
    if (key.empty()) throw UsageError(path + ":" + std::to_string(number) + ": missing key");
    const std::string flag = "--" + key;
    if (flag == "--config") throw UsageError("config files cannot include other config files");
    if (flag == "--check") {
      if (v == "true" || v == "1") tokens.push_back(flag);
      continue;
    }
    tokens.push_back(flag);
    tokens.push_back(v);
  }
  return tokens;
}

/// Splices config-file tokens in front of the command-line flags so that
/// flags given on the command line (parsed later) take precedence.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  const std::vector<std::string> commands = {"simulate", "sweep", "analytic", "oracle"};
  auto command = std::find_if(args.begin(), args.end(), [&](const std::string& a) {
    return std::find(commands.begin(), commands.end(), a) != commands.end();
  });
  if (command == args.end()) return args;
  std::string path;
  for (auto it = command + 1; it != args.end(); ++it) {
    if (*it == "--config" && it + 1 != args.end()) path = *(it + 1);
    if (it->rfind("--config=", 0) == 0) path = it->substr(9);
  }
  if (path.empty()) return args;
  const auto tokens = config_tokens(path);
  args.insert(command + 1, tokens.begin(), tokens.end());
  return args;
}

void add_common(CLI::App& sub, Options& o, bool lists) {
  const std::string list_note = lists ? " (comma-separated list)" : "";
  sub.add_option("--gate", o.gate, "cz, klm-cz, fusion-1, fusion-2, eo" + list_note)
      ->capture_default_str();
  sub.add_option("--strategy", o.strategy,
                 "greed, modesty, random, paired-greed, paired-modesty, paired-random, "
                 "eo-greed-paired" + list_note)
      ->capture_default_str();
  sub.add_option("--bins", o.bins, "Number of bins L")->capture_default_str();
  sub.add_option("--steps", o.steps, "Gate attempts per run")->capture_default_str();
  sub.add_option("--burn-in", o.burn_in, "Attempts excluded from the rate")
      ->capture_default_str();
  sub.add_option("--seed", o.seed, "Base RNG seed")->capture_default_str();
  sub.add_option("--replicas", o.replicas, "Independent runs per point")
      ->capture_default_str();
  sub.add_option("--threads", o.threads, "Concurrent runs (0 = all cores)")
      ->capture_default_str();
}

void add_output(CLI::App& sub, Options& o) {
  sub.add_option("--format", o.format, "csv or json")->capture_default_str();
  sub.add_option("--output", o.output, "Write records here instead of stdout");
  sub.add_option("--config", o.config, "File of `key = value` lines mirroring flag names");
}

}  // namespace

std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return buffer;
}

std::vector<Probability> parse_p_grid(const std::string& range) {
  const auto parts = split(range, ':');
  if (parts.size() != 3) throw std::invalid_argument("p grid must be start:stop:step");
  double start = 0.0, stop = 0.0, step = 0.0;
  try {
    start = std::stod(parts[0]);
    stop = std::stod(parts[1]);
    step = std::stod(parts[2]);
  } catch (const std::exception&) {
    throw std::invalid_argument("p grid must be start:stop:step");
  }
  if (!(step > 0.0)) throw std::invalid_argument("p grid step must be positive");
  if (!(start <= stop)) throw std::invalid_argument("empty p grid");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<Probability> grid;
  for (std::size_t i = 0; i < count; ++i) {
    const std::string text = format_number(start + static_cast<double>(i) * step);
    const double value = std::stod(text);
    if (!(value > 0.0 && value <= 1.0)) {
      throw std::invalid_argument("p grid value " + text + " outside (0, 1]");
    }
    grid.push_back({value, text});
  }
  return grid;
}

std::vector<Probability> parse_p_list(const std::string& list) {
  std::vector<Probability> values;
  for (const auto& text : split(list, ',')) {
    values.push_back({parse_probability(text), text});
  }
  if (values.empty()) throw std::invalid_argument("empty p list");
  return values;
}

std::string to_csv(const OutputRecord& r) {
  std::ostringstream s;
  s << r.gate << ',' << r.strategy << ',' << r.p_gate << ',' << r.bins << ',' << r.steps << ','
    << r.burn_in << ',' << r.seed << ',' << r.replica << ',' << r.spilled_qubits << ',' << r.ops
    << ',' << format_number(r.rate);
  return s.str();
}

std::string to_csv(const AggregateRecord& r) {
  std::ostringstream s;
  s << r.gate << ',' << r.strategy << ',' << r.p_gate << ',' << r.bins << ',' << r.steps << ','
    << r.replicas << ',' << format_number(r.mean_rate) << ',' << format_number(r.stderr_rate);
  return s.str();
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monte-Carlo growth of linear cluster states with non-deterministic gates",
               "chainpool"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  Options simulate_opts, sweep_opts, analytic_opts, oracle_opts;
  oracle_opts.steps = 1'000'000;
  oracle_opts.replicas = 10;

  auto* simulate = app.add_subcommand("simulate", "Run one simulation");
  add_common(*simulate, simulate_opts, false);
  simulate->add_option("--p", simulate_opts.p, "Gate success probability");
  add_output(*simulate, simulate_opts);

  auto* sweep = app.add_subcommand("sweep", "Sweep gates x strategies x p with replicas");
  add_common(*sweep, sweep_opts, true);
  sweep->add_option("--p", sweep_opts.p, "Comma-separated probabilities");
  sweep->add_option("--p-grid", sweep_opts.p_grid, "start:stop:step, inclusive");
  sweep->add_option("--summary", sweep_opts.summary,
                    "Write aggregate rows here (default: after the records)");
  add_output(*sweep, sweep_opts);

  auto* analytic_cmd = app.add_subcommand("analytic", "Tabulate no-recycling cost rates");
  analytic_cmd->add_option("--p", analytic_opts.p, "Comma-separated probabilities");
  analytic_cmd->add_option("--p-grid", analytic_opts.p_grid, "start:stop:step (default 0.05:1:0.05)");
  add_output(*analytic_cmd, analytic_opts);

  auto* oracle_cmd = app.add_subcommand("oracle", "Exact rate by Markov-chain enumeration");
  add_common(*oracle_cmd, oracle_opts, false);
  oracle_cmd->add_option("--p", oracle_opts.p, "Gate success probability");
  oracle_cmd->add_flag("--check", oracle_opts.check, "Compare against Monte-Carlo replicas");
  oracle_cmd->add_option("--state-cap", oracle_opts.state_cap, "Maximum reachable states")
      ->capture_default_str();
  oracle_cmd->add_option("--dump", oracle_opts.dump,
                         "Write the transition table (state probability next spilled)");
  add_output(*oracle_cmd, oracle_opts);

  try {
    std::vector<std::string> args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*simulate) return cmd_simulate(simulate_opts, out, err);
    if (*sweep) return cmd_sweep(sweep_opts, out, err);
    if (*analytic_cmd) return cmd_analytic(analytic_opts, out, err);
    if (*oracle_cmd) return cmd_oracle(oracle_opts, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace chainpool::cli

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "rangebal/run.hpp"
#include "rangebal/trace_io.hpp"

namespace {

using namespace rangebal;

// Everything stays a string until after flag parsing so the config file and
// the command line feed the same conversion paths.
struct Flags {
  std::string alpha = "547/100";
  std::string beta;    // empty: 3(alpha+2)/alpha
  std::string cost_c;  // empty: derived from alpha when possible
  std::uint64_t c0 = 4;
  std::string mode = "general";
  std::uint64_t nodes = 64;
  std::uint64_t ops = 10000;
  std::string workload = "mixed";
  double p_delete = 0.3;
  std::string dist = "uniform";
  std::uint64_t hot_lo = 0;
  std::uint64_t hot_hi = std::uint64_t{1} << 57;
  double hot_weight = 0.9;
  double zipf_s = 0.99;
  std::uint64_t seed = 1;
  std::string directory = "centralized";
  std::string trace_out;
  std::string metrics_out;
  std::string trace_in;
  std::string report_out;
  std::string alphas;
};

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    if (value.empty() || value[0] == '-' || value[0] == '+') throw std::invalid_argument(value);
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + ": not an unsigned integer: " + value);
  }
}

double parse_f64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + ": not a number: " + value);
  }
}

void apply_config_pairs(Flags& f,
                        const std::vector<std::pair<std::string, std::string>>& pairs) {
  for (const auto& [key, value] : pairs) {
    if (key == "alpha") f.alpha = value;
    else if (key == "beta") f.beta = value;
    else if (key == "c") f.cost_c = value;
    else if (key == "c0") f.c0 = parse_u64(key, value);
    else if (key == "mode") f.mode = value;
    else if (key == "nodes") f.nodes = parse_u64(key, value);
    else if (key == "ops") f.ops = parse_u64(key, value);
    else if (key == "workload") f.workload = value;
    else if (key == "p-delete") f.p_delete = parse_f64(key, value);
    else if (key == "dist") f.dist = value;
    else if (key == "hot-lo") f.hot_lo = parse_u64(key, value);
    else if (key == "hot-hi") f.hot_hi = parse_u64(key, value);
    else if (key == "hot-weight") f.hot_weight = parse_f64(key, value);
    else if (key == "zipf-s") f.zipf_s = parse_f64(key, value);
    else if (key == "seed") f.seed = parse_u64(key, value);
    else if (key == "directory") f.directory = value;
    else if (key == "trace-out") f.trace_out = value;
    else if (key == "metrics-out") f.metrics_out = value;
    else if (key == "trace-in") f.trace_in = value;
    else if (key == "report-out") f.report_out = value;
    else if (key == "alphas") f.alphas = value;
    else throw ConfigError("unknown config key: " + key);
  }
}

std::string normalized(std::string s) {
  for (char& ch : s) {
    if (ch == '-') ch = '_';
  }
  return s;
}

Mode parse_mode(const std::string& s) {
  const std::string n = normalized(s);
  if (n == "insert_only") return Mode::insert_only;
  if (n == "general") return Mode::general;
  throw ConfigError("unknown mode: " + s);
}

WorkloadKind parse_workload_kind(const std::string& s) {
  const std::string n = normalized(s);
  if (n == "insert_only") return WorkloadKind::insert_only;
  if (n == "mixed") return WorkloadKind::mixed;
  if (n == "adversarial") return WorkloadKind::adversarial;
  throw ConfigError("unknown workload: " + s);
}

KeyDist parse_dist(const std::string& s) {
  const std::string n = normalized(s);
  if (n == "uniform") return KeyDist::uniform;
  if (n == "hot") return KeyDist::hot;
  if (n == "zipf") return KeyDist::zipf;
  throw ConfigError("unknown key distribution: " + s);
}

DirectoryMode parse_directory(const std::string& s) {
  const std::string n = normalized(s);
  if (n == "centralized") return DirectoryMode::centralized;
  if (n == "overlay") return DirectoryMode::overlay;
  throw ConfigError("unknown directory mode: " + s);
}

Rational flag_rational(const std::string& name, const std::string& value) {
  try {
    return parse_rational(value);
  } catch (const RationalParseError& e) {
    throw ConfigError(name + ": " + e.what());
  }
}

RunConfig to_run_config(const Flags& f) {
  RunConfig cfg;
  cfg.alpha = flag_rational("alpha", f.alpha);
  if (!f.beta.empty()) cfg.beta = flag_rational("beta", f.beta);
  if (!f.cost_c.empty()) cfg.cost_c = flag_rational("c", f.cost_c);
  cfg.c0 = f.c0;
  cfg.mode = parse_mode(f.mode);
  cfg.nodes = f.nodes;
  cfg.ops = f.ops;
  cfg.directory = parse_directory(f.directory);
  cfg.workload.kind = parse_workload_kind(f.workload);
  cfg.workload.p_delete = f.p_delete;
  cfg.workload.dist = parse_dist(f.dist);
  cfg.workload.hot_lo = f.hot_lo;
  cfg.workload.hot_hi = f.hot_hi;
  cfg.workload.hot_weight = f.hot_weight;
  cfg.workload.zipf_s = f.zipf_s;
  cfg.workload.seed = f.seed;
  return cfg;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

std::vector<EventRecord> load_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  return read_trace(in);
}

int cmd_run(const Flags& f) {
  const RunConfig cfg = to_run_config(f);
  const RunResult res = run_experiment(cfg);
  if (!f.trace_out.empty()) {
    std::ofstream out(f.trace_out, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + f.trace_out);
    write_trace(out, res.trace);
  }
  const std::string csv = summary_csv_header() + "\n" + summary_csv_row(res.summary) + "\n";
  if (!f.metrics_out.empty()) write_file(f.metrics_out, csv);
  std::cout << csv;

  int rc = 0;
  for (const CheckReport& r : verify_trace(res.trace, cfg)) {
    if (r.applicable && !r.pass) {
      std::cerr << check_report_json(r) << "\n";
      rc = 1;
    }
  }
  return rc;
}

int cmd_verify(const Flags& f) {
  const RunConfig cfg = to_run_config(f);
  std::vector<EventRecord> trace;
  try {
    trace = load_trace(f.trace_in);
  } catch (const TraceParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  int rc = 0;
  for (const CheckReport& r : verify_trace(trace, cfg)) {
    std::cout << check_report_json(r) << "\n";
    if (r.applicable && !r.pass) rc = 1;
  }
  return rc;
}

int cmd_sweep(const Flags& f) {
  const RunConfig base = to_run_config(f);
  std::vector<Rational> alphas;
  std::stringstream ss(f.alphas);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) throw ConfigError("empty entry in --alphas");
    alphas.push_back(flag_rational("alphas", token));
  }
  if (alphas.empty()) throw ConfigError("sweep needs at least one alpha");
  const std::string csv = sweep_csv(sweep(base, alphas));
  if (!f.metrics_out.empty()) write_file(f.metrics_out, csv);
  std::cout << csv;
  return 0;
}

int cmd_report(const Flags& f) {
  std::vector<EventRecord> trace;
  try {
    trace = load_trace(f.trace_in);
  } catch (const TraceParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  const std::string text = report_text(summarize(trace));
  if (!f.report_out.empty()) write_file(f.report_out, text);
  std::cout << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Flags flags;
  try {
    if (const char* env = std::getenv("RANGEBAL_CONFIG")) {
      apply_config_pairs(flags, parse_kv_file(env));
    }
  } catch (const ConfigError& e) {
    std::cerr << "config rejected: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"load balancing simulator for range-partitioned keys"};
  app.require_subcommand(1);

  const auto add_threshold_flags = [&flags](CLI::App* sub) {
    sub->add_option("--alpha", flags.alpha,
                    "insert-side trigger threshold, rational (547/100 or 5.47)");
    sub->add_option("--beta", flags.beta,
                    "delete-side trigger threshold; default 3(alpha+2)/alpha");
    sub->add_option("--c", flags.cost_c,
                    "potential cost constant; default derived from alpha");
    sub->add_option("--c0", flags.c0, "initial keys per node");
    sub->add_option("--mode", flags.mode, "insert-only | general");
    sub->add_option("--nodes", flags.nodes, "node count");
    sub->add_option("--directory", flags.directory, "centralized | overlay");
  };
  const auto add_workload_flags = [&flags](CLI::App* sub) {
    sub->add_option("--ops", flags.ops, "operation count");
    sub->add_option("--workload", flags.workload, "insert-only | mixed | adversarial");
    sub->add_option("--p-delete", flags.p_delete, "delete probability (mixed workload)");
    sub->add_option("--dist", flags.dist, "uniform | hot | zipf");
    sub->add_option("--hot-lo", flags.hot_lo, "hot range lower key");
    sub->add_option("--hot-hi", flags.hot_hi, "hot range upper key, exclusive");
    sub->add_option("--hot-weight", flags.hot_weight, "probability of the hot range");
    sub->add_option("--zipf-s", flags.zipf_s, "zipf exponent");
    sub->add_option("--seed", flags.seed, "rng seed");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "run an experiment and check its trace");
  add_threshold_flags(run_cmd);
  add_workload_flags(run_cmd);
  run_cmd->add_option("--trace-out", flags.trace_out, "write the event trace (jsonl)");
  run_cmd->add_option("--metrics-out", flags.metrics_out, "write the summary csv");

  CLI::App* verify_cmd = app.add_subcommand("verify", "re-check a recorded trace");
  add_threshold_flags(verify_cmd);
  verify_cmd->add_option("--trace-in", flags.trace_in, "trace to verify")->required();

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "one run per alpha, same seed");
  add_threshold_flags(sweep_cmd);
  add_workload_flags(sweep_cmd);
  sweep_cmd->add_option("--alphas", flags.alphas, "comma-separated alpha list")->required();
  sweep_cmd->add_option("--metrics-out", flags.metrics_out, "write the sweep csv");

  CLI::App* report_cmd = app.add_subcommand("report", "summarize a recorded trace");
  report_cmd->add_option("--trace-in", flags.trace_in, "trace to summarize")->required();
  report_cmd->add_option("--report-out", flags.report_out, "write the summary text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(flags);
    if (verify_cmd->parsed()) return cmd_verify(flags);
    if (sweep_cmd->parsed()) return cmd_sweep(flags);
    return cmd_report(flags);
  } catch (const ConfigError& e) {
    std::cerr << "config rejected: " << e.what() << "\n";
    return 2;
  } catch (const ConfigThresholdError& e) {
    std::cerr << "config rejected: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

// Copyright (c) 2026 The cdstream authors
// SPDX-License-Identifier: MIT

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cdstream/harness.hpp"
#include "cdstream/oracle.hpp"
#include "cdstream/session.hpp"
#include "cdstream/stream.hpp"
#include "cdstream/stream_gen.hpp"

namespace {

using namespace cdstream;

bool verbose_logging() {
  const char* env = std::getenv("CDSTREAM_LOG");
  return env != nullptr && *env != '\0';
}

std::vector<Delta> load_stream(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read stream file " + path);
  return read_stream_jsonl(in);
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  return nlohmann::json::parse(in);
}

int cmd_generate(const std::string& problem, int row_length, int n, int ticks, double alpha,
                 double p, const std::string& schema_csv, std::uint64_t seed,
                 const std::string& out, std::string instance_out) {
  const auto schema = parse_schema(schema_csv);
  if (instance_out.empty()) instance_out = out + ".instance.json";
  std::ofstream stream_file(out);
  if (!stream_file) throw IoError("cannot write " + out);
  std::ofstream instance_file(instance_out);
  if (!instance_file) throw IoError("cannot write " + instance_out);

  if (problem == "pup") {
    const PupInstance inst = gen_double_pup(row_length);
    const auto deltas = gen_pup_stream(inst, ticks, seed, alpha, p, schema);
    write_stream_jsonl(stream_file, deltas);
    instance_file << pup_to_json(inst).dump(2) << '\n';
  } else if (problem == "qc") {
    const QcStream qs = gen_qc_stream(n, ticks, seed, alpha, p, schema);
    write_stream_jsonl(stream_file, qs.deltas);
    instance_file << qc_to_json(qs.instance).dump(2) << '\n';
  } else {
    throw ConfigError("unknown problem: " + problem);
  }
  std::cerr << "wrote " << out << " and " << instance_out << '\n';
  return 0;
}

int cmd_run(const std::string& stream_path, std::string instance_path,
            const std::string& strategy_name, double lambda, std::size_t k, std::size_t n_store,
            double a, double w1, std::uint64_t seed, std::optional<double> timeout_ms,
            const std::string& out, const std::string& snapshot_out,
            const std::string& dimacs_out) {
  if (instance_path.empty()) instance_path = stream_path + ".instance.json";
  const nlohmann::json inst_json = load_json(instance_path);
  SessionProgram program;
  if (inst_json.contains("zones")) {
    program = program_for_pup(pup_from_json(inst_json));
  } else if (inst_json.contains("n")) {
    program = program_for_qc(qc_from_json(inst_json).n);
  } else {
    throw ConfigError("instance file is neither a PUP nor a QC instance: " + instance_path);
  }
  const auto deltas = load_stream(stream_path);

  if (!dimacs_out.empty()) {
    Engine probe(program.clauses, program.atom_count);
    std::ofstream cnf(dimacs_out);
    if (!cnf) throw IoError("cannot write " + dimacs_out);
    probe.export_dimacs(cnf);
    std::ofstream sym(dimacs_out + ".sym");
    write_symbol_table(sym, program.symbols);
  }

  BanditPolicy policy;
  policy.lambda = lambda;
  policy.k = k;
  policy.n_store = n_store;
  policy.a = a;
  policy.w1 = w1;
  Strategy strategy;
  switch (strategy_from_string(strategy_name)) {
    case StrategyKind::MRestart: strategy = Strategy::mrestart(); break;
    case StrategyKind::RL: strategy = Strategy::rl(policy); break;
    case StrategyKind::PSOnly: strategy = Strategy::ps_only(policy); break;
    case StrategyKind::COnly: strategy = Strategy::c_only(policy); break;
  }

  const auto build_start = std::chrono::steady_clock::now();
  Session session(std::move(program), strategy, seed, timeout_ms);
  const double build_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - build_start)
                              .count();

  std::ofstream csv(out);
  if (!csv) throw IoError("cannot write " + out);
  write_csv_header(csv);
  const double written_lambda = strategy.kind == StrategyKind::MRestart ? 0.0 : lambda;
  const bool log = verbose_logging();
  for (const Delta& d : deltas) {
    const TickResult r = session.process_tick(d);
    write_csv_row(csv, strategy_name, written_lambda, r);
    if (log)
      std::cerr << "tick " << r.tick << " " << to_string(r.status) << " wall_ms=" << r.wall_ms
                << " conflicts=" << r.conflicts << '\n';
  }
  std::ofstream meta(out + ".meta.json");
  meta << nlohmann::json{{"cells",
                          {{{"strategy", strategy_name},
                            {"lambda", written_lambda},
                            {"encode_ms", build_ms}}}}}
              .dump(2)
       << '\n';

  if (!snapshot_out.empty()) {
    std::ofstream snap(snapshot_out);
    if (!snap) throw IoError("cannot write " + snapshot_out);
    snap << session.cache_snapshot().dump(2) << '\n';
  }
  std::cerr << "wrote " << out << '\n';
  return 0;
}

int cmd_summarize(const std::string& in_path, const std::string& out_path) {
  std::ifstream csv(in_path);
  if (!csv) throw IoError("cannot read " + in_path);
  nlohmann::json meta;
  bool have_meta = false;
  {
    std::ifstream meta_in(in_path + ".meta.json");
    if (meta_in) {
      meta = nlohmann::json::parse(meta_in);
      have_meta = true;
    }
  }
  const auto rows = summarize_csv(csv, have_meta ? &meta : nullptr);
  const nlohmann::json j = summary_to_json(rows);
  if (out_path.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    std::ofstream out(out_path);
    if (!out) throw IoError("cannot write " + out_path);
    out << j.dump(2) << '\n';
    std::cerr << "wrote " << out_path << '\n';
  }
  return 0;
}

int cmd_oracle(const std::string& problem, int row_length, int n, const std::string& stream_path,
               const std::string& out_path) {
  const auto deltas = load_stream(stream_path);
  std::vector<bool> statuses;
  if (problem == "pup") {
    statuses = pup_oracle_stream_status(gen_double_pup(row_length), deltas);
  } else if (problem == "qc") {
    statuses = qc_oracle_stream_status(n, deltas);
  } else {
    throw ConfigError("unknown problem: " + problem);
  }
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw IoError("cannot write " + out_path);
    os = &file;
  }
  for (std::size_t i = 0; i < statuses.size(); ++i)
    *os << deltas[i].tick << ',' << (statuses[i] ? "sat" : "unsat") << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"streaming CDCL solver with a bandit-managed learned-constraint cache"};
  app.require_subcommand(1);

  // generate
  std::string g_problem = "pup";
  int g_row_length = 6, g_n = 14, g_ticks = 256;
  double g_alpha = 2.2, g_p = 0.8;
  std::string g_schema = "m1,m3,m2,m3";
  std::uint64_t g_seed = 1;
  std::string g_out = "stream.jsonl", g_instance_out;
  auto* gen = app.add_subcommand("generate", "generate an instance and a delta stream");
  gen->add_option("--problem", g_problem, "pup or qc")->required();
  gen->add_option("--row-length", g_row_length, "PUP double-instance row length");
  gen->add_option("--n", g_n, "QC board size");
  gen->add_option("--ticks", g_ticks, "stream length (tick 0 is the initial state)");
  gen->add_option("--alpha", g_alpha, "Zipf skew for component selection");
  gen->add_option("--p", g_p, "restore probability for m3");
  gen->add_option("--schema", g_schema, "cyclic mutation schema, e.g. m1,m3,m2,m3");
  gen->add_option("--seed", g_seed, "stream seed");
  gen->add_option("--out", g_out, "stream JSONL path")->required();
  gen->add_option("--instance-out", g_instance_out, "instance JSON path (default <out>.instance.json)");

  // run
  std::string r_stream, r_instance, r_strategy = "rl";
  double r_lambda = 0.5, r_a = 20.0, r_w1 = 40.0;
  std::size_t r_k = 3000, r_n = 6000;
  std::uint64_t r_seed = 1;
  double r_timeout = 0.0;
  std::string r_out = "results.csv", r_snapshot, r_dimacs;
  auto* run = app.add_subcommand("run", "replay a stream with one strategy");
  run->add_option("--stream", r_stream, "stream JSONL path")->required();
  run->add_option("--instance", r_instance, "instance JSON (default <stream>.instance.json)");
  run->add_option("--strategy", r_strategy, "mrestart, rl, ps, or c")->required();
  run->add_option("--lambda", r_lambda, "bandit learning rate");
  run->add_option("--k", r_k, "constraints to activate per tick");
  run->add_option("--n", r_n, "cache capacity");
  run->add_option("--a", r_a, "reward scale coefficient");
  run->add_option("--w1", r_w1, "optimistic initial weight");
  run->add_option("--seed", r_seed, "engine seed");
  run->add_option("--timeout-ms", r_timeout, "per-tick solve budget (0 = none)");
  run->add_option("--out", r_out, "results CSV path")->required();
  run->add_option("--snapshot", r_snapshot, "write the final cache snapshot JSON here");
  run->add_option("--dimacs", r_dimacs, "export the program as DIMACS CNF (+ .sym sidecar)");

  // summarize
  std::string s_in, s_out;
  auto* sum = app.add_subcommand("summarize", "boxplot statistics per strategy/lambda");
  sum->add_option("--in", s_in, "results CSV path")->required();
  sum->add_option("--out", s_out, "summary JSON path (default stdout)");

  // oracle
  std::string o_problem = "qc", o_stream, o_out;
  int o_row_length = 2, o_n = 6;
  auto* ora = app.add_subcommand("oracle", "brute-force status reference for small instances");
  ora->add_option("--problem", o_problem, "pup or qc")->required();
  ora->add_option("--row-length", o_row_length, "PUP row length");
  ora->add_option("--n", o_n, "QC board size");
  ora->add_option("--stream", o_stream, "stream JSONL path")->required();
  ora->add_option("--out", o_out, "statuses output (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_generate(g_problem, g_row_length, g_n, g_ticks, g_alpha, g_p, g_schema, g_seed,
                          g_out, g_instance_out);
    if (run->parsed())
      return cmd_run(r_stream, r_instance, r_strategy, r_lambda, r_k, r_n, r_a, r_w1, r_seed,
                     r_timeout > 0.0 ? std::optional<double>(r_timeout) : std::nullopt, r_out,
                     r_snapshot, r_dimacs);
    if (sum->parsed()) return cmd_summarize(s_in, s_out);
    if (ora->parsed()) return cmd_oracle(o_problem, o_row_length, o_n, o_stream, o_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

// dynlsf: generate update streams and replay them through the dynamic structures.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>

#include "dynlsf/dynlsf.hpp"

using namespace dynlsf;

namespace {

constexpr int kExitOk = 0, kExitVerify = 1, kExitUsage = 2, kExitIllegalDelete = 3;

struct GenOpts {
  std::string model = "er_full_delete";
  StreamParams params;
};

struct RunOpts {
  std::string stream = "-";
  std::string out = "-";
  std::string format = "csv";
  std::string structure = "ldd";
  std::string rule = "one";
  std::string regime = "a";
  bool no_timing = false;
  std::uint64_t m_hat = 0;
  ExperimentConfig cfg;
};

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_output(const std::string& path, const std::string& data) {
  if (path == "-") {
    std::cout << data;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidParameters, "cannot write " + path);
  out << data;
}

StreamFile generate(const GenOpts& g, std::uint64_t seed) {
  const auto model = parse_model(g.model);
  if (!model) throw Error(ErrorCode::InvalidParams, "unknown model " + g.model);
  return generate_stream(*model, g.params, seed);
}

ExperimentConfig finish_config(RunOpts& r, std::uint64_t seed) {
  ExperimentConfig cfg = r.cfg;
  cfg.seed = seed;
  cfg.timing = !r.no_timing;
  cfg.regime = r.regime[0];
  cfg.structure = *parse_structure(r.structure);
  cfg.rule = r.rule == "one" ? SpannerRule::OnePerCluster : SpannerRule::AllQualifying;
  if (r.m_hat > 0) cfg.m_hat = r.m_hat;
  return cfg;
}

void add_structure_flags(CLI::App* sub, RunOpts& r) {
  sub->add_option("--structure", r.structure, "ldd, lst or spanner")
      ->check(CLI::IsMember({"ldd", "lst", "spanner"}))
      ->capture_default_str();
  sub->add_option("--beta", r.cfg.beta, "ldd decomposition parameter in (0,1)")->capture_default_str();
  sub->add_option("--d", r.cfg.d, "shift cap exponent (cap = d ln n / beta)")->capture_default_str();
  sub->add_option("--regime", r.regime, "lst parameter regime a or b")
      ->check(CLI::IsMember({"a", "b"}))
      ->capture_default_str();
  sub->add_option("--t", r.cfg.t, "lst regime b level count parameter")->capture_default_str();
  sub->add_option("--m-hat", r.m_hat, "lst regime a edge bound (default: stream peak)");
  sub->add_option("--k", r.cfg.k, "spanner stretch parameter, bound 2k-1")->capture_default_str();
  sub->add_option("--c", r.cfg.c, "spanner shift constant, >= 3")->capture_default_str();
  sub->add_option("--rule", r.rule, "spanner edge rule: all or one (per cluster)")
      ->check(CLI::IsMember({"all", "one"}))
      ->capture_default_str();
  sub->add_option("--stream", r.stream, "stream file, - for stdin")->capture_default_str();
}

int report_violation(const ExperimentConfig& cfg, const Violation& v, const std::string& out) {
  const std::string bundle = repro_bundle(cfg, v).dump(2) + "\n";
  std::cerr << "violation at update " << v.update_index << ": " << v.what << "\n";
  if (out != "-") {
    write_output(out + ".repro.json", bundle);
    std::cerr << "reproduction bundle: " << out << ".repro.json\n";
  } else {
    std::cerr << bundle;
  }
  return kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dynamic low-diameter decompositions, low-stretch forests and spanners"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "global seed")->envname("DYNLSF_SEED")->capture_default_str();

  GenOpts gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate an update stream");
  gen_cmd->add_option("--model", gen.model, "er_full_delete, sliding_window or insert_only")
      ->check(CLI::IsMember({"er_full_delete", "sliding_window", "insert_only"}))
      ->capture_default_str();
  gen_cmd->add_option("--n", gen.params.n, "node count")->capture_default_str();
  gen_cmd->add_option("--p", gen.params.p, "edge probability (er_full_delete)")->capture_default_str();
  gen_cmd->add_option("--window", gen.params.window, "live edges (sliding_window)")->capture_default_str();
  gen_cmd->add_option("--updates", gen.params.updates, "stream length")->capture_default_str();
  std::string gen_out = "-";
  gen_cmd->add_option("--out", gen_out, "output file, - for stdout")->capture_default_str();

  RunOpts run;
  auto* run_cmd = app.add_subcommand("run", "replay a stream and write per-update metrics");
  add_structure_flags(run_cmd, run);
  run_cmd->add_option("--verify-every", run.cfg.verify_every, "oracle check period, 0 = never")
      ->capture_default_str();
  run_cmd->add_option("--out", run.out, "metrics file, - for stdout")->capture_default_str();
  run_cmd->add_option("--format", run.format, "csv or jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}))
      ->capture_default_str();
  run_cmd->add_flag("--no-timing", run.no_timing, "leave wall_time_ns null for byte-stable output");

  RunOpts ver;
  ver.cfg.verify_every = 1;
  auto* ver_cmd = app.add_subcommand("verify", "replay a stream with oracle checks only");
  add_structure_flags(ver_cmd, ver);
  ver_cmd->add_option("--verify-every", ver.cfg.verify_every, "oracle check period")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  std::string ver_out = "-";
  ver_cmd->add_option("--out", ver_out, "prefix for the reproduction bundle")->capture_default_str();

  RunOpts bench;
  GenOpts bench_gen;
  int bench_seeds = 3;
  bench_gen.params.n = 512;
  bench_gen.params.p = 0.03;
  auto* bench_cmd = app.add_subcommand("bench", "time whole-stream replays over generated streams");
  add_structure_flags(bench_cmd, bench);
  bench_cmd->add_option("--model", bench_gen.model, "stream model")
      ->check(CLI::IsMember({"er_full_delete", "sliding_window", "insert_only"}))
      ->capture_default_str();
  std::vector<NodeId> bench_ns;
  std::vector<double> bench_ps;
  bench_cmd->add_option("--n", bench_ns, "node counts to sweep");
  bench_cmd->add_option("--p", bench_ps, "edge probabilities to sweep");
  bench_cmd->add_option("--window", bench_gen.params.window, "live edges (sliding_window)")->capture_default_str();
  bench_cmd->add_option("--updates", bench_gen.params.updates, "stream length")->capture_default_str();
  bench_cmd->add_option("--seeds", bench_seeds, "repetitions per point")->check(CLI::PositiveNumber)->capture_default_str();
  std::string bench_out = "-";
  bench_cmd->add_option("--out", bench_out, "csv output, - for stdout")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen_cmd) {
      write_output(gen_out, serialize_stream(generate(gen, seed)));
      return kExitOk;
    }

    if (*run_cmd || *ver_cmd) {
      RunOpts& r = *run_cmd ? run : ver;
      const ExperimentConfig cfg = finish_config(r, seed);
      const StreamFile stream = parse_stream(read_input(r.stream));
      const ExperimentResult res = run_experiment(stream, cfg);
      if (*run_cmd) {
        std::ostringstream buf;
        write_metrics(buf, res.rows, r.format == "jsonl" ? MetricsFormat::Jsonl : MetricsFormat::Csv);
        write_output(r.out, buf.str());
      }
      if (res.violation) return report_violation(cfg, *res.violation, *run_cmd ? r.out : ver_out);
      if (*ver_cmd)
        std::cerr << "ok: " << res.rows.size() << " updates, checked every " << cfg.verify_every << "\n";
      return kExitOk;
    }

    if (*bench_cmd) {
      ExperimentConfig cfg = finish_config(bench, seed);
      cfg.verify_every = 0;
      if (bench_ns.empty()) bench_ns.push_back(bench_gen.params.n);
      if (bench_ps.empty()) bench_ps.push_back(bench_gen.params.p);
      std::ostringstream csv;
      csv << "structure,model,n,p,seed,updates,peak_edges,total_ns,ns_per_update\r\n";
      for (NodeId n : bench_ns)
        for (double p : bench_ps)
          for (int s = 0; s < bench_seeds; ++s) {
            GenOpts g = bench_gen;
            g.params.n = n;
            g.params.p = p;
            const std::uint64_t run_seed = derive_seed(seed, "bench", std::uint64_t(s));
            const StreamFile stream = generate(g, run_seed);
            cfg.seed = run_seed;
            const ExperimentResult res = run_experiment(stream, cfg);
            const double per = stream.events.empty() ? 0.0 : double(res.total_ns) / double(stream.events.size());
            csv << to_string(cfg.structure) << ',' << g.model << ',' << n << ',' << format_double(p) << ','
                << run_seed << ',' << stream.events.size() << ',' << peak_edge_count(stream) << ',' << res.total_ns
                << ',' << format_double(per) << "\r\n";
          }
      write_output(bench_out, csv.str());
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::IllegalDelete: return kExitIllegalDelete;
      case ErrorCode::Internal: return kExitVerify;
      default: return kExitUsage;
    }
  }
  return kExitUsage;
}

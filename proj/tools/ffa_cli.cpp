// Command-line front end: enumeration runs, metric curves, the graph
// reduction check, and a seeded benchmark generator.
//
// Exit codes: 0 success (budget exhaustion included), 1 usage or parse
// error, 2 internal invariant violation.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ffa.hpp"
#include "ffa/io.hpp"
#include "ffa/report.hpp"

namespace fs = std::filesystem;

namespace {

enum class Mode { axp, cxp, adaptive };

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::axp: return "axp";
    case Mode::cxp: return "cxp";
    case Mode::adaptive: return "switch";
  }
  return "?";
}

struct RunConfig {
  Mode mode = Mode::adaptive;
  ffa::SwitchConfig sw;
  std::optional<double> budget_secs;
  std::optional<std::size_t> budget_iters;
  double snapshot_every = 0;
  bool logical_time = false;
  std::string oracle = "auto";
};

void add_run_options(CLI::App* cmd, RunConfig& cfg, bool with_mode) {
  static const std::map<std::string, Mode> modes{{"axp", Mode::axp}, {"cxp", Mode::cxp}, {"switch", Mode::adaptive}};
  if (with_mode)
    cmd->add_option("--mode", cfg.mode, "Target: axp (MARCO-A), cxp (MARCO-C) or switch (MARCO-S)")
        ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
  cmd->add_option("--window", cfg.sw.window, "Sliding window size w")->check(CLI::PositiveNumber);
  cmd->add_option("--alpha", cfg.sw.alpha, "AXp/CXp size ratio threshold");
  cmd->add_option("--epsilon", cfg.sw.epsilon, "CXp size stabilization tolerance");
  cmd->add_flag_callback("--no-switch-once", [&cfg] { cfg.sw.switch_once = false; },
                         "Allow the phase to flip more than once");
  cmd->add_option("--budget-secs", cfg.budget_secs, "Wall-clock budget in seconds")->check(CLI::NonNegativeNumber);
  cmd->add_option("--budget-iters", cfg.budget_iters, "Iteration budget");
  cmd->add_option("--snapshot-every", cfg.snapshot_every,
                  "Snapshot interval (seconds, or iterations with --logical-time); 0 = every event")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--logical-time", cfg.logical_time, "Timestamp events with iteration numbers");
  cmd->add_option("--oracle", cfg.oracle, "auto, brute or tree")
      ->check(CLI::IsMember({"auto", "brute", "tree"}));
}

template <class Oracle>
ffa::EnumerationResult run_mode(const Oracle& oracle, Mode mode, const RunConfig& cfg) {
  ffa::EnumerationOptions opts;
  opts.budget.seconds = cfg.budget_secs;
  opts.budget.iterations = cfg.budget_iters;
  opts.logical_time = cfg.logical_time;
  switch (mode) {
    case Mode::axp: return ffa::xp_enum(oracle, ffa::XpKind::axp, opts);
    case Mode::cxp: return ffa::xp_enum(oracle, ffa::XpKind::cxp, opts);
    case Mode::adaptive: return ffa::adaptive_xp_enum(oracle, cfg.sw, opts);
  }
  throw ffa::InvariantError("unknown mode");
}

ffa::EnumerationResult run(const ffa::Classifier& model, const ffa::Instance& inst, Mode mode, const RunConfig& cfg) {
  const bool tree = cfg.oracle == "tree" || (cfg.oracle == "auto" && model.tree() != nullptr);
  if (tree) return run_mode(ffa::TreeOracle(model, inst), mode, cfg);
  return run_mode(ffa::BruteForceOracle(model, inst), mode, cfg);
}

// Cheap post-run checks on what the enumerator reports.
void check_result(const ffa::EnumerationResult& r, const RunConfig& cfg, Mode mode) {
  auto distinct = [](const ffa::Family& f) { return ffa::canonical(f).size() == f.size(); };
  if (!distinct(r.axps) || !distinct(r.cxps)) throw ffa::InvariantError("an explanation was reported twice");
  if (r.trace.count(ffa::EventKind::axp) != r.axps.size() || r.trace.count(ffa::EventKind::cxp) != r.cxps.size())
    throw ffa::InvariantError("trace disagrees with the returned families");
  if (mode == Mode::adaptive && cfg.sw.switch_once && r.switches > 1)
    throw ffa::InvariantError("more than one switch with switch-once");
  for (auto x : r.axps)
    for (auto y : r.cxps)
      if (!x.intersects(y)) throw ffa::InvariantError("AXp " + x.to_string() + " misses CXp " + y.to_string());
}

std::string read_instance_text(const std::string& arg) {
  if (fs::is_regular_file(arg)) {
    std::ifstream in(arg);
    std::string line;
    while (std::getline(in, line))
      if (line.find_first_not_of(" \t\r") != std::string::npos && line[line.find_first_not_of(" \t\r")] != '#')
        return line;
    throw ffa::ParseError("instance file " + arg + " is empty");
  }
  return arg;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ffa::ParseError("cannot write " + p.string());
  out << text;
}

void write_run_outputs(const fs::path& dir, const std::string& suffix, const ffa::EnumerationResult& r,
                       double snapshot_every) {
  fs::create_directories(dir);
  std::ostringstream trace, snaps;
  ffa::io::write_trace(trace, r.trace);
  write_file(dir / ("trace" + suffix + ".ndjson"), trace.str());
  ffa::write_snapshot_csv(snaps, ffa::snapshot_rows(r.trace, snapshot_every), r.trace.num_features);
  write_file(dir / ("snapshots" + suffix + ".csv"), snaps.str());
}

void write_ffa(const fs::path& p, const ffa::Family& axps, std::size_t m) {
  std::ostringstream out;
  ffa::io::write_ffa_csv(out, ffa::ffa_from_axps(axps, m).as_doubles());
  write_file(p, out.str());
}

int cmd_enumerate(const std::string& model_path, const std::string& instance_arg, const RunConfig& cfg,
                  const std::string& out_dir) {
  const auto model = ffa::io::load_model(model_path);
  const auto inst = ffa::io::parse_instance(read_instance_text(instance_arg), model);
  const auto res = run(model, inst, cfg.mode, cfg);
  check_result(res, cfg, cfg.mode);
  const fs::path dir(out_dir);
  write_run_outputs(dir, "", res, cfg.snapshot_every);
  if (!res.axps.empty()) write_ffa(dir / "ffa.csv", res.axps, model.num_features());
  std::cout << "mode " << mode_name(cfg.mode) << "\ncomplete " << (res.complete ? "yes" : "no") << "\naxps "
            << res.axps.size() << "\ncxps " << res.cxps.size() << "\nswitches " << res.switches << "\niterations "
            << res.iterations << "\noracle_calls " << res.oracle_calls << '\n';
  return 0;
}

int cmd_metrics(const std::vector<std::string>& trace_paths, const std::string& exact_path, double rbo_p,
                const std::string& out_dir) {
  std::ifstream ein(exact_path);
  if (!ein) throw ffa::ParseError("cannot open exact attribution " + exact_path);
  const auto exact = ffa::io::read_ffa_csv(ein);
  if (exact.empty()) throw ffa::ParseError("exact attribution file is empty");
  std::vector<ffa::EnumerationTrace> traces;
  for (const auto& p : trace_paths) {
    std::ifstream tin(p);
    if (!tin) throw ffa::ParseError("cannot open trace " + p);
    traces.push_back(ffa::io::read_trace(tin, exact.size()));
  }
  const auto curves = ffa::metric_curves(traces, exact, rbo_p);
  for (std::size_t k = 0; k < curves.size(); ++k) {
    std::ostringstream csv;
    ffa::write_curve_csv(csv, curves[k]);
    if (!out_dir.empty()) {
      fs::create_directories(out_dir);
      write_file(fs::path(out_dir) / (fs::path(trace_paths[k]).stem().string() + ".metrics.csv"), csv.str());
    } else {
      if (curves.size() > 1) std::cout << "# " << trace_paths[k] << '\n';
      std::cout << csv.str();
    }
  }
  return 0;
}

std::string fraction(const ffa::Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

int cmd_graph(const std::string& path, const std::string& vertex) {
  std::ifstream in(path);
  if (!in) throw ffa::ParseError("cannot open edge list " + path);
  const auto g = ffa::io::parse_edge_list(in);
  const auto v = g.find(vertex);
  if (!v) throw ffa::ParseError("vertex '" + vertex + "' not in graph");
  const auto cc = ffa::count_mvc(g, *v);
  const auto p = ffa::ffa_graph(g, *v);
  std::cout << "vertices " << g.size() << "\nedges " << g.num_edges() << "\ntotal " << cc.total << "\nwith "
            << cc.with_v << "\nwithout " << cc.without_v << "\nffa " << fraction(p) << '\n';
  if (g.isolated(*v)) {
    std::cout << "gadget trivial (isolated vertex, skipped)\n";
    return 0;
  }
  if (!g.connected()) {
    std::cout << "gadget skipped (graph not connected)\n";
    return 0;
  }
  const auto [gadget, v1] = ffa::gadget_double(g, *v);
  const auto gc = ffa::count_mvc(gadget, v1);
  const std::int64_t x = cc.without_v, y = cc.with_v;
  const auto q = ffa::Rational(gc.with_v, gc.total);
  const bool ok_with = gc.with_v == y * (x + y);
  const bool ok_without = gc.without_v == x;
  const auto recovered = ffa::recover_mvc_count(p, q);
  const bool ok_recover = recovered == ffa::Rational(cc.total);
  std::cout << "gadget_with " << gc.with_v << "\ngadget_without " << gc.without_v << "\nq " << fraction(q)
            << "\nrecovered " << fraction(recovered) << "\ngadget " << (ok_with && ok_without && ok_recover ? "PASS" : "FAIL")
            << '\n';
  return ok_with && ok_without && ok_recover ? 0 : 2;
}

struct BenchConfig {
  std::uint64_t seed = 1;
  std::size_t count = 20;
  std::size_t min_features = 6, max_features = 8;
  std::size_t min_domain = 2, max_domain = 3;
  std::size_t max_depth = 6;
};

int cmd_bench(const BenchConfig& bc, RunConfig cfg, const std::string& out_dir) {
  if (bc.min_features < 1 || bc.min_features > bc.max_features || bc.min_domain < 1 ||
      bc.min_domain > bc.max_domain)
    throw ffa::PreconditionError("feature/domain ranges are empty");
  const fs::path root(out_dir);
  fs::create_directories(root);
  ffa::Rng rng(bc.seed);
  ffa::RandomTreeParams params;
  params.min_features = bc.min_features;
  params.max_features = bc.max_features;
  params.min_domain = bc.min_domain;
  params.max_domain = bc.max_domain;
  params.max_depth = bc.max_depth;

  std::ostringstream summary;
  summary << "instance,m,n_axp,n_cxp,iters_axp,iters_cxp,iters_switch,calls_axp,calls_cxp,calls_switch,"
             "switches,agree\n";
  bool all_agree = true;
  std::size_t with_one_switch = 0;
  for (std::size_t k = 0; k < bc.count; ++k) {
    const auto model = ffa::random_tree_classifier(rng, params);
    const auto inst = ffa::make_instance(model, ffa::random_point(rng, model.space()));
    char name[32];
    std::snprintf(name, sizeof name, "instance_%03zu", k);
    const fs::path dir = root / name;
    fs::create_directories(dir);
    write_file(dir / "model.json", ffa::io::model_to_json(model).dump(2) + "\n");
    write_file(dir / "instance.csv", ffa::io::format_instance(inst, model) + "\n");

    const Mode modes[3] = {Mode::axp, Mode::cxp, Mode::adaptive};
    ffa::EnumerationResult results[3];
    std::thread workers[3];
    std::exception_ptr errors[3];
    for (int i = 0; i < 3; ++i)
      workers[i] = std::thread([&, i] {
        try {
          results[i] = run(model, inst, modes[i], cfg);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    for (auto& w : workers) w.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);

    bool agree = true;
    for (int i = 0; i < 3; ++i) {
      check_result(results[i], cfg, modes[i]);
      write_run_outputs(dir, std::string("_") + mode_name(modes[i]), results[i], cfg.snapshot_every);
      agree = agree && results[i].complete &&
              ffa::canonical(results[i].axps) == ffa::canonical(results[0].axps) &&
              ffa::canonical(results[i].cxps) == ffa::canonical(results[0].cxps);
    }
    all_agree = all_agree && agree;
    if (results[2].switches == 1) ++with_one_switch;
    if (!results[0].axps.empty()) {
      write_ffa(dir / "ffa.csv", results[0].axps, model.num_features());
      std::vector<ffa::EnumerationTrace> traces{results[0].trace, results[1].trace, results[2].trace};
      const auto curves = ffa::metric_curves(traces, ffa::ffa_from_axps(results[0].axps, model.num_features()).as_doubles());
      for (int i = 0; i < 3; ++i) {
        std::ostringstream csv;
        ffa::write_curve_csv(csv, curves[i]);
        write_file(dir / (std::string("metrics_") + mode_name(modes[i]) + ".csv"), csv.str());
      }
    }
    summary << name << ',' << model.num_features() << ',' << results[0].axps.size() << ','
            << results[0].cxps.size();
    for (auto& r : results) summary << ',' << r.iterations;
    for (auto& r : results) summary << ',' << r.oracle_calls;
    summary << ',' << results[2].switches << ',' << (agree ? 1 : 0) << '\n';
  }
  write_file(root / "summary.csv", summary.str());
  std::cout << "instances " << bc.count << "\nagree " << (all_agree ? "yes" : "no") << "\nwith_one_switch "
            << with_one_switch << '\n';
  return all_agree ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Formal feature attribution by explanation enumeration"};
  app.require_subcommand(1);

  RunConfig enum_cfg;
  std::string model_path, instance_arg, out_dir = ".";
  auto* en = app.add_subcommand("enumerate", "Enumerate AXps/CXps for one instance");
  en->add_option("model", model_path, "Model JSON file")->required()->check(CLI::ExistingFile);
  en->add_option("instance", instance_arg, "Instance file or inline 'v1,...,vm[,label]'")->required();
  en->add_option("--out", out_dir, "Output directory");
  add_run_options(en, enum_cfg, true);

  std::vector<std::string> trace_paths;
  std::string exact_path, metrics_out;
  double rbo_p = ffa::kDefaultRboPersistence;
  auto* me = app.add_subcommand("metrics", "Metric curves of traces against an exact attribution");
  me->add_option("traces", trace_paths, "Trace NDJSON files")->required()->check(CLI::ExistingFile);
  me->add_option("--exact", exact_path, "Exact attribution CSV")->required()->check(CLI::ExistingFile);
  me->add_option("--rbo-p", rbo_p, "RBO persistence in (0,1)");
  me->add_option("--out", metrics_out, "Output directory (default: stdout)");

  std::string edge_path, vertex;
  auto* gr = app.add_subcommand("graph", "Minimal vertex cover counts and the reduction check");
  gr->add_option("edges", edge_path, "Edge-list file")->required()->check(CLI::ExistingFile);
  gr->add_option("vertex", vertex, "Vertex label")->required();

  BenchConfig bench_cfg;
  RunConfig bench_run;
  bench_run.sw.window = 3;
  std::string bench_out = "bench";
  auto* be = app.add_subcommand("bench", "Seeded random decision trees, all three modes");
  be->add_option("--seed", bench_cfg.seed, "RNG seed");
  be->add_option("--count", bench_cfg.count, "Number of instances");
  be->add_option("--min-features", bench_cfg.min_features);
  be->add_option("--max-features", bench_cfg.max_features);
  be->add_option("--min-domain", bench_cfg.min_domain);
  be->add_option("--max-domain", bench_cfg.max_domain);
  be->add_option("--max-depth", bench_cfg.max_depth);
  be->add_option("--out", bench_out, "Output directory");
  add_run_options(be, bench_run, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*en) return cmd_enumerate(model_path, instance_arg, enum_cfg, out_dir);
    if (*me) return cmd_metrics(trace_paths, exact_path, rbo_p, metrics_out);
    if (*gr) return cmd_graph(edge_path, vertex);
    if (*be) return cmd_bench(bench_cfg, bench_run, bench_out);
  } catch (const ffa::InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return 2;
  } catch (const ffa::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

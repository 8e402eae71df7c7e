#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nucleus/gen.hpp"
#include "nucleus/io.hpp"
#include "nucleus/nucleus.hpp"
#include "nucleus/pipeline.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace nucleus {
namespace cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitOom = 3;
inline constexpr int kExitTimeout = 4;

inline void apply_threads(int threads) {
  if (threads == 0) {
    if (const char* env = std::getenv("NUCLEUS_THREADS")) {
      int t = std::atoi(env);
      if (t > 0) threads = t;
    }
  }
#if defined(_OPENMP)
  if (threads > 0)
    omp_set_num_threads(threads);
  else
    omp_set_num_threads(omp_get_num_procs());
#else
  (void)threads;
#endif
}

inline std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

struct DecomposeArgs {
  std::string input;
  int r = 2, s = 3;
  std::string algo = "el";
  bool approx = false;
  double delta = 0.1;
  int threads = 0;
  std::int64_t cut_level = -1;
  bool density = false;
  std::string out_coreness, out_tree, out_nuclei;
  double timeout_secs = 0;
  bool keep_single_child = false;
};

inline int cmd_decompose(const DecomposeArgs& a, std::ostream& log) {
  apply_threads(a.threads);
  Timer total;
  Timer t;
  Graph g = load_graph_any(a.input);
  double t_load = t.lap();

  PipelineConfig cfg;
  cfg.r = a.r;
  cfg.s = a.s;
  cfg.algo = algo_from_name(a.algo);
  cfg.approx = a.approx;
  cfg.delta = a.delta;
  cfg.collapse = !a.keep_single_child;
  cfg.timeout_secs = a.timeout_secs;
  PipelineResult res = run_pipeline(g, cfg);

  if (!a.out_coreness.empty()) {
    std::ofstream out(a.out_coreness);
    if (!out) throw std::runtime_error("cannot write " + a.out_coreness);
    if (res.is_approx)
      write_coreness_csv(out, res.idx, a.s, res.approx, a.delta);
    else
      write_coreness_csv(out, res.idx, a.s, res.exact);
  }
  if (!a.out_tree.empty()) {
    std::ofstream out(a.out_tree);
    if (!out) throw std::runtime_error("cannot write " + a.out_tree);
    export_tree(res.tree, res.idx, a.r, a.s,
                static_cast<std::int64_t>(res.k_max_value), out);
  }
  if (a.cut_level >= 0) {
    auto nuclei = cut(res.tree, res.idx, static_cast<double>(a.cut_level));
    if (a.cut_level > res.k_max_value)
      log << "warning: cut level " << a.cut_level << " exceeds k_max "
          << res.k_max_value << "\n";
    if (a.density) annotate_density(g, nuclei);
    std::ostream* sink = &std::cout;
    std::ofstream file;
    if (!a.out_nuclei.empty()) {
      file.open(a.out_nuclei);
      if (!file) throw std::runtime_error("cannot write " + a.out_nuclei);
      sink = &file;
    }
    write_nuclei_csv(*sink, nuclei, a.density);
  }

  log << "stats algo=" << a.algo << (a.approx ? " approx=1" : "")
      << " r=" << a.r << " s=" << a.s << " n=" << g.n << " m=" << g.m
      << " n_r=" << res.idx.size() << " n_s=" << res.n_s
      << " k_max=" << detail::format_level(res.k_max_value)
      << " rounds=" << res.rounds << " unites=" << res.counters.unites
      << " links=" << res.counters.links << " load=" << t_load
      << " orient=" << res.t_orient << " count=" << (res.t_index + res.t_count)
      << " peel=" << res.t_peel << " tree=" << res.t_tree
      << " total=" << total.elapsed()
      << " peak_mb=" << static_cast<double>(res.peak_bytes) / (1024.0 * 1024.0)
      << "\n";
  return kExitOk;
}

struct QueryArgs {
  std::string tree_path;
  std::string input;  // graph, needed for --density
  std::int64_t cut_level = 1;
  bool density = false;
  std::string out;
};

inline int cmd_query(const QueryArgs& a, std::ostream& log) {
  std::ifstream in(a.tree_path);
  if (!in) throw std::runtime_error("cannot open " + a.tree_path);
  ImportedTree imp = import_tree(in);
  if (a.cut_level > imp.k_max)
    log << "warning: cut level " << a.cut_level << " exceeds k_max "
        << imp.k_max << "\n";

  // leaves carry their vertex tuples, which is all the cut needs
  auto nuclei =
      cut(imp.tree, static_cast<double>(a.cut_level), [&](cid m) {
        return std::span<const vid>(imp.leaf_verts.data() + m * imp.r, imp.r);
      });
  if (a.density) {
    if (a.input.empty())
      throw config_error("--density requires --input <graph>");
    Graph g = load_graph_any(a.input);
    annotate_density(g, nuclei);
  }
  std::ostream* sink = &std::cout;
  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw std::runtime_error("cannot write " + a.out);
    sink = &file;
  }
  write_nuclei_csv(*sink, nuclei, a.density);
  return kExitOk;
}

struct BenchArgs {
  std::string input;
  std::string cells;  // "r,s,algo,threads;..."
  double timeout_secs = 0;
  std::string out;
};

struct BenchCell {
  int r, s, threads;
  std::string algo;
};

inline std::vector<BenchCell> parse_cells(const std::string& spec) {
  std::vector<BenchCell> cells;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    BenchCell c;
    char algo[16];
    if (std::sscanf(item.c_str(), "%d,%d,%15[^,],%d", &c.r, &c.s, algo,
                    &c.threads) != 4)
      throw config_error("bad bench cell '" + item +
                         "' (expected r,s,algo,threads)");
    c.algo = algo;
    cells.push_back(c);
  }
  if (cells.empty()) throw config_error("no bench cells given");
  return cells;
}

inline int cmd_bench(const BenchArgs& a, std::ostream& log) {
  auto cells = parse_cells(a.cells);
  Graph g = load_graph_any(a.input);

  std::ostream* sink = &std::cout;
  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw std::runtime_error("cannot write " + a.out);
    sink = &file;
  }
  *sink << "r,s,algo,threads,status,orient,count,peel,tree,total,k_max,"
           "rounds,unites,links,peak_mb,coreness_hash,speedup_vs_1t\n";

  struct Done {
    BenchCell cell;
    double total;
    bool ok;
  };
  std::vector<Done> done;
  for (const auto& cell : cells) {
    apply_threads(cell.threads);
    PipelineConfig cfg;
    cfg.r = cell.r;
    cfg.s = cell.s;
    cfg.algo = algo_from_name(cell.algo);
    cfg.timeout_secs = a.timeout_secs;
    std::string status = "ok";
    double total = 0;
    Timer t;
    PipelineResult res;
    try {
      res = run_pipeline(g, cfg);
      total = t.elapsed();
    } catch (const timeout_error&) {
      status = "timeout";
      total = t.elapsed();
    } catch (const std::bad_alloc&) {
      status = "oom";
      total = t.elapsed();
    }
    *sink << cell.r << ',' << cell.s << ',' << cell.algo << ','
          << cell.threads << ',' << status << ',';
    if (status == "ok") {
      std::ostringstream cs;
      write_coreness_csv(cs, res.idx, cell.s, res.exact);
      double speedup = 0;
      for (const auto& d : done)
        if (d.ok && d.cell.r == cell.r && d.cell.s == cell.s &&
            d.cell.algo == cell.algo && d.cell.threads == 1)
          speedup = d.total / total;
      *sink << res.t_orient << ',' << (res.t_index + res.t_count) << ','
            << res.t_peel << ',' << res.t_tree << ',' << total << ','
            << detail::format_level(res.k_max_value) << ',' << res.rounds
            << ',' << res.counters.unites << ',' << res.counters.links << ','
            << static_cast<double>(res.peak_bytes) / (1024.0 * 1024.0) << ','
            << std::hex << fnv1a(cs.str()) << std::dec << ',';
      if (speedup > 0)
        *sink << speedup;
      else
        *sink << '-';
      *sink << '\n';
      done.push_back({cell, total, true});
    } else {
      *sink << "-,-,-,-," << total << ",-,-,-,-,-,-,-\n";
      done.push_back({cell, total, false});
      log << "bench cell " << cell.r << "," << cell.s << "," << cell.algo
          << "," << cell.threads << " " << status << "\n";
    }
  }
  return kExitOk;
}

struct GenArgs {
  std::string kind = "gnp";
  vid n = 100;
  double p = 0.1;
  int m = 5;
  std::int64_t cliques = 1000;
  int k_min = 3, k_max = 6;
  vid spread = 30;
  std::uint64_t seed = 1;
  std::string out;
  bool binary = false;
};

inline int cmd_gen(const GenArgs& a, std::ostream&) {
  Graph g;
  if (a.kind == "gnp")
    g = gen::gnp(a.n, a.p, a.seed);
  else if (a.kind == "ba")
    g = gen::barabasi_albert(a.n, a.m, a.seed);
  else if (a.kind == "cliques")
    g = gen::clique_union(a.n, a.cliques, a.k_min, a.k_max, a.seed, a.spread);
  else
    throw config_error("unknown generator kind '" + a.kind + "'");
  std::ofstream out(a.out, a.binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot write " + a.out);
  if (a.binary) {
    save_graph_bin(g, out);
  } else {
    out << "# generated " << a.kind << " n=" << g.n << " m=" << g.m
        << " seed=" << a.seed << "\n";
    for (vid u = 0; u < g.n; ++u)
      for (vid v : g.neighbors(u))
        if (u < v) out << u << '\t' << v << '\n';
  }
  return kExitOk;
}

inline int run(int argc, const char* const* argv, std::ostream& log) {
  CLI::App app{"(r,s) nucleus decomposition: exact and approximate coreness "
               "with hierarchy construction and queries"};
  app.require_subcommand(1);

  DecomposeArgs da;
  auto* dec = app.add_subcommand("decompose",
                                 "compute coreness and the nucleus hierarchy");
  dec->add_option("--input", da.input, "graph file (edge list or cache)")
      ->required();
  dec->add_option("--r", da.r, "r-clique size")->required();
  dec->add_option("--s", da.s, "s-clique size")->required();
  dec->add_option("--algo", da.algo, "hierarchy strategy: te, el or bl");
  dec->add_flag("--approx", da.approx, "approximate coreness");
  dec->add_option("--delta", da.delta, "approximation parameter");
  dec->add_option("--threads", da.threads,
                  "worker threads (0 = NUCLEUS_THREADS or all)");
  dec->add_option("--cut", da.cut_level, "also report nuclei at this level");
  dec->add_flag("--density", da.density, "compute per-nucleus edge density");
  dec->add_option("--out-coreness", da.out_coreness, "coreness CSV path");
  dec->add_option("--out-tree", da.out_tree, "hierarchy tree export path");
  dec->add_option("--out-nuclei", da.out_nuclei, "nuclei report path");
  dec->add_option("--timeout-secs", da.timeout_secs, "abort after this long");
  dec->add_flag("--keep-single-child", da.keep_single_child,
                "preserve single-child parents in the tree");

  QueryArgs qa;
  auto* qry = app.add_subcommand("query", "extract nuclei from a stored tree");
  qry->add_option("--tree", qa.tree_path, "tree export path")->required();
  qry->add_option("--input", qa.input, "graph file (for --density)");
  qry->add_option("--cut", qa.cut_level, "cut level c")->required();
  qry->add_flag("--density", qa.density, "compute per-nucleus edge density");
  qry->add_option("--out", qa.out, "nuclei report path (default stdout)");

  BenchArgs ba;
  auto* ben = app.add_subcommand("bench", "run a matrix of configurations");
  ben->add_option("--input", ba.input, "graph file")->required();
  ben->add_option("--cells", ba.cells, "semicolon list of r,s,algo,threads")
      ->required();
  ben->add_option("--timeout-secs", ba.timeout_secs, "per-cell timeout");
  ben->add_option("--out", ba.out, "CSV path (default stdout)");

  GenArgs ga;
  auto* gn = app.add_subcommand("gen", "generate a seeded test graph");
  gn->add_option("--kind", ga.kind, "gnp, ba or cliques");
  gn->add_option("--n", ga.n, "vertex count");
  gn->add_option("--p", ga.p, "edge probability (gnp)");
  gn->add_option("--m", ga.m, "edges per vertex (ba)");
  gn->add_option("--cliques", ga.cliques, "clique count (cliques)");
  gn->add_option("--kmin", ga.k_min, "min clique size (cliques)");
  gn->add_option("--kmax", ga.k_max, "max clique size (cliques)");
  gn->add_option("--spread", ga.spread, "overlap locality (cliques)");
  gn->add_option("--seed", ga.seed, "RNG seed");
  gn->add_option("--out", ga.out, "output path")->required();
  gn->add_flag("--binary", ga.binary, "write the binary cache format");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (dec->parsed()) return cmd_decompose(da, log);
    if (qry->parsed()) return cmd_query(qa, log);
    if (ben->parsed()) return cmd_bench(ba, log);
    if (gn->parsed()) return cmd_gen(ga, log);
  } catch (const config_error& e) {
    log << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const timeout_error& e) {
    log << "error: " << e.what() << "\n";
    return kExitTimeout;
  } catch (const std::bad_alloc&) {
    log << "error: out of memory\n";
    return kExitOom;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace cli
}  // namespace nucleus

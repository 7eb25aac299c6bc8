// lsec command-line front end: generate data, run the clustering pipeline,
// evaluate label files, and run benchmark sweeps.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lsec/consensus.hpp"
#include "lsec/data_io.hpp"
#include "lsec/kmeans.hpp"
#include "lsec/metrics.hpp"

namespace {

using nlohmann::json;

void set_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

int hardware_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

struct GenArgs {
  std::string shape;
  std::size_t n = 0;
  double noise = 0.05;
  std::uint64_t seed = 1;
  std::string out;
  std::string labels;
  std::string format = "csv";
};

int cmd_gen(const GenArgs& a) {
  auto shape = lsec::parse_shape(a.shape);
  auto fmt = lsec::parse_format(a.format);
  if (!shape || !fmt) return 2;
  try {
    lsec::SyntheticData data = lsec::gen_synthetic(*shape, a.n, a.noise, a.seed);
    lsec::save_matrix(data.data, a.out, *fmt);
    if (!a.labels.empty()) lsec::save_labels(data.truth, a.labels);
    std::printf("gen shape=%s n=%zu d=2 classes=%d noise=%g seed=%llu -> %s\n",
                a.shape.c_str(), a.n, lsec::shape_class_count(*shape), a.noise,
                static_cast<unsigned long long>(a.seed), a.out.c_str());
    return 0;
  } catch (const lsec::ParamError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

struct RunArgs {
  std::string in;
  std::string format = "csv";
  int clusters = 0;
  int m = 20;
  int q = 4;
  std::vector<int> k_list = {2, 3, 4, 5};
  int p = 1000;
  int alpha = 50;
  int c_min = 20;
  int c_max = 60;
  std::uint64_t seed = 0;
  std::string out;
  std::string report;
  std::string dump_ensemble;
  int threads = 0;
};

void dump_ensemble_files(const lsec::Ensemble& ens, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream manifest(dir + "/manifest.txt");
  if (!manifest) throw lsec::IOError("cannot write manifest in " + dir);
  manifest << "m " << ens.params.m << "\n";
  manifest << "q " << ens.params.q << "\n";
  manifest << "p " << ens.params.p << "\n";
  manifest << "alpha " << ens.params.alpha << "\n";
  manifest << "c_min " << ens.params.c_min << "\n";
  manifest << "c_max " << ens.params.c_max << "\n";
  manifest << "seed " << ens.params.seed << "\n";
  manifest << "K ";
  for (std::size_t t = 0; t < ens.params.k_list.size(); ++t)
    manifest << (t ? "," : "") << ens.params.k_list[t];
  manifest << "\n";
  manifest << "clamped_draws " << ens.clamped_draws << "\n";
  for (std::size_t b = 0; b < ens.base.size(); ++b) {
    char name[32];
    std::snprintf(name, sizeof(name), "base_%03zu.labels", b);
    lsec::save_labels(ens.base[b].labels, dir + "/" + name);
    manifest << "base " << b << " set " << ens.base[b].set_index << " kidx "
             << ens.base[b].k_index << " c_drawn " << ens.base[b].c_drawn << " c "
             << ens.base[b].labels.c << " seed " << ens.base[b].seed << " file "
             << name << "\n";
  }
}

int cmd_run(const RunArgs& a) {
  auto fmt = lsec::parse_format(a.format);
  if (!fmt) return 2;
  lsec::EnsembleParams params;
  params.m = a.m;
  params.q = a.q;
  params.k_list = a.k_list;
  params.p = a.p;
  params.alpha = a.alpha;
  params.c_min = a.c_min;
  params.c_max = a.c_max;
  set_threads(a.threads);

  lsec::DataMatrix X;
  try {
    X = lsec::load_matrix(a.in, *fmt);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  try {
    params.validate(X.n);
    if (a.clusters < 2) throw lsec::ParamError("--clusters must be >= 2");
  } catch (const lsec::ParamError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  try {
    lsec::ConsensusResult res = lsec::run_lsec(X, params, a.clusters, a.seed);
    lsec::save_labels(res.labels, a.out);
    if (!a.dump_ensemble.empty()) dump_ensemble_files(res.ensemble, a.dump_ensemble);

    json rep;
    rep["input"] = a.in;
    rep["n"] = X.n;
    rep["d"] = X.d;
    rep["c_tilde"] = a.clusters;
    rep["seed"] = a.seed;
    rep["threads"] = (a.threads > 0) ? a.threads : hardware_threads();
    rep["params"] = {
        {"m", params.m},       {"q", params.q},         {"K", params.k_list},
        {"p", params.p},       {"alpha", params.alpha}, {"c_min", params.c_min},
        {"c_max", params.c_max}};
    rep["timing_s"] = {{"generation", res.timing.generation_s},
                       {"consensus", res.timing.consensus_s},
                       {"total", res.timing.total_s}};
    rep["consensus_eigenvalues"] = res.embedding.eigenvalues;
    rep["clamped_draws"] = res.ensemble.clamped_draws;
    json bases = json::array();
    for (const auto& b : res.ensemble.base)
      bases.push_back({{"set", b.set_index},
                       {"kidx", b.k_index},
                       {"c_drawn", b.c_drawn},
                       {"c", b.labels.c},
                       {"seed", b.seed}});
    rep["base_clusterings"] = bases;

    std::string report_path = a.report.empty() ? a.out + ".report.json" : a.report;
    std::ofstream rout(report_path);
    if (!rout) throw lsec::IOError("cannot write " + report_path);
    rout << rep.dump(2) << "\n";

    std::printf("run n=%zu m=%d q=%d p=%d c=%d seed=%llu gen=%.3fs consensus=%.3fs -> %s\n",
                X.n, params.m, params.q, params.p, a.clusters,
                static_cast<unsigned long long>(a.seed), res.timing.generation_s,
                res.timing.consensus_s, a.out.c_str());
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

struct EvalArgs {
  std::string pred;
  std::string truth;
  std::string csv;
};

int cmd_eval(const EvalArgs& a) {
  try {
    lsec::LabelVector pred = lsec::load_labels(a.pred);
    lsec::LabelVector truth = lsec::load_labels(a.truth);
    double acc_v = lsec::acc(pred, truth);
    double nmi_v = lsec::nmi(pred, truth);
    std::printf("ACC=%.4f NMI=%.4f\n", acc_v, nmi_v);
    if (!a.csv.empty()) {
      std::ofstream out(a.csv, std::ios::app);
      if (!out) throw lsec::IOError("cannot append to " + a.csv);
      out << a.pred << ',' << a.truth << ',' << acc_v << ',' << nmi_v << '\n';
    }
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

// ---- bench ----------------------------------------------------------------
// Spec file: one run group per line, '#' comments. Tokens are key=value:
//   data=gen:<shape>:<n>:<noise>:<seed> | data=<path> truth=<path>
//   method=lsec|kmeans clusters=<c> seeds=<s1,s2,...>
//   [format=csv|bin] [m=] [q=] [p=] [alpha=] [K=2,3,4,5] [cmin=] [cmax=]

struct BenchLine {
  std::string data;
  std::string truth;
  std::string format = "csv";
  std::string method;
  int clusters = 0;
  std::vector<std::uint64_t> seeds;
  lsec::EnsembleParams params;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

BenchLine parse_bench_line(const std::string& line, std::size_t lineno) {
  BenchLine b;
  std::istringstream in(line);
  std::string tok;
  auto bad = [&](const std::string& msg) {
    throw lsec::FormatError("bench spec line " + std::to_string(lineno) + ": " + msg);
  };
  while (in >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) bad("token '" + tok + "' is not key=value");
    std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    try {
      if (key == "data") b.data = val;
      else if (key == "truth") b.truth = val;
      else if (key == "format") b.format = val;
      else if (key == "method") b.method = val;
      else if (key == "clusters") b.clusters = std::stoi(val);
      else if (key == "seeds")
        for (const auto& s : split(val, ',')) b.seeds.push_back(std::stoull(s));
      else if (key == "m") b.params.m = std::stoi(val);
      else if (key == "q") b.params.q = std::stoi(val);
      else if (key == "p") b.params.p = std::stoi(val);
      else if (key == "alpha") b.params.alpha = std::stoi(val);
      else if (key == "cmin") b.params.c_min = std::stoi(val);
      else if (key == "cmax") b.params.c_max = std::stoi(val);
      else if (key == "K") {
        b.params.k_list.clear();
        for (const auto& s : split(val, ',')) b.params.k_list.push_back(std::stoi(s));
      } else bad("unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
      bad("cannot parse value '" + val + "'");
    }
  }
  if (b.data.empty()) bad("missing data=");
  if (b.method != "lsec" && b.method != "kmeans") bad("method must be lsec or kmeans");
  if (b.clusters < 2) bad("clusters must be >= 2");
  if (b.seeds.empty()) bad("missing seeds=");
  return b;
}

struct BenchInput {
  lsec::DataMatrix X;
  lsec::LabelVector truth;
  std::string label;
};

BenchInput load_bench_input(const BenchLine& b) {
  BenchInput in;
  if (b.data.rfind("gen:", 0) == 0) {
    auto parts = split(b.data, ':');
    if (parts.size() != 5)
      throw lsec::FormatError("data=gen needs gen:<shape>:<n>:<noise>:<seed>");
    auto shape = lsec::parse_shape(parts[1]);
    if (!shape) throw lsec::FormatError("unknown shape " + parts[1]);
    auto gen = lsec::gen_synthetic(*shape, std::stoull(parts[2]), std::stod(parts[3]),
                                   std::stoull(parts[4]));
    in.X = std::move(gen.data);
    in.truth = std::move(gen.truth);
    in.label = parts[1] + "-" + parts[2];
  } else {
    auto fmt = lsec::parse_format(b.format);
    if (!fmt) throw lsec::FormatError("unknown format " + b.format);
    in.X = lsec::load_matrix(b.data, *fmt);
    if (b.truth.empty()) throw lsec::FormatError("file data needs truth=");
    in.truth = lsec::load_labels(b.truth);
    in.label = b.data;
  }
  if (in.truth.size() != in.X.n)
    throw lsec::LengthMismatch("truth length does not match data");
  return in;
}

int cmd_bench(const std::string& spec_path, const std::string& out_path, int threads) {
  set_threads(threads);
  std::ifstream spec(spec_path);
  if (!spec) {
    std::fprintf(stderr, "error: cannot open %s\n", spec_path.c_str());
    return 1;
  }
  std::vector<BenchLine> lines;
  std::string raw;
  std::size_t lineno = 0;
  try {
    while (std::getline(spec, raw)) {
      ++lineno;
      std::string trimmed = raw;
      auto hash = trimmed.find('#');
      if (hash != std::string::npos) trimmed.resize(hash);
      if (trimmed.find_first_not_of(" \t\r") == std::string::npos) continue;
      lines.push_back(parse_bench_line(trimmed, lineno));
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  if (lines.empty()) {
    std::fprintf(stderr, "error: bench spec has no runs\n");
    return 2;
  }

  std::ofstream out(out_path);
  if (!out) {
    std::fprintf(stderr, "error: cannot write %s\n", out_path.c_str());
    return 1;
  }
  out << "dataset,n,method,seed,acc,nmi,time_s\n";
  out.flush();

  for (const auto& line : lines) {
    BenchInput input;
    try {
      input = load_bench_input(line);
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 1;
    }
    for (std::uint64_t seed : line.seeds) {
      try {
        auto t0 = std::chrono::steady_clock::now();
        lsec::LabelVector labels;
        if (line.method == "lsec") {
          labels = lsec::run_lsec(input.X, line.params, line.clusters, seed).labels;
        } else {
          labels = lsec::kmeans(input.X, line.clusters, seed).labels;
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                          .count();
        double acc_v = lsec::acc(labels, input.truth);
        double nmi_v = lsec::nmi(labels, input.truth);
        char row[256];
        std::snprintf(row, sizeof(row), "%s,%zu,%s,%llu,%.6f,%.6f,%.3f\n",
                      input.label.c_str(), input.X.n, line.method.c_str(),
                      static_cast<unsigned long long>(seed), acc_v, nmi_v, secs);
        out << row;
        out.flush();
        std::fputs(row, stdout);
      } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s (dataset %s seed %llu)\n", e.what(),
                     input.label.c_str(), static_cast<unsigned long long>(seed));
        return 1;
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Large-scale spectral ensemble clustering"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* sub_gen = app.add_subcommand("gen", "Generate a synthetic 2-D dataset");
  sub_gen->add_option("--shape", gen.shape, "Shape family")
      ->required()
      ->check(CLI::IsMember({"tb", "sf", "cc", "cg", "fl"}));
  sub_gen->add_option("--n", gen.n, "Number of points")->required();
  sub_gen->add_option("--noise", gen.noise, "Jitter scale (default 0.05)");
  sub_gen->add_option("--seed", gen.seed, "Generator seed (default 1)");
  sub_gen->add_option("--out", gen.out, "Output matrix path")->required();
  sub_gen->add_option("--labels", gen.labels, "Optional truth-label path");
  sub_gen->add_option("--format", gen.format, "csv or bin")
      ->check(CLI::IsMember({"csv", "bin"}));

  RunArgs run;
  auto* sub_run = app.add_subcommand("run", "Cluster a dataset");
  sub_run->add_option("--in", run.in, "Input matrix")->required();
  sub_run->add_option("--format", run.format, "csv or bin")
      ->check(CLI::IsMember({"csv", "bin"}));
  sub_run->add_option("--clusters", run.clusters, "Consensus cluster count")->required();
  sub_run->add_option("--m", run.m, "Ensemble size (default 20)");
  sub_run->add_option("--q", run.q, "K values per landmark set (default 4)");
  sub_run->add_option("--K", run.k_list, "Ascending K pool (default 2,3,4,5)")
      ->delimiter(',');
  sub_run->add_option("--p", run.p, "Landmarks per set (default 1000)");
  sub_run->add_option("--alpha", run.alpha, "Selection budget bound (default 50)");
  sub_run->add_option("--cmin", run.c_min, "Base cluster-count lower bound (default 20)");
  sub_run->add_option("--cmax", run.c_max, "Base cluster-count upper bound (default 60)");
  sub_run->add_option("--seed", run.seed, "Run seed")->required();
  sub_run->add_option("--out", run.out, "Consensus labels output")->required();
  sub_run->add_option("--report", run.report, "Run report path (default <out>.report.json)");
  sub_run->add_option("--dump-ensemble", run.dump_ensemble,
                      "Directory for per-base label files + manifest");
  sub_run->add_option("--threads", run.threads, "Worker threads (default: all)");

  EvalArgs eval;
  auto* sub_eval = app.add_subcommand("eval", "Score predicted labels against truth");
  sub_eval->add_option("--pred", eval.pred, "Predicted labels")->required();
  sub_eval->add_option("--truth", eval.truth, "Ground-truth labels")->required();
  sub_eval->add_option("--csv", eval.csv, "Append pred,truth,acc,nmi to this CSV");

  std::string bench_spec, bench_out;
  int bench_threads = 0;
  auto* sub_bench = app.add_subcommand("bench", "Run a benchmark spec file");
  sub_bench->add_option("--spec", bench_spec, "Benchmark spec file")->required();
  sub_bench->add_option("--out", bench_out, "Output CSV")->required();
  sub_bench->add_option("--threads", bench_threads, "Worker threads (default: all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (sub_gen->parsed()) return cmd_gen(gen);
  if (sub_run->parsed()) return cmd_run(run);
  if (sub_eval->parsed()) return cmd_eval(eval);
  if (sub_bench->parsed()) return cmd_bench(bench_spec, bench_out, bench_threads);
  return 2;
}

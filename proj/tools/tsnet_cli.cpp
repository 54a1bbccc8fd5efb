// tsnet: time series to network pipelines from the command line.
//
// Exit codes: 0 success, 2 usage or invalid argument, 3 data error,
// 4 distance kernel failure, 5 incomplete merge.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tsnet/csv_io.hpp"
#include "tsnet/dist_matrix.hpp"
#include "tsnet/error.hpp"
#include "tsnet/graph.hpp"
#include "tsnet/kernel.hpp"
#include "tsnet/network.hpp"
#include "tsnet/series.hpp"
#include "tsnet/single_series.hpp"

namespace fs = std::filesystem;
using namespace tsnet;

namespace {

enum Exit { ok = 0, usage = 2, data = 3, kernel_failed = 4, merge_incomplete = 5 };

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument:
    case ErrorKind::asymmetric_kernel: return usage;
    case ErrorKind::io:
    case ErrorKind::degenerate_input:
    case ErrorKind::merge_conflict: return data;
    case ErrorKind::kernel: return kernel_failed;
    case ErrorKind::incomplete_merge: return merge_incomplete;
  }
  return data;
}

// Writes through a buffer so a failed command leaves no partial file.
void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot write '" + path.string() + "'");
  out << content;
  if (!out) fail(ErrorKind::io, "write to '" + path.string() + "' failed");
}

void write_or_print(const std::optional<fs::path>& path, const std::string& content) {
  if (path) {
    write_file(*path, content);
  } else {
    std::cout << content;
  }
}

// ---------------------------------------------------------------------------
// Kernel flags

struct KernelFlags {
  std::string metric;
  std::string mode = "abs";
  std::string sig;
  double alpha = 0.05;
  int surrogates = 100;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  int tau_max = 0;
  std::string bins = "sturges";
  std::string norm = "sqrt";
  double events_percentile = 0.0;
  CLI::Option* events_percentile_opt = nullptr;
  std::string events_direction = "highest";
  double es_tau = 1.0;
  bool es_local = false;
  double es_tau_max = 0.0;
  CLI::Option* es_tau_max_opt = nullptr;
  std::string es_mode = "symmetric";
  std::string vr_kernel = "laplacian";
  double vr_tau = 1.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--metric", metric, "cor, ccf, nmi, voi, dtw, es or vr")->required();
    cmd->add_option("--mode", mode, "Correlation mode: abs, pos, neg");
    cmd->add_option("--sig", sig, "Significance test: fisher (cor) or surrogate (es, vr)");
    cmd->add_option("--alpha", alpha, "Significance level");
    cmd->add_option("--surrogates", surrogates, "Surrogate count");
    seed_opt = cmd->add_option("--seed", seed, "Surrogate seed (required with --sig surrogate)");
    cmd->add_option("--tau-max", tau_max, "Largest lag for ccf");
    cmd->add_option("--bins", bins, "sturges, scott, fd or a bin count");
    cmd->add_option("--norm", norm, "NMI normalization: sqrt, half_sum, min, max");
    events_percentile_opt = cmd->add_option("--events-percentile", events_percentile,
                                            "Extract events from the top/bottom fraction of values");
    cmd->add_option("--events-direction", events_direction, "highest or lowest");
    cmd->add_option("--es-tau", es_tau, "Fixed event synchronization window");
    cmd->add_flag("--es-local", es_local, "Per-pair local window instead of --es-tau");
    es_tau_max_opt = cmd->add_option("--es-tau-max", es_tau_max, "Cap for the local window");
    cmd->add_option("--es-mode", es_mode, "symmetric or asymmetric");
    cmd->add_option("--vr-kernel", vr_kernel, "laplacian or gaussian");
    cmd->add_option("--vr-tau", vr_tau, "van Rossum time constant");
  }

  KernelConfig config() const {
    KernelConfig c;
    c.metric = metric;
    c.mode = parse_correlation_mode(mode);
    if (sig == "fisher") {
      c.significance = SignificanceSpec{alpha, FisherZ{}};
    } else if (sig == "surrogate") {
      if (seed_opt->count() == 0) invalid_argument("--sig surrogate needs an explicit --seed");
      if (surrogates < 1) invalid_argument("--surrogates must be >= 1");
      c.significance = SignificanceSpec{alpha, Surrogate{surrogates, seed}};
    } else if (!sig.empty()) {
      invalid_argument("unknown --sig '" + sig + "' (fisher, surrogate)");
    }
    c.tau_max = tau_max;
    c.bins = parse_bin_rule(bins);
    c.norm = parse_nmi_norm(norm);
    if (events_percentile_opt->count() > 0) c.events_percentile = events_percentile;
    if (events_direction == "highest") {
      c.events_direction = EventDirection::highest;
    } else if (events_direction == "lowest") {
      c.events_direction = EventDirection::lowest;
    } else {
      invalid_argument("unknown --events-direction '" + events_direction + "' (highest, lowest)");
    }
    if (es_local) {
      LocalWindow w;
      if (es_tau_max_opt->count() > 0) w.tau_max = es_tau_max;
      c.es.window = w;
    } else {
      if (!(es_tau > 0.0)) invalid_argument("--es-tau must be > 0");
      c.es.window = FixedWindow{es_tau};
    }
    if (es_mode == "symmetric") {
      c.es.mode = EsMode::symmetric;
    } else if (es_mode == "asymmetric") {
      c.es.mode = EsMode::asymmetric;
    } else {
      invalid_argument("unknown --es-mode '" + es_mode + "' (symmetric, asymmetric)");
    }
    if (vr_kernel == "laplacian") {
      c.vr.kernel = VrKernel::laplacian;
    } else if (vr_kernel == "gaussian") {
      c.vr.kernel = VrKernel::gaussian;
    } else {
      invalid_argument("unknown --vr-kernel '" + vr_kernel + "' (laplacian, gaussian)");
    }
    c.vr.tau = vr_tau;
    return c;
  }
};

// ---------------------------------------------------------------------------
// Builder and output flags

struct BuilderFlags {
  std::string builder;
  std::size_t k = 0;
  double eps = 0.0;
  CLI::Option* eps_opt = nullptr;
  double eps_percentile = 0.0;
  CLI::Option* eps_percentile_opt = nullptr;
  bool normalize = false;

  void attach(CLI::App* cmd, bool allow_significant) {
    cmd->add_option("--builder", builder,
                    allow_significant ? "knn, enn, weighted or significant" : "knn, enn or weighted")
        ->required();
    cmd->add_option("--k", k, "Neighbours per node (knn)");
    eps_opt = cmd->add_option("--eps", eps, "Distance threshold (enn)");
    eps_percentile_opt = cmd->add_option("--eps-percentile", eps_percentile,
                                         "Threshold as a percentile of the distances (enn)");
    cmd->add_flag("--normalize", normalize, "Min-max normalize the matrix first");
  }

  NetworkBuilder make() const {
    NetworkBuilder base;
    if (builder == "knn") {
      if (k == 0) invalid_argument("--builder knn needs --k >= 1");
      base = knn_builder(k);
    } else if (builder == "enn") {
      const bool literal = eps_opt->count() > 0;
      const bool pct = eps_percentile_opt->count() > 0;
      if (literal == pct) invalid_argument("--builder enn needs exactly one of --eps and --eps-percentile");
      base = literal ? enn_builder(eps) : enn_percentile_builder(eps_percentile);
    } else if (builder == "weighted") {
      const bool norm = normalize;
      return [norm](const DistanceMatrix& d) {
        try {
          return weighted_builder(norm)(d);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::invalid_argument || norm) throw;
          invalid_argument(std::string(e.what()) + "; rerun with --normalize");
        }
      };
    } else if (builder == "significant") {
      base = net_significant;
    } else {
      invalid_argument("unknown --builder '" + builder + "'");
    }
    if (!normalize || builder == "significant") return base;
    return [base](const DistanceMatrix& d) { return base(dist_matrix_normalize(d).matrix); };
  }
};

struct NetworkOutput {
  fs::path out;
  std::string format = "edgelist";

  void attach(CLI::App* cmd) {
    cmd->add_option("--out", out, "Output network file")->required();
    cmd->add_option("--format", format, "edgelist or graphml");
  }

  void write(const Network& net) const {
    std::ostringstream buffer;
    if (format == "edgelist") {
      export_edgelist(net, buffer);
    } else if (format == "graphml") {
      export_graphml(net, buffer);
    } else {
      invalid_argument("unknown --format '" + format + "' (edgelist, graphml)");
    }
    write_file(out, buffer.str());
  }
};

std::size_t check_workers(std::size_t workers) {
  if (workers < 1) invalid_argument("--workers must be >= 1");
  return workers;
}

TimeSeries pick_series(const fs::path& input, const std::string& column) {
  auto all = read_series_input(input);
  if (all.size() == 1 && column.empty()) return all.front();
  if (column.empty()) {
    invalid_argument("'" + input.string() + "' holds " + std::to_string(all.size()) +
                     " series; choose one with --column");
  }
  for (auto& s : all) {
    if (s.id() == column) return s;
  }
  invalid_argument("no series named '" + column + "' in '" + input.string() + "'");
}

std::string matrix_text(const DistanceMatrix& d) {
  std::ostringstream out;
  write_matrix_csv(d, out);
  return out.str();
}

// ---------------------------------------------------------------------------
// Commands

struct DistCmd {
  fs::path input;
  fs::path out;
  std::size_t workers = 1;
  bool significance = false;
  KernelFlags kernel;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("dist", "Full pairwise distance matrix");
    cmd->add_option("input", input, "Wide CSV file or directory of single-series files")->required();
    cmd->add_option("--out", out, "Matrix CSV")->required();
    cmd->add_option("--workers", workers, "Worker threads");
    cmd->add_flag("--significance-matrix", significance, "Write the 0/1 significance matrix instead");
    kernel.attach(cmd);
    cmd->callback([this] { run(); });
  }

  void run() const {
    const auto cfg = kernel.config();
    const auto series = read_series_input(input);
    const auto matrix = significance ? pairwise_significance(series, make_significance_test(cfg), check_workers(workers))
                                     : ts_dist(series, make_kernel(cfg), check_workers(workers));
    write_file(out, matrix_text(matrix));
  }
};

struct DistPartCmd {
  fs::path input;
  fs::path out;
  std::size_t part = 0;
  std::size_t of = 0;
  std::size_t workers = 1;
  KernelFlags kernel;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("dist-part", "One contiguous chunk of the pairwise distances");
    cmd->add_option("input", input, "Wide CSV file or directory of single-series files")->required();
    cmd->add_option("--part", part, "Part index, 1-based")->required();
    cmd->add_option("--of", of, "Total number of parts")->required();
    cmd->add_option("--out", out, "Directory for part files")->required();
    cmd->add_option("--workers", workers, "Worker threads (file input)");
    kernel.attach(cmd);
    cmd->callback([this] { run(); });
  }

  void run() const {
    const auto k = make_kernel(kernel.config());
    std::vector<std::string> labels;
    DistancePart result;
    if (fs::is_directory(input)) {
      DirectorySource source(input);
      for (const auto& f : source.files()) labels.push_back(f.stem().string());
      result = ts_dist_part(source, k, part, of);
    } else {
      const auto series = read_series_input(input);
      for (const auto& s : series) labels.push_back(s.id());
      result = ts_dist_part(series, k, part, of, check_workers(workers));
    }
    fs::create_directories(out);
    write_part_csv(result, out / part_file_name(part, of));
    std::string text;
    for (const auto& l : labels) text += l + "\n";
    write_file(out / "labels.txt", text);
  }
};

struct MergeCmd {
  fs::path dir;
  fs::path out;
  std::size_t n = 0;
  CLI::Option* n_opt = nullptr;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("merge", "Assemble part files into a matrix");
    cmd->add_option("dir", dir, "Directory of part files")->required();
    n_opt = cmd->add_option("--n", n, "Number of series (default: labels.txt line count)");
    cmd->add_option("--out", out, "Matrix CSV")->required();
    cmd->callback([this] { run(); });
  }

  void run() const {
    if (!fs::is_directory(dir)) fail(ErrorKind::io, "'" + dir.string() + "' is not a directory");
    std::vector<std::string> labels;
    if (fs::exists(dir / "labels.txt")) {
      std::ifstream in(dir / "labels.txt");
      for (std::string line; std::getline(in, line);) {
        if (!line.empty()) labels.push_back(line);
      }
    }
    std::size_t count = n;
    if (n_opt->count() == 0) {
      if (labels.empty()) invalid_argument("--n is required when the directory has no labels.txt");
      count = labels.size();
    } else if (!labels.empty() && labels.size() != n) {
      invalid_argument("--n " + std::to_string(n) + " disagrees with labels.txt (" +
                       std::to_string(labels.size()) + " labels)");
    }

    static const std::regex name_re(R"(part_(\d+)_of_(\d+)\.csv)");
    std::vector<DistancePart> parts;
    std::set<std::size_t> seen;
    std::optional<std::size_t> total;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
      std::smatch m;
      const std::string name = path.filename().string();
      if (!std::regex_match(name, m, name_re)) continue;
      const std::size_t of = std::stoul(m[2]);
      if (total && *total != of) fail(ErrorKind::merge_conflict, "part files disagree on the total part count");
      total = of;
      seen.insert(std::stoul(m[1]));
      parts.push_back(read_part_csv(path));
    }
    std::string missing;
    if (total) {
      for (std::size_t p = 1; p <= *total; ++p) {
        if (!seen.count(p)) missing += (missing.empty() ? "" : ", ") + part_file_name(p, *total);
      }
    }
    try {
      write_file(out, matrix_text(dist_parts_merge(parts, count, labels)));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::incomplete_merge || missing.empty()) throw;
      throw Error(ErrorKind::incomplete_merge, std::string(e.what()) + "; missing part files: " + missing);
    }
  }
};

struct NetCmd {
  fs::path matrix;
  BuilderFlags builder;
  NetworkOutput output;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("net", "Network from a distance or significance matrix");
    cmd->add_option("matrix", matrix, "Matrix CSV")->required();
    builder.attach(cmd, true);
    output.attach(cmd);
    cmd->callback([this] { run(); });
  }

  void run() const {
    const auto build = builder.make();
    output.write(build(read_matrix_csv(matrix)));
  }
};

struct SingleCmd {
  fs::path input;
  std::string column;
  NetworkOutput output;
  std::size_t workers = 1;
  // vg
  std::string kind = "natural";
  bool directed = false;
  std::size_t limit = 0;
  CLI::Option* limit_opt = nullptr;
  std::string algorithm = "naive";
  // qn
  int breaks = 0;
  // rn
  std::size_t dimension = 1;
  std::size_t delay = 1;
  std::string distance = "euclidean";
  double radius = 0.0;
  // windows
  std::size_t width = 0;
  std::size_t step = 1;
  KernelFlags kernel;
  BuilderFlags builder;

  CLI::App* common(CLI::App* parent, const std::string& name, const std::string& help) {
    auto* cmd = parent->add_subcommand(name, help);
    cmd->add_option("input", input, "Series file (CSV)")->required();
    cmd->add_option("--column", column, "Series id when the file holds several");
    output.attach(cmd);
    return cmd;
  }

  void attach(CLI::App& app) {
    auto* single = app.add_subcommand("single", "Networks from one time series");
    single->require_subcommand(1);

    auto* vg = common(single, "vg", "Visibility graph");
    vg->add_option("--kind", kind, "natural or horizontal");
    vg->add_flag("--directed", directed, "Orient edges forward in time");
    limit_opt = vg->add_option("--limit", limit, "Drop edges spanning more than this many steps");
    vg->add_option("--algorithm", algorithm, "naive or dc (divide and conquer)");
    vg->add_option("--workers", workers, "Worker threads (naive)");
    vg->callback([this] { run_vg(); });

    auto* qn = common(single, "qn", "Transition network over value bins");
    qn->add_option("--breaks", breaks, "Number of equal-width bins")->required();
    qn->callback([this] { run_qn(); });

    auto* rn = common(single, "rn", "Recurrence network");
    rn->add_option("--dimension", dimension, "Embedding dimension");
    rn->add_option("--delay", delay, "Embedding delay");
    rn->add_option("--distance", distance, "euclidean, manhattan or chebyshev");
    rn->add_option("--radius", radius, "Recurrence threshold")->required();
    rn->callback([this] { run_rn(); });

    auto* win = common(single, "windows", "Proximity network of sliding windows");
    win->add_option("--width", width, "Window width")->required();
    win->add_option("--step,--by", step, "Window step");
    win->add_option("--workers", workers, "Worker threads");
    kernel.attach(win);
    builder.attach(win, false);
    win->callback([this] { run_windows(); });
  }

  void run_vg() const {
    VgOptions o;
    if (kind == "natural") {
      o.kind = VisibilityKind::natural;
    } else if (kind == "horizontal") {
      o.kind = VisibilityKind::horizontal;
    } else {
      invalid_argument("unknown --kind '" + kind + "' (natural, horizontal)");
    }
    if (algorithm == "naive") {
      o.algorithm = VgAlgorithm::naive;
    } else if (algorithm == "dc" || algorithm == "divide_conquer") {
      o.algorithm = VgAlgorithm::divide_conquer;
    } else {
      invalid_argument("unknown --algorithm '" + algorithm + "' (naive, dc)");
    }
    o.directed = directed;
    if (limit_opt->count() > 0) o.limit = limit;
    o.workers = check_workers(workers);
    output.write(tsnet_vg(pick_series(input, column), o));
  }

  void run_qn() const { output.write(tsnet_qn(pick_series(input, column), breaks).graph); }

  void run_rn() const {
    const EmbeddingSpec spec{dimension, delay, parse_state_metric(distance), radius};
    output.write(tsnet_rn(pick_series(input, column), spec));
  }

  void run_windows() const {
    if (builder.builder == "significant") invalid_argument("windows supports knn, enn and weighted builders");
    const auto k = make_kernel(kernel.config());
    output.write(tsnet_windows(pick_series(input, column), width, step, k, builder.make(), check_workers(workers)));
  }
};

struct StatsCmd {
  fs::path network;
  bool directed = false;
  bool json = false;
  std::optional<fs::path> out;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("stats", "Size, density, degrees and components");
    cmd->add_option("network", network, "Edge list or .graphml file")->required();
    cmd->add_flag("--directed", directed, "Read an edge list as directed");
    cmd->add_flag("--json", json, "JSON report");
    cmd->add_option("--out", out, "Report file (default: standard output)");
    cmd->callback([this] { run(); });
  }

  void run() const {
    const auto net = read_network(network, directed);
    const auto s = graph_stats(net);
    std::ostringstream text;
    if (json) {
      nlohmann::ordered_json j;
      j["nodes"] = s.nodes;
      j["edges"] = s.edges;
      j["directed"] = net.directed();
      j["density"] = s.density;
      j["components"] = s.components;
      j["component_sizes"] = s.component_sizes;
      j["labels"] = net.labels();
      j["degrees"] = s.degrees;
      text << j.dump(2) << '\n';
    } else {
      text << "nodes: " << s.nodes << '\n'
           << "edges: " << s.edges << '\n'
           << "directed: " << (net.directed() ? "yes" : "no") << '\n'
           << "density: " << format_double(s.density) << '\n'
           << "components: " << s.components << '\n'
           << "component sizes:";
      for (auto c : s.component_sizes) text << ' ' << c;
      text << "\ndegrees:";
      for (std::size_t v = 0; v < net.size(); ++v) text << ' ' << net.labels()[v] << '=' << s.degrees[v];
      text << '\n';
    }
    write_or_print(out, text.str());
  }
};

struct CommunitiesCmd {
  fs::path network;
  bool json = false;
  std::optional<fs::path> out;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("communities", "Edge betweenness communities");
    cmd->add_option("network", network, "Undirected edge list or .graphml file")->required();
    cmd->add_flag("--json", json, "JSON report");
    cmd->add_option("--out", out, "Report file (default: standard output)");
    cmd->callback([this] { run(); });
  }

  void run() const {
    const auto net = read_network(network, false);
    const auto p = girvan_newman(net);
    std::vector<std::vector<std::string>> groups(p.communities);
    for (std::size_t v = 0; v < net.size(); ++v) groups[p.membership[v]].push_back(net.labels()[v]);
    std::ostringstream text;
    if (json) {
      nlohmann::ordered_json j;
      j["algorithm"] = "edge_betweenness";
      j["nodes"] = net.size();
      j["groups"] = p.communities;
      j["modularity"] = p.modularity;
      j["removals"] = p.removals;
      j["communities"] = groups;
      nlohmann::ordered_json membership = nlohmann::ordered_json::object();
      for (std::size_t v = 0; v < net.size(); ++v) membership[net.labels()[v]] = p.membership[v] + 1;
      j["membership"] = membership;
      text << j.dump(2) << '\n';
    } else {
      char mod[32];
      std::snprintf(mod, sizeof mod, "%.2f", p.modularity);
      text << "clustering edge betweenness, groups: " << p.communities << ", mod: " << mod << '\n';
      for (std::size_t g = 0; g < groups.size(); ++g) {
        text << '[' << g + 1 << ']';
        for (std::size_t k = 0; k < groups[g].size(); ++k) text << (k ? ", " : " ") << groups[g][k];
        text << '\n';
      }
    }
    write_or_print(out, text.str());
  }
};

struct GenerateCmd {
  fs::path out;
  int each = 10;
  int length = 100;
  double noise = 0.1;
  std::uint64_t seed = 0;
  int horizon = 0;
  int count = 0;
  bool indicator = false;

  void attach(CLI::App& app) {
    auto* gen = app.add_subcommand("generate", "Synthetic data");
    gen->require_subcommand(1);

    auto* sincos = gen->add_subcommand("sincos", "Noisy sine and cosine series (wide CSV)");
    sincos->add_option("--each", each, "Series per family");
    sincos->add_option("--length", length, "Samples per series");
    sincos->add_option("--noise", noise, "Gaussian noise standard deviation");
    sincos->add_option("--seed", seed, "Random seed")->required();
    sincos->add_option("--out", out, "Output CSV")->required();
    sincos->callback([this] {
      write_wide_csv(dataset_sincos_generate(each, length, noise, seed), out);
    });

    auto* events = gen->add_subcommand("events", "Uniformly random event times");
    events->add_option("--horizon", horizon, "Series length")->required();
    events->add_option("--n", count, "Number of events")->required();
    events->add_option("--seed", seed, "Random seed")->required();
    events->add_flag("--indicator", indicator, "Write a 0/1 series of length horizon instead of times");
    events->add_option("--out", out, "Output CSV")->required();
    events->callback([this] { run_events(); });
  }

  void run_events() const {
    const auto e = random_ets(horizon, count, seed);
    std::string text;
    if (indicator) {
      text = "events\n";
      for (double v : e.indicator()) text += (v != 0.0 ? "1\n" : "0\n");
    } else {
      text = "time\n";
      for (int t : e.times()) text += std::to_string(t) + "\n";
    }
    write_file(out, text);
  }
};

// ---------------------------------------------------------------------------
// Flat key=value config files. Keys name long flags without the dashes;
// flags already on the command line win.

std::map<std::string, std::string> read_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open config '" + path.string() + "'");
  std::map<std::string, std::string> out;
  std::size_t row = 0;
  for (std::string line; std::getline(in, line);) {
    ++row;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      invalid_argument(path.string() + " line " + std::to_string(row) + ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

CLI::App* active_command(CLI::App& app, const std::vector<std::string>& args) {
  CLI::App* current = &app;
  for (const auto& a : args) {
    if (auto* sub = current->get_subcommand_no_throw(a)) current = sub;
  }
  return current == &app ? nullptr : current;
}

std::vector<std::string> apply_config(CLI::App& app, std::vector<std::string> args) {
  std::optional<fs::path> config;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config" && k + 1 < args.size()) {
      config = args[k + 1];
      args.erase(args.begin() + static_cast<long>(k), args.begin() + static_cast<long>(k) + 2);
      break;
    }
    if (args[k].rfind("--config=", 0) == 0) {
      config = args[k].substr(9);
      args.erase(args.begin() + static_cast<long>(k));
      break;
    }
  }
  if (!config) return args;
  auto* cmd = active_command(app, args);
  if (!cmd) invalid_argument("--config needs a command");
  for (const auto& [key, value] : read_config(*config)) {
    const std::string flag = "--" + key;
    const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (given) continue;
    auto* opt = cmd->get_option_no_throw(flag);
    if (!opt) invalid_argument("config key '" + key + "' is not an option of '" + cmd->get_name() + "'");
    if (opt->get_expected_max() == 0) {
      if (value == "true" || value == "1" || value == "yes") args.push_back(flag);
    } else {
      args.push_back(flag);
      args.push_back(value);
    }
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time series to network pipelines", "tsnet"};
  app.require_subcommand(1);
  app.add_option("--config", "Flat key=value file of option defaults for the command");

  DistCmd dist;
  DistPartCmd dist_part;
  MergeCmd merge;
  NetCmd net;
  SingleCmd single;
  StatsCmd stats;
  CommunitiesCmd communities;
  GenerateCmd generate;
  dist.attach(app);
  dist_part.attach(app);
  merge.attach(app);
  net.attach(app);
  single.attach(app);
  stats.attach(app);
  communities.attach(app);
  generate.attach(app);

  try {
    auto args = apply_config(app, std::vector<std::string>(argv + 1, argv + argc));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : usage;
  } catch (const KernelError& e) {
    std::cerr << "tsnet: kernel failure at " << e.what() << '\n';
    return kernel_failed;
  } catch (const Error& e) {
    std::cerr << "tsnet: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "tsnet: " << e.what() << '\n';
    return data;
  }
  return ok;
}

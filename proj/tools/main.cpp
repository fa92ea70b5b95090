// ctqw: quantum-walk centrality on residue interaction networks.
#include "ctqw/circuit.hpp"
#include "ctqw/error.hpp"
#include "ctqw/fetch.hpp"
#include "ctqw/graph.hpp"
#include "ctqw/metrics.hpp"
#include "ctqw/pdb.hpp"
#include "ctqw/report.hpp"
#include "ctqw/transition.hpp"
#include "ctqw/walk.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct GlobalOptions {
  double cutoff = ctqw::kDefaultCutoff;
  std::string chains;
  bool include_mse = false;
  int k = ctqw::kDefaultTopK;
  double tol = ctqw::kDefaultConvergenceTol;
  double grid_step = ctqw::kDefaultGridStep;
  std::optional<double> t_max;
  std::optional<std::uint64_t> seed;
  int workers = 1;
  std::string cache_dir;
  std::string format = "json";
  std::string output;
  bool full_vector = false;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ctqw::ChainSelection selection_from(const GlobalOptions& g) {
  ctqw::ChainSelection sel;
  for (char c : g.chains) {
    if (c != ',' && c != ' ') sel.chains.push_back(c);
  }
  sel.include_mse = g.include_mse;
  return sel;
}

ctqw::AnalysisOptions analysis_options_from(const GlobalOptions& g) {
  ctqw::AnalysisOptions o;
  o.cutoff = g.cutoff;
  o.selection = selection_from(g);
  o.k = g.k;
  o.correlation_mode = g.full_vector ? ctqw::CorrelationMode::FullVector : ctqw::CorrelationMode::PaddedUnion;
  o.convergence_tol = g.tol;
  o.grid_step = g.grid_step;
  o.t_max = g.t_max.value_or(ctqw::kDefaultConvergenceTMax);
  return o;
}

ctqw::ArchiveConfig archive_from(const GlobalOptions& g) {
  auto config = ctqw::ArchiveConfig::from_environment();
  if (!g.cache_dir.empty()) config.cache_dir = g.cache_dir;
  return config;
}

struct LoadedStructure {
  ctqw::StructureModel model;
  std::string source;
};

// A source is a path to an existing file or a 4-character archive identifier.
LoadedStructure load_structure(const std::string& source, const GlobalOptions& g) {
  LoadedStructure out;
  std::string text;
  std::string fallback_id;
  if (std::filesystem::is_regular_file(source)) {
    text = ctqw::read_text_file(source);
    out.source = source;
    fallback_id = std::filesystem::path(source).stem().string();
  } else if (ctqw::is_valid_pdb_id(source)) {
    auto fetched = ctqw::fetch_structure(source, archive_from(g));
    for (const auto& w : fetched.warnings) std::cerr << "warning: " << w << '\n';
    text = std::move(fetched.text);
    out.source = fetched.cache_path.string();
    fallback_id = source;
  } else {
    throw ctqw::Error(ctqw::ErrorKind::NotFound, "'" + source + "' is neither a file nor a PDB identifier");
  }
  out.model = ctqw::parse_pdb(text, selection_from(g));
  if (out.model.pdb_id.empty()) out.model.pdb_id = fallback_id;
  std::transform(out.model.pdb_id.begin(), out.model.pdb_id.end(), out.model.pdb_id.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw ctqw::Error(ctqw::ErrorKind::Io, "cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

nlohmann::json report_json(const ctqw::AnalysisReport& report, const GlobalOptions& g) {
  auto j = ctqw::to_json(report);
  j["selection"]["chains"] = g.chains.empty() ? nlohmann::json("all") : nlohmann::json(g.chains);
  j["selection"]["include_mse"] = g.include_mse;
  return j;
}

int cmd_fetch(const std::vector<std::string>& ids, const GlobalOptions& g) {
  const auto config = archive_from(g);
  int failures = 0;
  for (const auto& id : ids) {
    try {
      const auto fetched = ctqw::fetch_structure(id, config);
      for (const auto& w : fetched.warnings) std::cerr << "warning: " << w << '\n';
      std::cout << nlohmann::json{{"pdb_id", id},
                                  {"path", fetched.cache_path.string()},
                                  {"from_cache", fetched.from_cache},
                                  {"bytes", fetched.text.size()}}
                       .dump()
                << '\n';
    } catch (const ctqw::Error& e) {
      ++failures;
      std::cout << ctqw::error_json(std::string(ctqw::to_string(e.kind())), e.what()).dump() << '\n';
    }
  }
  return failures == 0 ? 0 : kExitFailure;
}

int cmd_analyze(const std::string& source, const GlobalOptions& g, const std::string& series_csv,
                bool error_trace) {
  const auto loaded = load_structure(source, g);
  auto options = analysis_options_from(g);
  options.include_error_trace = error_trace;
  auto report = ctqw::analyze_structure(loaded.model, options);
  report.source = loaded.source;

  Output out(g.output);
  if (g.format == "csv") {
    out.stream() << ctqw::batch_csv_header() << '\n' << ctqw::batch_csv_row(report) << '\n';
  } else {
    out.stream() << report_json(report, g).dump(2) << '\n';
  }

  if (!series_csv.empty()) {
    const auto graph = ctqw::build_rin(loaded.model.residues, options.cutoff);
    const auto eig = ctqw::eigendecompose(graph.adjacency);
    const double horizon = report.convergence ? report.convergence->t_star : options.t_max;
    const auto ts = ctqw::evolve_probabilities(eig, ctqw::uniform_state(graph.size()),
                                               ctqw::uniform_grid(options.grid_step, horizon));
    std::ofstream csv(series_csv);
    if (!csv) throw ctqw::Error(ctqw::ErrorKind::Io, "cannot write " + series_csv);
    ctqw::write_time_series_csv(csv, ts, graph.labels);
  }
  return 0;
}

std::vector<std::string> read_id_list(const std::string& path) {
  const auto ids = ctqw::parse_key_file(ctqw::read_text_file(path));
  return ids;
}

int cmd_batch(const std::string& list_path, const GlobalOptions& g) {
  const auto ids = read_id_list(list_path);
  if (ids.empty()) throw UsageError("identifier list " + list_path + " is empty");
  const auto options = analysis_options_from(g);

  struct Row {
    std::optional<ctqw::AnalysisReport> report;
    std::string error;
  };
  std::vector<Row> rows(ids.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < ids.size(); i = next++) {
      try {
        const auto loaded = load_structure(ids[i], g);
        rows[i].report = ctqw::analyze_structure(loaded.model, options);
        rows[i].report->source = loaded.source;
      } catch (const ctqw::Error& e) {
        rows[i].error = std::string(ctqw::to_string(e.kind())) + ": " + e.what();
      } catch (const std::exception& e) {
        rows[i].error = e.what();
      }
    }
  };
  const int workers = std::clamp(g.workers, 1, static_cast<int>(ids.size()));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  Output out(g.output);
  std::size_t failures = 0;
  if (g.format == "json") {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (rows[i].report) {
        out.stream() << report_json(*rows[i].report, g).dump() << '\n';
      } else {
        ++failures;
        auto j = ctqw::error_json("BatchRowFailed", rows[i].error);
        j["pdb_id"] = ids[i];
        out.stream() << j.dump() << '\n';
      }
    }
  } else {
    out.stream() << ctqw::batch_csv_header() << '\n';
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (rows[i].report) {
        out.stream() << ctqw::batch_csv_row(*rows[i].report) << '\n';
      } else {
        ++failures;
        out.stream() << ctqw::batch_csv_error_row(ids[i], rows[i].error) << '\n';
      }
    }
  }
  return failures == ids.size() ? kExitFailure : 0;
}

int cmd_gaps(const std::vector<std::string>& sources, const GlobalOptions& g) {
  Output out(g.output);
  if (g.format == "csv") out.stream() << "pdb_id,delta_cl,delta_q,difference,mixing_cl,mixing_q,lcc_n\n";
  int failures = 0;
  for (const auto& source : sources) {
    try {
      const auto loaded = load_structure(source, g);
      const auto graph = ctqw::build_rin(loaded.model.residues, g.cutoff);
      const auto gaps = ctqw::gap_report(graph);
      if (g.format == "csv") {
        out.stream() << loaded.model.pdb_id << ',' << ctqw::format_sig6(gaps.delta_cl) << ','
                     << ctqw::format_sig6(gaps.delta_q) << ',' << ctqw::format_sig6(gaps.difference) << ','
                     << ctqw::format_sig6(gaps.mixing_cl) << ',' << ctqw::format_sig6(gaps.mixing_q) << ','
                     << gaps.component_size << '\n';
      } else {
        auto j = ctqw::to_json(gaps);
        j["pdb_id"] = loaded.model.pdb_id;
        j["n"] = graph.size();
        out.stream() << j.dump() << '\n';
      }
    } catch (const ctqw::Error& e) {
      ++failures;
      if (g.format == "csv") {
        out.stream() << source << ",,,,,,\n";
      } else {
        auto j = ctqw::error_json(std::string(ctqw::to_string(e.kind())), e.what());
        j["pdb_id"] = source;
        out.stream() << j.dump() << '\n';
      }
    }
  }
  return failures == static_cast<int>(sources.size()) ? kExitFailure : 0;
}

std::uint64_t resolve_seed(const GlobalOptions& g) {
  if (g.seed) return *g.seed;
  const std::uint64_t seed = std::random_device{}();
  std::cerr << "info: no --seed given, using " << seed << '\n';
  return seed;
}

int cmd_circuit(const std::string& source, const GlobalOptions& g, std::optional<std::int64_t> shots,
                int time_points, const std::string& counts_json) {
  if (shots && *shots < 1) throw UsageError("--shots must be positive");
  if (time_points < 1) throw UsageError("-L must be positive");
  const auto loaded = load_structure(source, g);
  const auto graph = ctqw::build_rin(loaded.model.residues, g.cutoff);
  constexpr Eigen::Index kMaxDimension = Eigen::Index{1} << 12;
  if (graph.size() > kMaxDimension) {
    throw ctqw::Error(ctqw::ErrorKind::TooLarge,
                      std::to_string(graph.size()) + " residues exceed the 4096-state dense-unitary limit");
  }

  const auto classical = ctqw::eigenvector_centrality(graph).centrality;
  ctqw::CircuitOptions options;
  options.time_points = time_points;
  options.t_max = g.t_max.value_or(20.0 * std::numbers::pi);
  const auto exact = ctqw::run_ctqw_circuit(graph, options);
  std::optional<ctqw::CircuitRun> sampled;
  std::uint64_t seed = 0;
  if (shots) {
    seed = resolve_seed(g);
    options.shots = shots;
    options.seed = seed;
    sampled = ctqw::run_ctqw_circuit(graph, options);
  }

  const auto n = static_cast<int>(graph.size());
  const auto rank_classical = ctqw::top_k(classical, n);
  const auto rank_exact = ctqw::top_k(exact.centrality, n);
  const auto rank_shots = sampled ? ctqw::top_k(sampled->centrality, n) : std::vector<std::string>{};

  Output out(g.output);
  if (g.format == "json") {
    nlohmann::json j = {{"pdb_id", loaded.model.pdb_id},
                        {"n", graph.size()},
                        {"qubits", exact.qubits},
                        {"time_points", options.time_points},
                        {"t_max_A2", options.t_max},
                        {"classical", rank_classical},
                        {"exact", rank_exact}};
    if (sampled) {
      j["shots"] = *shots;
      j["seed"] = seed;
      j["shot_mode"] = rank_shots;
    }
    out.stream() << j.dump(2) << '\n';
  } else {
    out.stream() << "rank,classical,exact" << (sampled ? ",shots" : "") << '\n';
    for (int r = 0; r < n; ++r) {
      out.stream() << r + 1 << ',' << rank_classical[r] << ',' << rank_exact[r];
      if (sampled) out.stream() << ',' << rank_shots[r];
      out.stream() << '\n';
    }
  }

  if (!counts_json.empty()) {
    if (!sampled) throw UsageError("--counts-json needs --shots");
    nlohmann::json counts = nlohmann::json::object();
    for (Eigen::Index i = 0; i < sampled->total_counts.size(); ++i) {
      counts[ctqw::basis_bitstring(i, sampled->qubits)] = sampled->total_counts(i);
    }
    std::ofstream f(counts_json);
    if (!f) throw ctqw::Error(ctqw::ErrorKind::Io, "cannot write " + counts_json);
    f << nlohmann::json{{"shots_per_time_point", *shots},
                        {"time_points", options.time_points},
                        {"seed", seed},
                        {"counts", counts}}
             .dump(2)
      << '\n';
  }
  return 0;
}

int cmd_keyscore(const std::string& source, const std::string& keyfile, const GlobalOptions& g) {
  const auto keys = ctqw::parse_key_file(ctqw::read_text_file(keyfile));
  if (keys.empty()) throw UsageError("key file " + keyfile + " has no labels");
  const auto loaded = load_structure(source, g);
  const auto graph = ctqw::build_rin(loaded.model.residues, g.cutoff);
  const auto eigenvector = ctqw::key_score(ctqw::eigenvector_centrality(graph).centrality, keys);
  const auto quantum = ctqw::key_score(ctqw::ctqw_centrality(graph), keys);
  Output out(g.output);
  out.stream() << nlohmann::json{{"pdb_id", loaded.model.pdb_id},
                                 {"n", graph.size()},
                                 {"key_count", eigenvector.key_set.size()},
                                 {"eigenvector_score", eigenvector.score},
                                 {"ctqw_score", quantum.score},
                                 {"baseline", eigenvector.baseline},
                                 {"key_set", eigenvector.key_set}}
                      .dump(2)
               << '\n';
  return 0;
}

int cmd_export_graph(const std::string& source, const GlobalOptions& g) {
  const auto loaded = load_structure(source, g);
  const auto graph = ctqw::build_rin(loaded.model.residues, g.cutoff);
  Output out(g.output);
  ctqw::write_edge_csv(out.stream(), graph);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous-time quantum-walk centrality for protein residue interaction networks"};
  app.set_version_flag("--version", std::string(ctqw::kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--cutoff", g.cutoff, "Contact cutoff in angstroms (strict)")->capture_default_str();
  app.add_option("--chains", g.chains, "Chain identifiers to keep, e.g. A or A,B (default: all)");
  app.add_flag("--include-mse", g.include_mse, "Treat selenomethionine (MSE) as a residue");
  app.add_option("--k", g.k, "Top-k size for set metrics")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--tol", g.tol, "L1 tolerance for steady-state convergence")->capture_default_str();
  app.add_option("--grid-step", g.grid_step, "Convergence time-grid step in A^2")->capture_default_str();
  app.add_option("--t-max", g.t_max,
                 "Time horizon in A^2 (convergence default 3200, circuit default 20*pi)");
  app.add_option("--seed", g.seed, "Seed for shot sampling");
  app.add_option("--workers", g.workers, "Parallel batch workers")->capture_default_str();
  app.add_option("--cache-dir", g.cache_dir, "Structure cache directory (default CTQW_CACHE_DIR or ./pdb_cache)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("-o,--output", g.output, "Write output to a file instead of stdout");
  app.add_flag("--full-vector", g.full_vector, "Correlate full score vectors instead of padded top-k union ranks");

  auto* fetch = app.add_subcommand("fetch", "Download structures into the cache");
  std::vector<std::string> fetch_ids;
  fetch->add_option("ids", fetch_ids, "PDB identifiers")->required();

  auto* analyze = app.add_subcommand("analyze", "Full analysis of one structure");
  std::string analyze_source, series_csv;
  bool error_trace = false;
  analyze->add_option("source", analyze_source, "PDB file or identifier")->required();
  analyze->add_option("--series-csv", series_csv, "Write P_i(t) up to t* as CSV");
  analyze->add_flag("--error-trace", error_trace, "Include the convergence error trace in the report");

  auto* batch = app.add_subcommand("batch", "Analyze every identifier in a list file");
  std::string batch_list;
  batch->add_option("list", batch_list, "File with one PDB identifier or path per line")->required();

  auto* gaps = app.add_subcommand("gaps", "Classical and quantum spectral gaps");
  std::vector<std::string> gap_sources;
  gaps->add_option("sources", gap_sources, "PDB files or identifiers")->required();

  auto* circuit = app.add_subcommand("circuit", "Emulate the padded-register circuit protocol");
  std::string circuit_source, counts_json;
  std::optional<std::int64_t> shots;
  int time_points = 40;
  circuit->add_option("source", circuit_source, "PDB file or identifier")->required();
  circuit->add_option("--shots", shots, "Shots per time point (default: exact probabilities)");
  circuit->add_option("-L,--time-points", time_points, "Number of time points")->capture_default_str();
  circuit->add_option("--counts-json", counts_json, "Write summed shot counts keyed by bitstring");

  auto* keyscore = app.add_subcommand("keyscore", "Centrality mass on a set of key residues");
  std::string key_source, keyfile;
  keyscore->add_option("source", key_source, "PDB file or identifier")->required();
  keyscore->add_option("keyfile", keyfile, "Residue labels, one per line")->required();

  auto* export_graph = app.add_subcommand("export-graph", "Write the network as an edge-list CSV");
  std::string export_source;
  export_graph->add_option("source", export_source, "PDB file or identifier")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*fetch) return cmd_fetch(fetch_ids, g);
    if (*analyze) return cmd_analyze(analyze_source, g, series_csv, error_trace);
    if (*batch) return cmd_batch(batch_list, g);
    if (*gaps) return cmd_gaps(gap_sources, g);
    if (*circuit) return cmd_circuit(circuit_source, g, shots, time_points, counts_json);
    if (*keyscore) return cmd_keyscore(key_source, keyfile, g);
    if (*export_graph) return cmd_export_graph(export_source, g);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ctqw::Error& e) {
    std::cout << ctqw::error_json(std::string(ctqw::to_string(e.kind())), e.what()).dump() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cout << ctqw::error_json("Internal", e.what()).dump() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

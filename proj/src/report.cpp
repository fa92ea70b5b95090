#include "ctqw/report.hpp"

#include "ctqw/error.hpp"
#include "ctqw/graph.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace ctqw {
namespace {

nlohmann::json centrality_json(const CentralityVector& c) {
  const auto sum_one = c.normalized(Normalization::SumOne);
  const auto unit = c.normalized(Normalization::UnitEuclidean);
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < c.labels.size(); ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    rows.push_back({{"label", c.labels[i]}, {"sum_one", sum_one.scores(idx)}, {"unit_euclidean", unit.scores(idx)}});
  }
  return rows;
}

// JSON has no infinity; unbounded mixing times are written as null.
nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

AnalysisReport analyze_structure(const StructureModel& model, const AnalysisOptions& options) {
  AnalysisReport report;
  report.options = options;
  report.pdb_id = model.pdb_id;
  report.model_number = model.model_number;
  report.skipped_records = model.skipped_records;
  if (model.skipped_records > 0) {
    report.warnings.push_back(std::to_string(model.skipped_records) + " malformed coordinate records skipped");
  }

  const WeightedGraph graph = build_rin(model.residues, options.cutoff);
  report.n = graph.size();

  const auto power = eigenvector_centrality(graph, options.power_tol, options.power_max_iter);
  report.eigenvector = power.centrality;
  report.power_iterations = power.iterations;
  report.disconnected = power.disconnected;
  if (power.disconnected) {
    report.warnings.push_back("network is disconnected; eigenvector centrality computed on the largest component");
  }

  const auto eig = eigendecompose(graph.adjacency);
  const auto psi0 = uniform_state(graph.size());
  report.ctqw.labels = graph.labels;
  report.ctqw.scores = steady_state_analytic(eig, psi0);
  report.ctqw.scores /= report.ctqw.scores.sum();

  report.comparison = compare_rankings(report.eigenvector, report.ctqw, options.k, options.correlation_mode);
  report.gaps = gap_report(graph);
  report.lcc_n = report.gaps.component_size;
  if (report.gaps.reducible) report.warnings.push_back("transition operator is reducible");

  try {
    report.convergence = convergence_time(eig, psi0, options.convergence_tol, options.grid_step, options.t_max);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotConvergedWithin) throw;
    report.warnings.push_back(e.what());
  }
  return report;
}

std::string correlation_mode_name(CorrelationMode mode) {
  return mode == CorrelationMode::FullVector ? "full-vector" : "padded-union";
}

nlohmann::json options_to_json(const AnalysisOptions& o) {
  std::string chains;
  for (char c : o.selection.chains) chains += c;
  return {
      {"cutoff_A", o.cutoff},
      {"chains", o.selection.chains.empty() ? nlohmann::json("all") : nlohmann::json(chains)},
      {"include_mse", o.selection.include_mse},
      {"model", "first"},
      {"k", o.k},
      {"correlation_mode", correlation_mode_name(o.correlation_mode)},
      {"power_tol", o.power_tol},
      {"power_max_iter", o.power_max_iter},
      {"convergence_tol", o.convergence_tol},
      {"grid_step_A2", o.grid_step},
      {"t_max_A2", o.t_max},
  };
}

nlohmann::json to_json(const SpectralGapReport& g) {
  return {{"delta_cl", g.delta_cl},
          {"delta_q", g.delta_q},
          {"difference", g.difference},
          {"mixing_cl", finite_or_null(g.mixing_cl)},
          {"mixing_q", finite_or_null(g.mixing_q)},
          {"component_size", g.component_size},
          {"reducible", g.reducible}};
}

nlohmann::json to_json(const AnalysisReport& r) {
  nlohmann::json convergence;
  if (r.convergence) {
    convergence = {{"t_star_A2", r.convergence->t_star},
                   {"tolerance", r.convergence->tolerance},
                   {"grid_step_A2", r.convergence->grid_step},
                   {"final_error", r.convergence->errors.empty() ? 0.0 : r.convergence->errors.back().second}};
    if (r.options.include_error_trace) {
      nlohmann::json trace = nlohmann::json::array();
      for (const auto& [t, err] : r.convergence->errors) trace.push_back({t, err});
      convergence["error_trace"] = std::move(trace);
    }
  }
  return {
      {"pdb_id", r.pdb_id},
      {"source", r.source},
      {"tool_version", kToolVersion},
      {"selection", {{"model_number", r.model_number}, {"skipped_records", r.skipped_records}}},
      {"parameters", options_to_json(r.options)},
      {"n", r.n},
      {"lcc_n", r.lcc_n},
      {"power_iterations", r.power_iterations},
      {"centrality", {{"eigenvector", centrality_json(r.eigenvector)}, {"ctqw", centrality_json(r.ctqw)}}},
      {"comparison",
       {{"spearman", r.comparison.spearman},
        {"kendall", r.comparison.kendall},
        {"overlap_k", r.comparison.overlap_k},
        {"jaccard_k", r.comparison.jaccard_k},
        {"k", r.comparison.k},
        {"mode", correlation_mode_name(r.comparison.mode)},
        {"top_eigenvector", r.comparison.top_a},
        {"top_ctqw", r.comparison.top_b}}},
      {"gaps", to_json(r.gaps)},
      {"convergence", convergence},
      {"warnings", r.warnings},
  };
}

nlohmann::json error_json(const std::string& kind, const std::string& message) {
  return {{"error", {{"kind", kind}, {"message", message}}}};
}

std::string format_sig6(double value) {
  if (!std::isfinite(value)) return value > 0 ? "inf" : (value < 0 ? "-inf" : "nan");
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.6g", value);
  return buffer;
}

std::string batch_csv_header() {
  return "pdb_id,spearman,kendall,overlap,jaccard,t_star,delta_cl,delta_q,n,lcc_n,error";
}

std::string batch_csv_row(const AnalysisReport& r) {
  std::ostringstream row;
  row << csv_escape(r.pdb_id) << ',' << format_sig6(r.comparison.spearman) << ','
      << format_sig6(r.comparison.kendall) << ',' << format_sig6(r.comparison.overlap_k) << ','
      << format_sig6(r.comparison.jaccard_k) << ','
      << (r.convergence ? format_sig6(r.convergence->t_star) : std::string()) << ','
      << format_sig6(r.gaps.delta_cl) << ',' << format_sig6(r.gaps.delta_q) << ',' << r.n << ',' << r.lcc_n
      << ',';
  if (!r.convergence) row << "NotConvergedWithin";
  return row.str();
}

std::string batch_csv_error_row(const std::string& pdb_id, const std::string& error) {
  return csv_escape(pdb_id) + ",,,,,,,,,," + csv_escape(error);
}

}  // namespace ctqw

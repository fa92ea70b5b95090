#pragma once

#include "ctqw/metrics.hpp"
#include "ctqw/pdb.hpp"
#include "ctqw/spectral.hpp"
#include "ctqw/transition.hpp"
#include "ctqw/walk.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace ctqw {

inline constexpr const char* kToolVersion = "0.1.0";

struct AnalysisOptions {
  double cutoff = kDefaultCutoff;
  ChainSelection selection;
  int k = kDefaultTopK;
  CorrelationMode correlation_mode = CorrelationMode::PaddedUnion;
  double power_tol = 1e-6;
  int power_max_iter = 1000;
  double convergence_tol = kDefaultConvergenceTol;
  double grid_step = kDefaultGridStep;
  double t_max = kDefaultConvergenceTMax;
  bool include_error_trace = false;
};

/// Everything computed for one structure, plus the effective parameters.
struct AnalysisReport {
  std::string pdb_id;
  std::string source;
  int model_number = 1;
  std::size_t skipped_records = 0;
  Eigen::Index n = 0;
  Eigen::Index lcc_n = 0;
  int power_iterations = 0;
  bool disconnected = false;
  CentralityVector eigenvector;
  CentralityVector ctqw;
  RankingComparison comparison;
  SpectralGapReport gaps;
  /// Empty when the Cesaro mean did not converge within t_max.
  std::optional<ConvergenceReport> convergence;
  std::vector<std::string> warnings;
  AnalysisOptions options;
};

AnalysisReport analyze_structure(const StructureModel& model, const AnalysisOptions& options = {});

nlohmann::json options_to_json(const AnalysisOptions& options);
nlohmann::json to_json(const AnalysisReport& report);
nlohmann::json to_json(const SpectralGapReport& gaps);
nlohmann::json error_json(const std::string& kind, const std::string& message);

std::string correlation_mode_name(CorrelationMode mode);

/// Fixed six-significant-digit rendering used in CSV output.
std::string format_sig6(double value);

/// Batch table columns.
std::string batch_csv_header();
std::string batch_csv_row(const AnalysisReport& report);
std::string batch_csv_error_row(const std::string& pdb_id, const std::string& error);

}  // namespace ctqw

#pragma once

#include "ctqw/spectral.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace ctqw {

inline constexpr int kDefaultTopK = 10;

/// Average ranks (1-based) with ties sharing the mean of their positions.
/// Ascending: the smallest value gets rank 1.
Eigen::VectorXd average_ranks(const Eigen::Ref<const Eigen::VectorXd>& x);

/// Pearson correlation of average ranks. Throws Error(DegenerateInput) on a
/// length mismatch, fewer than two samples, or a constant input.
double spearman_rho(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y);

struct PairCounts {
  std::int64_t concordant = 0;
  std::int64_t discordant = 0;
  /// Pairs tied in x only / y only; pairs tied in both are excluded.
  std::int64_t ties_x = 0;
  std::int64_t ties_y = 0;
};

/// Pair classification in O(n log n) by sorting and merge-counting.
PairCounts kendall_pair_counts(const Eigen::Ref<const Eigen::VectorXd>& x,
                               const Eigen::Ref<const Eigen::VectorXd>& y);

/// tau-b = (C - D) / sqrt((C + D + Tx)(C + D + Ty)).
double tau_b(const PairCounts& counts);

double kendall_tau(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y);

/// Labels of the min(k, n) highest scores, best first; equal scores order by
/// ascending label.
std::vector<std::string> top_k(const CentralityVector& c, int k = kDefaultTopK);

/// |a ∩ b| / k
double overlap_at_k(const std::vector<std::string>& a, const std::vector<std::string>& b, int k);
/// |a ∩ b| / |a ∪ b|
double jaccard_at_k(const std::vector<std::string>& a, const std::vector<std::string>& b, int k);

struct PaddedRanks {
  /// a's entries in order, then b's entries missing from a.
  std::vector<std::string> union_labels;
  Eigen::VectorXd ranks_a;
  Eigen::VectorXd ranks_b;
};

/// 1-based position in each list, or k + 1 when absent.
PaddedRanks padded_union_ranks(const std::vector<std::string>& a, const std::vector<std::string>& b, int k);

enum class CorrelationMode { FullVector, PaddedUnion };

struct RankingComparison {
  double spearman = 0.0;
  double kendall = 0.0;
  double overlap_k = 0.0;
  double jaccard_k = 0.0;
  int k = kDefaultTopK;
  CorrelationMode mode = CorrelationMode::FullVector;
  std::vector<std::string> top_a;
  std::vector<std::string> top_b;
};

/// Rank and set agreement between two centralities over the same labels.
/// In padded-union mode the correlations use the padded top-k ranks
/// (negated, so rank 1 is the largest) instead of the full score vectors.
RankingComparison compare_rankings(const CentralityVector& a, const CentralityVector& b, int k = kDefaultTopK,
                                   CorrelationMode mode = CorrelationMode::FullVector);

struct KeyScoreResult {
  double score = 0.0;
  double baseline = 0.0;
  std::vector<std::string> key_set;
};

/// Percentage of sum-one centrality mass on `keys`; baseline is 100 |K| / n.
/// Throws Error(UnknownKeyLabels) naming every key absent from the labels.
KeyScoreResult key_score(const CentralityVector& c, const std::vector<std::string>& keys);

/// One label per line; blank lines and '#' comments are skipped.
std::vector<std::string> parse_key_file(const std::string& text);

}  // namespace ctqw

#include "ctqw/metrics.hpp"

#include "ctqw/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace ctqw {
namespace {

void require_pair(Eigen::Index nx, Eigen::Index ny) {
  if (nx != ny) throw Error(ErrorKind::DegenerateInput, "score vectors differ in length");
  if (nx < 2) throw Error(ErrorKind::DegenerateInput, "at least two samples are required");
}

std::int64_t tied_pairs(std::int64_t run) { return run * (run - 1) / 2; }

// Inversions (i < j with v_i > v_j) by bottom-up merge sort; equal values
// are not inversions.
std::int64_t count_inversions(std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<double> buffer(n);
  std::int64_t inversions = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo < n; lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, n);
      const std::size_t hi = std::min(lo + 2 * width, n);
      std::size_t i = lo, j = mid, out = lo;
      while (i < mid && j < hi) {
        if (v[j] < v[i]) {
          inversions += static_cast<std::int64_t>(mid - i);
          buffer[out++] = v[j++];
        } else {
          buffer[out++] = v[i++];
        }
      }
      while (i < mid) buffer[out++] = v[i++];
      while (j < hi) buffer[out++] = v[j++];
    }
    v.swap(buffer);
  }
  return inversions;
}

}  // namespace

Eigen::VectorXd average_ranks(const Eigen::Ref<const Eigen::VectorXd>& x) {
  const auto n = x.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return x(a) < x(b); });
  Eigen::VectorXd ranks(n);
  Eigen::Index i = 0;
  while (i < n) {
    Eigen::Index j = i;
    while (j + 1 < n && x(order[j + 1]) == x(order[i])) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (Eigen::Index k = i; k <= j; ++k) ranks(order[k]) = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman_rho(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y) {
  require_pair(x.size(), y.size());
  const Eigen::VectorXd rx = average_ranks(x);
  const Eigen::VectorXd ry = average_ranks(y);
  const Eigen::VectorXd cx = rx.array() - rx.mean();
  const Eigen::VectorXd cy = ry.array() - ry.mean();
  const double sx = cx.squaredNorm();
  const double sy = cy.squaredNorm();
  if (sx == 0.0 || sy == 0.0) throw Error(ErrorKind::DegenerateInput, "constant input has no ranking");
  return std::clamp(cx.dot(cy) / std::sqrt(sx * sy), -1.0, 1.0);
}

PairCounts kendall_pair_counts(const Eigen::Ref<const Eigen::VectorXd>& x,
                               const Eigen::Ref<const Eigen::VectorXd>& y) {
  require_pair(x.size(), y.size());
  const auto n = x.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) {
    return x(a) < x(b) || (x(a) == x(b) && y(a) < y(b));
  });

  std::int64_t tied_x = 0;
  std::int64_t tied_xy = 0;
  std::int64_t run_x = 1;
  std::int64_t run_xy = 1;
  for (Eigen::Index k = 1; k < n; ++k) {
    const auto prev = order[k - 1];
    const auto cur = order[k];
    if (x(cur) == x(prev)) {
      ++run_x;
      if (y(cur) == y(prev)) {
        ++run_xy;
      } else {
        tied_xy += tied_pairs(run_xy);
        run_xy = 1;
      }
    } else {
      tied_x += tied_pairs(run_x);
      tied_xy += tied_pairs(run_xy);
      run_x = 1;
      run_xy = 1;
    }
  }
  tied_x += tied_pairs(run_x);
  tied_xy += tied_pairs(run_xy);

  std::vector<double> ys(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) ys[k] = y(order[k]);
  const std::int64_t discordant = count_inversions(ys);

  // ys is now sorted; count ties in y.
  std::int64_t tied_y = 0;
  std::int64_t run_y = 1;
  for (std::size_t k = 1; k < ys.size(); ++k) {
    if (ys[k] == ys[k - 1]) {
      ++run_y;
    } else {
      tied_y += tied_pairs(run_y);
      run_y = 1;
    }
  }
  tied_y += tied_pairs(run_y);

  const std::int64_t total = tied_pairs(n);
  PairCounts counts;
  counts.discordant = discordant;
  counts.concordant = total - tied_x - tied_y + tied_xy - discordant;
  counts.ties_x = tied_x - tied_xy;
  counts.ties_y = tied_y - tied_xy;
  return counts;
}

double tau_b(const PairCounts& c) {
  const double cd = static_cast<double>(c.concordant + c.discordant);
  const double denom = std::sqrt((cd + static_cast<double>(c.ties_x)) * (cd + static_cast<double>(c.ties_y)));
  if (denom == 0.0) throw Error(ErrorKind::DegenerateInput, "all pairs tied; tau is undefined");
  return static_cast<double>(c.concordant - c.discordant) / denom;
}

double kendall_tau(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y) {
  return tau_b(kendall_pair_counts(x, y));
}

std::vector<std::string> top_k(const CentralityVector& c, int k) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "k must be at least 1");
  std::vector<Eigen::Index> order(c.labels.size());
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) {
    if (c.scores(a) != c.scores(b)) return c.scores(a) > c.scores(b);
    return c.labels[a] < c.labels[b];
  });
  const auto count = std::min<std::size_t>(static_cast<std::size_t>(k), order.size());
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(c.labels[order[i]]);
  return out;
}

namespace {

std::size_t intersection_size(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const std::set<std::string> sa(a.begin(), a.end());
  std::set<std::string> seen;
  std::size_t shared = 0;
  for (const auto& label : b) {
    if (sa.count(label) && seen.insert(label).second) ++shared;
  }
  return shared;
}

}  // namespace

double overlap_at_k(const std::vector<std::string>& a, const std::vector<std::string>& b, int k) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "k must be at least 1");
  return static_cast<double>(intersection_size(a, b)) / static_cast<double>(k);
}

double jaccard_at_k(const std::vector<std::string>& a, const std::vector<std::string>& b, int k) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "k must be at least 1");
  std::set<std::string> all(a.begin(), a.end());
  all.insert(b.begin(), b.end());
  if (all.empty()) return 1.0;
  return static_cast<double>(intersection_size(a, b)) / static_cast<double>(all.size());
}

PaddedRanks padded_union_ranks(const std::vector<std::string>& a, const std::vector<std::string>& b, int k) {
  PaddedRanks out;
  std::map<std::string, int> pos_a, pos_b;
  for (std::size_t i = 0; i < a.size(); ++i) pos_a.emplace(a[i], static_cast<int>(i) + 1);
  for (std::size_t i = 0; i < b.size(); ++i) pos_b.emplace(b[i], static_cast<int>(i) + 1);
  std::set<std::string> seen;
  for (const auto& label : a) {
    if (seen.insert(label).second) out.union_labels.push_back(label);
  }
  for (const auto& label : b) {
    if (seen.insert(label).second) out.union_labels.push_back(label);
  }
  const auto m = static_cast<Eigen::Index>(out.union_labels.size());
  out.ranks_a.resize(m);
  out.ranks_b.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& label = out.union_labels[i];
    const auto ia = pos_a.find(label);
    const auto ib = pos_b.find(label);
    out.ranks_a(i) = ia == pos_a.end() ? k + 1 : ia->second;
    out.ranks_b(i) = ib == pos_b.end() ? k + 1 : ib->second;
  }
  return out;
}

RankingComparison compare_rankings(const CentralityVector& a, const CentralityVector& b, int k,
                                   CorrelationMode mode) {
  if (a.labels != b.labels) throw Error(ErrorKind::DimensionMismatch, "centralities cover different residues");
  RankingComparison out;
  out.mode = mode;
  out.k = std::min<int>(k, static_cast<int>(a.labels.size()));
  out.top_a = top_k(a, out.k);
  out.top_b = top_k(b, out.k);
  out.overlap_k = overlap_at_k(out.top_a, out.top_b, out.k);
  out.jaccard_k = jaccard_at_k(out.top_a, out.top_b, out.k);
  if (mode == CorrelationMode::FullVector) {
    out.spearman = spearman_rho(a.scores, b.scores);
    out.kendall = kendall_tau(a.scores, b.scores);
  } else {
    const auto padded = padded_union_ranks(out.top_a, out.top_b, out.k);
    out.spearman = spearman_rho(-padded.ranks_a, -padded.ranks_b);
    out.kendall = kendall_tau(-padded.ranks_a, -padded.ranks_b);
  }
  return out;
}

KeyScoreResult key_score(const CentralityVector& c, const std::vector<std::string>& keys) {
  if (keys.empty()) throw Error(ErrorKind::InvalidArgument, "key set is empty");
  std::map<std::string, Eigen::Index> index;
  for (std::size_t i = 0; i < c.labels.size(); ++i) index.emplace(c.labels[i], static_cast<Eigen::Index>(i));

  std::vector<std::string> unknown;
  std::set<std::string> unique;
  for (const auto& key : keys) {
    if (!index.count(key)) unknown.push_back(key);
    unique.insert(key);
  }
  if (!unknown.empty()) {
    std::ostringstream msg;
    msg << "key labels not in structure:";
    for (const auto& u : unknown) msg << ' ' << u;
    throw Error(ErrorKind::UnknownKeyLabels, msg.str());
  }
  const double total = c.scores.sum();
  if (!(total > 0)) throw Error(ErrorKind::DegenerateInput, "centrality has no mass");

  KeyScoreResult result;
  result.key_set.assign(unique.begin(), unique.end());
  double mass = 0.0;
  for (const auto& key : result.key_set) mass += c.scores(index.at(key));
  result.score = 100.0 * mass / total;
  result.baseline = 100.0 * static_cast<double>(unique.size()) / static_cast<double>(c.labels.size());
  return result;
}

std::vector<std::string> parse_key_file(const std::string& text) {
  std::vector<std::string> keys;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    keys.push_back(line.substr(first, last - first + 1));
  }
  return keys;
}

}  // namespace ctqw

#pragma once

#include "ctqw/error.hpp"
#include "ctqw/pdb.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace ctqw {

/// Undirected weighted residue-interaction network. The adjacency is
/// symmetric with a zero diagonal; weights are in inverse square angstroms.
template <typename Scalar>
struct BasicWeightedGraph {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  std::vector<std::string> labels;
  Matrix adjacency;

  Eigen::Index size() const { return adjacency.rows(); }

  /// Weighted degrees d_i = sum_j A_ij.
  Vector degrees() const { return adjacency.rowwise().sum(); }

  Eigen::Index edge_count() const {
    return (adjacency.array() > Scalar(0)).count() / 2;
  }
};

using WeightedGraph = BasicWeightedGraph<double>;

inline constexpr double kDefaultCutoff = 8.0;

/// Contact network over alpha carbons: an edge joins residues whose distance
/// is strictly below the cutoff, weighted 1/d^2. Node order follows input.
template <typename Scalar = double>
BasicWeightedGraph<Scalar> build_rin(const std::vector<ResidueRecord>& residues,
                                     Scalar cutoff = Scalar(kDefaultCutoff)) {
  if (residues.empty()) throw Error(ErrorKind::InvalidArgument, "no residues to build a network from");
  const auto n = static_cast<Eigen::Index>(residues.size());

  std::set<std::tuple<char, int, char>> keys;
  for (const auto& r : residues) {
    if (!r.ca_position.allFinite()) {
      throw Error(ErrorKind::InvalidArgument, "non-finite coordinates for residue " + r.label());
    }
    if (!keys.emplace(r.chain_id, r.res_seq, r.insertion_code.value_or(' ')).second) {
      throw Error(ErrorKind::DuplicateResidueKey, "duplicate residue key " + r.label());
    }
  }

  BasicWeightedGraph<Scalar> g;
  g.labels.reserve(residues.size());
  for (const auto& r : residues) g.labels.push_back(r.label());
  g.adjacency = BasicWeightedGraph<Scalar>::Matrix::Zero(n, n);

  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Matrix<Scalar, 3, 1> pi = residues[i].ca_position.template cast<Scalar>();
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Eigen::Matrix<Scalar, 3, 1> pj = residues[j].ca_position.template cast<Scalar>();
      const Scalar d2 = (pi - pj).squaredNorm();
      if (d2 == Scalar(0)) {
        throw Error(ErrorKind::CoincidentResidues,
                    "residues " + g.labels[i] + " and " + g.labels[j] + " share coordinates");
      }
      if (std::sqrt(d2) < cutoff) {
        const Scalar w = Scalar(1) / d2;
        g.adjacency(i, j) = w;
        g.adjacency(j, i) = w;
      }
    }
  }
  return g;
}

/// Connected-component id per node, numbered in order of each component's
/// smallest node index.
template <typename Scalar>
std::vector<int> connected_components(const BasicWeightedGraph<Scalar>& g) {
  const auto n = g.size();
  std::vector<int> component(static_cast<std::size_t>(n), -1);
  int next = 0;
  std::vector<Eigen::Index> stack;
  for (Eigen::Index start = 0; start < n; ++start) {
    if (component[start] >= 0) continue;
    component[start] = next;
    stack.push_back(start);
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (Eigen::Index v = 0; v < n; ++v) {
        if (g.adjacency(u, v) > Scalar(0) && component[v] < 0) {
          component[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return component;
}

template <typename Scalar>
bool is_connected(const BasicWeightedGraph<Scalar>& g) {
  const auto comp = connected_components(g);
  for (int c : comp) {
    if (c != 0) return false;
  }
  return true;
}

template <typename Scalar>
struct ComponentSubgraph {
  BasicWeightedGraph<Scalar> graph;
  /// old index -> new index, -1 for dropped nodes.
  std::vector<Eigen::Index> index_map;
  /// new index -> old index.
  std::vector<Eigen::Index> members;
};

/// Induced subgraph on the largest connected component. Equal-size
/// components resolve to the one holding the smallest node index.
template <typename Scalar>
ComponentSubgraph<Scalar> largest_connected_component(const BasicWeightedGraph<Scalar>& g) {
  const auto comp = connected_components(g);
  std::map<int, Eigen::Index> sizes;
  for (int c : comp) ++sizes[c];
  int best = 0;
  Eigen::Index best_size = -1;
  // Components are numbered by smallest member, so the first maximum wins ties.
  for (const auto& [c, size] : sizes) {
    if (size > best_size) {
      best = c;
      best_size = size;
    }
  }

  ComponentSubgraph<Scalar> out;
  out.index_map.assign(comp.size(), -1);
  for (std::size_t i = 0; i < comp.size(); ++i) {
    if (comp[i] == best) {
      out.index_map[i] = static_cast<Eigen::Index>(out.members.size());
      out.members.push_back(static_cast<Eigen::Index>(i));
    }
  }
  const auto m = static_cast<Eigen::Index>(out.members.size());
  out.graph.adjacency.resize(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    out.graph.labels.push_back(g.labels[out.members[a]]);
    for (Eigen::Index b = 0; b < m; ++b) {
      out.graph.adjacency(a, b) = g.adjacency(out.members[a], out.members[b]);
    }
  }
  return out;
}

/// L = D - A.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> laplacian(
    const Eigen::MatrixBase<Derived>& adjacency) {
  using Matrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix L = -adjacency;
  L.diagonal() += adjacency.rowwise().sum();
  return L;
}

template <typename Scalar>
auto laplacian(const BasicWeightedGraph<Scalar>& g) {
  return laplacian(g.adjacency);
}

/// Edge list as CSV with header "label_i,label_j,distance_A,weight".
template <typename Scalar>
void write_edge_csv(std::ostream& out, const BasicWeightedGraph<Scalar>& g) {
  out << "label_i,label_j,distance_A,weight\n";
  const auto old_precision = out.precision(10);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    for (Eigen::Index j = i + 1; j < g.size(); ++j) {
      const Scalar w = g.adjacency(i, j);
      if (w > Scalar(0)) {
        out << g.labels[i] << ',' << g.labels[j] << ',' << std::sqrt(Scalar(1) / w) << ',' << w
            << '\n';
      }
    }
  }
  out.precision(old_precision);
}

}  // namespace ctqw

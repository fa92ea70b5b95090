#pragma once

#include "ctqw/error.hpp"
#include "ctqw/graph.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace ctqw {

/// Full symmetric eigendecomposition with eigenvalues ascending and
/// eigenvectors as orthonormal columns. `groups` partitions the indices into
/// runs of numerically equal eigenvalues, in ascending eigenvalue order.
template <typename Scalar>
struct EigenSystem {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Vector eigenvalues;
  Matrix eigenvectors;
  std::vector<std::vector<Eigen::Index>> groups;
  Scalar degeneracy_tol = Scalar(0);

  Eigen::Index size() const { return eigenvalues.size(); }

  bool has_degeneracy() const { return groups.size() < static_cast<std::size_t>(size()); }

  /// Orthogonal projector onto the eigenspace of group `g`.
  Matrix projector(std::size_t g) const {
    Matrix basis(size(), static_cast<Eigen::Index>(groups[g].size()));
    for (std::size_t k = 0; k < groups[g].size(); ++k) basis.col(k) = eigenvectors.col(groups[g][k]);
    return basis * basis.transpose();
  }
};

template <typename Scalar>
Scalar default_degeneracy_tol(Scalar spectral_radius) {
  return Scalar(1e-9) * std::max(Scalar(1), spectral_radius);
}

/// Chains sorted eigenvalues into groups: consecutive values closer than
/// `tol` share a group (transitive closure).
template <typename Derived>
std::vector<std::vector<Eigen::Index>> group_degenerate(const Eigen::MatrixBase<Derived>& sorted_values,
                                                        typename Derived::Scalar tol) {
  std::vector<std::vector<Eigen::Index>> groups;
  for (Eigen::Index i = 0; i < sorted_values.size(); ++i) {
    if (groups.empty() || sorted_values(i) - sorted_values(i - 1) > tol) groups.emplace_back();
    groups.back().push_back(i);
  }
  return groups;
}

/// Throws Error(NotSymmetric) beyond 1e-12 absolute asymmetry and
/// Error(ConvergenceFailure) if the solver fails. A negative tolerance selects
/// the default 1e-9 * max(1, spectral radius).
template <typename Derived>
EigenSystem<typename Derived::Scalar> eigendecompose(const Eigen::MatrixBase<Derived>& a,
                                                     typename Derived::Scalar degeneracy_tol = -1) {
  using Scalar = typename Derived::Scalar;
  if (a.rows() != a.cols()) throw Error(ErrorKind::DimensionMismatch, "matrix is not square");
  if (a.size() > 0 && (a - a.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-12)) {
    throw Error(ErrorKind::NotSymmetric, "matrix is not symmetric");
  }
  EigenSystem<Scalar> sys;
  if (a.rows() == 0) return sys;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> solver(a);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::ConvergenceFailure, "symmetric eigensolver did not converge");
  }
  sys.eigenvalues = solver.eigenvalues();
  sys.eigenvectors = solver.eigenvectors();
  const Scalar radius = sys.eigenvalues.cwiseAbs().maxCoeff();
  sys.degeneracy_tol = degeneracy_tol < Scalar(0) ? default_degeneracy_tol(radius) : degeneracy_tol;
  sys.groups = group_degenerate(sys.eigenvalues, sys.degeneracy_tol);
  return sys;
}

enum class Normalization { SumOne, UnitEuclidean };

/// Per-residue scores with a declared normalization.
struct CentralityVector {
  std::vector<std::string> labels;
  Eigen::VectorXd scores;
  Normalization normalization = Normalization::SumOne;

  CentralityVector normalized(Normalization target) const {
    CentralityVector out = *this;
    const double scale = target == Normalization::SumOne ? scores.sum() : scores.norm();
    if (scale > 0) out.scores /= scale;
    out.normalization = target;
    return out;
  }
};

/// Flips the sign so the largest-magnitude entry is positive.
template <typename Derived>
void fix_sign(Eigen::MatrixBase<Derived>& v) {
  Eigen::Index idx = 0;
  v.cwiseAbs().maxCoeff(&idx);
  if (v(idx) < 0) v = -v;
}

struct PowerIterationResult {
  CentralityVector centrality;
  int iterations = 0;
  /// Nodes outside the largest component were zero-filled.
  bool disconnected = false;
};

namespace detail {

// Shifted power iteration x <- (A + I) x, Euclidean-normalized each step.
// The shift keeps bipartite graphs from oscillating without changing the
// eigenvectors.
inline std::optional<std::pair<Eigen::VectorXd, int>> power_iterate(const Eigen::MatrixXd& a,
                                                                    double tol, int max_iter) {
  const auto n = a.rows();
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::VectorXd next = a * x + x;
    const double norm = next.norm();
    if (norm == 0.0) return std::pair{x, it};
    next /= norm;
    const double change = (next - x).cwiseAbs().maxCoeff();
    x = std::move(next);
    if (change < tol) return std::pair{x, it};
  }
  return std::nullopt;
}

}  // namespace detail

/// Eigenvector centrality by power iteration from the uniform vector,
/// converged when the max-norm change of the iterate drops below `tol`.
/// Disconnected input is computed on the largest component and zero-filled
/// elsewhere. Throws Error(NotConverged) after `max_iter` steps.
inline PowerIterationResult eigenvector_centrality(const WeightedGraph& g, double tol = 1e-6,
                                                   int max_iter = 1000) {
  PowerIterationResult result;
  result.centrality.labels = g.labels;
  const auto n = g.size();
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "empty graph");

  const auto lcc = largest_connected_component(g);
  result.disconnected = lcc.graph.size() != n;
  const auto converged = detail::power_iterate(lcc.graph.adjacency, tol, max_iter);
  if (!converged) {
    throw Error(ErrorKind::NotConverged,
                "power iteration did not converge in " + std::to_string(max_iter) + " iterations");
  }
  result.iterations = converged->second;
  Eigen::VectorXd scores = Eigen::VectorXd::Zero(n);
  for (std::size_t k = 0; k < lcc.members.size(); ++k) {
    scores(lcc.members[k]) = std::max(0.0, converged->first(static_cast<Eigen::Index>(k)));
  }
  result.centrality.scores = scores / scores.sum();
  result.centrality.normalization = Normalization::SumOne;
  return result;
}

/// Leading eigenvector from a full decomposition, sign-fixed; the
/// independent route to the power-iteration result.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> leading_eigenvector(const EigenSystem<Scalar>& sys) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v = sys.eigenvectors.col(sys.size() - 1);
  fix_sign(v);
  return v;
}

}  // namespace ctqw

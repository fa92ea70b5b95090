#pragma once

#include "ctqw/error.hpp"
#include "ctqw/graph.hpp"
#include "ctqw/spectral.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace ctqw {

enum class StochasticKind { RowStochastic, DoublyStochastic };

struct StochasticMatrix {
  Eigen::MatrixXd entries;
  StochasticKind kind = StochasticKind::RowStochastic;
  /// Reversing measure (pi_i P_ij = pi_j P_ji), when known. Lets the
  /// spectrum be computed from a symmetric similarity transform.
  std::optional<Eigen::VectorXd> reversing_measure;
};

struct SpectralGap {
  double value = 0.0;
  /// Eigenvalue 1 is repeated, i.e. the chain is reducible.
  bool reducible = false;
};

struct SpectralGapReport {
  double delta_cl = 0.0;
  double delta_q = 0.0;
  double difference = 0.0;
  double mixing_cl = 0.0;
  double mixing_q = 0.0;
  Eigen::Index component_size = 0;
  bool reducible = false;
};

inline constexpr double kStochasticTol = 1e-9;

namespace detail {

inline void require_connected_positive(const WeightedGraph& g) {
  const auto d = g.degrees();
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (!(d(i) > 0) && g.size() > 1) {
      throw Error(ErrorKind::IsolatedNode, "node " + g.labels[i] + " has no edges");
    }
  }
  if (!is_connected(g)) {
    throw Error(ErrorKind::Disconnected, "graph is disconnected; pass its largest component");
  }
}

}  // namespace detail

/// P = D^{-1} A.
inline StochasticMatrix classical_transition(const WeightedGraph& g) {
  detail::require_connected_positive(g);
  StochasticMatrix m;
  m.kind = StochasticKind::RowStochastic;
  if (g.size() == 1) {
    m.entries = Eigen::MatrixXd::Identity(1, 1);
    m.reversing_measure = Eigen::VectorXd::Ones(1);
    return m;
  }
  const Eigen::VectorXd d = g.degrees();
  m.entries = d.cwiseInverse().asDiagonal() * g.adjacency;
  m.reversing_measure = d / d.sum();
  return m;
}

/// pi_i = d_i / sum_k d_k.
inline Eigen::VectorXd stationary_distribution(const WeightedGraph& g) {
  detail::require_connected_positive(g);
  if (g.size() == 1) return Eigen::VectorXd::Ones(1);
  const Eigen::VectorXd d = g.degrees();
  return d / d.sum();
}

/// Infinite-time average of |<i|exp(-iAt)|j>|^2: sum over eigenspaces of the
/// squared projector entries. Symmetric and doubly stochastic.
template <typename Scalar>
StochasticMatrix quantum_transition_matrix(const EigenSystem<Scalar>& eig) {
  StochasticMatrix m;
  m.kind = StochasticKind::DoublyStochastic;
  const auto n = eig.size();
  m.entries = Eigen::MatrixXd::Zero(n, n);
  if (!eig.has_degeneracy()) {
    const Eigen::MatrixXd w = eig.eigenvectors.cwiseAbs2().template cast<double>();
    m.entries.noalias() = w * w.transpose();
  } else {
    for (std::size_t g = 0; g < eig.groups.size(); ++g) {
      m.entries += eig.projector(g).cwiseAbs2().template cast<double>();
    }
  }
  return m;
}

/// Throws Error(NonStochastic) when entries are negative or rows (and, for
/// the doubly-stochastic kind, columns) do not sum to one.
inline void validate_stochastic(const StochasticMatrix& m, double tol = kStochasticTol) {
  const auto& e = m.entries;
  if (e.rows() != e.cols() || e.rows() == 0) throw Error(ErrorKind::NonStochastic, "matrix is not square");
  if (e.minCoeff() < -tol) throw Error(ErrorKind::NonStochastic, "negative transition probability");
  if ((e.rowwise().sum().array() - 1.0).abs().maxCoeff() > tol) {
    throw Error(ErrorKind::NonStochastic, "rows do not sum to one");
  }
  if (m.kind == StochasticKind::DoublyStochastic) {
    if ((e.colwise().sum().array() - 1.0).abs().maxCoeff() > tol) {
      throw Error(ErrorKind::NonStochastic, "columns do not sum to one");
    }
    if ((e - e.transpose()).cwiseAbs().maxCoeff() > tol) {
      throw Error(ErrorKind::NonStochastic, "doubly-stochastic operator is not symmetric");
    }
  }
}

/// Real spectrum of a stochastic operator. Symmetric input is decomposed
/// directly; a reversible chain goes through D^{1/2} P D^{-1/2}; anything
/// else uses a general solver and must come out real.
inline Eigen::VectorXd stochastic_spectrum(const StochasticMatrix& m) {
  const auto& e = m.entries;
  const bool symmetric = (e - e.transpose()).cwiseAbs().maxCoeff() <= kStochasticTol;
  if (symmetric) {
    const Eigen::MatrixXd sym = 0.5 * (e + e.transpose());
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym, Eigen::EigenvaluesOnly).eigenvalues();
  }
  if (m.reversing_measure) {
    const Eigen::VectorXd root = m.reversing_measure->cwiseSqrt();
    Eigen::MatrixXd s = root.asDiagonal() * e * root.cwiseInverse().asDiagonal();
    if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, s.cwiseAbs().maxCoeff())) {
      throw Error(ErrorKind::NonStochastic, "chain is not reversible under the supplied measure");
    }
    s = 0.5 * (s + s.transpose()).eval();
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s, Eigen::EigenvaluesOnly).eigenvalues();
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(e, false);
  const Eigen::VectorXcd values = solver.eigenvalues();
  if (values.imag().cwiseAbs().maxCoeff() > 1e-9) {
    throw Error(ErrorKind::NonStochastic, "transition operator has a complex spectrum");
  }
  Eigen::VectorXd real = values.real();
  std::sort(real.data(), real.data() + real.size());
  return real;
}

/// 1 - max_{k>=2} |lambda_k|, removing the single eigenvalue closest to 1.
/// A second eigenvalue within 1e-9 of 1 gives a zero gap flagged reducible.
inline SpectralGap spectral_gap(const StochasticMatrix& m) {
  validate_stochastic(m);
  const Eigen::VectorXd values = stochastic_spectrum(m);
  SpectralGap gap;
  if (values.size() == 1) {
    gap.value = 1.0;
    return gap;
  }
  Eigen::Index perron = 0;
  (values.array() - 1.0).abs().minCoeff(&perron);
  double second = 0.0;
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    if (k == perron) continue;
    if (std::abs(values(k) - 1.0) <= 1e-9) gap.reducible = true;
    second = std::max(second, std::abs(values(k)));
  }
  // Periodic chains put |lambda| = 1 at -1; roundoff must not turn that into
  // a tiny positive gap.
  const double raw = 1.0 - second;
  gap.value = gap.reducible || raw < 1e-12 ? 0.0 : std::min(raw, 1.0);
  return gap;
}

/// Classical and quantum gaps on the largest connected component.
inline SpectralGapReport gap_report(const WeightedGraph& g) {
  const auto lcc = largest_connected_component(g);
  SpectralGapReport report;
  report.component_size = lcc.graph.size();

  const auto classical = spectral_gap(classical_transition(lcc.graph));
  const auto quantum = spectral_gap(quantum_transition_matrix(eigendecompose(lcc.graph.adjacency)));
  report.delta_cl = classical.value;
  report.delta_q = quantum.value;
  report.reducible = classical.reducible || quantum.reducible;
  report.difference = report.delta_q - report.delta_cl;
  constexpr double inf = std::numeric_limits<double>::infinity();
  report.mixing_cl = report.delta_cl > 0 ? 1.0 / report.delta_cl : inf;
  report.mixing_q = report.delta_q > 0 ? 1.0 / report.delta_q : inf;
  return report;
}

}  // namespace ctqw

#pragma once

#include "ctqw/error.hpp"
#include "ctqw/graph.hpp"
#include "ctqw/spectral.hpp"
#include "ctqw/walk.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>

namespace ctqw {

/// Adjacency embedded in a 2^q register as [[A, 0], [0, 0]].
template <typename Scalar>
struct PaddedHamiltonian {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> matrix;
  Eigen::Index n_physical = 0;
  int qubits = 0;

  Eigen::Index dimension() const { return matrix.rows(); }
};

struct ShotDistribution {
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> counts;
  std::int64_t shots = 0;
  std::uint64_t seed = 0;
};

/// ceil(log2 n), at least one qubit.
inline int qubit_count(Eigen::Index n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "need at least one node");
  int q = 1;
  while ((Eigen::Index{1} << q) < n) ++q;
  return q;
}

template <typename Derived>
PaddedHamiltonian<typename Derived::Scalar> pad_hamiltonian(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (a.rows() != a.cols()) throw Error(ErrorKind::DimensionMismatch, "Hamiltonian is not square");
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-12)) {
    throw Error(ErrorKind::NotSymmetric, "Hamiltonian is not symmetric");
  }
  PaddedHamiltonian<Scalar> padded;
  padded.n_physical = a.rows();
  padded.qubits = qubit_count(a.rows());
  const Eigen::Index dim = Eigen::Index{1} << padded.qubits;
  padded.matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(dim, dim);
  padded.matrix.topLeftCorner(a.rows(), a.cols()) = a;
  return padded;
}

/// 1/sqrt(n) on the first n basis states, zero on the padding.
template <typename Scalar = double>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> prepare_physical_uniform(Eigen::Index n,
                                                                                Eigen::Index dim) {
  if (n < 1 || n > dim) throw Error(ErrorKind::InvalidArgument, "physical size must be in [1, dim]");
  Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> psi =
      Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>::Zero(dim);
  psi.head(n).setConstant(std::complex<Scalar>(Scalar(1) / std::sqrt(Scalar(n)), Scalar(0)));
  return psi;
}

/// Multinomial draw of `shots` samples. Deterministic for a given seed.
/// Throws Error(NotNormalized) unless probs sums to 1 within 1e-9.
ShotDistribution sample_shots(const Eigen::Ref<const Eigen::VectorXd>& probs, std::int64_t shots,
                              std::uint64_t seed);

/// Per-time-point seed derived from the run seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

struct CircuitOptions {
  int time_points = 40;
  double t_max = 20.0 * std::numbers::pi;
  /// Empty means exact probabilities.
  std::optional<std::int64_t> shots;
  std::uint64_t seed = 0;
};

/// t_l = l * t_max / L for l = 1..L.
inline Eigen::VectorXd circuit_time_grid(int time_points, double t_max) {
  if (time_points < 1) throw Error(ErrorKind::InvalidArgument, "time grid needs at least one point");
  Eigen::VectorXd t(time_points);
  for (int l = 1; l <= time_points; ++l) t(l - 1) = static_cast<double>(l) * t_max / time_points;
  return t;
}

struct CircuitRun {
  CentralityVector centrality;
  int qubits = 0;
  Eigen::Index dimension = 0;
  /// Largest probability seen on any padding state over the grid.
  double max_padding_probability = 0.0;
  /// Summed shot counts over the grid (shot mode only).
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> total_counts;
};

/// Padded register, physical-uniform start, evolution under exp(-i A_p t)
/// on the time grid, readout (exact or sampled), truncation to the physical
/// states, time average and renormalization.
CircuitRun run_ctqw_circuit(const WeightedGraph& g, const CircuitOptions& options = {});

inline CentralityVector circuit_ctqw_centrality(const WeightedGraph& g, const CircuitOptions& options = {}) {
  return run_ctqw_circuit(g, options).centrality;
}

/// Unpadded time-grid average of the same walk, for comparison with exact
/// circuit mode.
Eigen::VectorXd grid_average(const WeightedGraph& g, const Eigen::Ref<const Eigen::VectorXd>& times);

/// Bitstring of basis state `index` on `qubits` qubits, most significant first.
std::string basis_bitstring(Eigen::Index index, int qubits);

}  // namespace ctqw

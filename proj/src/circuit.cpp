#include "ctqw/circuit.hpp"

#include <algorithm>
#include <random>

namespace ctqw {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + 1));
}

ShotDistribution sample_shots(const Eigen::Ref<const Eigen::VectorXd>& probs, std::int64_t shots,
                              std::uint64_t seed) {
  if (shots < 1) throw Error(ErrorKind::InvalidArgument, "shots must be positive");
  if (probs.size() == 0 || probs.minCoeff() < -1e-12 || std::abs(probs.sum() - 1.0) > 1e-9) {
    throw Error(ErrorKind::NotNormalized, "shot probabilities must be non-negative and sum to one");
  }
  ShotDistribution out;
  out.shots = shots;
  out.seed = seed;
  out.counts = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>::Zero(probs.size());

  // Sequential conditional binomials give an exact multinomial draw.
  std::mt19937_64 rng(seed);
  std::int64_t remaining = shots;
  double mass_left = 1.0;
  for (Eigen::Index i = 0; i < probs.size() && remaining > 0; ++i) {
    const double p = std::max(0.0, probs(i));
    if (i + 1 == probs.size() || mass_left <= p) {
      out.counts(i) = remaining;
      remaining = 0;
      break;
    }
    const double ratio = std::clamp(p / mass_left, 0.0, 1.0);
    std::binomial_distribution<std::int64_t> draw(remaining, ratio);
    out.counts(i) = draw(rng);
    remaining -= out.counts(i);
    mass_left -= p;
  }
  return out;
}

CircuitRun run_ctqw_circuit(const WeightedGraph& g, const CircuitOptions& options) {
  if (options.shots && *options.shots < 1) throw Error(ErrorKind::InvalidArgument, "shots must be positive");
  const auto n = g.size();
  const auto padded = pad_hamiltonian(g.adjacency);
  const auto dim = padded.dimension();
  const auto eig = eigendecompose(padded.matrix);
  const auto psi0 = prepare_physical_uniform(n, dim);
  const Eigen::VectorXd times = circuit_time_grid(options.time_points, options.t_max);
  const TimeSeries ts = evolve_probabilities(eig, psi0, times);

  CircuitRun run;
  run.qubits = padded.qubits;
  run.dimension = dim;
  if (dim > n) run.max_padding_probability = ts.probs.rightCols(dim - n).maxCoeff();

  Eigen::MatrixXd readout;
  if (!options.shots) {
    readout = ts.probs;
  } else {
    readout.resize(ts.probs.rows(), dim);
    run.total_counts = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>::Zero(dim);
    for (Eigen::Index l = 0; l < ts.probs.rows(); ++l) {
      const Eigen::VectorXd p = ts.probs.row(l).transpose();
      const auto sample = sample_shots(p / p.sum(), *options.shots,
                                       derive_seed(options.seed, static_cast<std::uint64_t>(l)));
      run.total_counts += sample.counts;
      readout.row(l) = sample.counts.cast<double>().transpose() / static_cast<double>(*options.shots);
    }
  }

  run.centrality.labels = g.labels;
  run.centrality.scores = readout.leftCols(n).colwise().mean().transpose();
  run.centrality.scores /= run.centrality.scores.sum();
  run.centrality.normalization = Normalization::SumOne;
  return run;
}

Eigen::VectorXd grid_average(const WeightedGraph& g, const Eigen::Ref<const Eigen::VectorXd>& times) {
  const auto eig = eigendecompose(g.adjacency);
  const TimeSeries ts = evolve_probabilities(eig, uniform_state(g.size()), times);
  Eigen::VectorXd avg = ts.probs.colwise().mean().transpose();
  avg /= avg.sum();
  return avg;
}

std::string basis_bitstring(Eigen::Index index, int qubits) {
  std::string bits(static_cast<std::size_t>(qubits), '0');
  for (int b = 0; b < qubits; ++b) {
    if ((index >> b) & 1) bits[static_cast<std::size_t>(qubits - 1 - b)] = '1';
  }
  return bits;
}

}  // namespace ctqw

// Test-only oracles and generators. Nothing here calls the spectral routines
// under test.
#pragma once

#include "ctqw/graph.hpp"
#include "ctqw/pdb.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace ctqw::test {

inline std::filesystem::path data_dir() { return CTQW_TEST_DATA; }

inline std::optional<std::string> load_data(const std::string& name) {
  const auto path = data_dir() / name;
  if (!std::filesystem::exists(path)) return std::nullopt;
  return read_text_file(path);
}

inline WeightedGraph graph_from(const Eigen::MatrixXd& a) {
  WeightedGraph g;
  g.adjacency = a;
  for (Eigen::Index i = 0; i < a.rows(); ++i) g.labels.push_back("A:" + std::to_string(i + 1));
  return g;
}

inline WeightedGraph complete_graph(int n, double w = 1.0) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Constant(n, n, w);
  a.diagonal().setZero();
  return graph_from(a);
}

inline WeightedGraph path_graph(int n, double w = 1.0) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) a(i, i + 1) = a(i + 1, i) = w;
  return graph_from(a);
}

inline WeightedGraph cycle_graph(int n, double w = 1.0) {
  WeightedGraph g = path_graph(n, w);
  g.adjacency(0, n - 1) = g.adjacency(n - 1, 0) = w;
  return g;
}

inline WeightedGraph star_graph(int leaves, double w = 1.0) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(leaves + 1, leaves + 1);
  for (int i = 1; i <= leaves; ++i) a(0, i) = a(i, 0) = w;
  return graph_from(a);
}

/// Connected random weighted graph: a random spanning tree plus extra edges,
/// weights drawn in [w_lo, w_hi].
inline WeightedGraph random_connected_graph(std::mt19937_64& rng, int n, double edge_prob = 0.3,
                                            double w_lo = 1.0 / 64, double w_hi = 0.25) {
  std::uniform_real_distribution<double> weight(w_lo, w_hi);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> parent(0, i - 1);
    const int j = parent(rng);
    a(i, j) = a(j, i) = weight(rng);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (a(i, j) == 0 && coin(rng) < edge_prob) a(i, j) = a(j, i) = weight(rng);
    }
  }
  return graph_from(a);
}

/// |exp(-i H t) psi0|^2 through Eigen's dense matrix exponential.
inline Eigen::VectorXd expm_probabilities(const Eigen::MatrixXd& h, const Eigen::VectorXcd& psi0, double t) {
  const Eigen::MatrixXcd generator = std::complex<double>(0.0, -t) * h.cast<std::complex<double>>();
  const Eigen::MatrixXcd u = generator.exp();
  return (u * psi0).cwiseAbs2();
}

/// Time average of P(t) by the trapezoidal rule on a uniform grid, using the
/// dense exponential of one step applied repeatedly.
inline Eigen::VectorXd expm_time_average(const Eigen::MatrixXd& h, const Eigen::VectorXcd& psi0, double horizon,
                                         double step) {
  const Eigen::MatrixXcd u =
      (std::complex<double>(0.0, -step) * h.cast<std::complex<double>>()).exp();
  Eigen::VectorXcd psi = psi0;
  Eigen::VectorXd prev = psi.cwiseAbs2();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(h.rows());
  const auto steps = static_cast<long>(horizon / step);
  for (long k = 0; k < steps; ++k) {
    psi = u * psi;
    const Eigen::VectorXd cur = psi.cwiseAbs2();
    sum += 0.5 * (prev + cur);
    prev = cur;
  }
  return sum / static_cast<double>(steps);
}

/// Time average of |<i|exp(-iHt)|j>|^2 over [0, horizon] by stepping the
/// full propagator.
inline Eigen::MatrixXd expm_transition_average(const Eigen::MatrixXd& h, double horizon, double step) {
  const auto n = h.rows();
  const Eigen::MatrixXcd u =
      (std::complex<double>(0.0, -step) * h.cast<std::complex<double>>()).exp();
  Eigen::MatrixXcd prop = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXd prev = prop.cwiseAbs2();
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  const auto steps = static_cast<long>(horizon / step);
  for (long k = 0; k < steps; ++k) {
    prop = u * prop;
    const Eigen::MatrixXd cur = prop.cwiseAbs2();
    sum += 0.5 * (prev + cur);
    prev = cur;
  }
  return sum / static_cast<double>(steps);
}

struct BruteForcePairs {
  std::int64_t concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
};

/// O(n^2) enumeration; pairs tied in both variables are dropped.
inline BruteForcePairs brute_force_pairs(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  BruteForcePairs c;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    for (Eigen::Index j = i + 1; j < x.size(); ++j) {
      const bool tx = x(i) == x(j);
      const bool ty = y(i) == y(j);
      if (tx && ty) continue;
      if (tx) {
        ++c.ties_x;
      } else if (ty) {
        ++c.ties_y;
      } else if ((x(i) - x(j)) * (y(i) - y(j)) > 0) {
        ++c.concordant;
      } else {
        ++c.discordant;
      }
    }
  }
  return c;
}

inline double brute_force_tau_b(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const auto c = brute_force_pairs(x, y);
  const double cd = static_cast<double>(c.concordant + c.discordant);
  return static_cast<double>(c.concordant - c.discordant) /
         std::sqrt((cd + static_cast<double>(c.ties_x)) * (cd + static_cast<double>(c.ties_y)));
}

inline std::string atom_line(const std::string& record, int serial, const std::string& atom, char altloc,
                             const std::string& res_name, char chain, int res_seq, char icode, double x, double y,
                             double z, double occupancy = 1.0) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%-6s%5d %-4s%c%3s %c%4d%c   %8.3f%8.3f%8.3f%6.2f%6.2f           C",
                record.c_str(), serial, atom.c_str(), altloc, res_name.c_str(), chain, res_seq, icode, x, y, z,
                occupancy, 10.0);
  return buf;
}

}  // namespace ctqw::test

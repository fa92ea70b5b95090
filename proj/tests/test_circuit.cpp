#include "support.hpp"

#include "ctqw/circuit.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace ctqw::test;

TEST_CASE("qubit counts") {
  CHECK(ctqw::qubit_count(1) == 1);
  CHECK(ctqw::qubit_count(2) == 1);
  CHECK(ctqw::qubit_count(8) == 3);
  CHECK(ctqw::qubit_count(9) == 4);
  CHECK(ctqw::qubit_count(129) == 8);
  CHECK(ctqw::qubit_count(512) == 9);
  CHECK(ctqw::qubit_count(513) == 10);
}

TEST_CASE("padding layout") {
  std::mt19937_64 rng(91);
  const auto g = random_connected_graph(rng, 9);
  const auto p = ctqw::pad_hamiltonian(g.adjacency);
  CHECK(p.qubits == 4);
  CHECK(p.dimension() == 16);
  CHECK(p.matrix.topLeftCorner(9, 9) == g.adjacency);
  CHECK(p.matrix.rightCols(7).isZero());
  CHECK(p.matrix.bottomRows(7).isZero());

  const auto psi = ctqw::prepare_physical_uniform(9, 16);
  CHECK((psi.head(9).real().array() - 1.0 / 3).abs().maxCoeff() < 1e-15);
  CHECK(psi.tail(7).isZero());
  CHECK(psi.squaredNorm() == doctest::Approx(1));
}

TEST_CASE("padding states are inert") {
  std::mt19937_64 rng(92);
  for (int n : {3, 5, 9, 13, 20}) {
    const auto g = random_connected_graph(rng, n);
    const auto p = ctqw::pad_hamiltonian(g.adjacency);
    const auto dim = p.dimension();
    for (const double t : {0.7, 13.0, 61.5}) {
      const Eigen::MatrixXcd u =
          (std::complex<double>(0.0, -t) * p.matrix.cast<std::complex<double>>()).exp();
      // Pad basis states map to themselves; physical states never leak.
      for (Eigen::Index s = n; s < dim; ++s) {
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(dim);
        e(s) = 1;
        CHECK(((u * e) - e).cwiseAbs().maxCoeff() < 1e-10);
      }
      CHECK(u.bottomLeftCorner(dim - n, n).cwiseAbs().maxCoeff() < 1e-10);
    }
    ctqw::CircuitOptions opts;
    const auto run = ctqw::run_ctqw_circuit(g, opts);
    CHECK(run.max_padding_probability < 1e-10);
  }
}

TEST_CASE("time grid") {
  const Eigen::VectorXd t = ctqw::circuit_time_grid(40, 20 * M_PI);
  CHECK(t.size() == 40);
  CHECK(t(0) == doctest::Approx(M_PI / 2));
  CHECK(t(39) == doctest::Approx(20 * M_PI));
  CHECK_THROWS_AS(ctqw::circuit_time_grid(0, 1.0), ctqw::Error);
}

TEST_CASE("exact mode equals the unpadded grid average") {
  std::mt19937_64 rng(93);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 30);
    const auto g = random_connected_graph(rng, n);
    ctqw::CircuitOptions opts;
    const auto run = ctqw::run_ctqw_circuit(g, opts);
    const Eigen::VectorXd reference = ctqw::grid_average(g, ctqw::circuit_time_grid(40, opts.t_max));
    CHECK((run.centrality.scores - reference).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(run.centrality.scores.sum() == doctest::Approx(1));
  }
  // Powers of two: nothing is padded and the two routes agree exactly.
  for (int n : {2, 4, 8, 16}) {
    const auto g = random_connected_graph(rng, n);
    const auto run = ctqw::run_ctqw_circuit(g);
    CHECK(run.dimension == n);
    const Eigen::VectorXd reference = ctqw::grid_average(g, ctqw::circuit_time_grid(40, 20 * M_PI));
    CHECK((run.centrality.scores - reference).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("shot sampling statistics") {
  const Eigen::VectorXd p = Eigen::VectorXd::Constant(4, 0.25);
  const std::int64_t shots = 1000000;
  const auto d = ctqw::sample_shots(p, shots, 12345);
  CHECK(d.counts.sum() == shots);
  const double sigma = std::sqrt(shots * 0.25 * 0.75);
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(std::abs(static_cast<double>(d.counts(i)) - 250000.0) < 4 * sigma);

  const auto again = ctqw::sample_shots(p, shots, 12345);
  CHECK(again.counts == d.counts);
  CHECK(ctqw::sample_shots(p, shots, 12346).counts != d.counts);

  Eigen::VectorXd skewed(5);
  skewed << 0.0, 0.7, 0.0, 0.2, 0.1;
  const auto s = ctqw::sample_shots(skewed, 500, 1);
  CHECK(s.counts(0) == 0);
  CHECK(s.counts(2) == 0);
  CHECK(s.counts.sum() == 500);

  CHECK_THROWS_AS(ctqw::sample_shots(Eigen::Vector2d(0.5, 0.6), 10, 1), ctqw::Error);
  CHECK_THROWS_AS(ctqw::sample_shots(p, 0, 1), ctqw::Error);
}

TEST_CASE("derived seeds differ per stream and are stable") {
  CHECK(ctqw::derive_seed(7, 0) != ctqw::derive_seed(7, 1));
  CHECK(ctqw::derive_seed(7, 0) != ctqw::derive_seed(8, 0));
  CHECK(ctqw::derive_seed(7, 3) == ctqw::derive_seed(7, 3));
}

TEST_CASE("shot mode is seeded and approaches exact mode") {
  std::mt19937_64 rng(94);
  const auto g = random_connected_graph(rng, 9);
  const auto exact = ctqw::run_ctqw_circuit(g).centrality.scores;

  auto median_l1 = [&](std::int64_t shots) {
    std::vector<double> errs;
    for (std::uint64_t seed = 1; seed <= 41; ++seed) {
      ctqw::CircuitOptions o;
      o.shots = shots;
      o.seed = seed;
      errs.push_back((ctqw::run_ctqw_circuit(g, o).centrality.scores - exact).cwiseAbs().sum());
    }
    std::nth_element(errs.begin(), errs.begin() + 20, errs.end());
    return errs[20];
  };
  const double coarse = median_l1(1024);
  const double fine = median_l1(16 * 1024);
  CHECK(coarse / fine > 2.5);
  CHECK(coarse / fine < 6.0);

  ctqw::CircuitOptions o;
  o.shots = 1024;
  o.seed = 99;
  const auto a = ctqw::run_ctqw_circuit(g, o);
  const auto b = ctqw::run_ctqw_circuit(g, o);
  CHECK(a.centrality.scores == b.centrality.scores);
  CHECK(a.total_counts.sum() == 40 * 1024);
  // Padding is never observed.
  CHECK(a.total_counts.tail(a.dimension - 9).sum() == 0);

  o.shots = 0;
  CHECK_THROWS_AS(ctqw::run_ctqw_circuit(g, o), ctqw::Error);
}

TEST_CASE("bitstrings") {
  CHECK(ctqw::basis_bitstring(0, 4) == "0000");
  CHECK(ctqw::basis_bitstring(5, 4) == "0101");
  CHECK(ctqw::basis_bitstring(8, 4) == "1000");
}

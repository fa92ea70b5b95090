#include "support.hpp"

#include "ctqw/transition.hpp"

#include <doctest.h>

#include <cmath>

using namespace ctqw::test;
using ctqw::StochasticKind;
using ctqw::StochasticMatrix;

namespace {

ctqw::ErrorKind error_of(const auto& fn) {
  try {
    fn();
  } catch (const ctqw::Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ctqw::ErrorKind::Io;
}

}  // namespace

TEST_CASE("K2 gaps") {
  const auto g = complete_graph(2);
  const auto cl = ctqw::spectral_gap(ctqw::classical_transition(g));
  CHECK(cl.value == doctest::Approx(0).epsilon(1e-12));
  CHECK_FALSE(cl.reducible);
  const auto q = ctqw::quantum_transition_matrix(ctqw::eigendecompose(g.adjacency));
  CHECK((q.entries.array() - 0.5).abs().maxCoeff() < 1e-12);
  CHECK(ctqw::spectral_gap(q).value == doctest::Approx(1));
}

TEST_CASE("identity is reducible with zero gap") {
  StochasticMatrix m{Eigen::MatrixXd::Identity(4, 4), StochasticKind::DoublyStochastic, std::nullopt};
  const auto gap = ctqw::spectral_gap(m);
  CHECK(gap.value == 0);
  CHECK(gap.reducible);
  StochasticMatrix one{Eigen::MatrixXd::Ones(1, 1), StochasticKind::RowStochastic, std::nullopt};
  CHECK(ctqw::spectral_gap(one).value == 1);
}

TEST_CASE("star stationary distribution is proportional to degree") {
  const auto g = star_graph(3);
  const Eigen::VectorXd pi = ctqw::stationary_distribution(g);
  CHECK(pi(0) == doctest::Approx(0.5));
  CHECK(pi(1) == doctest::Approx(1.0 / 6));
  const auto p = ctqw::classical_transition(g);
  CHECK((pi.transpose() * p.entries - pi.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  // Bipartite: -1 is in the spectrum.
  CHECK(ctqw::spectral_gap(p).value == doctest::Approx(0).epsilon(1e-12));
}

TEST_CASE("classical transition input checks") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  a(0, 1) = a(1, 0) = 1;
  CHECK(error_of([&] { ctqw::classical_transition(graph_from(a)); }) == ctqw::ErrorKind::IsolatedNode);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(4, 4);
  b(0, 1) = b(1, 0) = 1;
  b(2, 3) = b(3, 2) = 1;
  CHECK(error_of([&] { ctqw::classical_transition(graph_from(b)); }) == ctqw::ErrorKind::Disconnected);
}

TEST_CASE("validation rejects non-stochastic input") {
  Eigen::MatrixXd rows(2, 2);
  rows << 0.5, 0.6, 0.5, 0.5;
  CHECK(error_of([&] { ctqw::validate_stochastic({rows, StochasticKind::RowStochastic, std::nullopt}); }) ==
        ctqw::ErrorKind::NonStochastic);
  Eigen::MatrixXd neg(2, 2);
  neg << 1.5, -0.5, 0.5, 0.5;
  CHECK(error_of([&] { ctqw::validate_stochastic({neg, StochasticKind::RowStochastic, std::nullopt}); }) ==
        ctqw::ErrorKind::NonStochastic);
  Eigen::MatrixXd row_only(2, 2);
  row_only << 0.2, 0.8, 0.4, 0.6;
  ctqw::validate_stochastic({row_only, StochasticKind::RowStochastic, std::nullopt});
  CHECK(error_of([&] { ctqw::validate_stochastic({row_only, StochasticKind::DoublyStochastic, std::nullopt}); }) ==
        ctqw::ErrorKind::NonStochastic);
}

TEST_CASE("general path needs a real spectrum") {
  // Directed 3-cycle: eigenvalues are the cube roots of unity.
  Eigen::MatrixXd c(3, 3);
  c << 0, 1, 0, 0, 0, 1, 1, 0, 0;
  CHECK(error_of([&] { ctqw::stochastic_spectrum({c, StochasticKind::RowStochastic, std::nullopt}); }) ==
        ctqw::ErrorKind::NonStochastic);
  Eigen::MatrixXd r(2, 2);
  r << 0.2, 0.8, 0.4, 0.6;
  const Eigen::VectorXd v = ctqw::stochastic_spectrum({r, StochasticKind::RowStochastic, std::nullopt});
  CHECK(v(0) == doctest::Approx(-0.2));
  CHECK(v(1) == doctest::Approx(1));
}

TEST_CASE("random graphs: operator properties") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = random_connected_graph(rng, 2 + static_cast<int>(rng() % 19));
    const auto eig = ctqw::eigendecompose(g.adjacency);
    const auto q = ctqw::quantum_transition_matrix(eig);
    const auto& t = q.entries;
    CHECK((t - t.transpose()).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((t.rowwise().sum().array() - 1).abs().maxCoeff() <= 1e-9);
    CHECK((t.colwise().sum().array() - 1).abs().maxCoeff() <= 1e-9);
    CHECK(t.minCoeff() >= -1e-12);
    ctqw::validate_stochastic(q);

    // Classical spectrum through the symmetrized form equals the general solver.
    const auto p = ctqw::classical_transition(g);
    Eigen::VectorXd general = Eigen::EigenSolver<Eigen::MatrixXd>(p.entries, false).eigenvalues().real();
    std::sort(general.data(), general.data() + general.size());
    CHECK((ctqw::stochastic_spectrum(p) - general).cwiseAbs().maxCoeff() < 1e-9);

    const auto report = ctqw::gap_report(g);
    CHECK(report.delta_cl >= 0);
    CHECK(report.delta_cl <= 1);
    CHECK(report.delta_q >= 0);
    CHECK(report.delta_q <= 1);
    CHECK(report.difference == doctest::Approx(report.delta_q - report.delta_cl));
    CHECK(report.component_size == g.size());
  }
}

TEST_CASE("quantum transition matches a finite-horizon average") {
  std::mt19937_64 rng(72);
  for (int trial = 0; trial < 8; ++trial) {
    const auto g = random_connected_graph(rng, 2 + static_cast<int>(rng() % 9), 0.4, 0.2, 1.0);
    const auto q = ctqw::quantum_transition_matrix(ctqw::eigendecompose(g.adjacency));
    const Eigen::MatrixXd oracle = expm_transition_average(g.adjacency, 3e4, 0.05);
    CHECK((q.entries - oracle).cwiseAbs().maxCoeff() <= 1e-3);
  }
  // Degenerate case: K4 has a triple eigenvalue.
  const auto k4 = complete_graph(4);
  const auto q = ctqw::quantum_transition_matrix(ctqw::eigendecompose(k4.adjacency));
  CHECK((q.entries - expm_transition_average(k4.adjacency, 2e4, 0.05)).cwiseAbs().maxCoeff() <= 1e-3);
}

TEST_CASE("gaps are invariant under weight scaling") {
  std::mt19937_64 rng(73);
  const auto g = random_connected_graph(rng, 15);
  auto scaled = g;
  scaled.adjacency *= 3.25;
  const auto a = ctqw::gap_report(g);
  const auto b = ctqw::gap_report(scaled);
  CHECK(a.delta_cl == doctest::Approx(b.delta_cl).epsilon(1e-9));
  CHECK(a.delta_q == doctest::Approx(b.delta_q).epsilon(1e-6));
}

TEST_CASE("gap report on a disconnected graph uses the largest component") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(5, 5);
  a(0, 1) = a(1, 0) = 1;
  a(2, 3) = a(3, 2) = 1;
  a(3, 4) = a(4, 3) = 0.5;
  const auto report = ctqw::gap_report(graph_from(a));
  CHECK(report.component_size == 3);
  // P3 classical chain is bipartite.
  CHECK(report.delta_cl == doctest::Approx(0).epsilon(1e-12));
  CHECK(std::isinf(report.mixing_cl));
  CHECK(std::isfinite(report.mixing_q));
}

#pragma once

#include "ctqw/error.hpp"
#include "ctqw/graph.hpp"
#include "ctqw/spectral.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

namespace ctqw {

/// Occupation probabilities on a time grid. Row k of `probs` is P(., t_k);
/// time is in square angstroms (hbar = 1, weights in 1/A^2).
struct TimeSeries {
  Eigen::VectorXd times;
  Eigen::MatrixXd probs;
};

struct ConvergenceReport {
  double t_star = 0.0;
  double tolerance = 0.0;
  double grid_step = 0.0;
  /// (T, ||Pbar(T) - Pbar(inf)||_1) at every checkpoint up to t_star.
  std::vector<std::pair<double, double>> errors;
};

struct DCTrace {
  Eigen::Index window_len = 0;
  Eigen::Index stride = 0;
  /// Row k is the DC vector of window k.
  Eigen::MatrixXd window_means;
  Eigen::VectorXd window_starts;
  std::vector<double> deltas;
  std::optional<double> steady_time;
};

inline constexpr double kDefaultConvergenceTol = 1e-3;
inline constexpr double kDefaultGridStep = 0.125;
inline constexpr double kDefaultConvergenceTMax = 3.2e3;

template <typename Scalar = double>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> uniform_state(Eigen::Index n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "uniform state needs n >= 1");
  return Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>::Constant(
      n, std::complex<Scalar>(Scalar(1) / std::sqrt(Scalar(n)), Scalar(0)));
}

namespace detail {

template <typename Scalar, typename Derived>
void check_state(const EigenSystem<Scalar>& eig, const Eigen::MatrixBase<Derived>& psi0) {
  if (psi0.size() != eig.size()) {
    throw Error(ErrorKind::DimensionMismatch, "state dimension " + std::to_string(psi0.size()) +
                                                  " does not match Hamiltonian dimension " +
                                                  std::to_string(eig.size()));
  }
  if (std::abs(psi0.squaredNorm() - Scalar(1)) > Scalar(1e-9)) {
    throw Error(ErrorKind::NotNormalized, "initial state is not unit norm");
  }
}

/// Evaluates P(t) = |V (c .* exp(-i lambda t))|^2 for one time.
template <typename Scalar>
class SpectralPropagator {
 public:
  using Complex = std::complex<Scalar>;
  using ComplexVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
  using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  template <typename Derived>
  SpectralPropagator(const EigenSystem<Scalar>& eig, const Eigen::MatrixBase<Derived>& psi0)
      : eig_(eig),
        coeffs_(eig.eigenvectors.transpose().template cast<Complex>() * psi0),
        phased_re_(eig.size()),
        phased_im_(eig.size()) {}

  const RealVector& probabilities(Scalar t) {
    for (Eigen::Index m = 0; m < coeffs_.size(); ++m) {
      const Complex z = coeffs_(m) * std::polar(Scalar(1), -eig_.eigenvalues(m) * t);
      phased_re_(m) = z.real();
      phased_im_(m) = z.imag();
    }
    amp_re_.noalias() = eig_.eigenvectors * phased_re_;
    amp_im_.noalias() = eig_.eigenvectors * phased_im_;
    probs_ = amp_re_.cwiseAbs2() + amp_im_.cwiseAbs2();
    return probs_;
  }

 private:
  const EigenSystem<Scalar>& eig_;
  ComplexVector coeffs_;
  RealVector phased_re_, phased_im_;
  RealVector amp_re_, amp_im_;
  RealVector probs_;
};

}  // namespace detail

/// Spectral-form evolution; no matrix exponentials are formed.
template <typename Scalar, typename Derived, typename TimesDerived>
TimeSeries evolve_probabilities(const EigenSystem<Scalar>& eig, const Eigen::MatrixBase<Derived>& psi0,
                                const Eigen::MatrixBase<TimesDerived>& times) {
  detail::check_state(eig, psi0);
  TimeSeries ts;
  ts.times = times.template cast<double>();
  ts.probs.resize(times.size(), eig.size());
  detail::SpectralPropagator<Scalar> propagator(eig, psi0);
  for (Eigen::Index k = 0; k < times.size(); ++k) {
    ts.probs.row(k) = propagator.probabilities(times(k)).transpose().template cast<double>();
  }
  return ts;
}

/// Infinite-time average: sum over degeneracy groups of |Pi_g psi0|^2.
template <typename Scalar, typename Derived>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> steady_state_analytic(const EigenSystem<Scalar>& eig,
                                                               const Eigen::MatrixBase<Derived>& psi0) {
  using Complex = std::complex<Scalar>;
  detail::check_state(eig, psi0);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> p = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(eig.size());
  const Eigen::Matrix<Complex, Eigen::Dynamic, 1> coeffs =
      eig.eigenvectors.transpose().template cast<Complex>() * psi0;
  for (const auto& group : eig.groups) {
    Eigen::Matrix<Complex, Eigen::Dynamic, 1> projected =
        Eigen::Matrix<Complex, Eigen::Dynamic, 1>::Zero(eig.size());
    for (auto m : group) projected += eig.eigenvectors.col(m).template cast<Complex>() * coeffs(m);
    p += projected.cwiseAbs2();
  }
  return p;
}

/// Steady state with every eigenvector treated as its own group. Only valid
/// for non-degenerate spectra; kept to flag the degenerate case.
template <typename Scalar, typename Derived>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> steady_state_singleton(const EigenSystem<Scalar>& eig,
                                                                const Eigen::MatrixBase<Derived>& psi0) {
  using Complex = std::complex<Scalar>;
  detail::check_state(eig, psi0);
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights =
      (eig.eigenvectors.transpose().template cast<Complex>() * psi0).cwiseAbs2();
  return eig.eigenvectors.cwiseAbs2() * weights;
}

/// CTQW centrality: steady state of the walk from the uniform superposition
/// under H = A.
inline CentralityVector ctqw_centrality(const WeightedGraph& g) {
  if (g.size() < 1) throw Error(ErrorKind::InvalidArgument, "empty graph");
  const auto eig = eigendecompose(g.adjacency);
  CentralityVector c;
  c.labels = g.labels;
  c.scores = steady_state_analytic(eig, uniform_state(g.size()));
  c.scores /= c.scores.sum();
  c.normalization = Normalization::SumOne;
  return c;
}

/// Running average (1/T) int_0^T P(t) dt by the trapezoidal rule on the
/// stored grid; a horizon between grid points interpolates the last panel.
inline Eigen::VectorXd cesaro_mean(const TimeSeries& ts, double horizon) {
  const auto L = ts.times.size();
  if (L == 0) throw Error(ErrorKind::HorizonOutsideGrid, "empty time series");
  const double t0 = ts.times(0);
  if (std::abs(t0) > 1e-12 || horizon < 0 || horizon > ts.times(L - 1) * (1 + 1e-12)) {
    throw Error(ErrorKind::HorizonOutsideGrid, "grid does not cover [0, T]");
  }
  if (horizon == 0) return ts.probs.row(0).transpose();

  Eigen::VectorXd integral = Eigen::VectorXd::Zero(ts.probs.cols());
  for (Eigen::Index k = 1; k < L; ++k) {
    const double a = ts.times(k - 1);
    const double b = ts.times(k);
    if (a >= horizon) break;
    if (b <= horizon) {
      integral += 0.5 * (b - a) * (ts.probs.row(k - 1) + ts.probs.row(k)).transpose();
    } else {
      const double frac = (horizon - a) / (b - a);
      const Eigen::VectorXd end =
          ((1 - frac) * ts.probs.row(k - 1) + frac * ts.probs.row(k)).transpose();
      integral += 0.5 * (horizon - a) * (ts.probs.row(k - 1).transpose() + end);
      break;
    }
  }
  return integral / horizon;
}

/// Earliest checkpoint T = k * grid_step at which the trapezoidal Cesaro mean
/// is within `tol` (L1) of the analytic steady state. Evolution is streamed,
/// so no time series is stored. Throws Error(NotConvergedWithin) past t_max.
template <typename Scalar, typename Derived>
ConvergenceReport convergence_time(const EigenSystem<Scalar>& eig, const Eigen::MatrixBase<Derived>& psi0,
                                   double tol = kDefaultConvergenceTol,
                                   double grid_step = kDefaultGridStep,
                                   double t_max = kDefaultConvergenceTMax) {
  if (!(tol > 0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  if (!(grid_step > 0)) throw Error(ErrorKind::InvalidArgument, "grid step must be positive");
  const Eigen::VectorXd target = steady_state_analytic(eig, psi0).template cast<double>();
  detail::SpectralPropagator<Scalar> propagator(eig, psi0);

  ConvergenceReport report;
  report.tolerance = tol;
  report.grid_step = grid_step;
  Eigen::VectorXd previous = propagator.probabilities(Scalar(0)).template cast<double>();
  Eigen::VectorXd integral = Eigen::VectorXd::Zero(previous.size());
  const auto steps = static_cast<long>(std::floor(t_max / grid_step + 1e-9));
  for (long k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k) * grid_step;
    Eigen::VectorXd current = propagator.probabilities(static_cast<Scalar>(t)).template cast<double>();
    integral += 0.5 * grid_step * (previous + current);
    previous = std::move(current);
    const double error = (integral / t - target).cwiseAbs().sum();
    report.errors.emplace_back(t, error);
    if (error < tol) {
      report.t_star = t;
      return report;
    }
  }
  throw Error(ErrorKind::NotConvergedWithin,
              "Cesaro mean not within " + std::to_string(tol) + " of the steady state by T = " +
                  std::to_string(t_max));
}

/// Sliding-window zero-frequency diagnostic. Each window's DC vector is
/// Re X(0) / window_len from a forward FFT of every node's samples; the
/// steady time is the start of the first window opening a run of `patience`
/// consecutive deltas below `tol`.
inline DCTrace fft_dc_diagnostic(const TimeSeries& ts, Eigen::Index window_len = 256,
                                 Eigen::Index stride = 64, double tol = 1e-4, int patience = 3) {
  const auto L = ts.probs.rows();
  const auto n = ts.probs.cols();
  if (window_len < 1 || stride < 1 || patience < 1) {
    throw Error(ErrorKind::InvalidArgument, "window length, stride and patience must be positive");
  }
  if (window_len > L) {
    throw Error(ErrorKind::WindowTooLarge, "window of " + std::to_string(window_len) +
                                               " samples exceeds series length " + std::to_string(L));
  }
  DCTrace trace;
  trace.window_len = window_len;
  trace.stride = stride;
  const Eigen::Index windows = (L - window_len) / stride + 1;
  trace.window_means.resize(windows, n);
  trace.window_starts.resize(windows);

  Eigen::FFT<double> fft;
  std::vector<double> samples(static_cast<std::size_t>(window_len));
  std::vector<std::complex<double>> spectrum;
  for (Eigen::Index w = 0; w < windows; ++w) {
    const Eigen::Index start = w * stride;
    trace.window_starts(w) = ts.times(start);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index k = 0; k < window_len; ++k) samples[k] = ts.probs(start + k, i);
      fft.fwd(spectrum, samples);
      trace.window_means(w, i) = spectrum[0].real() / static_cast<double>(window_len);
    }
  }

  for (Eigen::Index w = 0; w + 1 < windows; ++w) {
    trace.deltas.push_back((trace.window_means.row(w + 1) - trace.window_means.row(w)).cwiseAbs().maxCoeff());
  }
  int run = 0;
  for (std::size_t k = 0; k < trace.deltas.size(); ++k) {
    run = trace.deltas[k] < tol ? run + 1 : 0;
    if (run == patience) {
      trace.steady_time = trace.window_starts(static_cast<Eigen::Index>(k + 1 - patience));
      break;
    }
  }
  return trace;
}

/// max over the grid of ||P(t) - uniform||_inf for the uniform start under H.
template <typename Derived, typename TimesDerived>
double max_deviation_from_uniform(const Eigen::MatrixBase<Derived>& hamiltonian,
                                  const Eigen::MatrixBase<TimesDerived>& times) {
  const auto n = hamiltonian.rows();
  const auto eig = eigendecompose(hamiltonian.eval());
  const auto ts = evolve_probabilities(eig, uniform_state<typename Derived::Scalar>(n), times);
  return (ts.probs.array() - 1.0 / static_cast<double>(n)).abs().maxCoeff();
}

/// The uniform state is a zero mode of L = D - A, so Laplacian dynamics
/// leave it unchanged; returns the observed deviation.
template <typename TimesDerived>
double laplacian_triviality_check(const WeightedGraph& g, const Eigen::MatrixBase<TimesDerived>& times) {
  return max_deviation_from_uniform(laplacian(g), times);
}

/// Evenly spaced grid 0, step, 2 step, ... up to t_max inclusive.
inline Eigen::VectorXd uniform_grid(double step, double t_max) {
  const auto count = static_cast<Eigen::Index>(std::floor(t_max / step + 1e-9)) + 1;
  return Eigen::VectorXd::LinSpaced(count, 0.0, step * static_cast<double>(count - 1));
}

/// CSV with header "t,P_1,...,P_n" (or the node labels when given).
void write_time_series_csv(std::ostream& out, const TimeSeries& ts,
                           const std::vector<std::string>& labels = {});

}  // namespace ctqw

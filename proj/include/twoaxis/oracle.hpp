#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "twoaxis/model.hpp"
#include "twoaxis/sequences.hpp"

namespace twoaxis {

/// Monte Carlo settings. dt <= 0 selects 0.05/|B|.
struct McConfig {
  std::size_t n_traj = 10000;
  double dt = 0.0;
  std::size_t n_freq = 128;
  std::uint64_t seed = 1;
  std::vector<double> t_grid;
  unsigned threads = 0;

  double step(const WorkingPoint& wp) const { return dt > 0.0 ? dt : 0.05 / wp.magnitude(); }
  void validate(const WorkingPoint& wp) const;

  friend bool operator==(const McConfig& a, const McConfig& b)
  {
    return a.n_traj == b.n_traj && a.dt == b.dt && a.n_freq == b.n_freq && a.seed == b.seed &&
           a.t_grid == b.t_grid;
  }
};

/// Log-spaced synthesis bins over [omega_low, omega_uv]; each bin carries the
/// exact band variance of the power law it represents.
struct FrequencyBins {
  Eigen::ArrayXd edges;
  Eigen::ArrayXd omega;
  Eigen::ArrayXd variance;
};

FrequencyBins frequency_bins(const NoiseSpectrum& spec, std::size_t n_freq);

/// One realization xi(t) = xi_qs + sum_k [a_k cos(w_k t) + b_k sin(w_k t)].
class NoiseTrajectory {
 public:
  NoiseTrajectory() = default;
  NoiseTrajectory(double quasi_static, Eigen::ArrayXd omega, Eigen::ArrayXd cos_amp,
                  Eigen::ArrayXd sin_amp);

  double quasi_static() const { return quasi_static_; }
  bool is_static() const { return omega_.size() == 0; }

  double value(double t) const;
  /// int_0^t xi.
  double integral(double t) const;
  /// Averages of xi over [j h, (j+1) h] for j < n.
  Eigen::ArrayXd step_averages(double h, std::size_t n) const;

 private:
  double quasi_static_ = 0.0;
  Eigen::ArrayXd omega_;
  Eigen::ArrayXd cos_amp_;
  Eigen::ArrayXd sin_amp_;
};

using RngStream = std::mt19937_64;

/// Independent substream for one trajectory, a function of (seed, index) only.
RngStream trajectory_stream(std::uint64_t seed, std::uint64_t index);

NoiseTrajectory synthesize_trajectory(const NoiseSpectrum& spec, const FrequencyBins& bins,
                                      RngStream& rng);

/// Step-averaged samples of one realization on the dt grid covering [0, t_max].
Eigen::ArrayXd synthesize_noise(const NoiseSpectrum& spec, double t_max, double dt, RngStream& rng,
                                std::size_t n_freq = 128);

/// exp(-i (h/2) (n . sigma) * duration) for a field (hx, 0, hz) of magnitude h.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 2, 2> rotation_propagator(Scalar hx, Scalar hz,
                                                              Scalar duration)
{
  using Complex = std::complex<Scalar>;
  const Scalar h = std::hypot(hx, hz);
  Eigen::Matrix<Complex, 2, 2> u;
  if (h == Scalar(0)) {
    u.setIdentity();
    return u;
  }
  const Scalar angle = Scalar(0.5) * h * duration;
  const Scalar c = std::cos(angle);
  const Scalar s = std::sin(angle);
  const Scalar nx = hx / h;
  const Scalar nz = hz / h;
  u << Complex(c, -s * nz), Complex(0, -s * nx), Complex(0, -s * nx), Complex(c, s * nz);
  return u;
}

/// Instantaneous pi rotation about y, -i sigma_y.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 2, 2> pi_y_pulse()
{
  Eigen::Matrix<std::complex<Scalar>, 2, 2> p;
  p << Scalar(0), Scalar(-1), Scalar(1), Scalar(0);
  return p;
}

Eigen::Matrix2cd step_propagator(const WorkingPoint& wp, double xi_z, double xi_x,
                                 double duration);

/// Propagator over [0, t] for step-averaged noise on a uniform grid of width
/// h (piecewise-constant Hamiltonian, exact per step), with a pi_y pulse at
/// each sequence pulse time. Steps containing a pulse are split there.
Eigen::Matrix2cd evolve(const WorkingPoint& wp, std::span<const double> xi_z,
                        std::span<const double> xi_x, const PulseSequence& seq, double t,
                        double h);

/// rho_+-(t)/rho_+-(0) for the initial state |x'> = (|+> + |->)/sqrt(2).
std::complex<double> coherence_element(const Eigen::Vector2cd& state, const WorkingPoint& wp);
std::complex<double> coherence_element(const Eigen::Matrix2cd& propagator, const WorkingPoint& wp);

/// |x'> in the computational basis.
Eigen::Vector2cd initial_state(const WorkingPoint& wp);

struct TrajectoryResult {
  std::vector<double> t;
  /// Per-trajectory coherence, one row per trajectory.
  Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> samples;
  std::vector<std::complex<double>> mean;
  std::vector<double> w;
  std::vector<double> std_error;
};

TrajectoryResult mc_coherence(const TwoAxisNoise& noise, const WorkingPoint& wp,
                              const PulseSequence& seq, const McConfig& cfg);

/// Pairwise summation in index order.
std::complex<double> pairwise_sum(std::span<const std::complex<double>> values);

}  // namespace twoaxis

#include "twoaxis/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

namespace twoaxis {

void McConfig::validate(const WorkingPoint& wp) const
{
  wp.validate();
  if (n_traj < 1) {
    throw std::invalid_argument("mc: need at least one trajectory");
  }
  if (n_freq < 64) {
    throw std::invalid_argument("mc: n_freq must be at least 64");
  }
  if (step(wp) > 0.05 / wp.magnitude() * (1.0 + 1e-12)) {
    throw std::invalid_argument("mc: dt must resolve the level splitting (dt <= 0.05/|B|)");
  }
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
      throw std::invalid_argument("mc: time grid must be nonnegative and increasing");
    }
  }
}

FrequencyBins frequency_bins(const NoiseSpectrum& spec, std::size_t n_freq)
{
  spec.validate();
  const auto n = static_cast<Eigen::Index>(n_freq);
  FrequencyBins bins;
  bins.edges = Eigen::ArrayXd::LinSpaced(n + 1, std::log(spec.omega_low), std::log(spec.omega_uv))
                   .exp();
  bins.edges(0) = spec.omega_low;
  bins.edges(n) = spec.omega_uv;
  bins.omega = (bins.edges.head(n) * bins.edges.tail(n)).sqrt();
  bins.variance.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    bins.variance(k) = band_variance(spec, bins.edges(k), bins.edges(k + 1));
  }
  return bins;
}

NoiseTrajectory::NoiseTrajectory(double quasi_static, Eigen::ArrayXd omega, Eigen::ArrayXd cos_amp,
                                 Eigen::ArrayXd sin_amp)
    : quasi_static_(quasi_static),
      omega_(std::move(omega)),
      cos_amp_(std::move(cos_amp)),
      sin_amp_(std::move(sin_amp))
{
}

double NoiseTrajectory::value(double t) const
{
  return quasi_static_ +
         (cos_amp_ * (omega_ * t).cos() + sin_amp_ * (omega_ * t).sin()).sum();
}

double NoiseTrajectory::integral(double t) const
{
  if (is_static()) {
    return quasi_static_ * t;
  }
  const Eigen::ArrayXd phase = omega_ * t;
  return quasi_static_ * t +
         ((cos_amp_ * phase.sin() + sin_amp_ * (1.0 - phase.cos())) / omega_).sum();
}

Eigen::ArrayXd NoiseTrajectory::step_averages(double h, std::size_t n) const
{
  const auto steps = static_cast<Eigen::Index>(n);
  Eigen::ArrayXd out = Eigen::ArrayXd::Constant(steps, quasi_static_);
  if (is_static() || steps == 0) {
    return out;
  }
  const double span = h * static_cast<double>(n);

  // Bins that barely move over the whole window are summed into a degree-5
  // Taylor polynomial; the rest are advanced by exact rotations.
  std::vector<Eigen::Index> fast;
  std::array<double, 6> poly{};
  for (Eigen::Index k = 0; k < omega_.size(); ++k) {
    const double w = omega_(k);
    if (w * span <= 1e-2) {
      const double a = cos_amp_(k);
      const double b = sin_amp_(k);
      poly[0] += a;
      poly[1] += b * w;
      poly[2] -= a * w * w / 2.0;
      poly[3] -= b * w * w * w / 6.0;
      poly[4] += a * std::pow(w, 4) / 24.0;
      poly[5] += b * std::pow(w, 5) / 120.0;
    } else {
      fast.push_back(k);
    }
  }
  auto poly_integral = [&poly](double t) {
    double acc = 0.0;
    for (int p = 5; p >= 0; --p) {
      acc = acc * t + poly[static_cast<std::size_t>(p)] / (p + 1);
    }
    return acc * t;
  };
  double prev = 0.0;
  for (Eigen::Index j = 0; j < steps; ++j) {
    const double next = poly_integral(static_cast<double>(j + 1) * h);
    out(j) += (next - prev) / h;
    prev = next;
  }

  const auto nf = static_cast<Eigen::Index>(fast.size());
  if (nf == 0) {
    return out;
  }
  Eigen::ArrayXd w(nf), ca(nf), sa(nf);
  for (Eigen::Index i = 0; i < nf; ++i) {
    w(i) = omega_(fast[static_cast<std::size_t>(i)]);
    ca(i) = cos_amp_(fast[static_cast<std::size_t>(i)]);
    sa(i) = sin_amp_(fast[static_cast<std::size_t>(i)]);
  }
  const Eigen::ArrayXd ca_scaled = ca / (w * h);
  const Eigen::ArrayXd sa_scaled = sa / (w * h);
  const Eigen::ArrayXd rot_c = (w * h).cos();
  const Eigen::ArrayXd rot_s = (w * h).sin();
  Eigen::ArrayXd c0 = Eigen::ArrayXd::Ones(nf);
  Eigen::ArrayXd s0 = Eigen::ArrayXd::Zero(nf);
  Eigen::ArrayXd c1(nf), s1(nf);
  constexpr Eigen::Index resync = 1024;
  for (Eigen::Index j = 0; j < steps; ++j) {
    if ((j + 1) % resync == 0) {
      const Eigen::ArrayXd phase = w * (static_cast<double>(j + 1) * h);
      c1 = phase.cos();
      s1 = phase.sin();
    } else {
      c1 = c0 * rot_c - s0 * rot_s;
      s1 = s0 * rot_c + c0 * rot_s;
    }
    out(j) += (ca_scaled * (s1 - s0) + sa_scaled * (c0 - c1)).sum();
    c0.swap(c1);
    s0.swap(s1);
  }
  return out;
}

RngStream trajectory_stream(std::uint64_t seed, std::uint64_t index)
{
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return RngStream(seq);
}

NoiseTrajectory synthesize_trajectory(const NoiseSpectrum& spec, const FrequencyBins& bins,
                                      RngStream& rng)
{
  std::normal_distribution<double> normal(0.0, 1.0);
  const double qs = spec.sigma_qs > 0.0 ? spec.sigma_qs * normal(rng) : 0.0;
  if (!spec.has_dynamic()) {
    return NoiseTrajectory(qs, {}, {}, {});
  }
  const auto n = bins.omega.size();
  Eigen::ArrayXd a(n), b(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double sd = std::sqrt(bins.variance(k));
    a(k) = sd * normal(rng);
    b(k) = sd * normal(rng);
  }
  return NoiseTrajectory(qs, bins.omega, std::move(a), std::move(b));
}

Eigen::ArrayXd synthesize_noise(const NoiseSpectrum& spec, double t_max, double dt, RngStream& rng,
                                std::size_t n_freq)
{
  if (!(dt > 0.0) || !(t_max >= 0.0)) {
    throw std::invalid_argument("synthesize_noise: need dt > 0 and t_max >= 0");
  }
  const auto trajectory = synthesize_trajectory(spec, frequency_bins(spec, n_freq), rng);
  const auto n = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
  return trajectory.step_averages(dt, std::max<std::size_t>(n, 1));
}

Eigen::Matrix2cd step_propagator(const WorkingPoint& wp, double xi_z, double xi_x,
                                 double duration)
{
  return rotation_propagator(wp.bx + xi_x, wp.bz + xi_z, duration);
}

namespace {

// Walks [0, t_end] over steps of width h, splitting at pulse times.
template <class State>
void walk(State& state, const WorkingPoint& wp, std::span<const double> xi_z,
          std::span<const double> xi_x, double h, double t_end, std::span<const double> pulses)
{
  const auto pulse = pi_y_pulse<double>();
  std::size_t p = 0;
  double tau = 0.0;
  for (std::size_t j = 0; tau < t_end; ++j) {
    double step_end = static_cast<double>(j + 1) * h;
    if (step_end > t_end || t_end - step_end < 1e-9 * h) {
      step_end = t_end;
    }
    if (j >= xi_z.size() || j >= xi_x.size()) {
      throw std::invalid_argument("evolve: noise samples do not cover the evolution time");
    }
    while (p < pulses.size() && pulses[p] <= step_end) {
      state = step_propagator(wp, xi_z[j], xi_x[j], pulses[p] - tau) * state;
      tau = pulses[p];
      state = pulse * state;
      ++p;
    }
    state = step_propagator(wp, xi_z[j], xi_x[j], step_end - tau) * state;
    tau = step_end;
  }
}

}  // namespace

Eigen::Matrix2cd evolve(const WorkingPoint& wp, std::span<const double> xi_z,
                        std::span<const double> xi_x, const PulseSequence& seq, double t,
                        double h)
{
  wp.validate();
  if (!(h > 0.0) || h > 0.05 / wp.magnitude() * (1.0 + 1e-12)) {
    throw std::invalid_argument("evolve: step must satisfy 0 < h <= 0.05/|B|");
  }
  const auto pulses = seq.pulse_times(t);
  Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
  walk(u, wp, xi_z, xi_x, h, t, pulses);
  return u;
}

Eigen::Vector2cd initial_state(const WorkingPoint& wp)
{
  const double half = 0.5 * wp.tilt();
  const double c = std::cos(half);
  const double s = std::sin(half);
  // (|+> + |->)/sqrt(2) with |+> = (c, s), |-> = (-s, c).
  return Eigen::Vector2cd(c - s, s + c) / std::sqrt(2.0);
}

std::complex<double> coherence_element(const Eigen::Vector2cd& state, const WorkingPoint& wp)
{
  const double half = 0.5 * wp.tilt();
  const double c = std::cos(half);
  const double s = std::sin(half);
  const std::complex<double> plus = c * state(0) + s * state(1);
  const std::complex<double> minus = -s * state(0) + c * state(1);
  return 2.0 * plus * std::conj(minus);
}

std::complex<double> coherence_element(const Eigen::Matrix2cd& propagator, const WorkingPoint& wp)
{
  return coherence_element(Eigen::Vector2cd(propagator * initial_state(wp)), wp);
}

std::complex<double> pairwise_sum(std::span<const std::complex<double>> values)
{
  if (values.size() <= 8) {
    std::complex<double> acc{0.0, 0.0};
    for (const auto& v : values) {
      acc += v;
    }
    return acc;
  }
  const auto half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

namespace {

void run_trajectory(std::size_t index, const TwoAxisNoise& noise, const WorkingPoint& wp,
                    const PulseSequence& seq, const McConfig& cfg, const FrequencyBins& bins_z,
                    const FrequencyBins& bins_x, TrajectoryResult& result)
{
  auto rng = trajectory_stream(cfg.seed, index);
  const auto traj_z = synthesize_trajectory(noise.z, bins_z, rng);
  const auto traj_x = synthesize_trajectory(noise.x, bins_x, rng);
  const auto& grid = cfg.t_grid;
  const Eigen::Vector2cd psi0 = initial_state(wp);
  auto row = result.samples.row(static_cast<Eigen::Index>(index));

  if (traj_z.is_static() && traj_x.is_static()) {
    // Constant Hamiltonian: one exact exponential per pulse interval.
    const std::array<double, 1> xz{traj_z.quasi_static()};
    const std::array<double, 1> xx{traj_x.quasi_static()};
    for (std::size_t m = 0; m < grid.size(); ++m) {
      Eigen::Vector2cd psi = psi0;
      if (grid[m] > 0.0) {
        walk(psi, wp, xz, xx, grid[m], grid[m], seq.pulse_times(grid[m]));
      }
      row(static_cast<Eigen::Index>(m)) = coherence_element(psi, wp);
    }
    return;
  }

  const double h = cfg.step(wp);
  const double t_max = grid.empty() ? 0.0 : grid.back();
  const auto n_steps = static_cast<std::size_t>(std::ceil(t_max / h)) + 1;
  const Eigen::ArrayXd xz = traj_z.step_averages(h, n_steps);
  const Eigen::ArrayXd xx = traj_x.step_averages(h, n_steps);
  const std::span<const double> span_z(xz.data(), n_steps);
  const std::span<const double> span_x(xx.data(), n_steps);

  if (seq.free_evolution()) {
    Eigen::Vector2cd psi = psi0;
    std::size_t j = 0;
    for (std::size_t m = 0; m < grid.size(); ++m) {
      while (static_cast<double>(j + 1) * h <= grid[m] * (1.0 + 1e-12)) {
        psi = step_propagator(wp, xz(static_cast<Eigen::Index>(j)),
                              xx(static_cast<Eigen::Index>(j)), h) *
              psi;
        ++j;
      }
      const double rest = grid[m] - static_cast<double>(j) * h;
      Eigen::Vector2cd out = psi;
      if (rest > 0.0) {
        out = step_propagator(wp, xz(static_cast<Eigen::Index>(j)),
                              xx(static_cast<Eigen::Index>(j)), rest) *
              psi;
      }
      row(static_cast<Eigen::Index>(m)) = coherence_element(out, wp);
    }
    return;
  }

  for (std::size_t m = 0; m < grid.size(); ++m) {
    Eigen::Vector2cd psi = psi0;
    if (grid[m] > 0.0) {
      walk(psi, wp, span_z, span_x, h, grid[m], seq.pulse_times(grid[m]));
    }
    row(static_cast<Eigen::Index>(m)) = coherence_element(psi, wp);
  }
}

}  // namespace

TrajectoryResult mc_coherence(const TwoAxisNoise& noise, const WorkingPoint& wp,
                              const PulseSequence& seq, const McConfig& cfg)
{
  noise.validate();
  cfg.validate(wp);
  const auto bins_z = frequency_bins(noise.z, cfg.n_freq);
  const auto bins_x = frequency_bins(noise.x, cfg.n_freq);
  const auto n_t = cfg.t_grid.size();

  TrajectoryResult result;
  result.t = cfg.t_grid;
  result.samples.resize(static_cast<Eigen::Index>(cfg.n_traj), static_cast<Eigen::Index>(n_t));

  unsigned threads = cfg.threads != 0 ? cfg.threads : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(std::min<std::size_t>(cfg.n_traj, 256)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cfg.n_traj; i = next++) {
      run_trajectory(i, noise, wp, seq, cfg, bins_z, bins_x, result);
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) {
      pool.emplace_back(worker);
    }
  }

  // Reduction in trajectory order, independent of the schedule above.
  const double n = static_cast<double>(cfg.n_traj);
  std::vector<std::complex<double>> column(cfg.n_traj);
  for (std::size_t m = 0; m < n_t; ++m) {
    for (std::size_t i = 0; i < cfg.n_traj; ++i) {
      column[i] = result.samples(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m));
    }
    const auto mean = pairwise_sum(column) / n;
    const double w = std::abs(mean);
    const auto direction = w > 0.0 ? std::conj(mean) / w : std::complex<double>(1.0, 0.0);
    std::vector<std::complex<double>> sq(cfg.n_traj);
    for (std::size_t i = 0; i < cfg.n_traj; ++i) {
      const double r = (column[i] * direction).real() - w;
      sq[i] = r * r;
    }
    const double var = cfg.n_traj > 1 ? pairwise_sum(sq).real() / (n - 1.0) : 0.0;
    result.mean.push_back(mean);
    result.w.push_back(w);
    result.std_error.push_back(std::sqrt(var / n));
  }
  return result;
}

}  // namespace twoaxis

#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "twoaxis/cumulant.hpp"
#include "twoaxis/model.hpp"
#include "twoaxis/oracle.hpp"
#include "twoaxis/sequences.hpp"

namespace twoaxis {

/// Parse or validation failure, tagged with the offending line (0 if none).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

/// A noise spectrum plus the optional parameter ties used by the figure
/// presets (A = ratio * sigma_qs, sigma_qs = ratio * control field).
struct NoiseBlock {
  NoiseSpectrum spectrum;
  std::optional<double> amplitude_ratio;
  std::optional<double> sigma_per_field;

  friend bool operator==(const NoiseBlock&, const NoiseBlock&) = default;
};

enum class ModeSelect { first_order, resummed, both };
enum class Spacing { linear, log };

struct TimeRange {
  double start = 0.0;
  double stop = 0.0;
  std::size_t points = 101;
  bool auto_stop = true;
  Spacing spacing = Spacing::linear;

  friend bool operator==(const TimeRange&, const TimeRange&) = default;
};

enum class SweepAxis { gradient, exchange, sigma_z, sigma_x };

struct SweepSpec {
  SweepAxis axis = SweepAxis::gradient;
  double from = 0.0;
  double to = 0.0;
  std::size_t points = 1;
  Spacing spacing = Spacing::linear;

  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct McBlock {
  McConfig config;
  bool auto_dt = true;
  double model_tol = 0.02;

  friend bool operator==(const McBlock& a, const McBlock& b)
  {
    return a.config == b.config && a.config.threads == b.config.threads &&
           a.auto_dt == b.auto_dt && a.model_tol == b.model_tol;
  }
};

/// Everything one CLI run needs. Energies in ueV, times and angular
/// frequencies in natural units (hbar = 1).
struct Scenario {
  std::string name = "scenario";
  double exchange = 0.0;  // J, the z control field
  double gradient = 0.0;  // dh, the x control field
  NoiseBlock charge;      // noise on J (z axis)
  NoiseBlock magnetic;    // noise on dh (x axis)
  PulseSequence sequence = PulseSequence::fid();
  TimeRange time;
  ModeSelect modes = ModeSelect::resummed;
  CoherenceOptions options;
  std::optional<McBlock> mc;
  std::optional<SweepSpec> sweep;

  WorkingPoint working_point() const { return WorkingPoint::singlet_triplet(exchange, gradient); }
  TwoAxisNoise noise() const;
  std::vector<EvalMode> eval_modes() const;
  std::vector<double> time_grid() const;
  std::vector<double> sweep_values() const;
  Scenario at_sweep_value(double value) const;

  /// Model invariants; throws std::invalid_argument.
  void validate() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

Scenario parse_scenario(std::istream& in, const std::string& source = "config");
Scenario load_scenario(const std::string& path);

/// Canonical text form; parse_scenario(dump_scenario(s)) == s.
void dump_scenario(const Scenario& s, std::ostream& out, const std::string& prefix = "");

/// Energy, frequency and time literals with unit suffixes.
double parse_energy(const std::string& text);
double parse_frequency(const std::string& text);
double parse_time(const std::string& text);

}  // namespace twoaxis

#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "twoaxis/presets.hpp"
#include "twoaxis/scenario.hpp"

namespace twoaxis {

enum ExitCode : int { exit_ok = 0, exit_config = 1, exit_numerical = 2, exit_mc_breach = 3 };

/// Replaces an automatic stop time by 2 * max T2 over the scenario's modes.
/// Throws NumericalError if no mode reaches 1/e before the search bound.
Scenario resolve_time_range(const Scenario& s);

/// Same, with one stop time shared by every curve.
std::vector<PresetCurve> resolve_time_range(std::span<const PresetCurve> curves);

void run_coherence(const Scenario& s, std::ostream& out);
void run_coherence(std::span<const PresetCurve> curves, std::ostream& out);

void run_t2(const Scenario& s, std::ostream& out);
void run_t2_sweep(const Scenario& s, std::ostream& out);
void run_t2_sweep(std::span<const PresetCurve> curves, std::ostream& out);

struct McSummary {
  std::size_t breaches = 0;
  double max_deviation = 0.0;  // max |W - W_mc|
  double max_excess = 0.0;     // max |W - W_mc| - (3 se + model_tol)
};

/// Resummed-mode W beside the Monte Carlo estimate.
McSummary run_mc(const Scenario& s, std::ostream& out);

/// Closed-form band variances against direct quadrature of the spectra.
/// Returns the largest relative discrepancy.
double run_psd_check(const Scenario& s, std::ostream& out);

int run_preset(const std::string& name, std::ostream& out);

}  // namespace twoaxis

#include "twoaxis/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "twoaxis/cumulant.hpp"
#include "twoaxis/oracle.hpp"
#include "twoaxis/quadrature.hpp"
#include "twoaxis/units.hpp"

namespace twoaxis {

namespace {

std::string fmt(double v)
{
  if (std::isnan(v)) {
    return "nan";
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

const char* mode_name(EvalMode m) { return m == EvalMode::first_order ? "first_order" : "resummed"; }

void echo(const Scenario& s, std::ostream& out, const std::string& label = "")
{
  if (!label.empty()) {
    out << "# curve " << label << "\n";
  }
  dump_scenario(s, out, "# ");
}

CoherenceOptions options_for(const Scenario& s, EvalMode mode)
{
  CoherenceOptions o = s.options;
  o.mode = mode;
  return o;
}

CoherencePoint evaluate(const Scenario& s, EvalMode mode, double t)
{
  if (t <= 0.0) {
    CoherencePoint p;
    p.t = 0.0;
    return p;
  }
  try {
    return coherence(s.noise(), s.working_point(), s.sequence, t, options_for(s, mode));
  } catch (const NumericalError& e) {
    throw NumericalError(std::string(e.what()) + " (at t = " + fmt(units::natural_to_ns(t)) +
                         " ns)");
  }
}

double auto_stop(const Scenario& s)
{
  double best = 0.0;
  for (EvalMode mode : s.eval_modes()) {
    const auto t2 = find_t2(s.noise(), s.working_point(), s.sequence, options_for(s, mode));
    if (t2) {
      best = std::max(best, *t2);
    }
  }
  if (!(best > 0.0)) {
    throw NumericalError("automatic time range: W never reaches 1/e");
  }
  return 2.0 * best;
}

std::string t2_cell(const std::optional<double>& t2)
{
  return t2 ? fmt(units::natural_to_ns(*t2)) : std::string("not_reached");
}

void coherence_rows(const Scenario& s, const std::string& label, bool prefix, std::ostream& out)
{
  for (EvalMode mode : s.eval_modes()) {
    for (double t : s.time_grid()) {
      const CoherencePoint p = evaluate(s, mode, t);
      if (prefix) {
        out << label << "," << mode_name(mode) << ",";
      }
      out << fmt(units::natural_to_ns(t)) << "," << fmt(t) << "," << fmt(p.w) << ","
          << fmt(p.phase) << "," << fmt(p.parts.c_z) << "," << fmt(p.parts.c_x) << ","
          << fmt(p.parts.even_linked) << "," << fmt(p.parts.even_semilinked_exp) << ","
          << fmt(p.parts.odd_phase) << "," << fmt(p.parts.axis_term.real()) << ","
          << fmt(p.parts.axis_term.imag()) << "\n";
    }
  }
}

const char* kCoherenceHeader =
    "t_ns,t_natural,W,phase,c_z,c_x,even_linked,even_semilinked_exp,odd_phase,axis_re,axis_im";

double quadrature_band(const NoiseSpectrum& spec, double lo, double hi)
{
  if (!(hi > lo) || spec.amplitude == 0.0) {
    return 0.0;
  }
  // Substitution u = ln(omega) keeps the integrand smooth over many decades.
  const auto f = [&spec](double u) {
    const double w = std::exp(u);
    return w * psd_eval(spec, w) / M_PI;
  };
  QuadTolerance tol;
  tol.abs = 0.0;
  tol.rel = 1e-10;
  double total = 0.0;
  const double a = std::log(lo);
  const double b = std::log(hi);
  const int chunks = std::max(1, static_cast<int>(std::ceil((b - a) / std::log(10.0))));
  for (int i = 0; i < chunks; ++i) {
    const double ua = a + (b - a) * i / chunks;
    const double ub = a + (b - a) * (i + 1) / chunks;
    total += integrate_adaptive(f, ua, ub, tol).value;
  }
  return total;
}

}  // namespace

Scenario resolve_time_range(const Scenario& s)
{
  Scenario r = s;
  if (r.time.auto_stop) {
    r.time.stop = auto_stop(s);
    r.time.auto_stop = false;
  }
  return r;
}

std::vector<PresetCurve> resolve_time_range(std::span<const PresetCurve> curves)
{
  double stop = 0.0;
  for (const auto& c : curves) {
    stop = std::max(stop, c.scenario.time.auto_stop ? auto_stop(c.scenario) : c.scenario.time.stop);
  }
  std::vector<PresetCurve> out(curves.begin(), curves.end());
  for (auto& c : out) {
    c.scenario.time.stop = stop;
    c.scenario.time.auto_stop = false;
  }
  return out;
}

void run_coherence(const Scenario& s, std::ostream& out)
{
  const Scenario r = resolve_time_range(s);
  echo(r, out);
  const bool prefix = r.modes == ModeSelect::both;
  out << (prefix ? "curve,mode," : "") << kCoherenceHeader << "\n";
  coherence_rows(r, r.name, prefix, out);
}

void run_coherence(std::span<const PresetCurve> curves, std::ostream& out)
{
  const auto resolved = resolve_time_range(curves);
  for (const auto& c : resolved) {
    echo(c.scenario, out, c.label);
  }
  out << "curve,mode," << kCoherenceHeader << "\n";
  for (const auto& c : resolved) {
    coherence_rows(c.scenario, c.label, true, out);
  }
}

void run_t2(const Scenario& s, std::ostream& out)
{
  echo(s, out);
  out << "mode,T2_ns,T2_natural\n";
  for (EvalMode mode : s.eval_modes()) {
    const auto t2 = find_t2(s.noise(), s.working_point(), s.sequence, options_for(s, mode));
    out << mode_name(mode) << "," << t2_cell(t2) << ","
        << (t2 ? fmt(*t2) : std::string("not_reached")) << "\n";
  }
}

namespace {

void sweep_rows(const Scenario& s, const std::string& label, bool prefix, std::ostream& out)
{
  if (!s.sweep) {
    throw std::invalid_argument("sweep: scenario has no [sweep] block");
  }
  for (double v : s.sweep_values()) {
    const Scenario point = s.at_sweep_value(v);
    const auto wp = point.working_point();
    const auto noise = point.noise();
    std::optional<double> t2[2];
    int k = 0;
    for (EvalMode mode : {EvalMode::first_order, EvalMode::resummed}) {
      t2[k++] = find_t2(noise, wp, point.sequence, options_for(point, mode));
    }
    if (prefix) {
      out << label << ",";
    }
    out << fmt(v) << "," << t2_cell(t2[0]) << "," << t2_cell(t2[1]) << "\n";
  }
}

constexpr const char* kSweepHeader = "value_ueV,T2_first_order_ns,T2_resummed_ns";

}  // namespace

void run_t2_sweep(const Scenario& s, std::ostream& out)
{
  echo(s, out);
  out << kSweepHeader << "\n";
  sweep_rows(s, s.name, false, out);
}

void run_t2_sweep(std::span<const PresetCurve> curves, std::ostream& out)
{
  for (const auto& c : curves) {
    echo(c.scenario, out, c.label);
  }
  out << "curve," << kSweepHeader << "\n";
  for (const auto& c : curves) {
    sweep_rows(c.scenario, c.label, true, out);
  }
}

McSummary run_mc(const Scenario& s, std::ostream& out)
{
  if (!s.mc) {
    throw std::invalid_argument("mc: scenario has no [mc] block");
  }
  const Scenario r = resolve_time_range(s);
  McConfig cfg = r.mc->config;
  if (r.mc->auto_dt) {
    cfg.dt = 0.0;
  }
  cfg.t_grid = r.time_grid();
  const auto mc = mc_coherence(r.noise(), r.working_point(), r.sequence, cfg);

  echo(r, out);
  out << kCoherenceHeader << ",W_mc,W_mc_stderr\n";
  McSummary summary;
  summary.max_excess = -INFINITY;
  for (std::size_t i = 0; i < cfg.t_grid.size(); ++i) {
    const double t = cfg.t_grid[i];
    const CoherencePoint p = evaluate(r, EvalMode::resummed, t);
    out << fmt(units::natural_to_ns(t)) << "," << fmt(t) << "," << fmt(p.w) << ","
        << fmt(p.phase) << "," << fmt(p.parts.c_z) << "," << fmt(p.parts.c_x) << ","
        << fmt(p.parts.even_linked) << "," << fmt(p.parts.even_semilinked_exp) << ","
        << fmt(p.parts.odd_phase) << "," << fmt(p.parts.axis_term.real()) << ","
        << fmt(p.parts.axis_term.imag()) << "," << fmt(mc.w[i]) << "," << fmt(mc.std_error[i])
        << "\n";
    const double dev = std::abs(p.w - mc.w[i]);
    const double excess = dev - (3.0 * mc.std_error[i] + r.mc->model_tol);
    summary.max_deviation = std::max(summary.max_deviation, dev);
    summary.max_excess = std::max(summary.max_excess, excess);
    if (excess > 0.0) {
      ++summary.breaches;
    }
  }
  return summary;
}

double run_psd_check(const Scenario& s, std::ostream& out)
{
  echo(s, out);
  out << "axis,omega1_natural,sigma0_sq_closed,sigma0_sq_quadrature,rel_diff\n";
  const auto noise = s.noise();
  double worst = 0.0;
  for (int axis = 0; axis < 2; ++axis) {
    const NoiseSpectrum& spec = axis == 0 ? noise.z : noise.x;
    const double lo = std::log(spec.omega_low);
    const double hi = std::log(spec.omega_uv);
    for (int i = 0; i <= 8; ++i) {
      const double w1 = std::exp(lo + (hi - lo) * i / 8.0);
      const double closed = sigma0_sq(spec, std::clamp(w1, spec.omega_low, spec.omega_uv));
      const double quad =
          quadrature_band(spec, spec.omega_low, w1) + spec.sigma_qs * spec.sigma_qs;
      const double rel = closed == 0.0 ? std::abs(quad) : std::abs(quad - closed) / closed;
      worst = std::max(worst, rel);
      out << (axis == 0 ? "z" : "x") << "," << fmt(w1) << "," << fmt(closed) << "," << fmt(quad)
          << "," << fmt(rel) << "\n";
    }
  }
  return worst;
}

int run_preset(const std::string& name, std::ostream& out)
{
  const Preset p = make_preset(name);
  if (p.kind == PresetKind::coherence) {
    run_coherence(p.curves, out);
  } else {
    run_t2_sweep(p.curves, out);
  }
  return exit_ok;
}

}  // namespace twoaxis

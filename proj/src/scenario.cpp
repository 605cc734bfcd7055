#include "twoaxis/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "twoaxis/units.hpp"

namespace twoaxis {

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " +
                         message),
      line_(line)
{
}

namespace {

std::string trim(std::string_view text)
{
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = text.find_last_not_of(" \t\r");
  return std::string(text.substr(first, last - first + 1));
}

double parse_number(std::string_view text)
{
  const std::string clean = trim(text);
  double value = 0.0;
  const char* begin = clean.data();
  const char* end = clean.data() + clean.size();
  if (!clean.empty() && *begin == '+') {
    ++begin;
  }
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || clean.empty()) {
    throw std::invalid_argument("expected a number, got '" + clean + "'");
  }
  return value;
}

// Splits "12.5 neV" into the number and unit suffix.
std::pair<double, std::string> split_literal(const std::string& text)
{
  const std::string clean = trim(text);
  double value = 0.0;
  const char* begin = clean.data();
  const char* end = clean.data() + clean.size();
  if (!clean.empty() && *begin == '+') {
    ++begin;
  }
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || clean.empty()) {
    throw std::invalid_argument("expected a number with optional unit, got '" + clean + "'");
  }
  return {value, trim(std::string_view(ptr, static_cast<std::size_t>(end - ptr)))};
}

bool is_micro(const std::string& unit, const std::string& base)
{
  return unit == "u" + base || unit == "\xce\xbc" + base || unit == "\xc2\xb5" + base;
}

std::size_t parse_count(std::string_view text)
{
  const double v = parse_number(text);
  if (!(v >= 0.0) || v != std::floor(v) || v > 1e15) {
    throw std::invalid_argument("expected a nonnegative integer, got '" + trim(text) + "'");
  }
  return static_cast<std::size_t>(v);
}

bool parse_bool(std::string_view text)
{
  const auto v = trim(text);
  if (v == "true" || v == "yes" || v == "1" || v == "on") {
    return true;
  }
  if (v == "false" || v == "no" || v == "0" || v == "off") {
    return false;
  }
  throw std::invalid_argument("expected true or false, got '" + v + "'");
}

Spacing parse_spacing(std::string_view text)
{
  const auto v = trim(text);
  if (v == "linear") {
    return Spacing::linear;
  }
  if (v == "log") {
    return Spacing::log;
  }
  throw std::invalid_argument("spacing must be linear or log, got '" + v + "'");
}

double nonnegative(double v, const char* what)
{
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be finite and nonnegative");
  }
  return v;
}

double positive(double v, const char* what)
{
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be finite and positive");
  }
  return v;
}

std::vector<double> spaced(double from, double to, std::size_t points, Spacing spacing)
{
  std::vector<double> out;
  if (points == 0) {
    return out;
  }
  if (points == 1) {
    return {to};
  }
  for (std::size_t i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(points - 1);
    if (spacing == Spacing::log) {
      out.push_back(from * std::pow(to / from, f));
    } else {
      out.push_back(from + f * (to - from));
    }
  }
  out.front() = from;
  out.back() = to;
  return out;
}

const char* spacing_name(Spacing s) { return s == Spacing::log ? "log" : "linear"; }

const char* axis_name(SweepAxis a)
{
  switch (a) {
    case SweepAxis::gradient:
      return "dh";
    case SweepAxis::exchange:
      return "J";
    case SweepAxis::sigma_z:
      return "sigma_z";
    case SweepAxis::sigma_x:
      return "sigma_x";
  }
  return "dh";
}

SweepAxis parse_axis(std::string_view text)
{
  const auto v = trim(text);
  if (v == "dh" || v == "gradient") {
    return SweepAxis::gradient;
  }
  if (v == "J" || v == "exchange") {
    return SweepAxis::exchange;
  }
  if (v == "sigma" || v == "sigma_z" || v == "sigma_J") {
    return SweepAxis::sigma_z;
  }
  if (v == "sigma_x" || v == "sigma_H") {
    return SweepAxis::sigma_x;
  }
  throw std::invalid_argument("sweep axis must be dh, J, sigma_z or sigma_x, got '" + v + "'");
}

}  // namespace

double parse_energy(const std::string& text)
{
  const auto [v, unit] = split_literal(text);
  if (unit.empty() || is_micro(unit, "eV")) {
    return v * units::ueV;
  }
  if (unit == "neV") {
    return v * units::neV;
  }
  if (unit == "peV") {
    return v * units::peV;
  }
  if (unit == "meV") {
    return v * units::meV;
  }
  if (unit == "eV") {
    return v * 1e6;
  }
  throw std::invalid_argument("unknown energy unit '" + unit + "'");
}

double parse_frequency(const std::string& text)
{
  const auto [v, unit] = split_literal(text);
  if (unit == "Hz") {
    return units::hz_to_natural(v);
  }
  if (unit == "kHz") {
    return units::hz_to_natural(v * 1e3);
  }
  if (unit == "MHz") {
    return units::hz_to_natural(v * 1e6);
  }
  if (unit == "GHz") {
    return units::hz_to_natural(v * 1e9);
  }
  if (unit == "rad/s") {
    return units::rad_per_ns_to_natural(v * 1e-9);
  }
  if (unit == "rad/us" || unit == "rad/\xce\xbcs" || unit == "rad/\xc2\xb5s") {
    return units::rad_per_ns_to_natural(v * 1e-3);
  }
  if (unit.empty() || unit == "rad/ns") {
    return units::rad_per_ns_to_natural(v);
  }
  if (unit == "natural" || is_micro(unit, "eV")) {
    return v;
  }
  throw std::invalid_argument("unknown frequency unit '" + unit + "'");
}

double parse_time(const std::string& text)
{
  const auto [v, unit] = split_literal(text);
  if (unit.empty() || unit == "ns") {
    return units::ns_to_natural(v);
  }
  if (unit == "ps") {
    return units::ns_to_natural(v * 1e-3);
  }
  if (is_micro(unit, "s")) {
    return units::ns_to_natural(v * 1e3);
  }
  if (unit == "ms") {
    return units::ns_to_natural(v * 1e6);
  }
  if (unit == "s") {
    return units::ns_to_natural(v * 1e9);
  }
  if (unit == "natural") {
    return v;
  }
  throw std::invalid_argument("unknown time unit '" + unit + "'");
}

TwoAxisNoise Scenario::noise() const
{
  auto resolve = [](const NoiseBlock& block, double field) {
    NoiseSpectrum s = block.spectrum;
    if (block.sigma_per_field) {
      s.sigma_qs = *block.sigma_per_field * field;
    }
    if (block.amplitude_ratio) {
      s.amplitude = *block.amplitude_ratio * s.sigma_qs;
    }
    return s;
  };
  return {resolve(charge, exchange), resolve(magnetic, gradient)};
}

std::vector<EvalMode> Scenario::eval_modes() const
{
  switch (modes) {
    case ModeSelect::first_order:
      return {EvalMode::first_order};
    case ModeSelect::resummed:
      return {EvalMode::resummed};
    case ModeSelect::both:
      return {EvalMode::first_order, EvalMode::resummed};
  }
  return {EvalMode::resummed};
}

std::vector<double> Scenario::time_grid() const
{
  return spaced(time.start, time.stop, time.points, time.spacing);
}

std::vector<double> Scenario::sweep_values() const
{
  if (!sweep) {
    return {};
  }
  return spaced(sweep->from, sweep->to, sweep->points, sweep->spacing);
}

Scenario Scenario::at_sweep_value(double value) const
{
  Scenario s = *this;
  if (!sweep) {
    return s;
  }
  switch (sweep->axis) {
    case SweepAxis::gradient:
      s.gradient = value;
      break;
    case SweepAxis::exchange:
      s.exchange = value;
      break;
    case SweepAxis::sigma_z:
      s.charge.spectrum.sigma_qs = value;
      s.charge.sigma_per_field.reset();
      break;
    case SweepAxis::sigma_x:
      s.magnetic.spectrum.sigma_qs = value;
      s.magnetic.sigma_per_field.reset();
      break;
  }
  return s;
}

void Scenario::validate() const
{
  working_point().validate();
  noise().validate();
  if (time.points < 1) {
    throw std::invalid_argument("time: need at least one point");
  }
  if (!time.auto_stop && !(time.stop > time.start)) {
    throw std::invalid_argument("time: stop must exceed start");
  }
  if (time.start < 0.0) {
    throw std::invalid_argument("time: start must be nonnegative");
  }
  if (time.spacing == Spacing::log && !(time.start > 0.0)) {
    throw std::invalid_argument("time: log spacing needs a positive start");
  }
  if (options.cutoff.mode == CutoffMode::fixed && !(options.cutoff.fixed_omega > 0.0)) {
    throw std::invalid_argument("eval: fixed cutoff needs cutoff_omega > 0");
  }
  if (!(options.tol.abs > 0.0) || !(options.tol.rel > 0.0)) {
    throw std::invalid_argument("eval: tolerances must be positive");
  }
  if (sweep) {
    if (sweep->points < 1) {
      throw std::invalid_argument("sweep: need at least one point");
    }
    if (sweep->from < 0.0 || sweep->to < sweep->from) {
      throw std::invalid_argument("sweep: need 0 <= from <= to");
    }
    if (sweep->spacing == Spacing::log && !(sweep->from > 0.0)) {
      throw std::invalid_argument("sweep: log spacing needs a positive start");
    }
  }
  if (mc) {
    McConfig cfg = mc->config;
    cfg.dt = mc->auto_dt ? 0.0 : cfg.dt;
    cfg.validate(working_point());
    if (!(mc->model_tol >= 0.0)) {
      throw std::invalid_argument("mc: model_tol must be nonnegative");
    }
  }
}

Scenario parse_scenario(std::istream& in, const std::string& source)
{
  Scenario s;
  std::string section;
  std::map<std::string, int> section_lines;
  std::string raw;
  int line_no = 0;

  auto noise_key = [](NoiseBlock& block, const std::string& key, const std::string& value) {
    if (key == "amplitude") {
      block.spectrum.amplitude = nonnegative(parse_energy(value), "amplitude");
    } else if (key == "amplitude_ratio") {
      block.amplitude_ratio = nonnegative(parse_number(value), "amplitude_ratio");
    } else if (key == "exponent") {
      block.spectrum.exponent = nonnegative(parse_number(value), "exponent");
    } else if (key == "sigma_qs") {
      block.spectrum.sigma_qs = nonnegative(parse_energy(value), "sigma_qs");
    } else if (key == "sigma_per_field") {
      block.sigma_per_field = nonnegative(parse_number(value), "sigma_per_field");
    } else if (key == "omega_low") {
      block.spectrum.omega_low = positive(parse_frequency(value), "omega_low");
    } else if (key == "omega_uv") {
      block.spectrum.omega_uv = positive(parse_frequency(value), "omega_uv");
    } else {
      return false;
    }
    return true;
  };

  std::string seq_kind = "fid";
  std::size_t seq_pulses = 1;
  std::vector<double> seq_fractions;

  auto mc_block = [&s]() -> McBlock& {
    if (!s.mc) {
      s.mc.emplace();
    }
    return *s.mc;
  };
  auto sweep_block = [&s]() -> SweepSpec& {
    if (!s.sweep) {
      s.sweep.emplace();
    }
    return *s.sweep;
  };

  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(source, line_no, "malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      static const std::vector<std::string> known = {"working_point", "noise.z", "noise.x",
                                                     "sequence",      "time",    "eval",
                                                     "mc",            "sweep"};
      if (std::find(known.begin(), known.end(), section) == known.end()) {
        throw ConfigError(source, line_no, "unknown section [" + section + "]");
      }
      section_lines[section] = line_no;
      if (section == "mc") {
        mc_block();
      } else if (section == "sweep") {
        sweep_block();
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source, line_no, "expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    bool known = true;
    try {
      if (section.empty()) {
        if (key == "name") {
          s.name = value;
        } else {
          known = false;
        }
      } else if (section == "working_point") {
        if (key == "J" || key == "exchange" || key == "Bz") {
          s.exchange = nonnegative(parse_energy(value), "J");
        } else if (key == "dh" || key == "gradient" || key == "Bx") {
          s.gradient = nonnegative(parse_energy(value), "dh");
        } else {
          known = false;
        }
      } else if (section == "noise.z") {
        known = noise_key(s.charge, key, value);
      } else if (section == "noise.x") {
        known = noise_key(s.magnetic, key, value);
      } else if (section == "sequence") {
        if (key == "kind") {
          seq_kind = value;
          if (seq_kind != "fid" && seq_kind != "se" && seq_kind != "cpmg" &&
              seq_kind != "custom") {
            throw std::invalid_argument("sequence kind must be fid, se, cpmg or custom");
          }
        } else if (key == "pulses") {
          seq_pulses = parse_count(value);
        } else if (key == "fractions") {
          seq_fractions.clear();
          std::stringstream list(value);
          std::string item;
          while (std::getline(list, item, ',')) {
            seq_fractions.push_back(parse_number(item));
          }
        } else {
          known = false;
        }
      } else if (section == "time") {
        if (key == "start") {
          s.time.start = nonnegative(parse_time(value), "start");
        } else if (key == "stop") {
          if (value == "auto") {
            s.time.auto_stop = true;
            s.time.stop = 0.0;
          } else {
            s.time.auto_stop = false;
            s.time.stop = positive(parse_time(value), "stop");
          }
        } else if (key == "points") {
          s.time.points = parse_count(value);
        } else if (key == "spacing") {
          s.time.spacing = parse_spacing(value);
        } else {
          known = false;
        }
      } else if (section == "eval") {
        if (key == "mode") {
          if (value == "first_order") {
            s.modes = ModeSelect::first_order;
          } else if (value == "resummed") {
            s.modes = ModeSelect::resummed;
          } else if (value == "both") {
            s.modes = ModeSelect::both;
          } else {
            throw std::invalid_argument("mode must be first_order, resummed or both");
          }
        } else if (key == "semilinked") {
          s.options.semilinked = parse_bool(value);
        } else if (key == "cutoff") {
          if (value == "inverse_time") {
            s.options.cutoff.mode = CutoffMode::inverse_time;
          } else if (value == "fixed") {
            s.options.cutoff.mode = CutoffMode::fixed;
          } else {
            throw std::invalid_argument("cutoff must be inverse_time or fixed");
          }
        } else if (key == "cutoff_omega") {
          s.options.cutoff.fixed_omega = positive(parse_frequency(value), "cutoff_omega");
        } else if (key == "abs_tol") {
          s.options.tol.abs = positive(parse_number(value), "abs_tol");
        } else if (key == "rel_tol") {
          s.options.tol.rel = positive(parse_number(value), "rel_tol");
        } else {
          known = false;
        }
      } else if (section == "mc") {
        auto& mc = mc_block();
        if (key == "trajectories") {
          mc.config.n_traj = parse_count(value);
        } else if (key == "dt") {
          if (value == "auto") {
            mc.auto_dt = true;
            mc.config.dt = 0.0;
          } else {
            mc.auto_dt = false;
            mc.config.dt = positive(parse_time(value), "dt");
          }
        } else if (key == "n_freq") {
          mc.config.n_freq = parse_count(value);
        } else if (key == "seed") {
          const std::string v = trim(value);
          std::uint64_t seed = 0;
          const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), seed);
          if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
            throw std::invalid_argument("seed must be an unsigned 64-bit integer");
          }
          mc.config.seed = seed;
        } else if (key == "threads") {
          mc.config.threads = static_cast<unsigned>(parse_count(value));
        } else if (key == "model_tol") {
          mc.model_tol = nonnegative(parse_number(value), "model_tol");
        } else {
          known = false;
        }
      } else if (section == "sweep") {
        auto& sw = sweep_block();
        if (key == "axis") {
          sw.axis = parse_axis(value);
        } else if (key == "from") {
          sw.from = nonnegative(parse_energy(value), "from");
        } else if (key == "to") {
          sw.to = nonnegative(parse_energy(value), "to");
        } else if (key == "points") {
          sw.points = parse_count(value);
        } else if (key == "spacing") {
          sw.spacing = parse_spacing(value);
        } else {
          known = false;
        }
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError(source, line_no, key + ": " + e.what());
    }
    if (!known) {
      throw ConfigError(source, line_no,
                        "unknown key '" + key + "'" +
                            (section.empty() ? std::string() : " in [" + section + "]"));
    }
  }

  auto line_of = [&section_lines](const std::string& name) {
    const auto it = section_lines.find(name);
    return it == section_lines.end() ? 0 : it->second;
  };
  auto check = [&](const std::string& name, const std::function<void()>& fn) {
    try {
      fn();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(source, line_of(name), "[" + name + "] " + e.what());
    }
  };

  check("sequence", [&] {
    if (seq_kind == "fid") {
      s.sequence = PulseSequence::fid();
    } else if (seq_kind == "se") {
      s.sequence = PulseSequence::spin_echo();
    } else if (seq_kind == "cpmg") {
      s.sequence = PulseSequence::cpmg(static_cast<int>(seq_pulses));
    } else {
      s.sequence = PulseSequence::custom(seq_fractions);
    }
  });
  check("working_point", [&] { s.working_point().validate(); });
  check("noise.z", [&] { s.noise().z.validate(); });
  check("noise.x", [&] { s.noise().x.validate(); });
  check("time", [&] {
    Scenario t = s;
    t.mc.reset();
    t.sweep.reset();
    t.validate();
  });
  if (s.sweep) {
    check("sweep", [&] { s.validate(); });
  }
  if (s.mc) {
    check("mc", [&] { s.validate(); });
  }
  return s;
}

Scenario load_scenario(const std::string& path)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(path, 0, "cannot open file");
  }
  return parse_scenario(in, path);
}

void dump_scenario(const Scenario& s, std::ostream& out, const std::string& prefix)
{
  std::ostringstream text;
  text.precision(17);
  auto noise = [&text](const char* name, const NoiseBlock& b) {
    text << "[" << name << "]\n";
    text << "amplitude = " << b.spectrum.amplitude << " ueV\n";
    if (b.amplitude_ratio) {
      text << "amplitude_ratio = " << *b.amplitude_ratio << "\n";
    }
    text << "exponent = " << b.spectrum.exponent << "\n";
    text << "sigma_qs = " << b.spectrum.sigma_qs << " ueV\n";
    if (b.sigma_per_field) {
      text << "sigma_per_field = " << *b.sigma_per_field << "\n";
    }
    text << "omega_low = " << b.spectrum.omega_low << " natural\n";
    text << "omega_uv = " << b.spectrum.omega_uv << " natural\n";
  };
  text << "name = " << s.name << "\n";
  text << "[working_point]\n";
  text << "J = " << s.exchange << " ueV\n";
  text << "dh = " << s.gradient << " ueV\n";
  noise("noise.z", s.charge);
  noise("noise.x", s.magnetic);
  text << "[sequence]\n";
  switch (s.sequence.kind()) {
    case SequenceKind::fid:
      text << "kind = fid\n";
      break;
    case SequenceKind::cpmg:
      text << "kind = cpmg\npulses = " << s.sequence.pulse_count() << "\n";
      break;
    case SequenceKind::custom: {
      text << "kind = custom\nfractions = ";
      const auto f = s.sequence.fractions();
      for (std::size_t i = 0; i < f.size(); ++i) {
        text << (i ? ", " : "") << f[i];
      }
      text << "\n";
      break;
    }
  }
  text << "[time]\n";
  text << "start = " << s.time.start << " natural\n";
  if (s.time.auto_stop) {
    text << "stop = auto\n";
  } else {
    text << "stop = " << s.time.stop << " natural\n";
  }
  text << "points = " << s.time.points << "\n";
  text << "spacing = " << spacing_name(s.time.spacing) << "\n";
  text << "[eval]\n";
  text << "mode = "
       << (s.modes == ModeSelect::both
               ? "both"
               : (s.modes == ModeSelect::first_order ? "first_order" : "resummed"))
       << "\n";
  text << "semilinked = " << (s.options.semilinked ? "true" : "false") << "\n";
  text << "cutoff = "
       << (s.options.cutoff.mode == CutoffMode::fixed ? "fixed" : "inverse_time") << "\n";
  if (s.options.cutoff.fixed_omega > 0.0) {
    text << "cutoff_omega = " << s.options.cutoff.fixed_omega << " natural\n";
  }
  text << "abs_tol = " << s.options.tol.abs << "\n";
  text << "rel_tol = " << s.options.tol.rel << "\n";
  if (s.mc) {
    const auto& mc = *s.mc;
    text << "[mc]\n";
    text << "trajectories = " << mc.config.n_traj << "\n";
    if (mc.auto_dt) {
      text << "dt = auto\n";
    } else {
      text << "dt = " << mc.config.dt << " natural\n";
    }
    text << "n_freq = " << mc.config.n_freq << "\n";
    text << "seed = " << mc.config.seed << "\n";
    text << "threads = " << mc.config.threads << "\n";
    text << "model_tol = " << mc.model_tol << "\n";
  }
  if (s.sweep) {
    const auto& sw = *s.sweep;
    text << "[sweep]\n";
    text << "axis = " << axis_name(sw.axis) << "\n";
    text << "from = " << sw.from << " ueV\n";
    text << "to = " << sw.to << " ueV\n";
    text << "points = " << sw.points << "\n";
    text << "spacing = " << spacing_name(sw.spacing) << "\n";
  }
  std::istringstream lines(text.str());
  std::string line;
  while (std::getline(lines, line)) {
    out << prefix << line << "\n";
  }
}

}  // namespace twoaxis

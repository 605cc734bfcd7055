#include "twoaxis/presets.hpp"

#include <stdexcept>

#include "twoaxis/units.hpp"

namespace twoaxis {

namespace {

constexpr double kAh = 66.0 * units::peV;  // high-frequency nuclear amplitude
constexpr double kChargeRatio = 0.2;       // A_J = sigma_0J / 5

NoiseBlock charge_noise(double sigma)
{
  NoiseBlock b;
  b.spectrum.sigma_qs = sigma;
  b.amplitude_ratio = kChargeRatio;
  return b;
}

NoiseBlock nuclear_noise(double sigma, double amplitude)
{
  NoiseBlock b;
  b.spectrum.sigma_qs = sigma;
  b.spectrum.amplitude = amplitude;
  return b;
}

Scenario base(const std::string& name, double J, double dh, PulseSequence seq)
{
  Scenario s;
  s.name = name;
  s.exchange = J;
  s.gradient = dh;
  s.sequence = std::move(seq);
  s.time.start = 0.0;
  s.time.auto_stop = true;
  s.time.points = 201;
  return s;
}

Preset fig1a()
{
  Preset p{"fig1a", PresetKind::coherence, {}};
  for (double sj : {1.0 * units::neV, 5.0 * units::neV}) {
    Scenario s = base("fig1a", 0.5, 0.0, PulseSequence::fid());
    s.charge = charge_noise(sj);
    s.magnetic = nuclear_noise(0.1, kAh);
    s.modes = ModeSelect::both;
    p.curves.push_back({sj == 1.0 * units::neV ? "sigmaJ=1neV" : "sigmaJ=5neV", s});
  }
  return p;
}

Preset fig1b()
{
  Preset p{"fig1b", PresetKind::coherence, {}};
  for (double sh : {1.0 * units::neV, 0.1 * units::neV}) {
    Scenario s = base("fig1b", 0.0, 0.1, PulseSequence::fid());
    s.charge = charge_noise(10.0 * units::neV);
    s.magnetic = nuclear_noise(sh, kAh);
    s.modes = ModeSelect::both;
    p.curves.push_back({sh == 1.0 * units::neV ? "sigmaH=1neV" : "sigmaH=0.1neV", s});
  }
  return p;
}

Preset fig2a()
{
  Preset p{"fig2a", PresetKind::sweep, {}};
  Scenario s = base("fig2a", 0.5, 0.0, PulseSequence::fid());
  s.charge = charge_noise(1.0 * units::neV);
  s.magnetic = nuclear_noise(0.1, 0.0);
  s.modes = ModeSelect::both;
  s.sweep = SweepSpec{SweepAxis::gradient, 1e-3, 2.0, 61, Spacing::log};
  p.curves.push_back({"sigmaJ=1neV", s});
  return p;
}

Preset fig2b()
{
  Preset p{"fig2b", PresetKind::sweep, {}};
  auto make = [](NoiseBlock charge) {
    Scenario s = base("fig2b", 0.0, 0.5, PulseSequence::spin_echo());
    s.charge = std::move(charge);
    s.magnetic = nuclear_noise(0.1, 0.0);
    s.modes = ModeSelect::both;
    s.sweep = SweepSpec{SweepAxis::exchange, 1e-3, 5.0, 61, Spacing::log};
    return s;
  };
  p.curves.push_back({"sigmaJ=5neV", make(charge_noise(5.0 * units::neV))});
  p.curves.push_back({"sigmaJ=1neV", make(charge_noise(1.0 * units::neV))});
  NoiseBlock proportional = charge_noise(0.0);
  proportional.sigma_per_field = 0.05;
  p.curves.push_back({"sigmaJ=0.05J", make(proportional)});
  return p;
}

Preset fig3()
{
  Preset p{"fig3", PresetKind::coherence, {}};
  for (double sh : {0.01, 0.1}) {
    const std::string tag = sh == 0.01 ? "sigmaH=0.01ueV" : "sigmaH=0.1ueV";
    for (int variant = 0; variant < 3; ++variant) {
      Scenario s = base("fig3", 0.02, 0.1, PulseSequence::spin_echo());
      s.charge = charge_noise(5.0 * units::neV);
      s.magnetic = nuclear_noise(sh, variant == 1 ? kAh : 0.0);
      s.modes = ModeSelect::resummed;
      s.options.semilinked = variant != 2;
      const char* suffix = variant == 0 ? "_AH=0" : (variant == 1 ? "_AH=66peV" : "_AH=0_no_semilinked");
      p.curves.push_back({tag + suffix, s});
    }
  }
  return p;
}

}  // namespace

std::vector<std::string> preset_names() { return {"fig1a", "fig1b", "fig2a", "fig2b", "fig3"}; }

Preset make_preset(const std::string& name)
{
  if (name == "fig1a") {
    return fig1a();
  }
  if (name == "fig1b") {
    return fig1b();
  }
  if (name == "fig2a") {
    return fig2a();
  }
  if (name == "fig2b") {
    return fig2b();
  }
  if (name == "fig3") {
    return fig3();
  }
  throw std::invalid_argument("unknown preset '" + name + "'");
}

}  // namespace twoaxis

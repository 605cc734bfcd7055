#pragma once

#include <numbers>

// Internal unit system: energies in ueV with hbar = 1. Time is measured in
// hbar/ueV (~0.658 ns) and angular frequency in ueV.
namespace twoaxis::units {

inline constexpr double hbar_ueV_ns = 0.6582119569;

inline constexpr double ueV = 1.0;
inline constexpr double neV = 1e-3;
inline constexpr double peV = 1e-6;
inline constexpr double meV = 1e3;

constexpr double ns_to_natural(double ns) { return ns / hbar_ueV_ns; }
constexpr double natural_to_ns(double t) { return t * hbar_ueV_ns; }

constexpr double rad_per_ns_to_natural(double omega) { return omega * hbar_ueV_ns; }
constexpr double natural_to_rad_per_ns(double omega) { return omega / hbar_ueV_ns; }

// Ordinary frequency in Hz to angular frequency in natural units.
constexpr double hz_to_natural(double f)
{
  return 2.0 * std::numbers::pi * f * 1e-9 * hbar_ueV_ns;
}

}  // namespace twoaxis::units

#pragma once

#include <numbers>

// Unit conventions.
//
// User-facing quantities: times in ns (pulses) or us (T2), frequencies in MHz
// as ordinary frequencies. Internally the cavity and dephasing models work in
// us and rad/us. Every MHz -> rad/us conversion goes through `angular`.
namespace rdrag::units {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// MHz (ordinary) -> rad/us.
constexpr double angular(double f_mhz) { return kTwoPi * f_mhz; }

// MHz (ordinary) -> rad/ns.
constexpr double angular_per_ns(double f_mhz) { return kTwoPi * f_mhz * 1e-3; }

constexpr double ns_to_us(double t_ns) { return t_ns * 1e-3; }
constexpr double us_to_ns(double t_us) { return t_us * 1e3; }

}  // namespace rdrag::units

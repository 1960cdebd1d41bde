#pragma once

// CODATA 2018 exact values.
namespace pcqad::constants {

inline constexpr double hbar = 1.054571817e-34;              // J s
inline constexpr double planck_h = 6.62607015e-34;           // J s
inline constexpr double elementary_charge = 1.602176634e-19; // C

} // namespace pcqad::constants

#pragma once

#include <numbers>

#include "pcqad/lattice.hpp"
#include "pcqad/transmon.hpp"

namespace testutil {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline pcqad::LatticeSpec reference_lattice() {
    return {0.475e-6, 280, 0.65, 3160.0, 0.02, 12e-6};
}

inline pcqad::TransmonSpec reference_transmon() {
    return {9.6e9, 0.78e9, 83e-15, 14e-15, two_pi * 8e6, two_pi * 11e6,
            pcqad::EcConvention::single_electron};
}

} // namespace testutil

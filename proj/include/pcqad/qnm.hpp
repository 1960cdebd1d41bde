#pragma once

#include <utility>
#include <vector>

#include "pcqad/lattice.hpp"
#include "pcqad/transfer.hpp"

namespace pcqad {

/// Uniform field sampling density used for QNM profiles and overlap integrals.
inline constexpr int samples_per_cell = 32;

/// First stop band (f_low, f_high) in Hz: the maximal interval around the cell
/// center frequency where |half_trace| > 1 on the real axis. Edges refined by
/// bisection to sub-Hz. Requires speed_reduction > 0.
std::pair<double, double> band_gap(const LatticeSpec& lattice);

/// Bloch branches adjacent to the first gap, one frequency per requested k.
/// k values must lie in (0, pi/P].
std::vector<DispersionBranch> dispersion(const LatticeSpec& lattice,
                                         const std::vector<double>& k_grid);

/// Complex quasinormal-mode frequencies in the window (Hz, Hz), found as zeros
/// of the outgoing-wave boundary function: real-axis seeding on a grid finer
/// than the mode spacing, then complex Newton with the analytic derivative.
/// Modes carry normalized field profiles ((1/L) int |A|^2 dx = 1) and ladder
/// indices i (kx = k_P + i k_L for i > 0, k_P + (i-1) k_L for i <= 0).
std::vector<QuasiNormalMode> find_qnms(const LatticeSpec& lattice,
                                       std::pair<double, double> f_window);

/// Q from stored energy over per-period boundary leakage; agrees with
/// Re(omega)/(2|Im(omega)|) to a few percent for well-resolved modes.
double quality_factor(const QuasiNormalMode& mode, const LatticeSpec& lattice);

/// Odd transverse indices j whose incidence angle exceeds the total-reflection
/// angle arcsin(1/n_eff); even j never couple and are excluded a priori.
std::vector<TransverseMode> transverse_modes(const LatticeSpec& lattice);

/// Combined 2D mode frequency f_ij = f_i sqrt(1 + (ky/kx)^2).
double mode_frequency_2d(const QuasiNormalMode& mode, const TransverseMode& t,
                         const LatticeSpec& lattice);

} // namespace pcqad

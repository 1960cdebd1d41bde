#pragma once

#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include "pcqad/errors.hpp"

namespace pcqad {

/// Geometric and material description of the 1D phononic crystal: N cells of
/// period P, each carrying one metal stripe (width m*P, centered in the cell)
/// where the SAW speed is reduced by the fraction delta.
struct LatticeSpec {
    double period = 0.0;          // P [m], mechanical period
    int cell_count = 0;           // N
    double metallization = 0.0;   // m, metal fraction of a cell
    double free_speed = 0.0;      // v [m/s]
    double speed_reduction = 0.0; // delta, fractional slowdown under metal
    double aperture = 0.0;        // W [m], transverse stripe length

    double total_length() const { return cell_count * period; }
    double electrical_period() const { return 2.0 * period; } // a = 2P
    double center_frequency() const { return free_speed / electrical_period(); }
    double metal_speed() const { return free_speed * (1.0 - speed_reduction); }
    double effective_index() const { return 1.0 + metallization * speed_reduction; }
    double edge_wavevector() const { return std::numbers::pi / period; }          // k_P
    double mode_wavevector_step() const { return std::numbers::pi / total_length(); } // k_L

    void validate() const {
        if (!(period > 0.0))
            throw ParameterError("lattice: period must be > 0");
        if (cell_count < 1)
            throw ParameterError("lattice: cell_count must be >= 1");
        if (!(metallization > 0.0 && metallization < 1.0))
            throw ParameterError("lattice: metallization must be in (0, 1)");
        if (!(free_speed > 0.0))
            throw ParameterError("lattice: free_speed must be > 0");
        if (!(speed_reduction >= 0.0 && speed_reduction < 1.0))
            throw ParameterError("lattice: speed_reduction must be in [0, 1)");
        if (!(aperture > 0.0))
            throw ParameterError("lattice: aperture must be > 0");
    }
};

struct DispersionBranch {
    enum class Label { acoustic, optical };
    Label label;
    std::vector<std::pair<double, double>> samples; // (k [rad/m], f [Hz])
};

/// Transverse standing-wave mode across the aperture, A_j(y) = sqrt(2) sin(j pi y / W).
struct TransverseMode {
    int j = 0;        // odd positive index
    double ky = 0.0;  // pi j / W [rad/m]
    double norm = std::numbers::sqrt2; // profile amplitude; (1/W) int |A_j|^2 dy = 1
};

/// Complex resonance of the open N-cell lattice (outgoing waves at both ends).
struct QuasiNormalMode {
    int index_i = 0;                        // longitudinal index on the kx ladder
    std::complex<double> omega;             // complex angular frequency, Im < 0
    double quality = 0.0;                   // Re(omega) / (2 |Im(omega)|)
    double kx = 0.0;                        // rad/m
    std::vector<std::complex<double>> field; // A_i(x) on a uniform grid over [0, L]
    double sample_step = 0.0;               // grid spacing [m]
    // Outgoing traveling-wave amplitudes at the boundaries, in the same
    // normalization as `field`; used by the energy-based Q definition.
    std::complex<double> out_left;
    std::complex<double> out_right;

    double frequency() const { return omega.real() / (2.0 * std::numbers::pi); }
};

} // namespace pcqad

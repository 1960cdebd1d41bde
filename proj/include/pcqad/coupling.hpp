#pragma once

#include "pcqad/lattice.hpp"
#include "pcqad/qnm.hpp"

namespace pcqad {

/// Field-to-voltage and material constants of the substrate.
struct PiezoConstants {
    double epz_over_eps = 0.0; // e_pz/eps [V/m]
    double mass_density = 0.0; // rho [kg/m^3]

    void validate() const {
        if (!(epz_over_eps > 0.0))
            throw ParameterError("piezo: epz_over_eps must be > 0");
        if (!(mass_density > 0.0))
            throw ParameterError("piezo: mass_density must be > 0");
    }
};

/// IDT electrode layout derived from the lattice: two electrodes of opposite
/// polarity per electrical period a = 2P, each of width m*P centered in its
/// mechanical cell.
struct ElectrodeGeometry {
    double electrical_period = 0.0; // a [m]
    double electrode_width = 0.0;   // m*P [m]
    int pair_count = 0;             // N_p = N/2
    double total_length = 0.0;      // L [m]

    static ElectrodeGeometry from_lattice(const LatticeSpec& lattice);
};

/// Resolved atom-mode coupling for longitudinal index i and transverse index j.
struct ModeCoupling {
    int i = 0;
    int j = 0;
    double frequency = 0.0; // combined 2D mode frequency f_ij [Hz]
    double quality = 0.0;
    double potential = 0.0; // V_ij [V]
    double g = 0.0;         // angular rate [rad/s]
};

/// z0 = sqrt(hbar / (2 rho W L v)) [m].
double zero_point_displacement(const LatticeSpec& lattice, const PiezoConstants& piezo);

/// Step electrode polarity function p_e(x) in {-1, 0, +1}; +1 on the first
/// electrode, alternating from cell to cell, 0 in the gaps. x must lie in [0, L].
double electrode_function(const ElectrodeGeometry& geom, double x);

/// Raw complex overlap int A_i(x) p_e(x) dx on the mode's sample grid; the
/// global phase of the stored field shows up here, so callers can rotate the
/// field to make this real nonnegative.
cplx electrode_overlap(const QuasiNormalMode& mode, const ElectrodeGeometry& geom);

/// V_ij = (epz/eps) z0 (2 sqrt 2 / (j pi)) |int A_i p_e dx| / ((1/2) int |p_e| dx).
/// Integrals use the trapezoid rule on the mode's own sample grid with the
/// electrode edges snapped to grid nodes (half-weight nodes at the snapped
/// edges keep the snapped p_e parity-exact). Even j returns 0.
double overlap_potential(const QuasiNormalMode& mode, const ElectrodeGeometry& geom,
                         int j, double z0, const PiezoConstants& piezo);

/// g_ij = xi0 C_IDT V_ij / hbar [rad/s].
double coupling_strength(double xi0, double c_idt, double v_ij);

} // namespace pcqad

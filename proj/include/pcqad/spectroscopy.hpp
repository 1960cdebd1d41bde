#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "pcqad/config.hpp"
#include "pcqad/coupling.hpp"
#include "pcqad/dynamics.hpp"
#include "pcqad/qnm.hpp"
#include "pcqad/transmon.hpp"

namespace pcqad {

/// Fully resolved device: lattice modes, their couplings to the atom, and the
/// atom itself. Couplings are computed once and shared by every sweep point.
struct DeviceAssembly {
    LatticeSpec lattice;
    TransmonSpec transmon;
    PiezoConstants piezo;
    double band_gap_low = 0.0;  // Hz; 0 when the lattice has no gap
    double band_gap_high = 0.0;
    std::vector<QuasiNormalMode> qnms;     // all longitudinal modes found
    std::vector<ModeCoupling> couplings;   // selected (i, j) modes, by frequency
};

struct SweepSpec {
    std::vector<double> flux;      // strictly increasing, size >= 2
    std::vector<double> frequency; // Hz, strictly increasing, size >= 2
    double rabi = 0.0;             // drive amplitude [rad/s]

    void validate() const;
};

/// Row-major transmission map over (flux, frequency).
struct TransmissionMap {
    std::vector<double> flux;
    std::vector<double> frequency;
    std::vector<std::complex<double>> t; // flux-major

    std::complex<double> at(size_t fi, size_t ki) const {
        return t[fi * frequency.size() + ki];
    }
};

struct LorentzianFit {
    double center = 0.0;     // Hz
    double half_width = 0.0; // Hz
    double depth = 0.0;      // amplitude units
    double baseline = 0.0;
    double residual = 0.0;   // rms misfit in amplitude units
};

/// Lorentzian dip fit plus the weak-drive rate identities
/// Gamma2 = 2 pi half_width, Gamma1 = 2 Gamma2 depth.
struct RateFit {
    LorentzianFit fit;
    double gamma1 = 0.0; // rad/s
    double gamma2 = 0.0; // rad/s
};

struct AnticrossingFit {
    double phi_cross = 0.0; // flux where the bare lines cross
    double f_mode = 0.0;    // Hz
    double g = 0.0;         // rad/s
    double residual = 0.0;  // rms misfit [Hz]
};

struct QDipFit {
    LorentzianFit fit;
    double q = 0.0;
};

/// Composes the lattice, transverse, and coupling pipelines and applies the
/// configured mode-selection cuts. Mode fields are phase-rotated so their
/// electrode overlap is real nonnegative.
DeviceAssembly assemble_device(const Config& config);

/// Steady-state t over the frequency grid at fixed flux. The semiclassical
/// path runs through the data-parallel response kernel; lindblad solves the
/// full master equation per point.
std::vector<std::complex<double>> simulate_trace(const DeviceAssembly& device,
                                                 const FluxBias& bias,
                                                 const std::vector<double>& f_grid,
                                                 double rabi,
                                                 const SolverOptions& solver);

/// Full (flux, frequency) map; rows are split across solver.threads with a
/// static partition so output is identical at any thread count.
TransmissionMap simulate_map(const DeviceAssembly& device, const SweepSpec& sweep,
                             const SolverOptions& solver);

/// Single-dip fit of |t|(f). Least squares runs on |t|^2, which is exactly
/// Lorentzian for the weak-drive atom; reported depth and half-width are in
/// the amplitude convention so the rate identities hold.
RateFit fit_lorentzian(const std::vector<double>& f,
                       const std::vector<double>& abs_t);

/// Two-branch hyperbola fit f+- = (f_a + f_m)/2 +- sqrt(g^2 + (f_a - f_m)^2/4)
/// against per-column dip positions inside the frequency window; f_a(phi) is
/// taken linear across the fitted span.
AnticrossingFit extract_anticrossing(const TransmissionMap& map,
                                     std::pair<double, double> f_window);

/// Per-dip Lorentzian fits of a crystal-only |reflection| scan; Q = f0/(2 HWHM).
std::vector<QDipFit> fit_q_from_dips(const std::vector<double>& f,
                                     const std::vector<double>& abs_r);

} // namespace pcqad

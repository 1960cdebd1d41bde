#pragma once

#include <complex>
#include <vector>

#include "pcqad/errors.hpp"

namespace pcqad {

/// Driven open system in the frame rotating at the probe frequency: one
/// two-level atom exchanging excitations with M damped bosonic modes.
struct SystemModel {
    struct Mode {
        double omega = 0.0; // rad/s
        double kappa = 0.0; // energy decay rate omega/Q [rad/s]
        double g = 0.0;     // rad/s
    };
    double omega_a = 0.0;    // atom transition frequency [rad/s]
    double gamma1 = 0.0;     // rad/s
    double gamma_phi = 0.0;  // rad/s
    std::vector<Mode> modes;
    double omega_drive = 0.0; // probe frequency [rad/s]
    double rabi = 0.0;        // drive amplitude Omega [rad/s]

    double gamma2() const { return gamma1 / 2.0 + gamma_phi; }

    void validate() const {
        if (!(omega_a > 0.0))
            throw ParameterError("model: omega_a must be > 0");
        if (!(gamma1 > 0.0) || gamma_phi < 0.0)
            throw ParameterError("model: gamma1 > 0 and gamma_phi >= 0 required");
        if (!(rabi > 0.0))
            throw ParameterError("model: drive amplitude must be > 0");
        for (const Mode& m : modes)
            if (!(m.kappa > 0.0) || m.g < 0.0 || !(m.omega > 0.0))
                throw ParameterError("model: modes need kappa > 0, g >= 0, omega > 0");
        if (std::abs(omega_drive - omega_a) >= omega_a / 10.0)
            throw ParameterError("model: probe detuning breaks the rotating frame");
    }
};

struct SteadyState {
    std::complex<double> sigma_minus;
    std::vector<std::complex<double>> mode_amplitudes;
    std::complex<double> r;
    std::complex<double> t;
    // diagonal of the density operator (Lindblad solver only)
    std::vector<double> populations;
};

/// r = i Gamma1 <sigma-> / Omega, t = 1 - r.
std::pair<std::complex<double>, std::complex<double>>
reflection(std::complex<double> sigma_minus, double gamma1, double rabi);

/// Weak-drive linearization: solves the (1+M) coupled amplitude equations
/// i(omega_a - omega) s + Gamma2 s + i sum g_k beta_k = -i Omega/2 and
/// i(omega_k - omega) beta_k + (kappa_k/2) beta_k + i g_k s = 0.
/// Requires Omega <= Gamma1/10.
SteadyState semiclassical_response(const SystemModel& model);

/// Full Lindblad steady state with each mode truncated at n_max phonons.
/// Dense Liouvillian null-space solve with trace normalization; the Hilbert
/// dimension 2 (n_max+1)^M must stay within dim_cap and the dense-solve
/// limit of 64.
SteadyState lindblad_steady_state(const SystemModel& model, int n_max,
                                  int dim_cap = 1024);

} // namespace pcqad

#pragma once

#include <cmath>

#include "pcqad/errors.hpp"

namespace pcqad {

/// Charging-energy convention for the transition-frequency law. The quoted
/// EC_pair uses the Cooper-pair charge (2e)^2/2C; the standard law wants the
/// single-electron energy e^2/2C = EC_pair/4.
enum class EcConvention { single_electron, cooper_pair };

/// Flux-tunable artificial atom shunted by the IDT capacitance. Energies are
/// stored as frequencies (E/h, in Hz); decoherence rates are angular.
struct TransmonSpec {
    double ej_max_hz = 0.0;  // maximal Josephson energy E_J/h
    double ec_pair_hz = 0.0; // Cooper-pair charging energy E_C/h
    double c_q = 0.0;        // IDT (shunt) capacitance C_IDT [F]
    double c_g = 0.0;        // line coupling capacitance [F]
    double gamma1 = 0.0;     // relaxation rate [rad/s]
    double gamma2 = 0.0;     // total decoherence rate [rad/s]
    EcConvention ec_convention = EcConvention::single_electron;

    double gamma_phi() const { return gamma2 - gamma1 / 2.0; }
    double ec_single_hz() const {
        return ec_convention == EcConvention::single_electron ? ec_pair_hz / 4.0
                                                              : ec_pair_hz;
    }

    void validate() const {
        if (!(ec_pair_hz > 0.0 && ej_max_hz > ec_pair_hz))
            throw ParameterError("transmon: requires EJ_max > EC_pair > 0");
        if (!(c_q > 0.0 && c_g > 0.0))
            throw ParameterError("transmon: capacitances must be > 0");
        if (!(gamma1 > 0.0))
            throw ParameterError("transmon: gamma1 must be > 0");
        if (!(gamma2 >= gamma1 / 2.0))
            throw ParameterError("transmon: gamma2 must be >= gamma1/2");
    }
};

/// External flux in units of the flux quantum; physics is 1-periodic and even.
struct FluxBias {
    double phi = 0.0;

    double canonical() const {
        double p = phi - std::floor(phi);
        return p == 1.0 ? 0.0 : p;
    }
};

/// EJ(phi) = EJ_max |cos(pi phi)| for a symmetric SQUID, in Hz (E/h).
double ej_at_flux(const TransmonSpec& spec, const FluxBias& bias);

/// f_a = sqrt(8 Ec1 EJ(phi)) - Ec1 [Hz]. Requires EJ(phi) > Ec1 so the
/// harmonic expansion stays valid.
double qubit_frequency(const TransmonSpec& spec, const FluxBias& bias);

/// Charge matrix element xi0 = (2 E_C)^{3/4} EJ(phi)^{1/4} / e [V], with the
/// Cooper-pair E_C entering literally.
double matrix_element_xi0(const TransmonSpec& spec, const FluxBias& bias = {});

} // namespace pcqad

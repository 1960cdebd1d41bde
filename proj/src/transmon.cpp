#include "pcqad/transmon.hpp"

#include <numbers>

#include "pcqad/constants.hpp"

namespace pcqad {

double ej_at_flux(const TransmonSpec& spec, const FluxBias& bias) {
    spec.validate();
    return spec.ej_max_hz * std::abs(std::cos(std::numbers::pi * bias.phi));
}

double qubit_frequency(const TransmonSpec& spec, const FluxBias& bias) {
    const double ej = ej_at_flux(spec, bias);
    const double ec1 = spec.ec_single_hz();
    if (!(ej > ec1))
        throw ParameterError("qubit_frequency: EJ(phi) <= Ec, outside validity");
    return std::sqrt(8.0 * ec1 * ej) - ec1;
}

double matrix_element_xi0(const TransmonSpec& spec, const FluxBias& bias) {
    const double ej = ej_at_flux(spec, bias);
    const double ec_j = spec.ec_pair_hz * constants::planck_h; // joules
    const double ej_j = ej * constants::planck_h;
    return std::pow(2.0 * ec_j, 0.75) * std::pow(ej_j, 0.25) /
           constants::elementary_charge;
}

} // namespace pcqad

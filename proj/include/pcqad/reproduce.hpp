#pragma once

#include <string>
#include <vector>

#include "pcqad/spectroscopy.hpp"

namespace pcqad {

/// One row of the acceptance table: the criterion outcome plus a diagnostic
/// sentence with the measured numbers.
struct AcceptanceRow {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Published reference values the acceptance table checks against.
namespace reference {
inline constexpr double mode_frequencies_hz[4] = {3.244e9, 3.262e9, 3.287e9,
                                                  3.313e9};
inline constexpr double g01_over_2pi_hz = 53e6;
inline constexpr double g_ratio[4] = {53.0, 18.0, 17.0, 6.0};
inline constexpr double q_dips[3] = {496.0, 1040.0, 1100.0};
} // namespace reference

/// Runs all eight acceptance checks on the given configuration. Rows are
/// returned in criterion order; failures carry diagnostics, they do not throw.
std::vector<AcceptanceRow> run_acceptance(const Config& config);

/// Individual criteria, exposed for the reproduction pipeline.
AcceptanceRow check_band_gap_center(const Config& config);
AcceptanceRow check_mode_frequencies(const DeviceAssembly& device);
AcceptanceRow check_quality_factors(const DeviceAssembly& device);
AcceptanceRow check_couplings(const DeviceAssembly& device);
AcceptanceRow check_transverse_confinement(const DeviceAssembly& device);
AcceptanceRow check_oracle_equivalence();
AcceptanceRow check_round_trip_fits();
AcceptanceRow check_full_map(const Config& config, const DeviceAssembly& device);

} // namespace pcqad

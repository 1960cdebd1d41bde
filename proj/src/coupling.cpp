#include "pcqad/coupling.hpp"

#include <cmath>
#include <numbers>

#include "pcqad/constants.hpp"

namespace pcqad {

ElectrodeGeometry ElectrodeGeometry::from_lattice(const LatticeSpec& lattice) {
    lattice.validate();
    return {lattice.electrical_period(), lattice.metallization * lattice.period,
            lattice.cell_count / 2, lattice.total_length()};
}

double zero_point_displacement(const LatticeSpec& lattice, const PiezoConstants& piezo) {
    lattice.validate();
    piezo.validate();
    return std::sqrt(constants::hbar /
                     (2.0 * piezo.mass_density * lattice.aperture *
                      lattice.total_length() * lattice.free_speed));
}

double electrode_function(const ElectrodeGeometry& geom, double x) {
    if (x < 0.0 || x > geom.total_length)
        throw ParameterError("electrode_function: x outside [0, L]");
    const double period = geom.electrical_period / 2.0; // one cell per electrode
    int cell = static_cast<int>(std::floor(x / period));
    if (cell == 2 * geom.pair_count) // x == L lands on the right boundary
        --cell;
    const double local = x - cell * period;
    if (std::abs(local - period / 2.0) >= geom.electrode_width / 2.0)
        return 0.0;
    return cell % 2 == 0 ? 1.0 : -1.0;
}

namespace {

/// Snapped electrode polarity on the mode's own grid. Half-weight nodes at
/// the snapped edges keep the sampled pattern mirror-symmetric.
struct SampledElectrodes {
    int per_cell, s_lo, s_hi;
    size_t n;

    SampledElectrodes(const QuasiNormalMode& mode, const ElectrodeGeometry& geom) {
        if (mode.field.empty() || mode.sample_step <= 0.0)
            throw ParameterError("electrode overlap: mode has no field samples");
        const double ds = mode.sample_step;
        const double period = geom.electrical_period / 2.0;
        per_cell = static_cast<int>(std::lround(period / ds));
        s_lo = static_cast<int>(
            std::lround((period - geom.electrode_width) / (2.0 * ds)));
        s_hi = static_cast<int>(
            std::lround((period + geom.electrode_width) / (2.0 * ds)));
        n = mode.field.size();
    }

    double at(size_t idx) const {
        if (idx + 1 == n)
            return 0.0;
        const int cell = static_cast<int>(idx) / per_cell;
        const int s = static_cast<int>(idx) % per_cell;
        if (s < s_lo || s > s_hi)
            return 0.0;
        const double pol = cell % 2 == 0 ? 1.0 : -1.0;
        return (s == s_lo || s == s_hi) ? 0.5 * pol : pol;
    }
};

} // namespace

cplx electrode_overlap(const QuasiNormalMode& mode, const ElectrodeGeometry& geom) {
    const SampledElectrodes pe(mode, geom);
    cplx overlap = 0.0;
    for (size_t s = 0; s + 1 < pe.n; ++s)
        overlap += 0.5 * (mode.field[s] * pe.at(s) + mode.field[s + 1] * pe.at(s + 1));
    return overlap * mode.sample_step;
}

double overlap_potential(const QuasiNormalMode& mode, const ElectrodeGeometry& geom,
                         int j, double z0, const PiezoConstants& piezo) {
    piezo.validate();
    if (j < 1)
        throw ParameterError("overlap_potential: j must be a positive index");
    if (mode.field.empty() || mode.sample_step <= 0.0)
        throw ParameterError("overlap_potential: mode has no field samples");
    if (j % 2 == 0)
        return 0.0;

    const double ds = mode.sample_step;
    const size_t n = mode.field.size();
    const double length = ds * static_cast<double>(n - 1);
    {
        double acc = 0.0;
        for (size_t s = 0; s + 1 < n; ++s)
            acc += 0.5 * (std::norm(mode.field[s]) + std::norm(mode.field[s + 1]));
        const double mean_sq = acc * ds / length;
        if (std::abs(mean_sq - 1.0) > 1e-6)
            throw ParameterError("overlap_potential: field is not normalized");
    }

    const SampledElectrodes pe(mode, geom);
    double pe_area = 0.0;
    for (size_t s = 0; s + 1 < n; ++s)
        pe_area += 0.5 * (std::abs(pe.at(s)) + std::abs(pe.at(s + 1)));
    pe_area *= ds;
    if (!(pe_area > 0.0))
        throw NumericalError("overlap_potential: electrode pattern has zero area");

    const cplx overlap = electrode_overlap(mode, geom);
    const double shape = 2.0 * std::numbers::sqrt2 / (j * std::numbers::pi);
    return piezo.epz_over_eps * z0 * shape * std::abs(overlap) / (0.5 * pe_area);
}

double coupling_strength(double xi0, double c_idt, double v_ij) {
    if (xi0 < 0.0 || c_idt < 0.0 || v_ij < 0.0)
        throw ParameterError("coupling_strength: inputs must be nonnegative");
    return xi0 * c_idt * v_ij / constants::hbar;
}

} // namespace pcqad

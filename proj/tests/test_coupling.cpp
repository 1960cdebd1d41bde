#include "doctest.h"

#include <cmath>
#include <map>

#include "pcqad/coupling.hpp"
#include "test_util.hpp"

using namespace pcqad;
using testutil::reference_lattice;
using testutil::reference_transmon;
using testutil::two_pi;

namespace {

const PiezoConstants reference_piezo{1.6e9, 2650.0};

} // namespace

TEST_SUITE("coupling") {

TEST_CASE("zero-point displacement") {
    const double z0 = zero_point_displacement(reference_lattice(), reference_piezo);
    CHECK(z0 == doctest::Approx(6.281164403350467e-17).epsilon(1e-12));
    LatticeSpec longer = reference_lattice();
    longer.cell_count *= 4;
    CHECK(zero_point_displacement(longer, reference_piezo) ==
          doctest::Approx(z0 / 2.0).epsilon(1e-12));
}

TEST_CASE("electrode step function") {
    const ElectrodeGeometry geom = ElectrodeGeometry::from_lattice(reference_lattice());
    const double p = reference_lattice().period;
    CHECK(geom.electrical_period == doctest::Approx(2.0 * p));
    CHECK(geom.pair_count == 140);
    CHECK(electrode_function(geom, p / 2.0) == 1.0);
    CHECK(electrode_function(geom, p / 2.0 + geom.electrical_period / 2.0) == -1.0);
    CHECK(electrode_function(geom, 0.05 * p) == 0.0);
    // the closed endpoint carries no electrode
    CHECK(electrode_function(geom, geom.total_length) == 0.0);
    CHECK_THROWS_AS(electrode_function(geom, -1e-9), ParameterError);
    CHECK_THROWS_AS(electrode_function(geom, geom.total_length + 1e-9),
                    ParameterError);
    // equal areas of opposite polarity
    double net = 0.0;
    const int n = 280 * 64;
    for (int i = 0; i < n; ++i)
        net += electrode_function(geom, (i + 0.5) * geom.total_length / n);
    CHECK(net == 0.0);
}

TEST_CASE("coupling strength formula") {
    CHECK(coupling_strength(1e-5, 83e-15, 0.0) == 0.0);
    const double g = coupling_strength(1e-5, 83e-15, 2e-7);
    CHECK(coupling_strength(1e-5, 2.0 * 83e-15, 2e-7) ==
          doctest::Approx(2.0 * g).epsilon(1e-12));
    CHECK_THROWS_AS(coupling_strength(-1.0, 83e-15, 2e-7), ParameterError);
}

TEST_CASE("overlap pipeline reproduces the reference couplings") {
    const LatticeSpec lat = reference_lattice();
    const ElectrodeGeometry geom = ElectrodeGeometry::from_lattice(lat);
    const double z0 = zero_point_displacement(lat, reference_piezo);
    const double xi0 = matrix_element_xi0(reference_transmon());
    const double c_idt = reference_transmon().c_q;

    std::map<int, QuasiNormalMode> modes;
    for (auto& m : find_qnms(lat, {3.20e9, 3.35e9}))
        modes.emplace(m.index_i, std::move(m));

    auto g_of = [&](int i, int j) {
        const double v = overlap_potential(modes.at(i), geom, j, z0, reference_piezo);
        return coupling_strength(xi0, c_idt, v) / two_pi;
    };

    const double g01 = g_of(0, 1);
    CHECK(g01 == doctest::Approx(241.844621e6).epsilon(2e-3));
    CHECK(g_of(-2, 1) == doctest::Approx(75.952860e6).epsilon(2e-3));
    CHECK(g_of(2, 1) == doctest::Approx(26.943310e6).epsilon(2e-3));
    // the j dependence is the 1/j envelope factor
    CHECK(g_of(0, 3) == doctest::Approx(g01 / 3.0).epsilon(1e-12));

    SUBCASE("parity selection rules are exact") {
        for (int i : {-3, -1, 1, 3})
            CHECK(g_of(i, 1) < 1e-10 * g01);
        CHECK(overlap_potential(modes.at(0), geom, 2, z0, reference_piezo) == 0.0);
        CHECK(overlap_potential(modes.at(0), geom, 4, z0, reference_piezo) == 0.0);
    }

    SUBCASE("potential is invariant under a global phase of the field") {
        QuasiNormalMode rotated = modes.at(0);
        const cplx phase = std::polar(1.0, 0.7);
        for (cplx& u : rotated.field)
            u *= phase;
        CHECK(overlap_potential(rotated, geom, 1, z0, reference_piezo) ==
              doctest::Approx(overlap_potential(modes.at(0), geom, 1, z0,
                                                reference_piezo))
                  .epsilon(1e-12));
    }

    SUBCASE("unnormalized fields are rejected") {
        QuasiNormalMode scaled = modes.at(0);
        for (cplx& u : scaled.field)
            u *= 1.01;
        CHECK_THROWS_AS(overlap_potential(scaled, geom, 1, z0, reference_piezo),
                        ParameterError);
    }

    SUBCASE("invalid transverse index") {
        CHECK_THROWS_AS(overlap_potential(modes.at(0), geom, 0, z0, reference_piezo),
                        ParameterError);
    }
}

TEST_CASE("doubling the cell count changes g weakly") {
    const TransmonSpec atom = reference_transmon();
    auto g01_for = [&](int cells) {
        LatticeSpec lat = reference_lattice();
        lat.cell_count = cells;
        const ElectrodeGeometry geom = ElectrodeGeometry::from_lattice(lat);
        const double z0 = zero_point_displacement(lat, reference_piezo);
        const auto modes = find_qnms(lat, {3.20e9, 3.35e9});
        double best_g = 0.0;
        for (const auto& m : modes) {
            const double v = overlap_potential(m, geom, 1, z0, reference_piezo);
            best_g = std::max(best_g,
                              coupling_strength(matrix_element_xi0(atom),
                                                atom.c_q, v));
        }
        return best_g;
    };
    const double g280 = g01_for(280);
    const double g560 = g01_for(560);
    CHECK(std::abs(g560 / g280 - 1.0) < 0.35);
}

} // TEST_SUITE

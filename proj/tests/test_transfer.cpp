#include "doctest.h"

#include <cmath>

#include "pcqad/transfer.hpp"
#include "test_util.hpp"

using namespace pcqad;
using testutil::reference_lattice;
using testutil::two_pi;

TEST_SUITE("transfer") {

TEST_CASE("segment matrix matches the closed form of free propagation") {
    const double v = 3160.0;
    const cplx omega(two_pi * 3.3e9, 0.0);
    const double len = 1e-6;
    const Mat2 m = segment_matrix(len, v, omega);
    const double phi = omega.real() / v * len;
    CHECK(m.a.real() == doctest::Approx(std::cos(phi)).epsilon(1e-12));
    CHECK(m.b.real() == doctest::Approx(std::sin(phi) / (omega.real() / v))
                            .epsilon(1e-12));
    CHECK(std::abs(m.det() - cplx(1.0, 0.0)) < 1e-12);
}

TEST_CASE("unit cell is unimodular for real and complex frequencies") {
    const LatticeSpec lat = reference_lattice();
    for (cplx omega : {cplx(two_pi * 3.28e9, 0.0), cplx(two_pi * 3.1e9, -2e7),
                       cplx(two_pi * 3.5e9, -9e6)}) {
        const Mat2 cell = unit_cell_matrix(lat, omega);
        CHECK(std::abs(cell.det() - cplx(1.0, 0.0)) < 1e-10);
    }
}

TEST_CASE("zero frequency is rejected") {
    CHECK_THROWS_AS(unit_cell_matrix(reference_lattice(), cplx(0.0, 0.0)),
                    ParameterError);
}

TEST_CASE("half trace exceeds 1 in magnitude inside the stop band") {
    const LatticeSpec lat = reference_lattice();
    CHECK(std::abs(half_trace(lat, cplx(two_pi * 3.2827e9, 0.0)).real()) > 1.0);
    CHECK(std::abs(half_trace(lat, cplx(two_pi * 3.10e9, 0.0)).real()) < 1.0);
}

TEST_CASE("matrix power agrees with repeated multiplication") {
    LatticeSpec lat = reference_lattice();
    lat.cell_count = 7;
    const cplx omega(two_pi * 3.27e9, -1e7);
    const Mat2 cell = unit_cell_matrix(lat, omega);
    Mat2 direct = Mat2::identity();
    for (int n = 0; n < 7; ++n)
        direct = cell * direct;
    const Mat2 powed = total_transfer_matrix(lat, omega);
    CHECK(std::abs(powed.a - direct.a) < 1e-9 * std::abs(direct.a));
    CHECK(std::abs(powed.c - direct.c) < 1e-9 * std::abs(direct.c));
}

TEST_CASE("boundary function derivative matches finite differences") {
    const LatticeSpec lat = reference_lattice();
    const cplx omega(two_pi * 3.26e9, -1.5e7);
    const auto [value, deriv] = boundary_function_d(lat, omega);
    CHECK(std::abs(value - boundary_function(lat, omega)) < 1e-12 * std::abs(value));
    const double h = std::abs(omega) * 1e-7;
    const cplx fd = (boundary_function(lat, omega + cplx(h, 0.0)) -
                     boundary_function(lat, omega - cplx(h, 0.0))) /
                    (2.0 * h);
    CHECK(std::abs(deriv - fd) < 1e-5 * std::abs(deriv));
    // derivative along the imaginary axis probes analyticity
    const cplx fdi = (boundary_function(lat, omega + cplx(0.0, h)) -
                      boundary_function(lat, omega - cplx(0.0, h))) /
                     cplx(0.0, 2.0 * h);
    CHECK(std::abs(deriv - fdi) < 1e-5 * std::abs(deriv));
}

TEST_CASE("product rule tracking matches the matrix power derivative") {
    const LatticeSpec lat = reference_lattice();
    const cplx omega(two_pi * 3.24e9, 0.0);
    const Mat2D t = total_transfer_matrix_d(lat, omega);
    const double h = std::abs(omega) * 1e-7;
    const Mat2 tp = total_transfer_matrix(lat, omega + cplx(h, 0.0));
    const Mat2 tm = total_transfer_matrix(lat, omega - cplx(h, 0.0));
    const cplx fd_a = (tp.a - tm.a) / (2.0 * h);
    CHECK(std::abs(t.dm.a - fd_a) < 1e-5 * std::abs(t.dm.a));
}

} // TEST_SUITE

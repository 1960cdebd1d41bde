#include "doctest.h"

#include <cmath>
#include <vector>

#include "pcqad/simd/kernels.hpp"
#include "pcqad/spectroscopy.hpp"
#include "test_util.hpp"

using namespace pcqad;
using testutil::two_pi;

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i)
        x[i] = a + (b - a) * i / double(n - 1);
    return x;
}

// |t| trace of a bare weak-driven atom; exactly the model fit_lorentzian assumes
std::vector<double> atom_trace(const std::vector<double>& f, double f_a,
                               double g1_hz, double g2_hz) {
    simd::ResponseParams p{two_pi * f_a, two_pi * g1_hz, two_pi * g2_hz, {}};
    std::vector<double> w(f.size());
    for (size_t i = 0; i < f.size(); ++i)
        w[i] = two_pi * f[i];
    std::vector<std::complex<double>> t(f.size());
    simd::response_scan(p, w.data(), w.size(), t.data());
    std::vector<double> y(f.size());
    for (size_t i = 0; i < f.size(); ++i)
        y[i] = std::abs(t[i]);
    return y;
}

TransmissionMap anticrossing_map(double f_m, double g_rad, int cols, int rows) {
    TransmissionMap map;
    map.flux = linspace(0.0, 1.0, cols);
    map.frequency = linspace(3.15e9, 3.37e9, rows);
    map.t.resize(size_t(cols) * rows);
    std::vector<double> w(rows);
    for (int i = 0; i < rows; ++i)
        w[i] = two_pi * map.frequency[i];
    for (int c = 0; c < cols; ++c) {
        const double f_a = 3.16e9 + 0.2e9 * map.flux[c];
        simd::ResponseParams p{two_pi * f_a, two_pi * 8e6, two_pi * 11e6,
                               {{two_pi * f_m, two_pi * f_m / 1040.0, g_rad}}};
        simd::response_scan(p, w.data(), size_t(rows), map.t.data() + size_t(c) * rows);
    }
    return map;
}

} // namespace

TEST_SUITE("fits") {

TEST_CASE("lorentzian fit recovers the decay rates") {
    const double f_a = 3.2612e9;
    const auto f = linspace(f_a - 70e6, f_a + 70e6, 561);
    const RateFit rf = fit_lorentzian(f, atom_trace(f, f_a, 8e6, 11e6));
    CHECK(rf.fit.center == doctest::Approx(f_a).epsilon(1e-6));
    CHECK(rf.gamma2 == doctest::Approx(two_pi * 11e6).epsilon(0.02));
    CHECK(rf.gamma1 == doctest::Approx(two_pi * 8e6).epsilon(0.02));
    CHECK(rf.fit.residual < 1e-3);

    // noiseless data: doubling the grid pins the rates to the same values
    const auto f2 = linspace(f_a - 70e6, f_a + 70e6, 1121);
    const RateFit rf2 = fit_lorentzian(f2, atom_trace(f2, f_a, 8e6, 11e6));
    CHECK(rf2.gamma1 == doctest::Approx(rf.gamma1).epsilon(1e-3));
    CHECK(rf2.gamma2 == doctest::Approx(rf.gamma2).epsilon(1e-3));
}

TEST_CASE("featureless trace is rejected") {
    const auto f = linspace(3.20e9, 3.35e9, 301);
    std::vector<double> flat(f.size(), 1.0);
    CHECK_THROWS_AS(fit_lorentzian(f, flat), FitError);
}

TEST_CASE("quality factors from a single dip") {
    const double f0 = 3.262e9, q_true = 1040.0;
    const auto f = linspace(3.24e9, 3.285e9, 2001);
    std::vector<double> y(f.size());
    simd::lorentzian_scan(f0, f0 / (2.0 * q_true), 0.4, 1.0, f.data(), f.size(),
                          y.data());
    const auto fits = fit_q_from_dips(f, y);
    REQUIRE(fits.size() == 1);
    CHECK(fits[0].q == doctest::Approx(q_true).epsilon(0.03));
    CHECK(fits[0].fit.center == doctest::Approx(f0).epsilon(1e-6));
}

TEST_CASE("quality factors from a composite trace") {
    const double centers[3] = {3.244e9, 3.262e9, 3.287e9};
    const double qs[3] = {496.0, 1040.0, 1100.0};
    const double depths[3] = {0.5, 0.4, 0.45};
    const auto f = linspace(3.20e9, 3.33e9, 6501);
    std::vector<double> y(f.size(), 1.0), dip(f.size());
    for (int k = 0; k < 3; ++k) {
        simd::lorentzian_scan(centers[k], centers[k] / (2.0 * qs[k]), depths[k],
                              0.0, f.data(), f.size(), dip.data());
        for (size_t i = 0; i < f.size(); ++i)
            y[i] += dip[i];
    }
    const auto fits = fit_q_from_dips(f, y);
    REQUIRE(fits.size() == 3);
    for (int k = 0; k < 3; ++k)
        CHECK(fits[k].q == doctest::Approx(qs[k]).epsilon(0.05));
}

TEST_CASE("dips narrower than the grid raise a numerical error") {
    // Q = 1e6 puts the full dip inside one 1 MHz grid step
    const auto f = linspace(3.25e9, 3.27e9, 21);
    std::vector<double> y(f.size());
    const double f0 = f[10]; // centered on a grid point so the sample sees it
    simd::lorentzian_scan(f0, f0 / 2e6, 0.5, 1.0, f.data(), f.size(), y.data());
    CHECK_THROWS_AS(fit_q_from_dips(f, y), NumericalError);
}

TEST_CASE("overlapping dips raise a numerical error") {
    const auto f = linspace(3.20e9, 3.32e9, 4001);
    std::vector<double> y(f.size(), 1.0), dip(f.size());
    for (double f0 : {3.2600e9, 3.2635e9}) {
        simd::lorentzian_scan(f0, 2e6, 0.4, 0.0, f.data(), f.size(), dip.data());
        for (size_t i = 0; i < f.size(); ++i)
            y[i] += dip[i];
    }
    CHECK_THROWS_AS(fit_q_from_dips(f, y), NumericalError);
}

TEST_CASE("anticrossing fit recovers the coupling") {
    const double g_true = two_pi * 39e6;
    const auto map = anticrossing_map(3.26e9, g_true, 81, 1101);
    const AnticrossingFit fit = extract_anticrossing(map, {3.16e9, 3.36e9});
    CHECK(fit.g == doctest::Approx(g_true).epsilon(0.05));
    CHECK(fit.f_mode == doctest::Approx(3.26e9).epsilon(1e-3));
    // bare lines cross where f_a(phi) = f_m
    CHECK(fit.phi_cross == doctest::Approx(0.5).epsilon(0.05));

    // refining the flux grid moves the estimate by little
    const auto fine = anticrossing_map(3.26e9, g_true, 161, 1101);
    const AnticrossingFit fit2 = extract_anticrossing(fine, {3.16e9, 3.36e9});
    CHECK(fit2.g == doctest::Approx(fit.g).epsilon(0.02));
}

TEST_CASE("uncoupled map has no anticrossing to fit") {
    const auto map = anticrossing_map(3.26e9, 0.0, 41, 601);
    CHECK_THROWS_AS(extract_anticrossing(map, {3.16e9, 3.36e9}), FitError);
}

TEST_CASE("window must cover enough of the frequency grid") {
    const auto map = anticrossing_map(3.26e9, two_pi * 39e6, 41, 601);
    CHECK_THROWS_AS(extract_anticrossing(map, {3.259e9, 3.260e9}), ParameterError);
}

} // TEST_SUITE

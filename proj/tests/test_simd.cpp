#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "pcqad/dynamics.hpp"
#include "pcqad/simd/kernels.hpp"
#include "test_util.hpp"

using namespace pcqad;
using testutil::two_pi;

namespace {

simd::ResponseParams seeded_params(unsigned seed, int n_modes) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    simd::ResponseParams p;
    p.omega_a = two_pi * (3.2e9 + 0.1e9 * u(rng));
    p.gamma1 = two_pi * (4e6 + 8e6 * u(rng));
    p.gamma2 = p.gamma1 / 2.0 + two_pi * 8e6 * u(rng);
    for (int k = 0; k < n_modes; ++k)
        p.modes.push_back({p.omega_a + two_pi * (40e6 * (u(rng) - 0.5)),
                           two_pi * (1e6 + 4e6 * u(rng)),
                           two_pi * (10e6 + 60e6 * u(rng))});
    return p;
}

std::vector<double> probe_grid(double center, size_t n) {
    std::vector<double> w(n);
    for (size_t i = 0; i < n; ++i)
        w[i] = center + two_pi * (-75e6 + 150e6 * double(i) / double(n - 1));
    return w;
}

struct BackendGuard {
    ~BackendGuard() { simd::set_backend(simd::Backend::auto_detect); }
};

} // namespace

TEST_SUITE("simd") {

TEST_CASE("a concrete backend is selected at startup") {
    const simd::Backend b = simd::active_backend();
    CHECK((b == simd::Backend::scalar || b == simd::Backend::avx2));
}

TEST_CASE("backend can be pinned to scalar") {
    BackendGuard guard;
    simd::set_backend(simd::Backend::scalar);
    CHECK(simd::active_backend() == simd::Backend::scalar);
}

TEST_CASE("scalar and vector paths agree to rounding") {
    if (simd::active_backend() != simd::Backend::avx2)
        return; // nothing to compare on this host
    BackendGuard guard;
    for (unsigned seed : {7u, 19u, 101u}) {
        const auto p = seeded_params(seed, int(seed % 4));
        // 257 points exercises the 4-wide loop plus a tail
        const auto w = probe_grid(p.omega_a, 257);
        std::vector<std::complex<double>> ts(w.size()), tv(w.size());
        simd::set_backend(simd::Backend::scalar);
        simd::response_scan(p, w.data(), w.size(), ts.data());
        simd::set_backend(simd::Backend::avx2);
        simd::response_scan(p, w.data(), w.size(), tv.data());
        for (size_t i = 0; i < w.size(); ++i)
            CHECK(std::abs(tv[i] - ts[i]) < 1e-12);

        std::vector<double> f(257), ls(257), lv(257);
        for (size_t i = 0; i < f.size(); ++i)
            f[i] = 3.2e9 + 1e5 * double(i);
        simd::set_backend(simd::Backend::scalar);
        simd::lorentzian_scan(3.21e9, 4e6, 0.3, 0.98, f.data(), f.size(), ls.data());
        simd::set_backend(simd::Backend::avx2);
        simd::lorentzian_scan(3.21e9, 4e6, 0.3, 0.98, f.data(), f.size(), lv.data());
        for (size_t i = 0; i < f.size(); ++i)
            CHECK(std::abs(lv[i] - ls[i]) < 1e-14);
    }
}

TEST_CASE("kernel matches the reference linear solve") {
    const auto p = seeded_params(42, 3);
    const auto w = probe_grid(p.omega_a, 64);
    std::vector<std::complex<double>> t(w.size());
    simd::response_scan(p, w.data(), w.size(), t.data());

    SystemModel m;
    m.omega_a = p.omega_a;
    m.gamma1 = p.gamma1;
    m.gamma_phi = p.gamma2 - p.gamma1 / 2.0;
    for (const auto& k : p.modes)
        m.modes.push_back({k.omega, k.kappa, k.g});
    m.rabi = p.gamma1 / 25.0;
    for (size_t i = 0; i < w.size(); ++i) {
        m.omega_drive = w[i];
        CHECK(std::abs(t[i] - semiclassical_response(m).t) < 1e-10);
    }
}

TEST_CASE("lorentzian kernel matches the formula") {
    std::vector<double> f(33), out(33);
    for (size_t i = 0; i < f.size(); ++i)
        f[i] = 3.2e9 + 2e5 * double(i);
    const double f0 = 3.2032e9, hw = 1.1e6, depth = 0.4, base = 1.01;
    simd::lorentzian_scan(f0, hw, depth, base, f.data(), f.size(), out.data());
    for (size_t i = 0; i < f.size(); ++i) {
        const double x = (f[i] - f0) / hw;
        CHECK(out[i] == doctest::Approx(base - depth / (1.0 + x * x))
                            .epsilon(1e-14));
    }
}

} // TEST_SUITE

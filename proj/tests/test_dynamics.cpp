#include "doctest.h"

#include <cmath>

#include "pcqad/dynamics.hpp"
#include "test_util.hpp"

using namespace pcqad;
using testutil::two_pi;

namespace {

SystemModel bare_atom() {
    SystemModel m;
    m.omega_a = two_pi * 3.26e9;
    m.gamma1 = two_pi * 8e6;
    m.gamma_phi = two_pi * 7e6; // Gamma2/2pi = 11 MHz
    m.omega_drive = m.omega_a;
    m.rabi = m.gamma1 / 25.0;
    return m;
}

} // namespace

TEST_SUITE("dynamics") {

TEST_CASE("reflection map") {
    const auto [r0, t0] = reflection({0.0, 0.0}, two_pi * 8e6, two_pi * 1e5);
    CHECK(std::abs(r0) == 0.0);
    CHECK(t0 == std::complex<double>(1.0, 0.0));
    CHECK_THROWS_AS(reflection({0.1, 0.0}, two_pi * 8e6, 0.0), ParameterError);
}

TEST_CASE("resonant bare atom reflects Gamma1/(2 Gamma2)") {
    const auto ss = semiclassical_response(bare_atom());
    CHECK(std::abs(ss.r) == doctest::Approx(8.0 / 22.0).epsilon(1e-12));
    CHECK(ss.r.real() == doctest::Approx(8.0 / 22.0).epsilon(1e-12));
    CHECK(ss.t == 1.0 - ss.r);
    CHECK(ss.mode_amplitudes.empty());
}

TEST_CASE("detuned atom becomes transparent") {
    SystemModel m = bare_atom();
    m.omega_drive = m.omega_a * (1.0 + 0.05); // largest detuning the frame allows
    const auto ss = semiclassical_response(m);
    // |r| ~ Gamma1 / (2 |Delta|) far off resonance
    CHECK(std::abs(ss.r) < 0.03);
    CHECK(std::abs(ss.r) == doctest::Approx(m.gamma1 /
                                            (2.0 * (m.omega_drive - m.omega_a)))
                                .epsilon(0.01));
    CHECK(std::abs(ss.t) > 0.998);
}

TEST_CASE("strong coupling splits the dip by 2g") {
    SystemModel m = bare_atom();
    m.gamma1 = two_pi * 2e6;
    m.gamma_phi = 0.0;
    m.rabi = m.gamma1 / 25.0;
    const double g = two_pi * 50e6;
    m.modes.push_back({m.omega_a, m.omega_a / 30000.0, g});
    double best1 = 1.0, best2 = 1.0, f1 = 0.0, f2 = 0.0;
    for (int i = 0; i <= 4000; ++i) {
        m.omega_drive = m.omega_a + two_pi * (-80e6 + 160e6 * i / 4000.0);
        const double at = std::abs(semiclassical_response(m).t);
        if (m.omega_drive < m.omega_a && at < best1) {
            best1 = at;
            f1 = m.omega_drive;
        }
        if (m.omega_drive > m.omega_a && at < best2) {
            best2 = at;
            f2 = m.omega_drive;
        }
    }
    CHECK((f2 - f1) == doctest::Approx(2.0 * g).epsilon(0.02));
}

TEST_CASE("passivity at weak drive") {
    SystemModel m = bare_atom();
    m.modes.push_back({m.omega_a + two_pi * 10e6, two_pi * 3e6, two_pi * 20e6});
    for (int i = 0; i <= 200; ++i) {
        m.omega_drive = m.omega_a + two_pi * (-60e6 + 120e6 * i / 200.0);
        const auto ss = semiclassical_response(m);
        CHECK(std::norm(ss.t) + std::norm(ss.r) <= 1.0 + 1e-6);
        CHECK(std::abs(ss.r) <= 1.0 + 1e-6);
    }
}

TEST_CASE("drive above the linear regime is rejected") {
    SystemModel m = bare_atom();
    m.rabi = m.gamma1; // far beyond Gamma1/10
    CHECK_THROWS_AS(semiclassical_response(m), ParameterError);
}

TEST_CASE("rotating frame validity is enforced") {
    SystemModel m = bare_atom();
    m.omega_drive = m.omega_a * 1.2;
    CHECK_THROWS_AS(m.validate(), ParameterError);
}

TEST_CASE("lindblad matches the semiclassical solution at weak drive") {
    SystemModel m = bare_atom();
    m.modes.push_back({m.omega_a + two_pi * 5e6, two_pi * 3e6, two_pi * 15e6});
    m.omega_drive = m.omega_a - two_pi * 4e6;
    const auto sc = semiclassical_response(m);
    const auto lb = lindblad_steady_state(m, 3);
    const double scale = m.rabi / (m.gamma1 / 2.0 + m.gamma_phi);
    CHECK(std::abs(lb.sigma_minus - sc.sigma_minus) < 1e-3 * scale);
    CHECK(std::abs(lb.mode_amplitudes[0] - sc.mode_amplitudes[0]) < 1e-3 * scale);
}

TEST_CASE("lindblad density operator is physical") {
    SystemModel m = bare_atom();
    m.modes.push_back({m.omega_a, two_pi * 2e6, two_pi * 10e6});
    const auto ss = lindblad_steady_state(m, 2);
    double trace = 0.0;
    for (double p : ss.populations) {
        CHECK(p >= -1e-9);
        trace += p;
    }
    CHECK(trace == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(ss.populations.size() == 6); // 2 x (n_max + 1)
}

TEST_CASE("truncation is converged by n_max = 2") {
    SystemModel m = bare_atom();
    m.rabi = m.gamma1 / 10.0;
    m.modes.push_back({m.omega_a + two_pi * 8e6, two_pi * 3e6, two_pi * 25e6});
    const auto s2 = lindblad_steady_state(m, 2);
    const auto s3 = lindblad_steady_state(m, 3);
    CHECK(std::abs(s3.sigma_minus - s2.sigma_minus) <
          1e-4 * std::abs(s3.sigma_minus));
}

TEST_CASE("saturation suppresses the coherent response") {
    SystemModel weak = bare_atom();
    weak.gamma_phi = 0.0;
    SystemModel strong = weak;
    strong.rabi = weak.gamma1 * 20.0;
    const auto w = lindblad_steady_state(weak, 1);
    const auto s = lindblad_steady_state(strong, 1);
    CHECK(std::abs(s.sigma_minus) < 0.5);
    CHECK(std::abs(s.r) < 0.1);
    CHECK(std::abs(s.r) < std::abs(w.r));
    // excited population approaches 1/2 from below
    CHECK(s.populations[1] > 0.4);
    CHECK(s.populations[1] < 0.5);
}

TEST_CASE("dimension guards") {
    SystemModel m = bare_atom();
    for (int k = 0; k < 2; ++k)
        m.modes.push_back({m.omega_a + two_pi * (5e6 + k * 1e6), two_pi * 3e6,
                           two_pi * 10e6});
    CHECK_THROWS_AS(lindblad_steady_state(m, 7), ResourceError);       // 128 > 64
    CHECK_THROWS_AS(lindblad_steady_state(m, 7, 100), ResourceError);  // cap
    CHECK_THROWS_AS(lindblad_steady_state(m, 0), ParameterError);
}

} // TEST_SUITE

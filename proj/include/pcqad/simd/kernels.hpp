#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace pcqad::simd {

/// Runtime-selected implementation of the data-parallel inner loops. The
/// default probes CPU features once; PCQAD_SIMD=scalar|avx2 overrides, and
/// set_backend pins a choice programmatically.
enum class Backend { auto_detect, scalar, avx2 };

void set_backend(Backend backend);
Backend active_backend();

/// Parameters of the weak-drive response evaluated pointwise over a probe
/// grid: t(omega) = 1 - (Gamma1/2) / D(omega) with
/// D = i(omega_a - omega) + Gamma2 + sum_k g_k^2 / (i(omega_k - omega) + kappa_k/2).
struct ResponseParams {
    double omega_a = 0.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    struct Mode {
        double omega, kappa, g;
    };
    std::vector<Mode> modes;
};

/// Writes t(omega[i]) for i in [0, n); closed-form elimination of the mode
/// amplitudes, algebraically identical to the coupled linear solve.
void response_scan(const ResponseParams& params, const double* omega, size_t n,
                   std::complex<double>* t_out);

/// Writes baseline - depth / (1 + ((f - f0)/hw)^2) for each grid point.
void lorentzian_scan(double f0, double hw, double depth, double baseline,
                     const double* f, size_t n, double* out);

namespace detail {
void response_scan_scalar(const ResponseParams&, const double*, size_t,
                          std::complex<double>*);
void lorentzian_scan_scalar(double, double, double, double, const double*, size_t,
                            double*);
#if defined(__x86_64__)
void response_scan_avx2(const ResponseParams&, const double*, size_t,
                        std::complex<double>*);
void lorentzian_scan_avx2(double, double, double, double, const double*, size_t,
                          double*);
#endif
} // namespace detail

} // namespace pcqad::simd

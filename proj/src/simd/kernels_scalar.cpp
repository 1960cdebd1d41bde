#include "pcqad/simd/kernels.hpp"

namespace pcqad::simd::detail {

void response_scan_scalar(const ResponseParams& p, const double* omega, size_t n,
                          std::complex<double>* t_out) {
    for (size_t i = 0; i < n; ++i) {
        const double w = omega[i];
        double d_re = p.gamma2;
        double d_im = p.omega_a - w;
        for (const auto& m : p.modes) {
            const double det = m.omega - w;
            const double hk = m.kappa / 2.0;
            const double inv = (m.g * m.g) / (det * det + hk * hk);
            d_re += inv * hk;
            d_im -= inv * det;
        }
        const double scale = (p.gamma1 / 2.0) / (d_re * d_re + d_im * d_im);
        t_out[i] = {1.0 - scale * d_re, scale * d_im};
    }
}

void lorentzian_scan_scalar(double f0, double hw, double depth, double baseline,
                            const double* f, size_t n, double* out) {
    const double inv_hw = 1.0 / hw;
    for (size_t i = 0; i < n; ++i) {
        const double x = (f[i] - f0) * inv_hw;
        out[i] = baseline - depth / (1.0 + x * x);
    }
}

} // namespace pcqad::simd::detail

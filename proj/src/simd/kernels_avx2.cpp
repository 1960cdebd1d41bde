#if defined(__x86_64__)

#include <immintrin.h>

#include "pcqad/simd/kernels.hpp"

namespace pcqad::simd::detail {

__attribute__((target("avx2,fma"))) void response_scan_avx2(
    const ResponseParams& p, const double* omega, size_t n,
    std::complex<double>* t_out) {
    const __m256d gamma2 = _mm256_set1_pd(p.gamma2);
    const __m256d omega_a = _mm256_set1_pd(p.omega_a);
    const __m256d half_g1 = _mm256_set1_pd(p.gamma1 / 2.0);
    const __m256d one = _mm256_set1_pd(1.0);

    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d w = _mm256_loadu_pd(omega + i);
        __m256d d_re = gamma2;
        __m256d d_im = _mm256_sub_pd(omega_a, w);
        for (const auto& m : p.modes) {
            const __m256d det = _mm256_sub_pd(_mm256_set1_pd(m.omega), w);
            const __m256d hk = _mm256_set1_pd(m.kappa / 2.0);
            const __m256d g2 = _mm256_set1_pd(m.g * m.g);
            const __m256d den =
                _mm256_fmadd_pd(det, det, _mm256_mul_pd(hk, hk));
            const __m256d inv = _mm256_div_pd(g2, den);
            d_re = _mm256_fmadd_pd(inv, hk, d_re);
            d_im = _mm256_fnmadd_pd(inv, det, d_im);
        }
        const __m256d mag2 =
            _mm256_fmadd_pd(d_re, d_re, _mm256_mul_pd(d_im, d_im));
        const __m256d scale = _mm256_div_pd(half_g1, mag2);
        const __m256d t_re = _mm256_fnmadd_pd(scale, d_re, one);
        const __m256d t_im = _mm256_mul_pd(scale, d_im);
        // interleave (re, im) pairs back into complex storage
        const __m256d lo = _mm256_unpacklo_pd(t_re, t_im); // r0 i0 r2 i2
        const __m256d hi = _mm256_unpackhi_pd(t_re, t_im); // r1 i1 r3 i3
        double* out = reinterpret_cast<double*>(t_out + i);
        _mm256_storeu_pd(out, _mm256_permute2f128_pd(lo, hi, 0x20));
        _mm256_storeu_pd(out + 4, _mm256_permute2f128_pd(lo, hi, 0x31));
    }
    if (i < n)
        response_scan_scalar(p, omega + i, n - i, t_out + i);
}

__attribute__((target("avx2,fma"))) void lorentzian_scan_avx2(
    double f0, double hw, double depth, double baseline, const double* f,
    size_t n, double* out) {
    const __m256d center = _mm256_set1_pd(f0);
    const __m256d inv_hw = _mm256_set1_pd(1.0 / hw);
    const __m256d vdepth = _mm256_set1_pd(depth);
    const __m256d vbase = _mm256_set1_pd(baseline);
    const __m256d one = _mm256_set1_pd(1.0);

    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x =
            _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(f + i), center), inv_hw);
        const __m256d den = _mm256_fmadd_pd(x, x, one);
        _mm256_storeu_pd(out + i,
                         _mm256_sub_pd(vbase, _mm256_div_pd(vdepth, den)));
    }
    if (i < n)
        lorentzian_scan_scalar(f0, hw, depth, baseline, f + i, n - i, out + i);
}

} // namespace pcqad::simd::detail

#endif

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "pcqad/simd/kernels.hpp"

namespace pcqad::simd {

namespace {

std::atomic<Backend> g_backend{Backend::auto_detect};

bool avx2_available() {
#if defined(__x86_64__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend resolve() {
    Backend b = g_backend.load(std::memory_order_relaxed);
    if (b != Backend::auto_detect)
        return b;
    if (const char* env = std::getenv("PCQAD_SIMD")) {
        if (std::strcmp(env, "scalar") == 0)
            return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && avx2_available())
            return Backend::avx2;
    }
    return avx2_available() ? Backend::avx2 : Backend::scalar;
}

} // namespace

void set_backend(Backend backend) {
    if (backend == Backend::avx2 && !avx2_available())
        backend = Backend::scalar;
    g_backend.store(backend, std::memory_order_relaxed);
}

Backend active_backend() { return resolve(); }

void response_scan(const ResponseParams& params, const double* omega, size_t n,
                   std::complex<double>* t_out) {
#if defined(__x86_64__)
    if (resolve() == Backend::avx2) {
        detail::response_scan_avx2(params, omega, n, t_out);
        return;
    }
#endif
    detail::response_scan_scalar(params, omega, n, t_out);
}

void lorentzian_scan(double f0, double hw, double depth, double baseline,
                     const double* f, size_t n, double* out) {
#if defined(__x86_64__)
    if (resolve() == Backend::avx2) {
        detail::lorentzian_scan_avx2(f0, hw, depth, baseline, f, n, out);
        return;
    }
#endif
    detail::lorentzian_scan_scalar(f0, hw, depth, baseline, f, n, out);
}

} // namespace pcqad::simd

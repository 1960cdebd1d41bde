#include "pcqad/qnm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace pcqad {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

/// Cell transit time; 1/(2 tau) estimates the first gap center.
double cell_transit_time(const LatticeSpec& lat) {
    return lat.metallization * lat.period / lat.metal_speed() +
           (1.0 - lat.metallization) * lat.period / lat.free_speed;
}

/// Brent's method on [lo, hi]; f(lo) and f(hi) must not have the same sign.
double brent(const std::function<double(double)>& f, double lo, double hi,
             double xtol, const std::string& context) {
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw NumericalError("root bracketing failure: " + context);
    double c = a, fc = fa, d = b - a, e = d;
    for (int iter = 0; iter < 200; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a; fc = fa; d = b - a; e = d;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + xtol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol || fb == 0.0)
            return b;
        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol * q), std::abs(e * q))) {
                e = d; d = p / q;
            } else {
                d = xm; e = d;
            }
        } else {
            d = xm; e = d;
        }
        a = b; fa = fb;
        b += (std::abs(d) > tol) ? d : (xm > 0.0 ? tol : -tol);
        fb = f(b);
    }
    throw NumericalError("Brent did not converge: " + context);
}

double real_half_trace(const LatticeSpec& lat, double f) {
    return half_trace(lat, cplx(two_pi * f, 0.0)).real();
}

/// Sub-segment pattern of one cell at the field sampling resolution.
struct CellPattern {
    struct Piece { double length, speed; };
    // pieces[s] lists the uniform pieces inside sample interval s.
    std::vector<std::vector<Piece>> pieces;

    explicit CellPattern(const LatticeSpec& lat) {
        const double p = lat.period;
        const double lo = (1.0 - lat.metallization) * p / 2.0; // metal start
        const double hi = lo + lat.metallization * p;          // metal end
        pieces.resize(samples_per_cell);
        for (int s = 0; s < samples_per_cell; ++s) {
            const double x0 = s * p / samples_per_cell;
            const double x1 = (s + 1) * p / samples_per_cell;
            auto add = [&](double a, double b, double speed) {
                const double len = std::min(x1, b) - std::max(x0, a);
                if (len > 0.0)
                    pieces[s].push_back({len, speed});
            };
            add(0.0, lo, lat.free_speed);
            add(lo, hi, lat.metal_speed());
            add(hi, p, lat.free_speed);
        }
    }
};

struct Propagation {
    std::vector<cplx> samples; // u at the grid nodes, plus the endpoint x = L
    cplx u_end, du_end;        // state at x = L
};

/// Propagate (u, u') from x = 0 with the left-outgoing-only start state
/// (u, u') = (1, -i k0); samples_per_cell nodes per cell plus the endpoint.
Propagation propagate_field(const LatticeSpec& lat, cplx omega) {
    const CellPattern pattern(lat);
    // One transfer matrix per sample interval, shared by every cell.
    std::vector<Mat2> steps(samples_per_cell, Mat2::identity());
    for (int s = 0; s < samples_per_cell; ++s)
        for (const auto& piece : pattern.pieces[s])
            steps[s] = segment_matrix(piece.length, piece.speed, omega) * steps[s];

    const cplx k0 = omega / lat.free_speed;
    cplx u = 1.0, du = cplx(0.0, -1.0) * k0;
    Propagation out;
    out.samples.reserve(static_cast<size_t>(lat.cell_count) * samples_per_cell + 1);
    for (int n = 0; n < lat.cell_count; ++n) {
        for (int s = 0; s < samples_per_cell; ++s) {
            out.samples.push_back(u);
            const Mat2& m = steps[s];
            const cplx u2 = m.a * u + m.b * du;
            const cplx du2 = m.c * u + m.d * du;
            u = u2;
            du = du2;
        }
    }
    out.samples.push_back(u);
    out.u_end = u;
    out.du_end = du;
    return out;
}

double trapezoid_abs2(const std::vector<cplx>& v, double dx) {
    double acc = 0.0;
    for (size_t i = 0; i + 1 < v.size(); ++i)
        acc += 0.5 * (std::norm(v[i]) + std::norm(v[i + 1]));
    return acc * dx;
}

} // namespace

std::pair<double, double> band_gap(const LatticeSpec& lattice) {
    lattice.validate();
    if (lattice.speed_reduction == 0.0)
        throw ParameterError("band_gap: zero speed contrast, gap is degenerate");
    const double f_center_est = 1.0 / (2.0 * cell_transit_time(lattice));
    const double f_lo = 0.5 * f_center_est;
    const double f_hi = 1.5 * f_center_est;
    const double step = 1e4; // 10 kHz scan resolution
    const int n = static_cast<int>((f_hi - f_lo) / step) + 1;

    auto outside = [&](double f) { return std::abs(real_half_trace(lattice, f)) - 1.0; };

    // locate the stop-band run containing the center estimate
    int i_center = static_cast<int>((f_center_est - f_lo) / step);
    if (outside(f_lo + i_center * step) <= 0.0)
        throw NumericalError("band_gap: no stop band at the center estimate");
    int i0 = i_center, i1 = i_center;
    while (i0 > 0 && outside(f_lo + (i0 - 1) * step) > 0.0) --i0;
    while (i1 < n - 1 && outside(f_lo + (i1 + 1) * step) > 0.0) ++i1;
    if (i0 == 0 || i1 == n - 1)
        throw NumericalError("band_gap: stop band extends beyond the scan range");

    const double low = brent(outside, f_lo + (i0 - 1) * step, f_lo + i0 * step,
                             1e-3, "lower gap edge");
    const double high = brent(outside, f_lo + i1 * step, f_lo + (i1 + 1) * step,
                              1e-3, "upper gap edge");
    return {low, high};
}

std::vector<DispersionBranch> dispersion(const LatticeSpec& lattice,
                                         const std::vector<double>& k_grid) {
    lattice.validate();
    const double k_edge = lattice.edge_wavevector();
    for (double k : k_grid)
        if (!(k > 0.0 && k <= k_edge * (1.0 + 1e-12)))
            throw ParameterError("dispersion: k must lie in (0, pi/P]");

    const double f_center = 1.0 / (2.0 * cell_transit_time(lattice));
    DispersionBranch acoustic{DispersionBranch::Label::acoustic, {}};
    DispersionBranch optical{DispersionBranch::Label::optical, {}};
    for (double k : k_grid) {
        const double target = std::cos(k * lattice.period);
        auto g = [&](double f) { return real_half_trace(lattice, f) - target; };
        const double f_ac = brent(g, 1.0, f_center, 1e-4,
                                  "acoustic branch at k = " + std::to_string(k));
        // optical branch: half-trace rises back through the target above the gap
        double f_up = f_center;
        const double scan = f_center * 1e-3;
        while (g(f_up) < 0.0) {
            f_up += scan;
            if (f_up > 3.0 * f_center)
                throw NumericalError("dispersion: optical bracket not found at k = " +
                                     std::to_string(k));
        }
        const double f_op = brent(g, f_up - scan, f_up, 1e-4,
                                  "optical branch at k = " + std::to_string(k));
        acoustic.samples.emplace_back(k, f_ac);
        optical.samples.emplace_back(k, f_op);
    }
    return {acoustic, optical};
}

std::vector<QuasiNormalMode> find_qnms(const LatticeSpec& lattice,
                                       std::pair<double, double> f_window) {
    lattice.validate();
    const auto [f_lo, f_hi] = f_window;
    if (!(f_lo > 0.0 && f_hi > f_lo))
        throw ParameterError("find_qnms: window must satisfy 0 < f_low < f_high");

    // real-axis seeding: grid finer than the near-gap mode spacing
    const double grid_step = lattice.free_speed / (16.0 * lattice.total_length());
    const int n = std::max(8, static_cast<int>((f_hi - f_lo) / grid_step) + 2);
    std::vector<double> mag(n);
    for (int i = 0; i < n; ++i) {
        const double f = f_lo + (f_hi - f_lo) * i / (n - 1);
        mag[i] = std::abs(boundary_function(lattice, cplx(two_pi * f, 0.0)));
    }

    std::vector<cplx> roots;
    auto duplicate = [&](cplx w) {
        return std::any_of(roots.begin(), roots.end(), [&](cplx r) {
            return std::abs(w - r) < two_pi * 100.0; // 100 Hz cluster radius
        });
    };
    for (int i = 1; i + 1 < n; ++i) {
        if (!(mag[i] < mag[i - 1] && mag[i] < mag[i + 1]))
            continue;
        cplx w(two_pi * (f_lo + (f_hi - f_lo) * i / (n - 1)), 0.0);
        bool converged = false;
        for (int iter = 0; iter < 80; ++iter) {
            const auto [value, deriv] = boundary_function_d(lattice, w);
            if (deriv == cplx(0.0, 0.0))
                break;
            const cplx step = value / deriv;
            w -= step;
            if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
                break;
            if (std::abs(step) <= 1e-13 * std::abs(w)) {
                converged = true;
                break;
            }
        }
        if (!converged || !std::isfinite(w.real()))
            throw NumericalError(
                "find_qnms: Newton did not converge from seed near " +
                std::to_string((f_lo + (f_hi - f_lo) * i / (n - 1)) / 1e9) + " GHz");
        const double f_root = w.real() / two_pi;
        if (f_root < f_lo || f_root > f_hi)
            continue; // converged to a resonance outside the window
        if (duplicate(w))
            continue;
        if (w.imag() >= 0.0)
            throw NumericalError("find_qnms: non-decaying root found at " +
                                 std::to_string(f_root / 1e9) + " GHz");
        roots.push_back(w);
    }
    if (roots.empty())
        return {};

    std::sort(roots.begin(), roots.end(),
              [](cplx a, cplx b) { return a.real() < b.real(); });

    double gap_lo, gap_hi;
    try {
        std::tie(gap_lo, gap_hi) = band_gap(lattice);
    } catch (const ParameterError&) {
        throw NumericalError("find_qnms: roots found but no band gap to index against");
    }

    const double k_p = lattice.edge_wavevector();
    const double k_l = lattice.mode_wavevector_step();
    std::vector<QuasiNormalMode> modes(roots.size());
    int below = 0;
    for (cplx w : roots)
        if (w.real() / two_pi < gap_lo)
            ++below;
    for (size_t idx = 0; idx < roots.size(); ++idx) {
        const double f = roots[idx].real() / two_pi;
        if (f >= gap_lo && f <= gap_hi)
            throw NumericalError("find_qnms: root inside the band gap at " +
                                 std::to_string(f / 1e9) + " GHz");
        QuasiNormalMode& m = modes[idx];
        m.omega = roots[idx];
        // ladder indices: below-gap roots count down from i = 0 at the edge
        if (static_cast<int>(idx) < below) {
            m.index_i = static_cast<int>(idx) - (below - 1);
            m.kx = k_p + (m.index_i - 1) * k_l;
        } else {
            m.index_i = static_cast<int>(idx) - below + 1;
            m.kx = k_p + m.index_i * k_l;
        }
        m.quality = m.omega.real() / (2.0 * std::abs(m.omega.imag()));

        Propagation prop = propagate_field(lattice, m.omega);
        m.sample_step = lattice.period / samples_per_cell;
        const double mean_sq =
            trapezoid_abs2(prop.samples, m.sample_step) / lattice.total_length();
        const double scale = 1.0 / std::sqrt(mean_sq);
        m.field = std::move(prop.samples);
        for (cplx& u : m.field)
            u *= scale;
        const cplx k0 = m.omega / lattice.free_speed;
        m.out_left = scale; // start state had unit left-going amplitude
        m.out_right = scale * (0.5 * prop.u_end -
                               cplx(0.0, 0.5) * prop.du_end / k0);
    }
    return modes;
}

double quality_factor(const QuasiNormalMode& mode, const LatticeSpec& lattice) {
    lattice.validate();
    if (mode.field.empty() || mode.sample_step <= 0.0)
        throw ParameterError("quality_factor: mode has no field samples");
    const double stored = trapezoid_abs2(mode.field, mode.sample_step);
    const double leak =
        lattice.free_speed * (std::norm(mode.out_left) + std::norm(mode.out_right));
    if (!(leak > stored * mode.omega.real() * 1e-12))
        throw NumericalError("quality_factor: leakage underflow, imaginary part unresolved");
    return mode.omega.real() * stored / leak;
}

std::vector<TransverseMode> transverse_modes(const LatticeSpec& lattice) {
    lattice.validate();
    const double kx = two_pi / lattice.electrical_period();
    const double alpha_c = std::asin(1.0 / lattice.effective_index());
    std::vector<TransverseMode> out;
    for (int j = 1;; j += 2) {
        const double ky = std::numbers::pi * j / lattice.aperture;
        const double alpha = std::atan(kx / ky);
        if (!(alpha > alpha_c))
            break;
        out.push_back({j, ky, std::numbers::sqrt2});
    }
    return out;
}

double mode_frequency_2d(const QuasiNormalMode& mode, const TransverseMode& t,
                         const LatticeSpec& lattice) {
    lattice.validate();
    const double ratio = t.ky / mode.kx;
    return mode.frequency() * std::sqrt(1.0 + ratio * ratio);
}

} // namespace pcqad

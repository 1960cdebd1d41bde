#include "pcqad/spectroscopy.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <thread>

#include "pcqad/csv.hpp"
#include "pcqad/simd/kernels.hpp"

namespace pcqad {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

using ResidualFn =
    std::function<void(const std::vector<double>&, std::vector<double>&)>;

/// Damped Gauss-Newton (Levenberg style) with a forward-difference Jacobian.
/// Fully deterministic: fixed initialization, fixed schedule.
std::vector<double> fit_least_squares(const ResidualFn& eval,
                                      std::vector<double> p,
                                      const std::vector<double>& scale,
                                      double* final_cost = nullptr) {
    const int np = static_cast<int>(p.size());
    std::vector<double> r, r2, rj;
    eval(p, r);
    const int nr = static_cast<int>(r.size());
    if (nr < np)
        throw FitError("least squares: fewer residuals than parameters");
    auto cost = [](const std::vector<double>& v) {
        double c = 0.0;
        for (double x : v)
            c += x * x;
        return c;
    };
    double c0 = cost(r);
    double lambda = 1e-3;
    for (int iter = 0; iter < 100; ++iter) {
        Eigen::MatrixXd jac(nr, np);
        for (int j = 0; j < np; ++j) {
            const double h = 1e-7 * std::max(std::abs(p[j]), scale[j]);
            std::vector<double> pj = p;
            pj[j] += h;
            eval(pj, rj);
            for (int i = 0; i < nr; ++i)
                jac(i, j) = (rj[i] - r[i]) / h;
        }
        Eigen::VectorXd rv(nr);
        for (int i = 0; i < nr; ++i)
            rv(i) = r[i];
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd jtr = jac.transpose() * rv;
        bool accepted = false;
        for (int tries = 0; tries < 12; ++tries) {
            Eigen::MatrixXd damped = jtj;
            for (int j = 0; j < np; ++j)
                damped(j, j) += lambda * std::max(jtj(j, j), 1e-30);
            const Eigen::VectorXd step = damped.ldlt().solve(jtr);
            std::vector<double> pn = p;
            for (int j = 0; j < np; ++j)
                pn[j] -= step(j);
            eval(pn, r2);
            const double c1 = cost(r2);
            if (std::isfinite(c1) && c1 <= c0) {
                double rel_step = 0.0;
                for (int j = 0; j < np; ++j)
                    rel_step = std::max(rel_step,
                                        std::abs(step(j)) /
                                            std::max(std::abs(p[j]), scale[j]));
                p = std::move(pn);
                r = r2;
                const double improved = c0 - c1;
                c0 = c1;
                accepted = true;
                lambda = std::max(lambda * 0.3, 1e-12);
                if (rel_step < 1e-10 || improved <= 1e-14 * (c0 + 1e-300)) {
                    if (final_cost)
                        *final_cost = c0;
                    return p;
                }
                break;
            }
            lambda *= 10.0;
        }
        if (!accepted) {
            if (final_cost)
                *final_cost = c0;
            return p; // stuck in a flat valley; caller judges the residual
        }
    }
    if (final_cost)
        *final_cost = c0;
    return p;
}

SystemModel build_model(const DeviceAssembly& device, double f_a, double f_probe,
                        double rabi) {
    SystemModel m;
    m.omega_a = two_pi * f_a;
    m.gamma1 = device.transmon.gamma1;
    m.gamma_phi = device.transmon.gamma_phi();
    m.omega_drive = two_pi * f_probe;
    m.rabi = rabi;
    for (const ModeCoupling& c : device.couplings) {
        const double w = two_pi * c.frequency;
        m.modes.push_back({w, w / c.quality, c.g});
    }
    return m;
}

} // namespace

void SweepSpec::validate() const {
    if (flux.size() < 2 || frequency.size() < 2)
        throw ParameterError("sweep: both grids need at least 2 points");
    for (size_t i = 1; i < flux.size(); ++i)
        if (!(flux[i] > flux[i - 1]))
            throw ParameterError("sweep: flux grid must be strictly increasing");
    for (size_t i = 1; i < frequency.size(); ++i)
        if (!(frequency[i] > frequency[i - 1]))
            throw ParameterError("sweep: frequency grid must be strictly increasing");
    if (!(rabi > 0.0))
        throw ParameterError("sweep: drive amplitude must be > 0");
}

DeviceAssembly assemble_device(const Config& config) {
    config.validate();
    DeviceAssembly dev;
    dev.lattice = config.lattice;
    dev.transmon = config.transmon;
    dev.piezo = config.piezo;

    const auto transverse = transverse_modes(dev.lattice);
    if (transverse.empty())
        return dev; // no confinement, no discrete modes

    std::tie(dev.band_gap_low, dev.band_gap_high) = band_gap(dev.lattice);

    // combined frequencies only shift upward, so search slightly below the window
    const double search_low = config.selection.window_low * 0.95;
    dev.qnms = find_qnms(dev.lattice, {search_low, config.selection.window_high});

    const ElectrodeGeometry geom = ElectrodeGeometry::from_lattice(dev.lattice);
    for (QuasiNormalMode& mode : dev.qnms) {
        const cplx ov = electrode_overlap(mode, geom);
        if (std::abs(ov) > 0.0) {
            const cplx phase = ov / std::abs(ov);
            for (cplx& u : mode.field)
                u /= phase;
            mode.out_left /= phase;
            mode.out_right /= phase;
        }
    }

    const double z0 = zero_point_displacement(dev.lattice, dev.piezo);
    const double xi0 = matrix_element_xi0(dev.transmon);
    std::vector<ModeCoupling> candidates;
    for (const QuasiNormalMode& mode : dev.qnms) {
        for (const TransverseMode& t : transverse) {
            const double f_ij = mode_frequency_2d(mode, t, dev.lattice);
            if (f_ij < config.selection.window_low ||
                f_ij > config.selection.window_high)
                continue;
            const double v_ij =
                overlap_potential(mode, geom, t.j, z0, dev.piezo);
            const double g = coupling_strength(xi0, dev.transmon.c_q, v_ij);
            candidates.push_back(
                {mode.index_i, t.j, f_ij, mode.quality, v_ij, g});
        }
    }

    double g_max = 0.0;
    for (const ModeCoupling& c : candidates)
        g_max = std::max(g_max, c.g);
    for (const ModeCoupling& c : candidates) {
        if (c.quality < config.selection.min_quality)
            continue;
        if (g_max > 0.0 && c.g < config.selection.min_g_fraction * g_max)
            continue;
        dev.couplings.push_back(c);
    }
    std::sort(dev.couplings.begin(), dev.couplings.end(),
              [](const ModeCoupling& a, const ModeCoupling& b) {
                  return a.frequency < b.frequency;
              });
    return dev;
}

std::vector<std::complex<double>> simulate_trace(const DeviceAssembly& device,
                                                 const FluxBias& bias,
                                                 const std::vector<double>& f_grid,
                                                 double rabi,
                                                 const SolverOptions& solver) {
    if (f_grid.empty())
        throw ParameterError("simulate_trace: empty frequency grid");
    const double f_a = qubit_frequency(device.transmon, bias);
    // the endpoint models carry the worst-case detuning; validate them once
    build_model(device, f_a, f_grid.front(), rabi).validate();
    build_model(device, f_a, f_grid.back(), rabi).validate();

    std::vector<std::complex<double>> out(f_grid.size());
    if (solver.kind == SolverOptions::Kind::semiclassical) {
        if (rabi > device.transmon.gamma1 / 10.0)
            throw ParameterError("simulate_trace: drive exceeds the linear regime");
        simd::ResponseParams params;
        params.omega_a = two_pi * f_a;
        params.gamma1 = device.transmon.gamma1;
        params.gamma2 = device.transmon.gamma2;
        for (const ModeCoupling& c : device.couplings) {
            const double w = two_pi * c.frequency;
            params.modes.push_back({w, w / c.quality, c.g});
        }
        std::vector<double> omega(f_grid.size());
        for (size_t i = 0; i < f_grid.size(); ++i)
            omega[i] = two_pi * f_grid[i];
        simd::response_scan(params, omega.data(), omega.size(), out.data());
    } else {
        for (size_t i = 0; i < f_grid.size(); ++i) {
            try {
                out[i] = lindblad_steady_state(
                             build_model(device, f_a, f_grid[i], rabi),
                             solver.n_max, solver.dimension_cap)
                             .t;
            } catch (const NumericalError& e) {
                throw NumericalError(std::string(e.what()) + " (at f = " +
                                     format_g12(f_grid[i]) + " Hz)");
            }
        }
    }
    return out;
}

TransmissionMap simulate_map(const DeviceAssembly& device, const SweepSpec& sweep,
                             const SolverOptions& solver) {
    sweep.validate();
    TransmissionMap map;
    map.flux = sweep.flux;
    map.frequency = sweep.frequency;
    map.t.resize(sweep.flux.size() * sweep.frequency.size());

    const int rows = static_cast<int>(sweep.flux.size());
    const int threads = std::max(1, std::min(solver.threads, rows));
    std::vector<std::exception_ptr> errors(threads);
    auto work = [&](int tid) {
        const int lo = rows * tid / threads;
        const int hi = rows * (tid + 1) / threads;
        try {
            for (int row = lo; row < hi; ++row) {
                const auto trace =
                    simulate_trace(device, FluxBias{sweep.flux[row]},
                                   sweep.frequency, sweep.rabi, solver);
                std::copy(trace.begin(), trace.end(),
                          map.t.begin() + row * sweep.frequency.size());
            }
        } catch (...) {
            errors[tid] = std::current_exception();
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int tid = 0; tid < threads; ++tid)
            pool.emplace_back(work, tid);
        for (auto& th : pool)
            th.join();
    }
    for (const auto& err : errors)
        if (err)
            std::rethrow_exception(err);
    return map;
}

namespace {

struct DipSeed {
    int index;       // grid index of the minimum
    double f0;       // parabolic-refined center
    double depth;    // baseline minus minimum value
};

double parabolic_center(const std::vector<double>& f, const std::vector<double>& y,
                        int i) {
    if (i <= 0 || i + 1 >= static_cast<int>(f.size()))
        return f[i];
    const double denom = y[i - 1] - 2.0 * y[i] + y[i + 1];
    if (denom <= 0.0)
        return f[i];
    const double shift = 0.5 * (y[i - 1] - y[i + 1]) / denom;
    return f[i] + shift * (f[i + 1] - f[i]);
}

} // namespace

RateFit fit_lorentzian(const std::vector<double>& f,
                       const std::vector<double>& abs_t) {
    const int n = static_cast<int>(f.size());
    if (n < 8 || abs_t.size() != f.size())
        throw ParameterError("fit_lorentzian: need at least 8 samples");

    std::vector<double> y2(n);
    for (int i = 0; i < n; ++i)
        y2[i] = abs_t[i] * abs_t[i];

    const int imin =
        static_cast<int>(std::min_element(y2.begin(), y2.end()) - y2.begin());
    // outer quartiles estimate baseline and noise away from the dip
    double base2 = 0.0;
    int outer = 0;
    for (int i = 0; i < n; ++i)
        if (i < n / 4 || i >= n - n / 4) {
            base2 += y2[i];
            ++outer;
        }
    base2 /= outer;
    double rms2 = 0.0;
    for (int i = 0; i < n; ++i)
        if (i < n / 4 || i >= n - n / 4)
            rms2 += (y2[i] - base2) * (y2[i] - base2);
    rms2 = std::sqrt(rms2 / outer);

    const double depth2_0 = base2 - y2[imin];
    if (!(depth2_0 > 5.0 * rms2) || !(depth2_0 > 1e-12 * base2))
        throw FitError("fit_lorentzian: no dip above the noise floor");

    // deterministic init: half-depth crossings around the minimum
    const double level = base2 - depth2_0 / 2.0;
    double f_left = f.front(), f_right = f.back();
    for (int i = imin; i > 0; --i)
        if (y2[i] >= level) {
            f_left = f[i];
            break;
        }
    for (int i = imin; i < n; ++i)
        if (y2[i] >= level) {
            f_right = f[i];
            break;
        }
    double hw0 = (f_right - f_left) / 2.0;
    if (!(hw0 > 0.0))
        hw0 = (f.back() - f.front()) / 8.0;

    std::vector<double> p{f[imin], hw0, depth2_0, base2};
    const std::vector<double> scale{std::abs(f[imin]) + 1.0, hw0, depth2_0, base2};
    auto eval = [&](const std::vector<double>& q, std::vector<double>& r) {
        r.resize(n);
        for (int i = 0; i < n; ++i) {
            const double x = (f[i] - q[0]) / q[1];
            r[i] = q[3] - q[2] / (1.0 + x * x) - y2[i];
        }
    };
    p = fit_least_squares(eval, p, scale);

    const double hw = std::abs(p[1]);
    double depth2 = p[2];
    const double fitted_base2 = p[3];
    if (!(hw > 0.0) || !(fitted_base2 > 0.0) || !(depth2 > 0.0))
        throw NumericalError("fit_lorentzian: degenerate fit parameters");
    depth2 = std::min(depth2, fitted_base2);

    RateFit out;
    out.fit.center = p[0];
    out.fit.half_width = hw;
    out.fit.baseline = std::sqrt(fitted_base2);
    out.fit.depth = out.fit.baseline - std::sqrt(fitted_base2 - depth2);
    double res = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = (f[i] - p[0]) / hw;
        const double model2 =
            std::max(fitted_base2 - depth2 / (1.0 + x * x), 0.0);
        const double d = std::sqrt(model2) - abs_t[i];
        res += d * d;
    }
    out.fit.residual = std::sqrt(res / n);
    out.gamma2 = two_pi * hw;
    out.gamma1 = 2.0 * out.gamma2 * (out.fit.depth / out.fit.baseline);
    return out;
}

std::vector<QDipFit> fit_q_from_dips(const std::vector<double>& f,
                                     const std::vector<double>& abs_r) {
    const int n = static_cast<int>(f.size());
    if (n < 16 || abs_r.size() != f.size())
        throw ParameterError("fit_q_from_dips: need at least 16 samples");

    std::vector<double> sorted = abs_r;
    std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
    const double baseline0 = sorted[n / 2];
    double rms = 0.0;
    int outer = 0;
    for (int i = 0; i < n; ++i)
        if (i < n / 8 || i >= n - n / 8) {
            rms += (abs_r[i] - baseline0) * (abs_r[i] - baseline0);
            ++outer;
        }
    rms = std::sqrt(rms / outer);

    const double y_min = *std::min_element(abs_r.begin(), abs_r.end());
    const double max_depth = baseline0 - y_min;
    std::vector<DipSeed> seeds;
    for (int i = 1; i + 1 < n; ++i) {
        if (!(abs_r[i] < abs_r[i - 1] && abs_r[i] <= abs_r[i + 1]))
            continue;
        const double depth = baseline0 - abs_r[i];
        if (depth > 5.0 * rms && depth > 0.1 * max_depth)
            seeds.push_back({i, parabolic_center(f, abs_r, i), depth});
    }
    if (seeds.empty())
        throw FitError("fit_q_from_dips: no dips above the noise floor");

    std::vector<QDipFit> fits;
    for (size_t k = 0; k < seeds.size(); ++k) {
        // window bounded by midpoints toward the neighbor dips
        int lo = 0, hi = n - 1;
        if (k > 0)
            lo = (seeds[k - 1].index + seeds[k].index) / 2;
        if (k + 1 < seeds.size())
            hi = (seeds[k].index + seeds[k + 1].index) / 2;
        std::vector<double> fw(f.begin() + lo, f.begin() + hi + 1);
        std::vector<double> yw(abs_r.begin() + lo, abs_r.begin() + hi + 1);

        const double level = baseline0 - seeds[k].depth / 2.0;
        double f_left = fw.front(), f_right = fw.back();
        for (int i = seeds[k].index - lo; i > 0; --i)
            if (yw[i] >= level) {
                f_left = fw[i];
                break;
            }
        for (int i = seeds[k].index - lo; i < static_cast<int>(yw.size()); ++i)
            if (yw[i] >= level) {
                f_right = fw[i];
                break;
            }
        double hw0 = std::max((f_right - f_left) / 2.0,
                              (f[1] - f[0]) * 0.5);

        std::vector<double> p{seeds[k].f0, hw0, seeds[k].depth, baseline0};
        const std::vector<double> scale{std::abs(seeds[k].f0) + 1.0, hw0,
                                        seeds[k].depth, baseline0};
        auto eval = [&](const std::vector<double>& q, std::vector<double>& r) {
            r.resize(yw.size());
            for (size_t i = 0; i < yw.size(); ++i) {
                const double x = (fw[i] - q[0]) / q[1];
                r[i] = q[3] - q[2] / (1.0 + x * x) - yw[i];
            }
        };
        double cost = 0.0;
        p = fit_least_squares(eval, p, scale, &cost);

        QDipFit qd;
        qd.fit.center = p[0];
        qd.fit.half_width = std::abs(p[1]);
        qd.fit.depth = p[2];
        qd.fit.baseline = p[3];
        qd.fit.residual = std::sqrt(cost / static_cast<double>(yw.size()));
        if (qd.fit.half_width < 0.75 * (f[1] - f[0]))
            throw NumericalError(
                "fit_q_from_dips: dip at " + format_g12(p[0]) +
                " Hz is narrower than the grid resolution");
        qd.q = qd.fit.center / (2.0 * qd.fit.half_width);
        fits.push_back(qd);
    }

    for (size_t a = 0; a + 1 < fits.size(); ++a) {
        const double sep = fits[a + 1].fit.center - fits[a].fit.center;
        if (sep < 3.0 * (fits[a].fit.half_width + fits[a + 1].fit.half_width))
            throw NumericalError("fit_q_from_dips: overlapping dips at " +
                                 format_g12(fits[a].fit.center) + " and " +
                                 format_g12(fits[a + 1].fit.center) + " Hz");
    }
    return fits;
}

AnticrossingFit extract_anticrossing(const TransmissionMap& map,
                                     std::pair<double, double> f_window) {
    const auto [w_lo, w_hi] = f_window;
    int k_lo = -1, k_hi = -1;
    for (int k = 0; k < static_cast<int>(map.frequency.size()); ++k) {
        if (map.frequency[k] >= w_lo && k_lo < 0)
            k_lo = k;
        if (map.frequency[k] <= w_hi)
            k_hi = k;
    }
    if (k_lo < 0 || k_hi - k_lo < 8)
        throw ParameterError("extract_anticrossing: window too narrow for the grid");

    // per-column dip positions (up to two deepest local minima)
    struct Column {
        double phi;
        std::vector<double> dips; // sorted ascending in frequency
    };
    std::vector<Column> columns;
    std::vector<double> fw(map.frequency.begin() + k_lo,
                           map.frequency.begin() + k_hi + 1);
    for (size_t row = 0; row < map.flux.size(); ++row) {
        std::vector<double> y(fw.size());
        for (size_t k = 0; k < fw.size(); ++k)
            y[k] = std::abs(map.at(row, k_lo + k));
        const double base = *std::max_element(y.begin(), y.end());
        const double floor_v = *std::min_element(y.begin(), y.end());
        const double span = base - floor_v;
        if (!(span > 1e-9))
            continue;
        struct Min {
            int i;
            double depth;
        };
        std::vector<Min> minima;
        for (int i = 1; i + 1 < static_cast<int>(y.size()); ++i)
            if (y[i] < y[i - 1] && y[i] <= y[i + 1] &&
                base - y[i] > 0.2 * span)
                minima.push_back({i, base - y[i]});
        if (minima.empty())
            continue;
        std::sort(minima.begin(), minima.end(),
                  [](const Min& a, const Min& b) { return a.depth > b.depth; });
        Column col{map.flux[row], {}};
        for (const Min& m : minima) {
            if (col.dips.size() == 2)
                break;
            bool near = false;
            for (double fd : col.dips)
                near |= std::abs(fd - fw[m.i]) < 2.0 * (fw[1] - fw[0]);
            if (!near)
                col.dips.push_back(parabolic_center(fw, y, m.i));
        }
        std::sort(col.dips.begin(), col.dips.end());
        columns.push_back(std::move(col));
    }

    int doubled = 0;
    for (const Column& c : columns)
        doubled += c.dips.size() == 2;
    if (doubled < 3)
        throw FitError(
            "extract_anticrossing: fewer than 3 columns resolve both branches");

    // init from the column with the smallest visible splitting
    double s_min = 0.0, phi0 = 0.0, fm0 = 0.0;
    bool have = false;
    for (const Column& c : columns) {
        if (c.dips.size() != 2)
            continue;
        const double s = c.dips[1] - c.dips[0];
        if (!have || s < s_min) {
            s_min = s;
            phi0 = c.phi;
            fm0 = 0.5 * (c.dips[0] + c.dips[1]);
            have = true;
        }
    }
    // slope of the bare atom line from the outermost two-dip columns,
    // using f_a = f+ + f- - f_m
    const Column* first = nullptr;
    const Column* last = nullptr;
    for (const Column& c : columns)
        if (c.dips.size() == 2) {
            if (!first)
                first = &c;
            last = &c;
        }
    double slope0 = 0.0;
    if (last->phi != first->phi)
        slope0 = ((last->dips[0] + last->dips[1]) -
                  (first->dips[0] + first->dips[1])) /
                 (last->phi - first->phi);
    if (slope0 == 0.0)
        slope0 = -1e9;

    // parameters: crossing flux, atom-line slope, mode frequency, coupling (Hz)
    std::vector<double> p{phi0, slope0, fm0, std::max(s_min / 2.0, 1e3)};
    const std::vector<double> scale{1e-3, std::abs(slope0) + 1e9, fm0, fm0 * 1e-4};
    auto eval = [&](const std::vector<double>& q, std::vector<double>& r) {
        r.clear();
        for (const Column& c : columns) {
            const double fa = q[2] + q[1] * (c.phi - q[0]);
            const double mid = 0.5 * (fa + q[2]);
            const double split =
                std::sqrt(q[3] * q[3] + 0.25 * (fa - q[2]) * (fa - q[2]));
            for (double fd : c.dips)
                r.push_back(std::min(std::abs(fd - (mid + split)),
                                     std::abs(fd - (mid - split))));
        }
    };
    double cost = 0.0;
    p = fit_least_squares(eval, p, scale, &cost);

    size_t points = 0;
    for (const Column& c : columns)
        points += c.dips.size();

    AnticrossingFit out;
    out.phi_cross = p[0];
    out.f_mode = p[2];
    out.g = two_pi * std::abs(p[3]);
    out.residual = std::sqrt(cost / static_cast<double>(points));
    return out;
}

} // namespace pcqad

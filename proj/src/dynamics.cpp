#include "pcqad/dynamics.hpp"

#include <Eigen/Dense>

namespace pcqad {

using cd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

std::pair<cd, cd> reflection(cd sigma_minus, double gamma1, double rabi) {
    if (!(rabi > 0.0))
        throw ParameterError("reflection: drive amplitude must be > 0");
    const cd r = cd(0.0, 1.0) * gamma1 * sigma_minus / rabi;
    return {r, 1.0 - r};
}

SteadyState semiclassical_response(const SystemModel& model) {
    model.validate();
    if (model.rabi > model.gamma1 / 10.0)
        throw ParameterError("semiclassical_response: drive exceeds the linear regime");

    const int m = static_cast<int>(model.modes.size());
    Matrix a = Matrix::Zero(1 + m, 1 + m);
    Vector b = Vector::Zero(1 + m);
    const cd i1(0.0, 1.0);
    a(0, 0) = i1 * (model.omega_a - model.omega_drive) + model.gamma2();
    b(0) = -i1 * model.rabi / 2.0;
    for (int k = 0; k < m; ++k) {
        const auto& mode = model.modes[k];
        a(0, 1 + k) = i1 * mode.g;
        a(1 + k, 0) = i1 * mode.g;
        a(1 + k, 1 + k) = i1 * (mode.omega - model.omega_drive) + mode.kappa / 2.0;
    }

    Eigen::PartialPivLU<Matrix> lu(a);
    Vector x = lu.solve(b);
    if (!x.allFinite() || (a * x - b).norm() > 1e-8 * b.norm())
        throw NumericalError("semiclassical_response: singular linear system");

    SteadyState out;
    out.sigma_minus = x(0);
    out.mode_amplitudes.assign(x.data() + 1, x.data() + 1 + m);
    std::tie(out.r, out.t) = reflection(out.sigma_minus, model.gamma1, model.rabi);
    return out;
}

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix annihilation(int levels) {
    Matrix a = Matrix::Zero(levels, levels);
    for (int n = 1; n < levels; ++n)
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

/// Lifts `op` acting on subsystem `slot` (0 = atom, 1.. = modes) to the full
/// space; dims lists each subsystem dimension.
Matrix embed(const Matrix& op, int slot, const std::vector<int>& dims) {
    Matrix out = Matrix::Identity(1, 1);
    for (size_t s = 0; s < dims.size(); ++s)
        out = kron(out, static_cast<int>(s) == slot
                            ? op
                            : Matrix(Matrix::Identity(dims[s], dims[s])));
    return out;
}

} // namespace

SteadyState lindblad_steady_state(const SystemModel& model, int n_max, int dim_cap) {
    model.validate();
    if (n_max < 1)
        throw ParameterError("lindblad_steady_state: n_max must be >= 1");

    const int m = static_cast<int>(model.modes.size());
    double dim_check = 2.0;
    for (int k = 0; k < m; ++k)
        dim_check *= n_max + 1;
    if (dim_check > dim_cap)
        throw ResourceError("lindblad_steady_state: Hilbert dimension exceeds the cap");
    if (dim_check > 64.0)
        throw ResourceError(
            "lindblad_steady_state: dense Liouvillian solve limited to dimension 64");
    const int dim = static_cast<int>(dim_check);

    std::vector<int> dims(1 + m, n_max + 1);
    dims[0] = 2;

    Matrix sm2 = Matrix::Zero(2, 2); // atom lowering operator
    sm2(0, 1) = 1.0;
    Matrix sz2 = Matrix::Zero(2, 2);
    sz2(0, 0) = -1.0;
    sz2(1, 1) = 1.0;

    const Matrix sm = embed(sm2, 0, dims);
    const Matrix sp = sm.adjoint();
    const Matrix sz = embed(sz2, 0, dims);

    const cd i1(0.0, 1.0);
    Matrix h = (model.omega_a - model.omega_drive) * (sp * sm) +
               (model.rabi / 2.0) * (sp + sm);
    std::vector<Matrix> bs;
    bs.reserve(m);
    for (int k = 0; k < m; ++k) {
        const Matrix b = embed(annihilation(n_max + 1), 1 + k, dims);
        h += (model.modes[k].omega - model.omega_drive) * (b.adjoint() * b);
        h += model.modes[k].g * (sp * b + sm * b.adjoint());
        bs.push_back(b);
    }

    std::vector<Matrix> collapse;
    collapse.push_back(std::sqrt(model.gamma1) * sm);
    if (model.gamma_phi > 0.0)
        collapse.push_back(std::sqrt(model.gamma_phi / 2.0) * sz);
    for (int k = 0; k < m; ++k)
        collapse.push_back(std::sqrt(model.modes[k].kappa) * bs[k]);

    // column-major vectorization: vec(A X B) = (B^T kron A) vec(X)
    const Matrix eye = Matrix::Identity(dim, dim);
    Matrix liouv = -i1 * (kron(eye, h) - kron(h.transpose(), eye));
    for (const Matrix& c : collapse) {
        const Matrix cc = c.adjoint() * c;
        liouv += kron(c.conjugate(), c);
        liouv -= 0.5 * kron(eye, cc);
        liouv -= 0.5 * kron(cc.transpose(), eye);
    }

    // replace one row with the trace constraint to pin the null vector
    Matrix a = liouv;
    Vector b = Vector::Zero(dim * dim);
    a.row(0).setZero();
    for (int i = 0; i < dim; ++i)
        a(0, i * dim + i) = 1.0;
    b(0) = 1.0;

    Eigen::PartialPivLU<Matrix> lu(a);
    Vector x = lu.solve(b);
    x += lu.solve(b - a * x); // one refinement step
    if (!x.allFinite() || (a * x - b).norm() > 1e-6)
        throw NumericalError("lindblad_steady_state: steady state not unique");

    Eigen::Map<const Matrix> rho(x.data(), dim, dim);
    if (std::abs(rho.trace() - cd(1.0, 0.0)) > 1e-9)
        throw NumericalError("lindblad_steady_state: trace normalization failed");

    SteadyState out;
    out.sigma_minus = (sm * rho).trace();
    out.mode_amplitudes.reserve(m);
    for (int k = 0; k < m; ++k)
        out.mode_amplitudes.push_back((bs[k] * rho).trace());
    out.populations.reserve(dim);
    for (int i = 0; i < dim; ++i)
        out.populations.push_back(rho(i, i).real());
    std::tie(out.r, out.t) = reflection(out.sigma_minus, model.gamma1, model.rabi);
    return out;
}

} // namespace pcqad

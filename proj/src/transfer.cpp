#include "pcqad/transfer.hpp"

namespace pcqad {

namespace {

void check_inputs(const LatticeSpec& lattice, cplx omega) {
    lattice.validate();
    if (omega == cplx(0.0, 0.0))
        throw ParameterError("transfer: omega must be nonzero");
}

} // namespace

Mat2 segment_matrix(double length, double speed, cplx omega) {
    const cplx k = omega / speed;
    const cplx phi = k * length;
    const cplx c = std::cos(phi);
    const cplx s = std::sin(phi);
    return {c, s / k, -k * s, c};
}

Mat2D segment_matrix_d(double length, double speed, cplx omega) {
    const cplx k = omega / speed;
    const cplx phi = k * length;
    const cplx c = std::cos(phi);
    const cplx s = std::sin(phi);
    const double dphi = length / speed; // d(phi)/d(omega)
    const double dk = 1.0 / speed;
    Mat2 m{c, s / k, -k * s, c};
    Mat2 dm{-s * dphi,
            c * dphi / k - s * dk / (k * k),
            -dk * s - k * c * dphi,
            -s * dphi};
    return {m, dm};
}

Mat2 unit_cell_matrix(const LatticeSpec& lattice, cplx omega) {
    check_inputs(lattice, omega);
    const double gap_half = (1.0 - lattice.metallization) * lattice.period / 2.0;
    const double metal = lattice.metallization * lattice.period;
    const Mat2 g = segment_matrix(gap_half, lattice.free_speed, omega);
    const Mat2 m = segment_matrix(metal, lattice.metal_speed(), omega);
    return g * m * g;
}

Mat2D unit_cell_matrix_d(const LatticeSpec& lattice, cplx omega) {
    check_inputs(lattice, omega);
    const double gap_half = (1.0 - lattice.metallization) * lattice.period / 2.0;
    const double metal = lattice.metallization * lattice.period;
    const Mat2D g = segment_matrix_d(gap_half, lattice.free_speed, omega);
    const Mat2D m = segment_matrix_d(metal, lattice.metal_speed(), omega);
    return g * m * g;
}

namespace {

template <typename M>
M matrix_power(M base, int n, M acc) {
    while (n > 0) {
        if (n & 1)
            acc = base * acc;
        base = base * base;
        n >>= 1;
    }
    return acc;
}

} // namespace

Mat2 total_transfer_matrix(const LatticeSpec& lattice, cplx omega) {
    return matrix_power(unit_cell_matrix(lattice, omega), lattice.cell_count,
                        Mat2::identity());
}

Mat2D total_transfer_matrix_d(const LatticeSpec& lattice, cplx omega) {
    return matrix_power(unit_cell_matrix_d(lattice, omega), lattice.cell_count,
                        Mat2D::identity());
}

cplx half_trace(const LatticeSpec& lattice, cplx omega) {
    return 0.5 * unit_cell_matrix(lattice, omega).trace();
}

cplx boundary_function(const LatticeSpec& lattice, cplx omega) {
    const Mat2 t = total_transfer_matrix(lattice, omega);
    const cplx k0 = omega / lattice.free_speed;
    return 0.5 * (t.a + t.d) - cplx(0.0, 0.5) * (k0 * t.b - t.c / k0);
}

std::pair<cplx, cplx> boundary_function_d(const LatticeSpec& lattice, cplx omega) {
    const Mat2D t = total_transfer_matrix_d(lattice, omega);
    const cplx k0 = omega / lattice.free_speed;
    const double dk0 = 1.0 / lattice.free_speed;
    const cplx value =
        0.5 * (t.m.a + t.m.d) - cplx(0.0, 0.5) * (k0 * t.m.b - t.m.c / k0);
    const cplx deriv =
        0.5 * (t.dm.a + t.dm.d) -
        cplx(0.0, 0.5) * (dk0 * t.m.b + k0 * t.dm.b - t.dm.c / k0 +
                          t.m.c * dk0 / (k0 * k0));
    return {value, deriv};
}

} // namespace pcqad

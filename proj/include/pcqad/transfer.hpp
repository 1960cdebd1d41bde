#pragma once

#include <complex>

#include "pcqad/lattice.hpp"

namespace pcqad {

using cplx = std::complex<double>;

/// 2x2 complex matrix, row-major [[a, b], [c, d]].
struct Mat2 {
    cplx a, b, c, d;

    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    cplx trace() const { return a + d; }
    cplx det() const { return a * d - b * c; }
    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
};

/// Matrix together with its derivative with respect to omega; products obey
/// the product rule so derivatives stay exact through long chains.
struct Mat2D {
    Mat2 m, dm;

    Mat2D operator*(const Mat2D& o) const {
        Mat2 prod = m * o.m;
        Mat2 dprod{
            dm.a * o.m.a + dm.b * o.m.c + m.a * o.dm.a + m.b * o.dm.c,
            dm.a * o.m.b + dm.b * o.m.d + m.a * o.dm.b + m.b * o.dm.d,
            dm.c * o.m.a + dm.d * o.m.c + m.c * o.dm.a + m.d * o.dm.c,
            dm.c * o.m.b + dm.d * o.m.d + m.c * o.dm.b + m.d * o.dm.d};
        return {prod, dprod};
    }
    static Mat2D identity() { return {Mat2::identity(), {0.0, 0.0, 0.0, 0.0}}; }
};

/// Transfer matrix of a uniform segment for the state (u, u'): scalar wave
/// with continuity of amplitude and slope at interfaces.
Mat2 segment_matrix(double length, double speed, cplx omega);
Mat2D segment_matrix_d(double length, double speed, cplx omega);

/// One lattice cell: free gap (1-m)P/2, metal stripe mP, free gap (1-m)P/2.
/// det = 1 for any omega (reciprocity).
Mat2 unit_cell_matrix(const LatticeSpec& lattice, cplx omega);
Mat2D unit_cell_matrix_d(const LatticeSpec& lattice, cplx omega);

/// cell^N by exponentiation by squaring.
Mat2 total_transfer_matrix(const LatticeSpec& lattice, cplx omega);
Mat2D total_transfer_matrix_d(const LatticeSpec& lattice, cplx omega);

/// (1/2) Tr M_cell(omega); the Bloch dispersion is cos(kP) = half_trace.
cplx half_trace(const LatticeSpec& lattice, cplx omega);

/// Outgoing-wave boundary condition for the open N-cell lattice. In the
/// traveling-wave basis of the exterior medium this is the total-matrix
/// element that couples an incoming amplitude to the interior solution;
/// quasinormal modes are its complex zeros (Im omega < 0).
cplx boundary_function(const LatticeSpec& lattice, cplx omega);

/// Boundary function together with its analytic omega-derivative.
std::pair<cplx, cplx> boundary_function_d(const LatticeSpec& lattice, cplx omega);

} // namespace pcqad

// SPDX-License-Identifier: MIT
//
// Two-level-system state containers: density-matrix and Bloch-vector views,
// plus the axially symmetric affine maps that all dynamical descriptions in
// this library reduce to.

#pragma once

#include <complex>

namespace qdyn {

// Basis convention: index 1 is the excited level, index 2 the ground level,
// so wz = rho11 - rho22 and the excited population is (1 + wz) / 2.

// 2x2 complex matrix, row-major; used for operator-level interfaces.
struct Matrix2c {
    std::complex<double> m[2][2]{};

    std::complex<double>& operator()(int i, int j) { return m[i][j]; }
    const std::complex<double>& operator()(int i, int j) const { return m[i][j]; }
};

Matrix2c operator+(const Matrix2c& a, const Matrix2c& b);
Matrix2c operator-(const Matrix2c& a, const Matrix2c& b);
Matrix2c operator*(const Matrix2c& a, const Matrix2c& b);
Matrix2c operator*(std::complex<double> s, const Matrix2c& a);

// Hermitian trace-one density matrix; Hermiticity is structural (diagonal
// entries stored as reals), trace-one is validated on construction.
struct QubitState {
    double rho11 = 0.0;                    // excited population
    double rho22 = 1.0;                    // ground population
    std::complex<double> rho12{0.0, 0.0};  // coherence; rho21 = conj(rho12)

    QubitState() = default;
    // Throws std::invalid_argument unless |rho11 + rho22 - 1| <= 1e-12.
    QubitState(double p11, double p22, std::complex<double> p12);

    Matrix2c to_matrix() const;
};

struct BlochVector {
    double wx = 0.0;
    double wy = 0.0;
    double wz = 0.0;

    double norm() const;
};

// w -> (xi_perp wx, xi_perp wy, wz_fixed + xi_z (wz - wz_fixed)): the affine
// action shared by every dynamical map in this library.  xi_perp scales the
// equatorial (coherence) components, xi_z contracts toward the fixed point
// wz_fixed on the z axis.
struct AffineBlochMap {
    double xi_perp = 1.0;
    double xi_z = 1.0;
    double wz_fixed = -1.0;
};

BlochVector to_bloch(const QubitState& s);
// Accepts any vector, including |w| > 1 (unphysical states stay representable;
// physicality is a query, not a construction constraint).
QubitState from_bloch(const BlochVector& w);

// Smaller density-matrix eigenvalue, (1 - |w|) / 2; negative iff unphysical.
double min_eigenvalue(const BlochVector& w);
double min_eigenvalue(const QubitState& s);

// True iff the state is a valid density matrix up to numerical slack:
// min_eigenvalue >= -1e-12, equivalently |w| <= 1 + 2e-12.
bool is_physical(const BlochVector& w);

BlochVector apply_map(const AffineBlochMap& map, const BlochVector& w);
QubitState apply_map(const AffineBlochMap& map, const QubitState& s);

// Composition: apply `second` after `first` (both share a fixed axis).
AffineBlochMap compose(const AffineBlochMap& second, const AffineBlochMap& first);

}  // namespace qdyn

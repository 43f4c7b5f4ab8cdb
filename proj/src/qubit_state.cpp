// SPDX-License-Identifier: MIT

#include "qdyn/qubit_state.hpp"

#include <cmath>
#include <stdexcept>

namespace qdyn {

Matrix2c operator+(const Matrix2c& a, const Matrix2c& b) {
    Matrix2c r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.m[i][j] = a.m[i][j] + b.m[i][j];
    return r;
}

Matrix2c operator-(const Matrix2c& a, const Matrix2c& b) {
    Matrix2c r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.m[i][j] = a.m[i][j] - b.m[i][j];
    return r;
}

Matrix2c operator*(const Matrix2c& a, const Matrix2c& b) {
    Matrix2c r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r.m[i][j] = a.m[i][0] * b.m[0][j] + a.m[i][1] * b.m[1][j];
    return r;
}

Matrix2c operator*(std::complex<double> s, const Matrix2c& a) {
    Matrix2c r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.m[i][j] = s * a.m[i][j];
    return r;
}

QubitState::QubitState(double p11, double p22, std::complex<double> p12)
    : rho11(p11), rho22(p22), rho12(p12) {
    if (!(std::abs(p11 + p22 - 1.0) <= 1e-12))
        throw std::invalid_argument("QubitState: trace must be 1 within 1e-12");
}

Matrix2c QubitState::to_matrix() const {
    Matrix2c r;
    r.m[0][0] = rho11;
    r.m[0][1] = rho12;
    r.m[1][0] = std::conj(rho12);
    r.m[1][1] = rho22;
    return r;
}

double BlochVector::norm() const { return std::sqrt(wx * wx + wy * wy + wz * wz); }

BlochVector to_bloch(const QubitState& s) {
    return {2.0 * s.rho12.real(), -2.0 * s.rho12.imag(), s.rho11 - s.rho22};
}

QubitState from_bloch(const BlochVector& w) {
    QubitState s;
    s.rho11 = (1.0 + w.wz) / 2.0;
    s.rho22 = (1.0 - w.wz) / 2.0;
    s.rho12 = {w.wx / 2.0, -w.wy / 2.0};
    return s;
}

double min_eigenvalue(const BlochVector& w) { return (1.0 - w.norm()) / 2.0; }

double min_eigenvalue(const QubitState& s) { return min_eigenvalue(to_bloch(s)); }

bool is_physical(const BlochVector& w) { return min_eigenvalue(w) >= -1e-12; }

BlochVector apply_map(const AffineBlochMap& map, const BlochVector& w) {
    // Factored so the identity map (xi_perp = xi_z = 1) is exact bit-for-bit.
    return {map.xi_perp * w.wx, map.xi_perp * w.wy,
            map.wz_fixed * (1.0 - map.xi_z) + map.xi_z * w.wz};
}

QubitState apply_map(const AffineBlochMap& map, const QubitState& s) {
    return from_bloch(apply_map(map, to_bloch(s)));
}

AffineBlochMap compose(const AffineBlochMap& second, const AffineBlochMap& first) {
    if (second.wz_fixed != first.wz_fixed)
        throw std::invalid_argument("compose: maps must share the fixed axis point");
    return {second.xi_perp * first.xi_perp, second.xi_z * first.xi_z, first.wz_fixed};
}

}  // namespace qdyn

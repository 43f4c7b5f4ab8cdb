// SPDX-License-Identifier: MIT

#include "qdyn/damping_basis.hpp"

#include <cmath>
#include <stdexcept>

namespace qdyn {

namespace {

// Lowering operator |ground><excited| in the (excited, ground) basis.
const Matrix2c kSigmaMinus = [] {
    Matrix2c s;
    s.m[1][0] = 1.0;
    return s;
}();

const Matrix2c kSigmaPlus = [] {
    Matrix2c s;
    s.m[0][1] = 1.0;
    return s;
}();

// Dissipator D[c](op) = c op c^+ - (c^+ c op + op c^+ c) / 2 for c = sigma-.
Matrix2c lowering_dissipator(const Matrix2c& op) {
    Matrix2c r;
    r.m[0][0] = -op.m[0][0];
    r.m[0][1] = -0.5 * op.m[0][1];
    r.m[1][0] = -0.5 * op.m[1][0];
    r.m[1][1] = op.m[0][0];
    return r;
}

// Same with c = sigma+ (thermal excitation channel).
Matrix2c raising_dissipator(const Matrix2c& op) {
    Matrix2c r;
    r.m[0][0] = op.m[1][1];
    r.m[0][1] = -0.5 * op.m[0][1];
    r.m[1][0] = -0.5 * op.m[1][0];
    r.m[1][1] = -op.m[1][1];
    return r;
}

}  // namespace

BathParams::BathParams(double g0, double g, double n) : gamma0(g0), gamma(g), N(n) {
    if (!(gamma0 >= 0.0)) throw std::invalid_argument("BathParams: gamma0 must be >= 0");
    if (!(gamma > 0.0)) throw std::invalid_argument("BathParams: gamma must be > 0");
    if (!(N >= 0.0)) throw std::invalid_argument("BathParams: N must be >= 0");
}

LiouvillianSpectrum spectrum(const BathParams& p) {
    LiouvillianSpectrum s;
    s.lambda2 = -2.0 * p.gamma0 * (p.N + 0.5);
    s.lambda3 = s.lambda2 / 2.0;
    s.lambda4 = s.lambda3;
    return s;
}

double damping_ratio(const BathParams& p) {
    return 2.0 * p.gamma0 * (p.N + 0.5) / p.gamma;
}

double stationary_wz(const BathParams& p) { return -1.0 / (2.0 * p.N + 1.0); }

Matrix2c apply_liouvillian(const BathParams& p, const Matrix2c& op) {
    std::complex<double> down{p.gamma0 * (p.N + 1.0), 0.0};
    std::complex<double> up{p.gamma0 * p.N, 0.0};
    return down * lowering_dissipator(op) + up * raising_dissipator(op);
}

AffineBlochMap markovian_map(const BathParams& p, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("markovian_map: t must be >= 0");
    LiouvillianSpectrum s = spectrum(p);
    return {std::exp(s.lambda3 * t), std::exp(s.lambda2 * t), stationary_wz(p)};
}

}  // namespace qdyn

// SPDX-License-Identifier: MIT
//
// Thermal single-qubit damping generator: its eigenoperators (damping basis),
// spectrum, and the Markovian semigroup map it generates.

#pragma once

#include "qdyn/qubit_state.hpp"

namespace qdyn {

// Dissipation parameters: zero-temperature rate gamma0, memory-kernel decay
// rate gamma, and thermal occupation N.
struct BathParams {
    double gamma0 = 1.0;  // >= 0
    double gamma = 1.0;   // > 0
    double N = 0.0;       // >= 0

    BathParams() = default;
    // Throws std::invalid_argument on gamma0 < 0, gamma <= 0, N < 0.
    BathParams(double g0, double g, double n);
};

// Eigenvalues of the damping generator on the basis
// { sigma0, sigma_z, sigma_+, sigma_- }:
//   lambda1 = 0 (stationary state), lambda2 = -2 gamma0 (N + 1/2) (population),
//   lambda3 = lambda4 = lambda2 / 2 (coherences).
struct LiouvillianSpectrum {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double lambda3 = 0.0;
    double lambda4 = 0.0;
};

LiouvillianSpectrum spectrum(const BathParams& p);

// |lambda2| / gamma: the dimensionless population-channel ratio that the
// kernel-resolved solutions are parameterized by.
double damping_ratio(const BathParams& p);

// Fixed point of the z channel, -1 / (2N + 1); the stationary excited
// population is N / (2N + 1).
double stationary_wz(const BathParams& p);

// Action of the damping generator on a Hermitian operator (trace arbitrary).
// The output is traceless for any input.
Matrix2c apply_liouvillian(const BathParams& p, const Matrix2c& op);

// Semigroup map exp(L t) as an affine Bloch map:
//   xi_z = exp(lambda2 t), xi_perp = exp(lambda3 t), wz_fixed = -1/(2N+1),
// so xi_perp^2 == xi_z identically.  Throws std::invalid_argument for t < 0.
AffineBlochMap markovian_map(const BathParams& p, double t);

}  // namespace qdyn

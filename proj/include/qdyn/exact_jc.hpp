// SPDX-License-Identifier: MIT
//
// Exact resonant decay of a qubit into a Lorentzian oscillator bath (vacuum):
// spectral density, reservoir correlation kernel (closed form and direct
// frequency-space quadrature with an analytic window-tail correction), and
// the exact excited-state amplitude / population.

#pragma once

#include <complex>

#include "qdyn/damping_basis.hpp"
#include "qdyn/qubit_state.hpp"

namespace qdyn {

// Lorentzian spectral density centered on the qubit frequency omega0:
//   J(omega) = (1/pi) gamma0_bar lambda_bar^2 / ((omega0 - omega)^2 + lambda_bar^2)
struct LorentzianBath {
    double omega0 = 1.0;
    double gamma0_bar = 1.0;  // >= 0, overall coupling rate
    double lambda_bar = 1.0;  // > 0, spectral width = kernel decay rate

    LorentzianBath() = default;
    // Throws std::invalid_argument on gamma0_bar < 0 or lambda_bar <= 0.
    LorentzianBath(double w0, double g0, double lam);
};

double spectral_density(const LorentzianBath& b, double omega);

// Correlation kernel gamma0_bar lambda_bar e^{-lambda_bar t} (t >= 0).
double correlation_kernel_closed(const LorentzianBath& b, double t);

// Kernel Int J(omega) e^{i (omega - omega0) t} domega computed numerically
// over the window omega0 +/- 200 lambda_bar (composite Gauss-Legendre with
// panel doubling) plus the analytic correction for the discarded tails.
struct KernelQuadrature {
    std::complex<double> value;  // window integral + tail correction
    double window_value = 0.0;   // real part of the raw window integral
    double tail_correction = 0.0;
    double error_estimate = 0.0;  // absolute, from the last panel doubling
    bool converged = false;       // error_estimate <= 1e-8 gamma0_bar lambda_bar
};

KernelQuadrature correlation_kernel_quadrature(const LorentzianBath& b, double t);

// Dimensionless ratio R = gamma0_bar / lambda_bar and tau = lambda_bar t.
double exact_ratio(const LorentzianBath& b);

// Excited-state amplitude c(tau) = envelope(1 - 2R, tau): monotone decay for
// 2R <= 1, zero-touching oscillation for 2R > 1.  c(0) = 1, c'(0) = 0.
double exact_amplitude(double R, double tau);

// Excited population p0 * c(tau)^2; p0 must lie in [0, 1].
double exact_excited_population(double R, double tau, double p0);

// Affine map of the exact dynamics: xi_z = c^2, wz_fixed = -1 and, beyond the
// population-level treatment, the amplitude-level coherence factor
// xi_perp = c (the off-diagonal element scales with the amplitude itself).
AffineBlochMap exact_map(const LorentzianBath& b, double t);
AffineBlochMap exact_map_dimensionless(double R, double tau);

// The memory-kernel descriptions use these dissipation parameters for the
// same bath: gamma0 = gamma0_bar, gamma = lambda_bar, N = 0.
BathParams to_bath_params(const LorentzianBath& b);

}  // namespace qdyn

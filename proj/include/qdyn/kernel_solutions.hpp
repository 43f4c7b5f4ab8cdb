// SPDX-License-Identifier: MIT
//
// Closed-form relaxation factors xi(a, tau) for a qubit damped through an
// exponential memory kernel, in two descriptions:
//
//   post-Markovian:  dm/dtau = -a Int_0^tau e^{-(1+a) s} m(tau - s) ds
//   memory-kernel:   dm/dtau = -a Int_0^tau e^{-s}       m(tau - s) ds
//
// Both families, as well as the exact oscillator-bath amplitude, are values
// of one shared decaying envelope
//
//   envelope(u, T) = e^{-T/2} [ cosh(sqrt(u) T/2) + sinh(sqrt(u) T/2)/sqrt(u) ]
//
// continued through u <= 0 (trigonometric branch, degenerate limit at u = 0).

#pragma once

#include "qdyn/damping_basis.hpp"

namespace qdyn {

enum class Branch { Hyperbolic, Degenerate, Trigonometric };

// Which evaluation branch a discriminant u selects.  The degenerate band has
// half-width 1e-9; inside it a short series in u replaces the closed forms.
struct BranchInfo {
    double discriminant = 0.0;
    Branch branch = Branch::Degenerate;
};

inline constexpr double kDegenerateBandHalfWidth = 1e-9;

BranchInfo classify_discriminant(double u);

// Shared evaluation core; valid for u <= 1 (all uses here), T >= 0.
// Monotone-decay organization: for u > 0 the two decaying exponentials are
// combined without the overflow-prone cosh/sinh product.
double decaying_envelope(double u, double T);

// Resonance-strength reparameterization r(a) = 4a / (1 + a)^2, always <= 1.
double r_of(double a);

// Post-Markovian relaxation factor, canonical two-exponential form
//   xi = (e^{-a tau} - a e^{-tau}) / (1 - a),
// evaluated stably near a = 1 (expm1 reorganization plus a degenerate-band
// series in 1 - a).  Throws std::invalid_argument for a < 0 or tau < 0.
double xi_post_markovian(double a, double tau);

// The same solution evaluated through the shared envelope,
// envelope(1 - r(a), (1 + a) tau).  Retained as an independently coded
// cross-validation surface; never selects the trigonometric branch.
double xi_post_markovian_envelope(double a, double tau);

BranchInfo xi_post_markovian_branch(double a);

// Memory-kernel relaxation factor envelope(1 - 4a, tau): monotone decay for
// 4a <= 1, damped oscillation (negative excursions) for 4a > 1.
double xi_memory_kernel(double a, double tau);

BranchInfo xi_memory_kernel_branch(double a);

// Coherence-channel argument convention for assembled maps.
//   Consistent: a_coh = R/2, matching the coherence eigenvalue lambda3;
//   Doubled:    a_coh = 2R, a convention appearing in some treatments
//               (its oscillation threshold differs by a factor of four).
enum class CoherenceArgMode { Consistent, Doubled };

double coherence_arg(double ratio, CoherenceArgMode mode);

// Dynamical maps at dimensionless time tau = gamma * t:
//   xi_z = xi(R, tau), xi_perp = xi(a_coh, tau), wz_fixed = -1/(2N+1),
// with R = damping_ratio(p).  Throws std::invalid_argument for t < 0.
AffineBlochMap post_markovian_map(const BathParams& p, CoherenceArgMode mode, double t);
AffineBlochMap memory_kernel_map(const BathParams& p, CoherenceArgMode mode, double t);

}  // namespace qdyn

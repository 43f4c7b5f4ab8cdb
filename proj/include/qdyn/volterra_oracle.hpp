// SPDX-License-Identifier: MIT
//
// Independent numerical reference for the integro-differential equations
//
//   dm/dtau = -q Int_0^tau e^{-p s} m(tau - s) ds,   m(0) = 1,
//
// solved by trapezoidal quadrature of the convolution combined with an
// Euler-predictor / trapezoid-corrector step.  The solver never evaluates the
// closed-form solutions and never exploits the exponential structure of the
// kernel beyond tabulating its values, so it cross-validates the closed forms
// rather than restating them.  This header intentionally depends on nothing
// else in the library.

#pragma once

#include <cstddef>
#include <vector>

namespace qdyn {

enum class VolterraForm {
    PostMarkovian,   // q = a, p = 1 + a
    MemoryKernel,    // q = a, p = 1
    ExactAmplitude,  // q = R / 2, p = 1
};

// Rates are physical: a (or R) = -lambda / gamma; tau is in units of 1/gamma.
struct VolterraProblem {
    double lambda = -1.0;  // <= 0
    double gamma = 1.0;    // > 0
    VolterraForm form = VolterraForm::PostMarkovian;
    double step = 1e-3;    // 0 < step <= 1e-2
    double tau_max = 10.0; // tau_max / step must be integral (within 1e-9)

    // Throws std::invalid_argument when any bound above is violated.
    void validate() const;
};

struct OracleSolution {
    std::vector<double> tau;    // strictly increasing grid, tau[0] = 0
    std::vector<double> value;  // value[0] == 1 exactly
    double max_step_error_estimate = 0.0;  // max |corrector - predictor|
};

// Throws std::runtime_error if |value| exceeds 1e6 (numerical divergence).
OracleSolution solve(const VolterraProblem& problem);

// Self-convergence order from solutions at step, step/2, step/4 compared on
// the coarse grid; diff_* are max-abs differences.  A quadratic scheme gives
// order near 2; for q = 0 both differences are exactly zero and order is NaN.
struct RichardsonResult {
    double order = 0.0;
    double diff_coarse = 0.0;
    double diff_fine = 0.0;
};

RichardsonResult richardson_check(const VolterraProblem& problem);

}  // namespace qdyn

// SPDX-License-Identifier: MIT

#include "qdyn/volterra_oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace qdyn {

namespace {

// Memory weight p and strength q of the dimensionless convolution equation
//   d mu / d tau = -q * integral_0^tau exp(-p s) mu(tau - s) ds
// for each evolution family, with a = |lambda| / gamma.
struct Coefficients {
    double q;
    double p;
};

Coefficients coefficients(const VolterraProblem& prob) {
    double a = -prob.lambda / prob.gamma;
    switch (prob.form) {
        case VolterraForm::PostMarkovian:
            return {a, 1.0 + a};
        case VolterraForm::MemoryKernel:
            return {a, 1.0};
        case VolterraForm::ExactAmplitude:
            return {a / 2.0, 1.0};
    }
    throw std::logic_error("coefficients: unknown form");
}

}  // namespace

void VolterraProblem::validate() const {
    if (!(lambda <= 0.0)) throw std::invalid_argument("VolterraProblem: lambda must be <= 0");
    if (!(gamma > 0.0)) throw std::invalid_argument("VolterraProblem: gamma must be > 0");
    if (!(step > 0.0) || step > 1e-2)
        throw std::invalid_argument("VolterraProblem: step must be in (0, 1e-2]");
    if (!(tau_max > 0.0)) throw std::invalid_argument("VolterraProblem: tau_max must be > 0");
    double ratio = tau_max / step;
    if (std::abs(ratio - std::round(ratio)) > 1e-9)
        throw std::invalid_argument("VolterraProblem: tau_max must be a whole number of steps");
}

OracleSolution solve(const VolterraProblem& prob) {
    prob.validate();
    auto [q, p] = coefficients(prob);
    double h = prob.step;
    std::size_t n_steps = static_cast<std::size_t>(std::llround(prob.tau_max / h));

    // Decay factors exp(-p h j), each evaluated directly so that no
    // rounding error accumulates along a running product.
    std::vector<double> kernel(n_steps + 1);
    for (std::size_t j = 0; j <= n_steps; ++j) kernel[j] = std::exp(-p * h * static_cast<double>(j));

    OracleSolution sol;
    sol.tau.resize(n_steps + 1);
    sol.value.resize(n_steps + 1);
    for (std::size_t j = 0; j <= n_steps; ++j) sol.tau[j] = h * static_cast<double>(j);
    sol.value[0] = 1.0;
    sol.max_step_error_estimate = 0.0;

    // Heun (trapezoidal predictor-corrector) sweep: the convolution integral
    // at the new node is a trapezoid over the history, with the newest sample
    // entering through the half-weight h/2 term so it can be corrected once.
    double f_prev = 0.0;  // convolution integral at the previous node
    for (std::size_t n = 1; n <= n_steps; ++n) {
        double history = 0.5 * kernel[n] * sol.value[0];
        for (std::size_t j = 1; j < n; ++j) history += kernel[n - j] * sol.value[j];
        double s_n = h * history;

        double predicted = sol.value[n - 1] - h * q * f_prev;
        double f_pred = s_n + (h / 2.0) * predicted;
        double corrected = sol.value[n - 1] - (h * q / 2.0) * (f_prev + f_pred);

        sol.value[n] = corrected;
        f_prev = s_n + (h / 2.0) * corrected;
        sol.max_step_error_estimate =
            std::max(sol.max_step_error_estimate, std::abs(corrected - predicted));
        if (std::abs(corrected) > 1e6)
            throw std::runtime_error("solve: trajectory diverged (|value| > 1e6)");
    }
    return sol;
}

RichardsonResult richardson_check(const VolterraProblem& prob) {
    VolterraProblem fine = prob;
    OracleSolution coarse = solve(prob);
    fine.step = prob.step / 2.0;
    OracleSolution mid = solve(fine);
    fine.step = prob.step / 4.0;
    OracleSolution finest = solve(fine);

    // Compare on the coarse grid only, where all three solutions have nodes.
    double diff_coarse = 0.0;
    double diff_fine = 0.0;
    for (std::size_t n = 0; n < coarse.value.size(); ++n) {
        diff_coarse = std::max(diff_coarse, std::abs(coarse.value[n] - mid.value[2 * n]));
        diff_fine = std::max(diff_fine, std::abs(mid.value[2 * n] - finest.value[4 * n]));
    }

    RichardsonResult res;
    res.diff_coarse = diff_coarse;
    res.diff_fine = diff_fine;
    // For a second-order scheme the successive differences shrink by 4x;
    // a flat-zero solution (q = 0) yields 0/0 and reports NaN.
    res.order = std::log2(diff_coarse / diff_fine);
    return res;
}

}  // namespace qdyn

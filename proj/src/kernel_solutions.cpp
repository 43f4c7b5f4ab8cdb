// SPDX-License-Identifier: MIT

#include "qdyn/kernel_solutions.hpp"

#include <cmath>
#include <stdexcept>

namespace qdyn {

BranchInfo classify_discriminant(double u) {
    if (std::abs(u) <= kDegenerateBandHalfWidth) return {u, Branch::Degenerate};
    return {u, u > 0.0 ? Branch::Hyperbolic : Branch::Trigonometric};
}

double decaying_envelope(double u, double T) {
    switch (classify_discriminant(u).branch) {
        case Branch::Degenerate: {
            // Series in u about the critically damped solution e^{-T/2}(1+T/2);
            // inside the band the omitted u^3 term is far below 1e-12.
            double t2 = T * T;
            return std::exp(-T / 2.0) *
                   (1.0 + T / 2.0 + u * t2 * (1.0 / 8.0 + T / 48.0) +
                    u * u * t2 * t2 * (1.0 / 384.0 + T / 3840.0));
        }
        case Branch::Hyperbolic: {
            // (1/2)(1 + 1/sqrt(u)) e^{-(1-sqrt(u))T/2}
            //   + (1/2)(1 - 1/sqrt(u)) e^{-(1+sqrt(u))T/2}:
            // both exponents are nonpositive for u <= 1, so the growing
            // cosh factor never appears and large T cannot overflow.
            double s = std::sqrt(u);
            return 0.5 * (1.0 + 1.0 / s) * std::exp(-(1.0 - s) * T / 2.0) +
                   0.5 * (1.0 - 1.0 / s) * std::exp(-(1.0 + s) * T / 2.0);
        }
        case Branch::Trigonometric: {
            double s = std::sqrt(-u);
            double x = s * T / 2.0;
            return std::exp(-T / 2.0) * (std::cos(x) + std::sin(x) / s);
        }
    }
    return 0.0;  // unreachable
}

double r_of(double a) {
    if (!(a >= 0.0)) throw std::invalid_argument("r_of: a must be >= 0");
    double onepa = 1.0 + a;
    return 4.0 * a / (onepa * onepa);
}

namespace {

void check_args(const char* who, double a, double tau) {
    if (!(a >= 0.0)) throw std::invalid_argument(std::string(who) + ": a must be >= 0");
    if (!(tau >= 0.0)) throw std::invalid_argument(std::string(who) + ": tau must be >= 0");
}

}  // namespace

double xi_post_markovian(double a, double tau) {
    check_args("xi_post_markovian", a, tau);
    double eps = 1.0 - a;
    if (std::abs(eps) <= kDegenerateBandHalfWidth) {
        // Series in eps about the confluent point a = 1: e^{-tau}(1 + tau + ...).
        return std::exp(-tau) *
               (1.0 + tau + eps * tau * tau / 2.0 + eps * eps * tau * tau * tau / 6.0);
    }
    // (e^{-a tau} - a e^{-tau})/(1 - a) = e^{-tau} (expm1(eps tau)/eps + 1):
    // no subtractive cancellation as a -> 1, and the bracket is >= 1 for
    // a > 1 and >= 1 - something positive for a < 1, keeping xi in [0, 1].
    return std::exp(-tau) * (std::expm1(eps * tau) / eps + 1.0);
}

double xi_post_markovian_envelope(double a, double tau) {
    check_args("xi_post_markovian_envelope", a, tau);
    return decaying_envelope(1.0 - r_of(a), (1.0 + a) * tau);
}

BranchInfo xi_post_markovian_branch(double a) {
    return classify_discriminant(1.0 - r_of(a));
}

double xi_memory_kernel(double a, double tau) {
    check_args("xi_memory_kernel", a, tau);
    return decaying_envelope(1.0 - 4.0 * a, tau);
}

BranchInfo xi_memory_kernel_branch(double a) {
    if (!(a >= 0.0)) throw std::invalid_argument("xi_memory_kernel_branch: a must be >= 0");
    return classify_discriminant(1.0 - 4.0 * a);
}

double coherence_arg(double ratio, CoherenceArgMode mode) {
    return mode == CoherenceArgMode::Consistent ? ratio / 2.0 : 2.0 * ratio;
}

AffineBlochMap post_markovian_map(const BathParams& p, CoherenceArgMode mode, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("post_markovian_map: t must be >= 0");
    double tau = p.gamma * t;
    double R = damping_ratio(p);
    return {xi_post_markovian(coherence_arg(R, mode), tau), xi_post_markovian(R, tau),
            stationary_wz(p)};
}

AffineBlochMap memory_kernel_map(const BathParams& p, CoherenceArgMode mode, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("memory_kernel_map: t must be >= 0");
    double tau = p.gamma * t;
    double R = damping_ratio(p);
    return {xi_memory_kernel(coherence_arg(R, mode), tau), xi_memory_kernel(R, tau),
            stationary_wz(p)};
}

}  // namespace qdyn

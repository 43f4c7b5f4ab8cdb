// SPDX-License-Identifier: MIT

#include "qdyn/exact_jc.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "qdyn/kernel_solutions.hpp"

namespace qdyn {

namespace {

constexpr double kWindowHalfWidth = 200.0;  // window edge in units of lambda_bar
constexpr int kPanelsPerUnitPhase = 125;    // panels per unit of s = lambda_bar t
constexpr int kMinPanels = 64;
constexpr int kMaxDoublings = 8;

// 15-point Gauss-Legendre rule on [-1, 1], generated once by Newton iteration
// on the Legendre polynomial so the library carries no hard-coded node table.
struct GaussLegendre15 {
    std::array<double, 15> node{};
    std::array<double, 15> weight{};

    GaussLegendre15() {
        constexpr int n = 15;
        for (int k = 0; k < n; ++k) {
            // Chebyshev-like initial guess, then Newton on P_n(x).
            double x = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0;
                double p1 = x;
                for (int j = 2; j <= n; ++j) {
                    double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                double step = p1 / dp;
                x -= step;
                if (std::abs(step) < 1e-15) break;
            }
            node[k] = x;
            weight[k] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }
};

const GaussLegendre15& gl15() {
    static const GaussLegendre15 rule;
    return rule;
}

// Dimensionless window integral (2/pi) Int_0^200 cos(u s) / (1 + u^2) du
// as a composite Gauss-Legendre sum over `panels` equal panels.
double window_integral(double s, int panels) {
    const auto& rule = gl15();
    double panel_width = kWindowHalfWidth / panels;
    double half = panel_width / 2.0;
    double sum = 0.0;
    for (int i = 0; i < panels; ++i) {
        double center = (i + 0.5) * panel_width;
        double panel_sum = 0.0;
        for (int k = 0; k < 15; ++k) {
            double u = center + half * rule.node[k];
            panel_sum += rule.weight[k] * std::cos(u * s) / (1.0 + u * u);
        }
        sum += half * panel_sum;
    }
    return 2.0 / std::numbers::pi * sum;
}

// W_1(z) = Int_z^inf e^{ix}/x dx = -Ci(z) + i (pi/2 - Si(z)) for z > 0.
// Power series below z = 4, Lentz continued fraction for E_1(-iz) above.
std::complex<double> w1(double z) {
    if (z < 4.0) {
        double z2 = z * z;
        // Ci(z) = euler_gamma + ln z + sum_{k>=1} (-z^2)^k / (2k (2k)!)
        double ci = std::numbers::egamma + std::log(z);
        double c = 1.0;  // running (-z^2)^k / (2k)!
        for (int k = 1; k <= 60; ++k) {
            c *= -z2 / ((2.0 * k - 1.0) * (2.0 * k));
            double term = c / (2.0 * k);
            ci += term;
            if (std::abs(term) < 1e-18) break;
        }
        // Si(z) = sum_{k>=0} (-1)^k z^{2k+1} / ((2k+1) (2k+1)!)
        double si = 0.0;
        double d = z;  // running (-1)^k z^{2k+1} / (2k+1)!
        for (int k = 0; k <= 60; ++k) {
            double term = d / (2.0 * k + 1.0);
            si += term;
            if (std::abs(term) < 1e-18) break;
            d *= -z2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
        }
        return {-ci, std::numbers::pi / 2.0 - si};
    }
    // E_1(w) = e^{-w} / (w + 1 - 1^2/(w + 3 - 2^2/(w + 5 - ...))) at w = -iz,
    // evaluated by the modified Lentz algorithm.
    std::complex<double> w(0.0, -z);
    std::complex<double> b = w + 1.0;
    std::complex<double> c(1e300, 0.0);
    std::complex<double> d = 1.0 / b;
    std::complex<double> f = d;
    for (int i = 1; i <= 200; ++i) {
        double a = -static_cast<double>(i) * static_cast<double>(i);
        b += 2.0;
        d = 1.0 / (b + a * d);
        c = b + a / c;
        std::complex<double> delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return f * std::exp(-w);  // e^{-w} = e^{iz}, modulus 1
}

// Analytic tail (2/pi) Int_200^inf cos(u s)/(1+u^2) du.  Expanding
// 1/(1+u^2) = u^-2 - u^-4 + u^-6 - ... (the next term is < 1e-16 of the
// leading one at u >= 200) and substituting x = u s turns each piece into
// s^{m-1} Re W_m(200 s) with W_{m+1}(z) = (e^{iz} z^{-m} + i W_m(z)) / m.
double tail_integral(double s) {
    if (s == 0.0) {
        double e = 1.0 / kWindowHalfWidth;
        return 2.0 / std::numbers::pi * (e - e * e * e / 3.0 + e * e * e * e * e / 5.0);
    }
    double z = kWindowHalfWidth * s;
    std::complex<double> eiz = std::polar(1.0, z);
    std::complex<double> w = w1(z);  // W_1
    double zpow = 1.0 / z;           // z^-m, consumed by the update to W_{m+1}
    double spow = s;                 // s^(m-1) for the next even m in {2, 4, 6}
    double sign = 1.0;
    double tail = 0.0;
    for (int m = 1; m <= 5; ++m) {
        w = (eiz * zpow + std::complex<double>(0.0, 1.0) * w) / static_cast<double>(m);
        zpow /= z;
        if (m % 2 == 1) {  // w now holds W_{m+1} with m+1 in {2, 4, 6}
            tail += sign * spow * w.real();
            sign = -sign;
            spow *= s * s;
        }
    }
    return 2.0 / std::numbers::pi * tail;
}

}  // namespace

LorentzianBath::LorentzianBath(double w0, double g0, double lam)
    : omega0(w0), gamma0_bar(g0), lambda_bar(lam) {
    if (!(gamma0_bar >= 0.0))
        throw std::invalid_argument("LorentzianBath: gamma0_bar must be >= 0");
    if (!(lambda_bar > 0.0)) throw std::invalid_argument("LorentzianBath: lambda_bar must be > 0");
}

double spectral_density(const LorentzianBath& b, double omega) {
    double detuning = b.omega0 - omega;
    return b.gamma0_bar * b.lambda_bar * b.lambda_bar /
           (std::numbers::pi * (detuning * detuning + b.lambda_bar * b.lambda_bar));
}

double correlation_kernel_closed(const LorentzianBath& b, double t) {
    if (!(t >= 0.0))
        throw std::invalid_argument("correlation_kernel_closed: t must be >= 0");
    return b.gamma0_bar * b.lambda_bar * std::exp(-b.lambda_bar * t);
}

KernelQuadrature correlation_kernel_quadrature(const LorentzianBath& b, double t) {
    if (!(t >= 0.0))
        throw std::invalid_argument("correlation_kernel_quadrature: t must be >= 0");
    double s = b.lambda_bar * t;
    double scale = b.gamma0_bar * b.lambda_bar;

    int panels = std::max(kMinPanels, static_cast<int>(std::ceil(kPanelsPerUnitPhase * s)));
    double prev = window_integral(s, panels);
    double cur = prev;
    double diff = 0.0;
    for (int d = 0; d < kMaxDoublings; ++d) {
        panels *= 2;
        cur = window_integral(s, panels);
        diff = std::abs(cur - prev);
        prev = cur;
        if (diff <= 1e-12) break;
    }

    double tail = tail_integral(s);
    KernelQuadrature result;
    // The imaginary part vanishes identically: the spectral density is even
    // about omega0, so the sine component integrates to zero over the window.
    result.value = {scale * (cur + tail), 0.0};
    result.window_value = scale * cur;
    result.tail_correction = scale * tail;
    result.error_estimate = scale * diff;
    result.converged = diff <= 1e-8;
    return result;
}

double exact_ratio(const LorentzianBath& b) { return b.gamma0_bar / b.lambda_bar; }

double exact_amplitude(double R, double tau) {
    if (!(R >= 0.0)) throw std::invalid_argument("exact_amplitude: R must be >= 0");
    if (!(tau >= 0.0)) throw std::invalid_argument("exact_amplitude: tau must be >= 0");
    return decaying_envelope(1.0 - 2.0 * R, tau);
}

double exact_excited_population(double R, double tau, double p0) {
    if (!(p0 >= 0.0 && p0 <= 1.0))
        throw std::invalid_argument("exact_excited_population: p0 must be in [0, 1]");
    double c = exact_amplitude(R, tau);
    return p0 * c * c;
}

AffineBlochMap exact_map_dimensionless(double R, double tau) {
    double c = exact_amplitude(R, tau);
    return {c, c * c, -1.0};
}

AffineBlochMap exact_map(const LorentzianBath& b, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("exact_map: t must be >= 0");
    return exact_map_dimensionless(exact_ratio(b), b.lambda_bar * t);
}

BathParams to_bath_params(const LorentzianBath& b) {
    return BathParams(b.gamma0_bar, b.lambda_bar, 0.0);
}

}  // namespace qdyn

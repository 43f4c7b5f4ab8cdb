// SPDX-License-Identifier: MIT

#include "qdyn/positivity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "qdyn/damping_basis.hpp"

namespace qdyn {

MapPositivity map_positivity(const AffineBlochMap& map) {
    // Squared output norm over pure inputs (|w| = 1) as a function of the
    // input z component alone, by axial symmetry:
    //   f(wz) = u (1 - wz^2) + (z0 + xi_z wz)^2,  u = xi_perp^2,
    //   z0 = wz_fixed (1 - xi_z).
    double u = map.xi_perp * map.xi_perp;
    double z0 = map.wz_fixed * (1.0 - map.xi_z);

    double f_plus = (z0 + map.xi_z) * (z0 + map.xi_z);
    double f_minus = (z0 - map.xi_z) * (z0 - map.xi_z);
    double best = f_plus;
    double arg = 1.0;
    if (f_minus > best) {
        best = f_minus;
        arg = -1.0;
    }

    // Interior critical point wz* = xi_z z0 / D with D = u - xi_z^2 is a
    // maximum only when D > 0 (f is concave there).
    double d = u - map.xi_z * map.xi_z;
    if (d > 0.0) {
        double wz_star = map.xi_z * z0 / d;
        if (std::abs(wz_star) <= 1.0) {
            double f_star = u * (1.0 + z0 * z0 / d);
            if (f_star > best) {
                best = f_star;
                arg = wz_star;
            }
        }
    }

    MapPositivity result;
    result.max_output_norm = std::sqrt(std::max(best, 0.0));
    result.margin = 1.0 - result.max_output_norm;
    result.argmax_wz = arg;
    result.is_positive = result.margin >= kViolationThreshold;
    return result;
}

MapPositivity componentwise_positivity(const AffineBlochMap& map) {
    double z_plus = map.wz_fixed * (1.0 - map.xi_z) + map.xi_z;
    double z_minus = map.wz_fixed * (1.0 - map.xi_z) - map.xi_z;

    MapPositivity result;
    result.margin = 1.0 - std::abs(map.xi_perp);
    result.argmax_wz = 0.0;
    if (1.0 - std::abs(z_plus) < result.margin) {
        result.margin = 1.0 - std::abs(z_plus);
        result.argmax_wz = 1.0;
    }
    if (1.0 - std::abs(z_minus) < result.margin) {
        result.margin = 1.0 - std::abs(z_minus);
        result.argmax_wz = -1.0;
    }
    result.max_output_norm = 1.0 - result.margin;
    result.is_positive = result.margin >= kViolationThreshold;
    return result;
}

std::array<std::array<double, 4>, 4> choi_matrix(const AffineBlochMap& map) {
    // Basis order (1,1), (1,2), (2,1), (2,2) of the two-qubit input x output
    // space; t is the z displacement the map adds to a maximally mixed input.
    double t = map.wz_fixed * (1.0 - map.xi_z);
    std::array<std::array<double, 4>, 4> m{};
    m[0][0] = (1.0 + t + map.xi_z) / 2.0;
    m[0][3] = map.xi_perp;
    m[1][1] = (1.0 - t - map.xi_z) / 2.0;
    m[2][2] = (1.0 + t - map.xi_z) / 2.0;
    m[3][0] = map.xi_perp;
    m[3][3] = (1.0 - t + map.xi_z) / 2.0;
    return m;
}

ChoiSpectrum choi_cp_check(const AffineBlochMap& map) {
    // The Choi matrix is block diagonal: two 1x1 blocks and the 2x2 block
    // coupling (1,1) with (2,2), whose spectrum is center +/- radius.
    double t = map.wz_fixed * (1.0 - map.xi_z);
    double center = (1.0 + map.xi_z) / 2.0;
    double radius = std::sqrt(t * t / 4.0 + map.xi_perp * map.xi_perp);

    ChoiSpectrum spec;
    spec.eigenvalues = {(1.0 - t - map.xi_z) / 2.0, (1.0 + t - map.xi_z) / 2.0, center - radius,
                        center + radius};
    std::sort(spec.eigenvalues.begin(), spec.eigenvalues.end());
    spec.min_eigenvalue = spec.eigenvalues[0];
    spec.is_cp = spec.min_eigenvalue >= -1e-10;
    return spec;
}

AffineBlochMap map_at(Method method, const BathParams& params, CoherenceArgMode mode,
                      double tau) {
    double t = tau / params.gamma;  // physical time giving gamma t = tau
    switch (method) {
        case Method::Markovian:
            return markovian_map(params, t);
        case Method::PostMarkovian:
            return post_markovian_map(params, mode, t);
        case Method::MemoryKernel:
            return memory_kernel_map(params, mode, t);
        case Method::Exact:
            if (params.N != 0.0)
                throw std::invalid_argument("map_at: the exact description requires N = 0");
            return exact_map_dimensionless(damping_ratio(params), tau);
    }
    throw std::logic_error("map_at: unknown method");
}

namespace {

double criterion_margin(ViolationCriterion criterion, const AffineBlochMap& map) {
    switch (criterion) {
        case ViolationCriterion::MapExact:
            return map_positivity(map).margin;
        case ViolationCriterion::Componentwise:
            return componentwise_positivity(map).margin;
        case ViolationCriterion::StateExcited:
            return min_eigenvalue(apply_map(map, BlochVector{0.0, 0.0, 1.0}));
    }
    throw std::logic_error("criterion_margin: unknown criterion");
}

// Refine the first threshold crossing inside (lo, hi] to an interval of
// width 1e-6; margin(lo) is above the threshold, margin(hi) below.
double bisect_crossing(const std::function<double(double)>& margin, double lo, double hi) {
    while (hi - lo > 1e-6) {
        double mid = 0.5 * (lo + hi);
        if (margin(mid) < kViolationThreshold)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

PositivityReport first_violation(Method method, const BathParams& params,
                                 CoherenceArgMode mode, double tau_max, double step) {
    if (!(tau_max > 0.0)) throw std::invalid_argument("first_violation: tau_max must be > 0");
    if (!(step > 0.0)) throw std::invalid_argument("first_violation: step must be > 0");

    PositivityReport report;
    report.method = method;
    report.R = damping_ratio(params);
    report.N = params.N;
    report.mode = mode;
    report.tau_max = tau_max;

    constexpr ViolationCriterion kCriteria[] = {ViolationCriterion::MapExact,
                                                ViolationCriterion::Componentwise,
                                                ViolationCriterion::StateExcited};
    CriterionScan* scans[] = {&report.map_exact, &report.componentwise, &report.state_excited};
    for (CriterionScan* scan : scans) {
        scan->min_margin = std::numeric_limits<double>::infinity();
        scan->min_margin_tau = 0.0;
    }
    report.min_state_eigenvalue = std::numeric_limits<double>::infinity();
    report.min_choi_eigenvalue = std::numeric_limits<double>::infinity();

    auto n_steps = static_cast<std::size_t>(std::ceil(tau_max / step - 1e-9));
    double prev_tau[3] = {0.0, 0.0, 0.0};
    for (std::size_t i = 0; i <= n_steps; ++i) {
        double tau = std::min(static_cast<double>(i) * step, tau_max);
        AffineBlochMap map = map_at(method, params, mode, tau);

        for (int c = 0; c < 3; ++c) {
            double margin = criterion_margin(kCriteria[c], map);
            CriterionScan& scan = *scans[c];
            if (margin < scan.min_margin) {
                scan.min_margin = margin;
                scan.min_margin_tau = tau;
            }
            if (!scan.violated && margin < kViolationThreshold) {
                scan.violated = true;
                auto margin_at = [&, c](double x) {
                    return criterion_margin(kCriteria[c], map_at(method, params, mode, x));
                };
                scan.first_violation_tau = bisect_crossing(margin_at, prev_tau[c], tau);
            }
            if (!scan.violated) prev_tau[c] = tau;
        }

        report.min_state_eigenvalue = std::min(
            report.min_state_eigenvalue,
            min_eigenvalue(apply_map(map, BlochVector{0.0, 0.0, 1.0})));
        report.min_choi_eigenvalue =
            std::min(report.min_choi_eigenvalue, choi_cp_check(map).min_eigenvalue);
    }

    report.is_positive_map = !report.map_exact.violated;
    report.first_violation_tau = report.map_exact.first_violation_tau;
    return report;
}

std::vector<PositivityReport> scan_plane(Method method, const std::vector<double>& ratios,
                                         CoherenceArgMode mode, double tau_max, double step) {
    std::vector<PositivityReport> reports;
    reports.reserve(ratios.size());
    for (double ratio : ratios) {
        BathParams params(ratio, 1.0, 0.0);  // N = 0: damping ratio equals gamma0/gamma
        reports.push_back(first_violation(method, params, mode, tau_max, step));
    }
    return reports;
}

}  // namespace qdyn

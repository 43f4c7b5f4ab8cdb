// SPDX-License-Identifier: MIT
//
// Positivity and complete-positivity analysis of the axially symmetric maps.
//
// Three violation criteria are evaluated side by side, because they genuinely
// disagree for the memory-kernel description:
//   MapExact      - exact positivity of the map: the image of the Bloch ball
//                   must stay inside the ball, checked by a closed-form
//                   one-dimensional maximization over pure-state inputs;
//   Componentwise - each channel factor within bounds (|xi_perp| <= 1 and the
//                   z image of [-1, 1] inside [-1, 1]); blind to the
//                   coherence/population coupling the exact criterion sees;
//   StateExcited  - physicality of one trajectory, the initially excited
//                   state (its z component is the population channel).
//
// Complete positivity is checked through the closed-form spectrum of the
// (unnormalized, trace-2) Choi matrix; CP implies MapExact positivity.

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "qdyn/exact_jc.hpp"
#include "qdyn/kernel_solutions.hpp"
#include "qdyn/method.hpp"
#include "qdyn/qubit_state.hpp"

namespace qdyn {

// Margin convention: 1 - (worst-case output norm); >= 0 means positive.
// Violation threshold: margin < -1e-12 (floor for boundary-saturating maps).
inline constexpr double kViolationThreshold = -1e-12;

struct MapPositivity {
    bool is_positive = true;
    double margin = 0.0;            // 1 - max_w |Phi(w)| over pure states
    double max_output_norm = 1.0;
    double argmax_wz = 0.0;         // input z component attaining the max
};

MapPositivity map_positivity(const AffineBlochMap& map);

// min(1 - |xi_perp|, 1 - |z(+1)|, 1 - |z(-1)|), z(w) = wz_fixed(1-xi_z) + xi_z w.
MapPositivity componentwise_positivity(const AffineBlochMap& map);

struct ChoiSpectrum {
    std::array<double, 4> eigenvalues{};  // ascending
    double min_eigenvalue = 0.0;
    bool is_cp = false;  // min_eigenvalue >= -1e-10
};

// Unnormalized Choi matrix (trace 2; the identity channel gives {0,0,0,2})
// as a real symmetric 4x4, and its closed-form spectrum.
std::array<std::array<double, 4>, 4> choi_matrix(const AffineBlochMap& map);
ChoiSpectrum choi_cp_check(const AffineBlochMap& map);

enum class ViolationCriterion { MapExact, Componentwise, StateExcited };

struct CriterionScan {
    bool violated = false;
    std::optional<double> first_violation_tau;  // bisected to +/- 1e-6
    double min_margin = 0.0;
    double min_margin_tau = 0.0;
};

// One report per (method, R): all three criteria scanned over tau in
// [0, tau_max] at the given step, with the map-exact criterion driving the
// headline is_positive_map / first_violation_tau fields.
struct PositivityReport {
    Method method = Method::Markovian;
    double R = 0.0;
    double N = 0.0;
    CoherenceArgMode mode = CoherenceArgMode::Consistent;
    double tau_max = 0.0;

    CriterionScan map_exact;
    CriterionScan componentwise;
    CriterionScan state_excited;

    bool is_positive_map = true;
    std::optional<double> first_violation_tau;

    double min_state_eigenvalue = 0.0;  // over the excited trajectory
    double min_choi_eigenvalue = 0.0;   // over the scanned maps
};

// Dense scan (default step 1e-3) with bisection refinement of the first
// margin zero crossing of each criterion.  For Method::Exact, N must be 0.
PositivityReport first_violation(Method method, const BathParams& params,
                                 CoherenceArgMode mode, double tau_max,
                                 double step = 1e-3);

// Reports for a list of population-channel ratios R at N = 0, in input order.
std::vector<PositivityReport> scan_plane(Method method, const std::vector<double>& ratios,
                                         CoherenceArgMode mode, double tau_max,
                                         double step = 1e-3);

// The affine map of `method` at dimensionless time tau (gamma = lambda_bar = 1).
AffineBlochMap map_at(Method method, const BathParams& params, CoherenceArgMode mode,
                      double tau);

}  // namespace qdyn

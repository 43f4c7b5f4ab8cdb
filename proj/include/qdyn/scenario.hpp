// SPDX-License-Identifier: MIT
//
// Run descriptions and table-producing entry points behind the command-line
// tool: evolution tables in CSV/JSON, method comparisons, the three-panel
// relaxation figure, kernel validation, and positivity scans.  All output is
// deterministic: doubles are printed in shortest round-trip form and data
// files carry no timestamps (run metadata goes to a JSON sidecar).

#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qdyn/kernel_solutions.hpp"
#include "qdyn/method.hpp"
#include "qdyn/positivity.hpp"
#include "qdyn/qubit_state.hpp"

namespace qdyn {

// Exit codes shared by the library-level runners and the CLI.
enum ExitCode {
    kExitOk = 0,
    kExitConfig = 2,       // invalid configuration
    kExitUnsupported = 3,  // valid but outside the implemented domain
    kExitNumeric = 4,      // numerical failure (divergence, non-convergence)
    kExitIo = 5,           // filesystem failure
};

// Thrown by runners; the CLI maps it onto the process exit code.
struct RunError {
    ExitCode code;
    std::string message;
};

enum class OutputFormat { Csv, Json };

struct Scenario {
    std::vector<Method> methods;  // non-empty, unique
    double R = 1.0;               // population-channel ratio (N folded in)
    double N = 0.0;
    BlochVector init{0.0, 0.0, 1.0};     // preset "excited"
    std::string init_name = "excited";   // excited | ground | plus-x | "wx,wy,wz"
    CoherenceArgMode mode = CoherenceArgMode::Consistent;
    double tau_start = 0.0;
    double tau_stop = 10.0;
    double tau_step = 0.01;
    bool oracle = false;      // attach independent-solver columns
    double oracle_step = 1e-3;

    BathParams bath() const;  // gamma = 1, gamma0 = R / (2N + 1)

    // Flat key=value rendering used for the config file, the JSON sidecar and
    // the round-trip determinism guarantee.
    std::map<std::string, std::string> to_flat() const;
};

// Throws RunError(kExitConfig / kExitUnsupported) on invalid combinations
// (unknown method, nonpositive step, exact with N > 0, ...).
void validate(const Scenario& s);

struct EvolutionTable {
    std::vector<std::string> columns;        // "tau", then per-method blocks
    std::vector<std::vector<double>> rows;   // row-major, rows.size() x columns
    Scenario scenario;
};

// Rows at tau = start + i*step, i = 0..floor((stop-start)/step); per method:
// <name>_pe, <name>_wx, <name>_wy, <name>_wz, <name>_mineig and, with
// scenario.oracle, <name>_oracle and <name>_delta (all methods except the
// Markovian one, which has no independent-solver form).
EvolutionTable run_evolve(const Scenario& s);

struct ComparisonEntry {
    std::string left, right;
    double max_abs_diff = 0.0;  // over the population column
    double rms_diff = 0.0;      // sqrt(mean of squared differences)
};

struct ComparisonReport {
    std::vector<ComparisonEntry> pairs;
    // with scenario.oracle: per-method max |pe - oracle_pe|
    std::vector<std::pair<std::string, double>> oracle_deviation;
};

// Requires at least two methods.
ComparisonReport run_compare(const Scenario& s);

// Three relaxation tables (methods post-markovian, exact, memory-kernel;
// initially excited state; N = 0; tau in [0, 10] step 0.01) written to
// <out_dir>/figure1_R5.csv, figure1_R1.csv, figure1_R0p05.csv plus sidecars.
void run_figure1(const std::string& out_dir, CoherenceArgMode mode);

struct KernelCheckRow {
    double tau = 0.0;  // lambda_bar * t
    double closed = 0.0;
    double quadrature = 0.0;
    double rel_error = 0.0;
};

struct KernelCheckReport {
    std::vector<KernelCheckRow> rows;
    double worst_rel_error = 0.0;
    double worst_tau = 0.0;
    bool pass = false;  // worst_rel_error < 1e-6
};

// Tabulates closed vs quadrature kernels over lambda_bar t in [0, 10].
// Throws RunError(kExitNumeric) if the quadrature reports non-convergence.
KernelCheckReport run_kernel_check(double gamma0_bar, double lambda_bar, double step = 0.1);

std::vector<PositivityReport> run_scan(Method method, const std::vector<double>& ratios,
                                       CoherenceArgMode mode, double tau_max);

// ---- serialization --------------------------------------------------------

// Shortest decimal string that round-trips the double exactly.
std::string format_double(double v);

void write_csv(std::ostream& os, const EvolutionTable& t);
void write_json(std::ostream& os, const EvolutionTable& t);
void write_scan_csv(std::ostream& os, const std::vector<PositivityReport>& reports);
void write_kernel_check(std::ostream& os, const KernelCheckReport& r);

// Sidecar metadata (scenario rendering; no timestamps).
std::string sidecar_json(const Scenario& s, const std::string& command);

// key=value configuration document; '#' starts a comment; keys match the
// long option names of the CLI.  Later duplicates override earlier ones.
std::map<std::string, std::string> parse_config(std::istream& is);
Scenario scenario_from_flat(const std::map<std::string, std::string>& kv);

}  // namespace qdyn

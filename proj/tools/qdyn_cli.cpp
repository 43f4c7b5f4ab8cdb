// SPDX-License-Identifier: MIT
//
// qdyn: evolution tables, method comparisons, relaxation figures, kernel
// validation and positivity scans for damped-qubit dynamics with memory.

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qdyn/method.hpp"
#include "qdyn/positivity.hpp"
#include "qdyn/scenario.hpp"

namespace {

// Shared scenario options; values are funneled through the same flat
// key=value map as the config file, so flags override file entries and the
// sidecar metadata reproduces the run exactly.
struct ScenarioFlags {
    std::string config_path;
    std::vector<std::string> methods;
    double ratio = 1.0;
    double occupation = 0.0;
    double gamma0 = 0.0;
    double gamma = 0.0;
    std::string init;
    std::string coherence_arg;
    double tau_start = 0.0;
    double tau_stop = 10.0;
    double tau_step = 0.01;
    bool oracle = false;
    double oracle_step = 1e-3;

    CLI::Option* opt_config = nullptr;
    CLI::Option* opt_method = nullptr;
    CLI::Option* opt_ratio = nullptr;
    CLI::Option* opt_occupation = nullptr;
    CLI::Option* opt_gamma0 = nullptr;
    CLI::Option* opt_gamma = nullptr;
    CLI::Option* opt_init = nullptr;
    CLI::Option* opt_mode = nullptr;
    CLI::Option* opt_start = nullptr;
    CLI::Option* opt_stop = nullptr;
    CLI::Option* opt_step = nullptr;
    CLI::Option* opt_oracle = nullptr;
    CLI::Option* opt_oracle_step = nullptr;

    void attach(CLI::App* cmd) {
        opt_config = cmd->add_option("--config", config_path, "key=value configuration file");
        opt_method = cmd->add_option("--method", methods,
                                     "markovian | post-markovian | memory-kernel | exact "
                                     "(repeatable or comma-separated)");
        opt_ratio = cmd->add_option("--R", ratio, "population relaxation ratio |lambda2|/gamma");
        opt_occupation = cmd->add_option("--N", occupation, "thermal occupation of the bath");
        opt_gamma0 = cmd->add_option("--gamma0", gamma0, "dissipation rate (needs --gamma)");
        opt_gamma = cmd->add_option("--gamma", gamma, "memory decay rate (needs --gamma0)");
        opt_init = cmd->add_option("--init", init, "excited | ground | plus-x | wx,wy,wz");
        opt_mode = cmd->add_option("--coherence-arg", coherence_arg,
                                   "coherence-channel argument convention")
                       ->check(CLI::IsMember({"consistent", "doubled"}));
        opt_start = cmd->add_option("--tau-start", tau_start, "first output time (gamma t)");
        opt_stop = cmd->add_option("--tau-stop", tau_stop, "last output time (gamma t)");
        opt_step = cmd->add_option("--tau-step", tau_step, "output grid spacing");
        opt_oracle = cmd->add_flag("--oracle", oracle, "attach independent-solver columns");
        opt_oracle_step = cmd->add_option("--oracle-step", oracle_step,
                                          "independent solver step (<= 0.01)");
        opt_gamma0->needs(opt_gamma);
        opt_gamma->needs(opt_gamma0);
        opt_gamma0->excludes(opt_ratio);
    }

    qdyn::Scenario build() const {
        std::map<std::string, std::string> kv;
        if (opt_config->count()) {
            std::ifstream is(config_path);
            if (!is)
                throw qdyn::RunError{qdyn::kExitIo, "cannot open config '" + config_path + "'"};
            kv = qdyn::parse_config(is);
        }
        if (opt_method->count()) {
            std::string joined;
            for (std::size_t i = 0; i < methods.size(); ++i) {
                if (i) joined += ",";
                joined += methods[i];
            }
            kv["method"] = joined;
        }
        if (opt_ratio->count()) kv["R"] = qdyn::format_double(ratio);
        if (opt_occupation->count()) kv["N"] = qdyn::format_double(occupation);
        if (opt_init->count()) kv["init"] = init;
        if (opt_mode->count()) kv["coherence-arg"] = coherence_arg;
        if (opt_start->count()) kv["tau-start"] = qdyn::format_double(tau_start);
        if (opt_stop->count()) kv["tau-stop"] = qdyn::format_double(tau_stop);
        if (opt_step->count()) kv["tau-step"] = qdyn::format_double(tau_step);
        if (opt_oracle->count()) kv["oracle"] = oracle ? "true" : "false";
        if (opt_oracle_step->count()) kv["oracle-step"] = qdyn::format_double(oracle_step);

        qdyn::Scenario s = qdyn::scenario_from_flat(kv);
        if (opt_gamma0->count()) {
            if (!(gamma > 0.0)) throw qdyn::RunError{qdyn::kExitConfig, "--gamma must be > 0"};
            if (!(gamma0 >= 0.0)) throw qdyn::RunError{qdyn::kExitConfig, "--gamma0 must be >= 0"};
            s.R = gamma0 * (2.0 * s.N + 1.0) / gamma;
        }
        return s;
    }
};

qdyn::CoherenceArgMode mode_from(const std::string& name) {
    return name == "doubled" ? qdyn::CoherenceArgMode::Doubled
                             : qdyn::CoherenceArgMode::Consistent;
}

void write_table(const qdyn::EvolutionTable& table, const std::string& out,
                 const std::string& format, const std::string& command) {
    if (out.empty()) {
        if (format == "json")
            qdyn::write_json(std::cout, table);
        else
            qdyn::write_csv(std::cout, table);
        return;
    }
    std::ofstream os(out);
    if (!os) throw qdyn::RunError{qdyn::kExitIo, "cannot open '" + out + "'"};
    if (format == "json")
        qdyn::write_json(os, table);
    else
        qdyn::write_csv(os, table);
    os.flush();
    if (!os) throw qdyn::RunError{qdyn::kExitIo, "write failed for '" + out + "'"};

    std::ofstream meta(out + ".meta.json");
    if (!meta) throw qdyn::RunError{qdyn::kExitIo, "cannot open '" + out + ".meta.json'"};
    meta << qdyn::sidecar_json(table.scenario, command);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Damped-qubit dynamics with exponential memory: evolution tables, "
                 "comparisons, figures, kernel checks and positivity scans"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "qdyn 0.1.0");

    // evolve ------------------------------------------------------------------
    CLI::App* evolve = app.add_subcommand("evolve", "tabulate trajectories on a time grid");
    ScenarioFlags evolve_flags;
    evolve_flags.attach(evolve);
    std::string evolve_out;
    std::string evolve_format = "csv";
    evolve->add_option("--out", evolve_out, "output file (stdout when omitted)");
    evolve->add_option("--format", evolve_format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));

    // compare -----------------------------------------------------------------
    CLI::App* compare = app.add_subcommand("compare", "pairwise population differences");
    ScenarioFlags compare_flags;
    compare_flags.attach(compare);

    // figure1 -----------------------------------------------------------------
    CLI::App* figure1 =
        app.add_subcommand("figure1", "three-panel relaxation tables (R = 5, 1, 0.05)");
    std::string figure1_dir;
    std::string figure1_mode = "consistent";
    figure1->add_option("--out-dir", figure1_dir, "directory for the CSV files")->required();
    figure1->add_option("--coherence-arg", figure1_mode, "consistent | doubled")
        ->check(CLI::IsMember({"consistent", "doubled"}));

    // scan --------------------------------------------------------------------
    CLI::App* scan = app.add_subcommand("scan", "positivity criteria over a ratio range");
    std::string scan_method;
    std::vector<double> scan_ratios;
    double scan_r_start = 0.0;
    double scan_r_stop = 0.0;
    int scan_r_steps = 0;
    double scan_tau_stop = 50.0;
    std::string scan_mode = "consistent";
    std::string scan_out;
    scan->add_option("--method", scan_method, "dynamical description")
        ->required()
        ->check(CLI::IsMember({"markovian", "post-markovian", "memory-kernel", "exact"}));
    CLI::Option* opt_scan_r = scan->add_option("--R", scan_ratios, "explicit ratio (repeatable)");
    CLI::Option* opt_r_start = scan->add_option("--R-start", scan_r_start, "first ratio");
    CLI::Option* opt_r_stop = scan->add_option("--R-stop", scan_r_stop, "last ratio");
    CLI::Option* opt_r_steps = scan->add_option("--R-steps", scan_r_steps, "ratio count");
    opt_r_steps->needs(opt_r_start)->needs(opt_r_stop)->excludes(opt_scan_r);
    scan->add_option("--tau-stop", scan_tau_stop, "scan horizon in gamma t");
    scan->add_option("--coherence-arg", scan_mode, "consistent | doubled")
        ->check(CLI::IsMember({"consistent", "doubled"}));
    scan->add_option("--out", scan_out, "output CSV (stdout when omitted)");

    // kernel-check ------------------------------------------------------------
    CLI::App* kernel =
        app.add_subcommand("kernel-check", "closed-form vs quadrature correlation kernel");
    double kernel_gamma0 = 1.0;
    double kernel_lambda = 1.0;
    double kernel_step = 0.1;
    std::string kernel_out;
    kernel->add_option("--gamma0", kernel_gamma0, "coupling rate");
    kernel->add_option("--lambda", kernel_lambda, "spectral width");
    kernel->add_option("--step", kernel_step, "grid spacing in lambda t");
    kernel->add_option("--out", kernel_out, "per-node CSV (summary only when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : qdyn::kExitConfig;
    }

    try {
        if (app.got_subcommand(evolve)) {
            qdyn::EvolutionTable table = qdyn::run_evolve(evolve_flags.build());
            write_table(table, evolve_out, evolve_format, "evolve");
        } else if (app.got_subcommand(compare)) {
            qdyn::ComparisonReport report = qdyn::run_compare(compare_flags.build());
            for (const auto& pair : report.pairs)
                std::cout << pair.left << " vs " << pair.right
                          << ": max_abs_diff=" << qdyn::format_double(pair.max_abs_diff)
                          << " rms_diff=" << qdyn::format_double(pair.rms_diff) << "\n";
            for (const auto& [name, dev] : report.oracle_deviation)
                std::cout << "oracle " << name
                          << ": max_abs_delta=" << qdyn::format_double(dev) << "\n";
        } else if (app.got_subcommand(figure1)) {
            qdyn::run_figure1(figure1_dir, mode_from(figure1_mode));
            for (const char* name : {"figure1_R5.csv", "figure1_R1.csv", "figure1_R0p05.csv"})
                std::cout << figure1_dir << "/" << name << "\n";
        } else if (app.got_subcommand(scan)) {
            std::vector<double> ratios = scan_ratios;
            if (opt_r_steps->count()) {
                if (scan_r_steps < 1)
                    throw qdyn::RunError{qdyn::kExitConfig, "scan: --R-steps must be >= 1"};
                ratios.clear();
                for (int i = 0; i < scan_r_steps; ++i) {
                    double f = scan_r_steps == 1
                                   ? 0.0
                                   : static_cast<double>(i) / (scan_r_steps - 1);
                    ratios.push_back(scan_r_start + f * (scan_r_stop - scan_r_start));
                }
            }
            if (ratios.empty())
                throw qdyn::RunError{qdyn::kExitConfig,
                                     "scan: give --R or --R-start/--R-stop/--R-steps"};
            auto reports = qdyn::run_scan(*qdyn::method_from_name(scan_method), ratios,
                                          mode_from(scan_mode), scan_tau_stop);
            if (scan_out.empty()) {
                qdyn::write_scan_csv(std::cout, reports);
            } else {
                std::ofstream os(scan_out);
                if (!os) throw qdyn::RunError{qdyn::kExitIo, "cannot open '" + scan_out + "'"};
                qdyn::write_scan_csv(os, reports);
                os.flush();
                if (!os)
                    throw qdyn::RunError{qdyn::kExitIo, "write failed for '" + scan_out + "'"};
            }
        } else if (app.got_subcommand(kernel)) {
            qdyn::KernelCheckReport report =
                qdyn::run_kernel_check(kernel_gamma0, kernel_lambda, kernel_step);
            if (!kernel_out.empty()) {
                std::ofstream os(kernel_out);
                if (!os) throw qdyn::RunError{qdyn::kExitIo, "cannot open '" + kernel_out + "'"};
                qdyn::write_kernel_check(os, report);
            }
            std::cout << "worst_rel_error=" << qdyn::format_double(report.worst_rel_error)
                      << " at tau=" << qdyn::format_double(report.worst_tau) << ": "
                      << (report.pass ? "PASS" : "FAIL") << "\n";
            if (!report.pass)
                throw qdyn::RunError{qdyn::kExitNumeric,
                                     "kernel-check: relative error exceeds 1e-6"};
        }
    } catch (const qdyn::RunError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return qdyn::kExitNumeric;
    }
    return 0;
}

// SPDX-License-Identifier: MIT

#include "qdyn/scenario.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "qdyn/damping_basis.hpp"
#include "qdyn/exact_jc.hpp"
#include "qdyn/volterra_oracle.hpp"

namespace qdyn {

namespace {

std::string trim(const std::string& text) {
    auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    auto end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string::size_type pos = 0;
    while (true) {
        auto next = text.find(sep, pos);
        parts.push_back(trim(text.substr(pos, next - pos)));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return parts;
}

double parse_number(const std::string& key, const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v))
        throw RunError{kExitConfig, key + ": cannot parse number from '" + text + "'"};
    return v;
}

std::string mode_name(CoherenceArgMode mode) {
    return mode == CoherenceArgMode::Consistent ? "consistent" : "doubled";
}

void set_init(Scenario& s, const std::string& text) {
    s.init_name = text;
    if (text == "excited") {
        s.init = {0.0, 0.0, 1.0};
    } else if (text == "ground") {
        s.init = {0.0, 0.0, -1.0};
    } else if (text == "plus-x") {
        s.init = {1.0, 0.0, 0.0};
    } else {
        auto parts = split(text, ',');
        if (parts.size() != 3)
            throw RunError{kExitConfig, "init: expected excited, ground, plus-x or wx,wy,wz"};
        s.init = {parse_number("init", parts[0]), parse_number("init", parts[1]),
                  parse_number("init", parts[2])};
    }
}

VolterraForm volterra_form(Method m) {
    switch (m) {
        case Method::PostMarkovian:
            return VolterraForm::PostMarkovian;
        case Method::MemoryKernel:
            return VolterraForm::MemoryKernel;
        case Method::Exact:
            return VolterraForm::ExactAmplitude;
        case Method::Markovian:
            break;
    }
    throw std::logic_error("volterra_form: no independent solver for this method");
}

// Solve the independent convolution solver for `form` and sample it on the
// output grid tau_start + i * tau_step.  The solver step is tau_step / n for
// the smallest n that brings it at or below scenario.oracle_step, so output
// times normally fall on solver nodes; off-grid times (fractional tau_start)
// are handled by linear interpolation.
std::vector<double> sample_oracle(VolterraForm form, const Scenario& s, double tau_last,
                                  std::size_t n_rows) {
    auto n_sub = static_cast<long long>(std::ceil(s.tau_step / s.oracle_step - 1e-9));
    double h = std::min(s.tau_step / static_cast<double>(n_sub), 1e-2);

    std::vector<double> out(n_rows, 1.0);
    auto n_steps = static_cast<long long>(std::ceil(tau_last / h - 1e-9));
    if (n_steps <= 0) return out;  // the whole grid sits at tau = 0

    VolterraProblem prob;
    prob.lambda = -s.R;
    prob.gamma = 1.0;
    prob.form = form;
    prob.step = h;
    prob.tau_max = static_cast<double>(n_steps) * h;

    OracleSolution sol;
    try {
        sol = solve(prob);
    } catch (const std::runtime_error& e) {
        throw RunError{kExitNumeric, std::string("oracle: ") + e.what()};
    }

    for (std::size_t i = 0; i < n_rows; ++i) {
        double tau = s.tau_start + static_cast<double>(i) * s.tau_step;
        double x = tau / h;
        auto idx = std::llround(x);
        if (idx >= 0 && idx <= n_steps && std::abs(x - static_cast<double>(idx)) <= 1e-6) {
            out[i] = sol.value[static_cast<std::size_t>(idx)];
        } else {
            auto lo = std::clamp(static_cast<long long>(std::floor(x)), 0LL, n_steps - 1);
            double frac = x - static_cast<double>(lo);
            out[i] = (1.0 - frac) * sol.value[static_cast<std::size_t>(lo)] +
                     frac * sol.value[static_cast<std::size_t>(lo) + 1];
        }
    }
    return out;
}

}  // namespace

// ---- method names ----------------------------------------------------------

std::string method_name(Method m) {
    switch (m) {
        case Method::Markovian:
            return "markovian";
        case Method::PostMarkovian:
            return "post-markovian";
        case Method::MemoryKernel:
            return "memory-kernel";
        case Method::Exact:
            return "exact";
    }
    throw std::logic_error("method_name: unknown method");
}

std::optional<Method> method_from_name(const std::string& name) {
    if (name == "markovian") return Method::Markovian;
    if (name == "post-markovian") return Method::PostMarkovian;
    if (name == "memory-kernel") return Method::MemoryKernel;
    if (name == "exact") return Method::Exact;
    return std::nullopt;
}

// ---- scenario --------------------------------------------------------------

BathParams Scenario::bath() const { return BathParams(R / (2.0 * N + 1.0), 1.0, N); }

std::map<std::string, std::string> Scenario::to_flat() const {
    std::string joined;
    for (std::size_t i = 0; i < methods.size(); ++i) {
        if (i) joined += ",";
        joined += method_name(methods[i]);
    }
    return {
        {"method", joined},
        {"R", format_double(R)},
        {"N", format_double(N)},
        {"init", init_name},
        {"coherence-arg", mode_name(mode)},
        {"tau-start", format_double(tau_start)},
        {"tau-stop", format_double(tau_stop)},
        {"tau-step", format_double(tau_step)},
        {"oracle", oracle ? "true" : "false"},
        {"oracle-step", format_double(oracle_step)},
    };
}

void validate(const Scenario& s) {
    if (s.methods.empty())
        throw RunError{kExitConfig, "scenario: at least one method required"};
    for (std::size_t i = 0; i < s.methods.size(); ++i)
        for (std::size_t j = i + 1; j < s.methods.size(); ++j)
            if (s.methods[i] == s.methods[j])
                throw RunError{kExitConfig,
                               "scenario: duplicate method '" + method_name(s.methods[i]) + "'"};
    if (!(s.R >= 0.0)) throw RunError{kExitConfig, "R must be >= 0"};
    if (!(s.N >= 0.0)) throw RunError{kExitConfig, "N must be >= 0"};
    if (!(s.tau_start >= 0.0)) throw RunError{kExitConfig, "tau-start must be >= 0"};
    if (!(s.tau_step > 0.0)) throw RunError{kExitConfig, "tau-step must be > 0"};
    if (!(s.tau_stop >= s.tau_start))
        throw RunError{kExitConfig, "tau-stop must be >= tau-start"};
    if (!(s.oracle_step > 0.0) || s.oracle_step > 1e-2)
        throw RunError{kExitConfig, "oracle-step must be in (0, 1e-2]"};
    if (s.init.norm() > 1.0 + 1e-12)
        throw RunError{kExitConfig, "init: Bloch vector must satisfy |w| <= 1"};
    bool wants_exact =
        std::find(s.methods.begin(), s.methods.end(), Method::Exact) != s.methods.end();
    if (wants_exact && s.N > 0.0)
        throw RunError{kExitUnsupported, "the exact description requires N = 0"};
}

// ---- runners ----------------------------------------------------------------

EvolutionTable run_evolve(const Scenario& s) {
    validate(s);

    auto n_rows = static_cast<std::size_t>(
                      std::floor((s.tau_stop - s.tau_start) / s.tau_step + 1e-9)) +
                  1;
    BathParams params = s.bath();
    double pe0 = (1.0 + s.init.wz) / 2.0;
    double pe_stat = params.N / (2.0 * params.N + 1.0);

    EvolutionTable table;
    table.scenario = s;
    table.columns.emplace_back("tau");
    for (Method m : s.methods) {
        std::string name = method_name(m);
        for (const char* suffix : {"_pe", "_wx", "_wy", "_wz", "_mineig"})
            table.columns.push_back(name + suffix);
        if (s.oracle && m != Method::Markovian) {
            table.columns.push_back(name + "_oracle");
            table.columns.push_back(name + "_delta");
        }
    }

    std::map<Method, std::vector<double>> oracle_values;
    if (s.oracle) {
        double tau_last = s.tau_start + static_cast<double>(n_rows - 1) * s.tau_step;
        for (Method m : s.methods) {
            if (m == Method::Markovian) continue;
            oracle_values[m] = sample_oracle(volterra_form(m), s, tau_last, n_rows);
        }
    }

    table.rows.reserve(n_rows);
    for (std::size_t i = 0; i < n_rows; ++i) {
        double tau = s.tau_start + static_cast<double>(i) * s.tau_step;
        std::vector<double> row;
        row.reserve(table.columns.size());
        row.push_back(tau);
        for (Method m : s.methods) {
            AffineBlochMap map = map_at(m, params, s.mode, tau);
            BlochVector w = apply_map(map, s.init);
            double pe = (1.0 + w.wz) / 2.0;
            row.push_back(pe);
            row.push_back(w.wx);
            row.push_back(w.wy);
            row.push_back(w.wz);
            row.push_back(min_eigenvalue(w));
            if (s.oracle && m != Method::Markovian) {
                double mu = oracle_values.at(m)[i];
                // The population solver tracks the z relaxation factor; the
                // exact solver tracks the amplitude, whose square scales the
                // initial excited population.
                double oracle_pe = (m == Method::Exact) ? pe0 * mu * mu
                                                        : pe_stat + mu * (pe0 - pe_stat);
                row.push_back(oracle_pe);
                row.push_back(pe - oracle_pe);
            }
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

ComparisonReport run_compare(const Scenario& s) {
    if (s.methods.size() < 2)
        throw RunError{kExitConfig, "compare: at least two methods required"};
    EvolutionTable table = run_evolve(s);

    auto column_index = [&table](const std::string& name) {
        auto it = std::find(table.columns.begin(), table.columns.end(), name);
        return static_cast<std::size_t>(it - table.columns.begin());
    };

    ComparisonReport report;
    for (std::size_t i = 0; i < s.methods.size(); ++i) {
        for (std::size_t j = i + 1; j < s.methods.size(); ++j) {
            ComparisonEntry entry;
            entry.left = method_name(s.methods[i]);
            entry.right = method_name(s.methods[j]);
            std::size_t ci = column_index(entry.left + "_pe");
            std::size_t cj = column_index(entry.right + "_pe");
            double sum_sq = 0.0;
            for (const auto& row : table.rows) {
                double d = row[ci] - row[cj];
                entry.max_abs_diff = std::max(entry.max_abs_diff, std::abs(d));
                sum_sq += d * d;
            }
            entry.rms_diff = std::sqrt(sum_sq / static_cast<double>(table.rows.size()));
            report.pairs.push_back(std::move(entry));
        }
    }
    if (s.oracle) {
        for (Method m : s.methods) {
            if (m == Method::Markovian) continue;
            std::string name = method_name(m);
            std::size_t cd = column_index(name + "_delta");
            double max_abs = 0.0;
            for (const auto& row : table.rows) max_abs = std::max(max_abs, std::abs(row[cd]));
            report.oracle_deviation.emplace_back(name, max_abs);
        }
    }
    return report;
}

void run_figure1(const std::string& out_dir, CoherenceArgMode mode) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        throw RunError{kExitIo, "figure1: cannot create '" + out_dir + "': " + ec.message()};

    const std::pair<double, const char*> panels[] = {
        {5.0, "figure1_R5.csv"}, {1.0, "figure1_R1.csv"}, {0.05, "figure1_R0p05.csv"}};
    for (const auto& [ratio, filename] : panels) {
        Scenario s;
        s.methods = {Method::PostMarkovian, Method::Exact, Method::MemoryKernel};
        s.R = ratio;
        s.mode = mode;
        // N, init and the tau grid keep their defaults: vacuum, excited, [0, 10] by 0.01.
        EvolutionTable table = run_evolve(s);

        fs::path path = fs::path(out_dir) / filename;
        std::ofstream os(path);
        if (!os) throw RunError{kExitIo, "figure1: cannot open '" + path.string() + "'"};
        write_csv(os, table);
        os.flush();
        if (!os) throw RunError{kExitIo, "figure1: write failed for '" + path.string() + "'"};

        std::ofstream meta(path.string() + ".meta.json");
        if (!meta)
            throw RunError{kExitIo, "figure1: cannot open '" + path.string() + ".meta.json'"};
        meta << sidecar_json(s, "figure1");
    }
}

KernelCheckReport run_kernel_check(double gamma0_bar, double lambda_bar, double step) {
    if (!(gamma0_bar > 0.0) || !(lambda_bar > 0.0))
        throw RunError{kExitConfig, "kernel-check: rates must be positive"};
    if (!(step > 0.0)) throw RunError{kExitConfig, "kernel-check: step must be positive"};

    LorentzianBath bath(1.0, gamma0_bar, lambda_bar);
    KernelCheckReport report;
    auto n = static_cast<std::size_t>(std::floor(10.0 / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) {
        double tau = static_cast<double>(i) * step;
        double closed = correlation_kernel_closed(bath, tau / lambda_bar);
        KernelQuadrature q = correlation_kernel_quadrature(bath, tau / lambda_bar);
        if (!q.converged)
            throw RunError{kExitNumeric,
                           "kernel-check: quadrature did not converge at tau = " +
                               format_double(tau)};
        double rel = std::abs(q.value.real() - closed) / closed;
        report.rows.push_back({tau, closed, q.value.real(), rel});
        if (rel > report.worst_rel_error) {
            report.worst_rel_error = rel;
            report.worst_tau = tau;
        }
    }
    report.pass = report.worst_rel_error < 1e-6;
    return report;
}

std::vector<PositivityReport> run_scan(Method method, const std::vector<double>& ratios,
                                       CoherenceArgMode mode, double tau_max) {
    if (ratios.empty()) throw RunError{kExitConfig, "scan: at least one ratio required"};
    for (double r : ratios)
        if (!(r >= 0.0)) throw RunError{kExitConfig, "scan: ratios must be >= 0"};
    if (!(tau_max > 0.0)) throw RunError{kExitConfig, "scan: tau-stop must be > 0"};
    return scan_plane(method, ratios, mode, tau_max);
}

// ---- serialization ----------------------------------------------------------

std::string format_double(double v) {
    if (v == 0.0) return "0";  // also folds the sign of -0
    std::array<char, 32> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

void write_csv(std::ostream& os, const EvolutionTable& t) {
    for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_double(row[c]);
        os << "\n";
    }
}

void write_json(std::ostream& os, const EvolutionTable& t) {
    nlohmann::ordered_json j;
    j["scenario"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : t.scenario.to_flat()) j["scenario"][k] = v;
    j["columns"] = t.columns;
    j["rows"] = t.rows;
    os << j.dump(2) << "\n";
}

void write_scan_csv(std::ostream& os, const std::vector<PositivityReport>& reports) {
    os << "method,R,N,coherence_arg,tau_max"
          ",map_exact_violated,map_exact_first_tau,map_exact_min_margin,map_exact_min_margin_tau"
          ",componentwise_violated,componentwise_first_tau,componentwise_min_margin"
          ",componentwise_min_margin_tau"
          ",state_excited_violated,state_excited_first_tau,state_excited_min_margin"
          ",state_excited_min_margin_tau"
          ",min_state_eigenvalue,min_choi_eigenvalue\n";
    auto scan_cells = [&os](const CriterionScan& scan) {
        os << "," << (scan.violated ? "true" : "false") << ",";
        if (scan.first_violation_tau) os << format_double(*scan.first_violation_tau);
        os << "," << format_double(scan.min_margin) << "," << format_double(scan.min_margin_tau);
    };
    for (const auto& r : reports) {
        os << method_name(r.method) << "," << format_double(r.R) << "," << format_double(r.N)
           << "," << mode_name(r.mode) << "," << format_double(r.tau_max);
        scan_cells(r.map_exact);
        scan_cells(r.componentwise);
        scan_cells(r.state_excited);
        os << "," << format_double(r.min_state_eigenvalue) << ","
           << format_double(r.min_choi_eigenvalue) << "\n";
    }
}

void write_kernel_check(std::ostream& os, const KernelCheckReport& r) {
    os << "tau,closed,quadrature,rel_error\n";
    for (const auto& row : r.rows)
        os << format_double(row.tau) << "," << format_double(row.closed) << ","
           << format_double(row.quadrature) << "," << format_double(row.rel_error) << "\n";
}

std::string sidecar_json(const Scenario& s, const std::string& command) {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["scenario"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : s.to_flat()) j["scenario"][k] = v;
    return j.dump(2) + "\n";
}

std::map<std::string, std::string> parse_config(std::istream& is) {
    std::map<std::string, std::string> kv;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string entry = trim(line);
        if (entry.empty()) continue;
        auto eq = entry.find('=');
        if (eq == std::string::npos)
            throw RunError{kExitConfig,
                           "config line " + std::to_string(line_no) + ": expected key=value"};
        std::string key = trim(entry.substr(0, eq));
        std::string value = trim(entry.substr(eq + 1));
        if (key.empty())
            throw RunError{kExitConfig, "config line " + std::to_string(line_no) + ": empty key"};
        kv[key] = value;  // later duplicates override earlier ones
    }
    return kv;
}

Scenario scenario_from_flat(const std::map<std::string, std::string>& kv) {
    Scenario s;
    for (const auto& [key, value] : kv) {
        if (key == "method") {
            s.methods.clear();
            for (const std::string& part : split(value, ',')) {
                auto m = method_from_name(part);
                if (!m) throw RunError{kExitConfig, "method: unknown name '" + part + "'"};
                s.methods.push_back(*m);
            }
        } else if (key == "R") {
            s.R = parse_number(key, value);
        } else if (key == "N") {
            s.N = parse_number(key, value);
        } else if (key == "init") {
            set_init(s, value);
        } else if (key == "coherence-arg") {
            if (value == "consistent")
                s.mode = CoherenceArgMode::Consistent;
            else if (value == "doubled")
                s.mode = CoherenceArgMode::Doubled;
            else
                throw RunError{kExitConfig, "coherence-arg: expected consistent or doubled"};
        } else if (key == "tau-start") {
            s.tau_start = parse_number(key, value);
        } else if (key == "tau-stop") {
            s.tau_stop = parse_number(key, value);
        } else if (key == "tau-step") {
            s.tau_step = parse_number(key, value);
        } else if (key == "oracle") {
            if (value == "true" || value == "1")
                s.oracle = true;
            else if (value == "false" || value == "0")
                s.oracle = false;
            else
                throw RunError{kExitConfig, "oracle: expected true or false"};
        } else if (key == "oracle-step") {
            s.oracle_step = parse_number(key, value);
        } else {
            throw RunError{kExitConfig, "config: unknown key '" + key + "'"};
        }
    }
    return s;
}

}  // namespace qdyn

// SPDX-License-Identifier: MIT
//
// Run descriptions, table generation and serialization at the library level,
// plus end-to-end subprocess tests of the command-line tool (located through
// the QDYN_CLI environment variable; those cases skip when it is unset).

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "qdyn/exact_jc.hpp"
#include "qdyn/kernel_solutions.hpp"
#include "qdyn/scenario.hpp"

using namespace qdyn;

namespace {

// Exit code carried by a RunError thrown from fn, or -1 if nothing threw.
int run_error_code(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const RunError& e) {
        return e.code;
    }
    return -1;
}

std::size_t column_index(const EvolutionTable& t, const std::string& name) {
    auto it = std::find(t.columns.begin(), t.columns.end(), name);
    REQUIRE(it != t.columns.end());
    return static_cast<std::size_t>(it - t.columns.begin());
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is.good());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::filesystem::path make_temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() /
               ("qdyn_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

struct CliResult {
    int code = -1;
    std::string out;
};

// Runs the tool with stderr silenced, capturing stdout and the exit code.
CliResult run_cli(const std::string& args) {
    const char* cli = std::getenv("QDYN_CLI");
    REQUIRE(cli != nullptr);
    std::string cmd = std::string(cli) + " " + args + " 2>/dev/null";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult res;
    char buf[4096];
    std::size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, n);
    int status = ::pclose(pipe);
    if (WIFEXITED(status)) res.code = WEXITSTATUS(status);
    return res;
}

bool cli_available() { return std::getenv("QDYN_CLI") != nullptr; }

}  // namespace

TEST_CASE("method names round-trip") {
    CHECK(method_name(Method::Markovian) == "markovian");
    CHECK(method_name(Method::PostMarkovian) == "post-markovian");
    CHECK(method_name(Method::MemoryKernel) == "memory-kernel");
    CHECK(method_name(Method::Exact) == "exact");
    for (Method m : {Method::Markovian, Method::PostMarkovian, Method::MemoryKernel,
                     Method::Exact}) {
        auto back = method_from_name(method_name(m));
        REQUIRE(back.has_value());
        CHECK(*back == m);
    }
    CHECK_FALSE(method_from_name("bogus").has_value());
}

TEST_CASE("scenario validation maps problems onto exit codes") {
    Scenario ok;
    ok.methods = {Method::PostMarkovian};
    CHECK(run_error_code([&] { validate(ok); }) == -1);

    Scenario s = ok;
    s.methods.clear();
    CHECK(run_error_code([&] { validate(s); }) == kExitConfig);

    s = ok;
    s.methods = {Method::Markovian, Method::Markovian};
    CHECK(run_error_code([&] { validate(s); }) == kExitConfig);

    s = ok;
    s.R = -1.0;
    CHECK(run_error_code([&] { validate(s); }) == kExitConfig);

    s = ok;
    s.tau_step = 0.0;
    CHECK(run_error_code([&] { validate(s); }) == kExitConfig);

    s = ok;
    s.tau_stop = -1.0;
    CHECK(run_error_code([&] { validate(s); }) == kExitConfig);

    s = ok;
    s.oracle_step = 0.02;
    CHECK(run_error_code([&] { validate(s); }) == kExitConfig);

    s = ok;
    s.init = {1.0, 1.0, 1.0};  // outside the Bloch ball
    CHECK(run_error_code([&] { validate(s); }) == kExitConfig);

    // Valid physics that the exact description does not cover.
    s = ok;
    s.methods = {Method::Exact};
    s.N = 1.0;
    CHECK(run_error_code([&] { validate(s); }) == kExitUnsupported);
}

TEST_CASE("evolution table layout and closed-form content") {
    Scenario s;
    s.methods = {Method::Markovian, Method::MemoryKernel};
    s.R = 0.05;
    s.oracle = false;

    EvolutionTable t = run_evolve(s);
    REQUIRE(t.rows.size() == 1001);
    CHECK(t.columns.size() == 11);  // tau + 5 per method
    CHECK(t.columns[0] == "tau");
    CHECK(t.columns[1] == "markovian_pe");
    CHECK(t.columns[6] == "memory-kernel_pe");
    CHECK(t.rows.front()[0] == 0.0);
    CHECK(t.rows.back()[0] == 10.0);

    // Excited initial state at N = 0: the population column of the
    // convolution description is its relaxation factor itself.
    std::size_t pe_col = column_index(t, "memory-kernel_pe");
    CHECK(t.rows[100][0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(t.rows[100][pe_col] ==
          doctest::Approx(0.98167711880981608).epsilon(1e-14));
    std::size_t eig_col = column_index(t, "memory-kernel_mineig");
    for (const auto& row : t.rows) CHECK(row[eig_col] >= -1e-12);
}

TEST_CASE("oracle columns track the closed forms") {
    Scenario s;
    s.methods = {Method::Markovian, Method::Exact};
    s.R = 0.5;
    s.tau_stop = 5.0;
    s.tau_step = 0.05;
    s.oracle = true;

    EvolutionTable t = run_evolve(s);
    // The Markovian block gains no solver columns; the exact block does.
    CHECK(t.columns.size() == 13);
    CHECK(std::find(t.columns.begin(), t.columns.end(), "markovian_oracle") ==
          t.columns.end());
    std::size_t pe = column_index(t, "exact_pe");
    std::size_t oracle = column_index(t, "exact_oracle");
    std::size_t delta = column_index(t, "exact_delta");
    double worst = 0.0;
    for (const auto& row : t.rows) {
        CHECK(row[delta] == doctest::Approx(row[pe] - row[oracle]).epsilon(1e-15));
        worst = std::max(worst, std::abs(row[delta]));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("comparison report covers all pairs and the solver deviations") {
    Scenario s;
    s.methods = {Method::PostMarkovian, Method::Exact, Method::MemoryKernel};
    s.R = 1.0;

    ComparisonReport rep = run_compare(s);
    REQUIRE(rep.pairs.size() == 3);
    CHECK(rep.pairs[0].left == "post-markovian");
    CHECK(rep.pairs[0].right == "exact");
    // Frozen landmark: the interpolating and exact populations separate by
    // about 0.156 at matched relaxation ratio R = 1.
    CHECK(rep.pairs[0].max_abs_diff == doctest::Approx(0.15645).epsilon(1e-3));
    for (const auto& pair : rep.pairs) CHECK(pair.rms_diff <= pair.max_abs_diff);

    Scenario with_oracle = s;
    with_oracle.methods = {Method::PostMarkovian, Method::Exact};
    with_oracle.tau_stop = 5.0;
    with_oracle.tau_step = 0.05;
    with_oracle.oracle = true;
    ComparisonReport rep2 = run_compare(with_oracle);
    REQUIRE(rep2.oracle_deviation.size() == 2);
    for (const auto& [name, dev] : rep2.oracle_deviation) {
        CAPTURE(name);
        CHECK(dev <= 1e-6);
    }

    Scenario lonely;
    lonely.methods = {Method::Exact};
    CHECK(run_error_code([&] { run_compare(lonely); }) == kExitConfig);
}

TEST_CASE("figure tables land in the requested directory with sidecars") {
    auto dir = make_temp_dir("figure1");
    run_figure1(dir.string(), CoherenceArgMode::Consistent);
    for (const char* name : {"figure1_R5.csv", "figure1_R1.csv", "figure1_R0p05.csv"}) {
        auto path = dir / name;
        REQUIRE(std::filesystem::exists(path));
        std::string content = read_file(path);
        CHECK(content.rfind("tau,post-markovian_pe", 0) == 0);
        auto meta = nlohmann::json::parse(read_file(path.string() + ".meta.json"));
        CHECK(meta["command"] == "figure1");
    }
    auto meta5 = nlohmann::json::parse(read_file((dir / "figure1_R5.csv.meta.json")));
    CHECK(meta5["scenario"]["R"] == "5");
    std::filesystem::remove_all(dir);
}

TEST_CASE("kernel check passes and rejects bad rates") {
    KernelCheckReport rep = run_kernel_check(1.0, 1.0);
    CHECK(rep.pass);
    CHECK(rep.worst_rel_error < 1e-6);
    REQUIRE(rep.rows.size() == 101);
    CHECK(rep.rows.front().tau == 0.0);
    CHECK(rep.rows.back().tau == doctest::Approx(10.0).epsilon(1e-12));

    CHECK(run_error_code([] { run_kernel_check(0.0, 1.0); }) == kExitConfig);
    CHECK(run_error_code([] { run_kernel_check(1.0, 0.0); }) == kExitConfig);
    CHECK(run_error_code([] { run_kernel_check(1.0, 1.0, 0.0); }) == kExitConfig);
}

TEST_CASE("scan runner validates its ratio list") {
    CHECK(run_error_code([] {
              run_scan(Method::MemoryKernel, {}, CoherenceArgMode::Consistent, 10.0);
          }) == kExitConfig);
    CHECK(run_error_code([] {
              run_scan(Method::MemoryKernel, {-0.5}, CoherenceArgMode::Consistent, 10.0);
          }) == kExitConfig);
    auto reports = run_scan(Method::Exact, {0.5, 5.0}, CoherenceArgMode::Consistent, 10.0);
    REQUIRE(reports.size() == 2);
    CHECK_FALSE(reports[0].map_exact.violated);
}

TEST_CASE("shortest round-trip double formatting") {
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(-0.0) == "0");
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(10.0) == "10");
    for (double v : {1.0 / 3.0, 0.1, 1e-300, 6.02214076e23, -2.5e-17, 0.98167711880981608}) {
        std::string text = format_double(v);
        CHECK(std::strtod(text.c_str(), nullptr) == v);
    }
}

TEST_CASE("config documents parse with comments and overrides") {
    std::istringstream is(
        "# run configuration\n"
        "\n"
        "method = exact,markovian\n"
        "R = 2\n"
        "R = 3\n"
        "tau-stop = 4\n");
    auto kv = parse_config(is);
    CHECK(kv.at("method") == "exact,markovian");
    CHECK(kv.at("R") == "3");  // later entries override earlier ones

    Scenario s = scenario_from_flat(kv);
    REQUIRE(s.methods.size() == 2);
    CHECK(s.methods[0] == Method::Exact);
    CHECK(s.methods[1] == Method::Markovian);
    CHECK(s.R == 3.0);
    CHECK(s.tau_stop == 4.0);

    std::istringstream broken("method = exact\njust-a-key\n");
    CHECK(run_error_code([&] { parse_config(broken); }) == kExitConfig);

    CHECK(run_error_code([] {
              scenario_from_flat({{"no-such-key", "1"}});
          }) == kExitConfig);
}

TEST_CASE("scenarios survive the flat round trip") {
    Scenario s;
    s.methods = {Method::PostMarkovian, Method::Exact};
    s.R = 5.0;
    s.N = 0.0;
    s.init = {1.0, 0.0, 0.0};
    s.init_name = "plus-x";
    s.mode = CoherenceArgMode::Doubled;
    s.tau_start = 1.0;
    s.tau_stop = 7.0;
    s.tau_step = 0.02;
    s.oracle = true;
    s.oracle_step = 5e-3;

    Scenario back = scenario_from_flat(s.to_flat());
    CHECK(back.methods == s.methods);
    CHECK(back.R == s.R);
    CHECK(back.N == s.N);
    CHECK(back.init_name == s.init_name);
    CHECK(back.init.wx == s.init.wx);
    CHECK(back.mode == s.mode);
    CHECK(back.tau_start == s.tau_start);
    CHECK(back.tau_stop == s.tau_stop);
    CHECK(back.tau_step == s.tau_step);
    CHECK(back.oracle == s.oracle);
    CHECK(back.oracle_step == s.oracle_step);
    CHECK(run_error_code([&] { validate(back); }) == -1);
}

// ---- subprocess tests of the installed tool --------------------------------

TEST_CASE("cli: version and plain table output") {
    if (!cli_available()) { MESSAGE("QDYN_CLI not set; skipping"); return; }
    CliResult version = run_cli("--version");
    CHECK(version.code == 0);
    CHECK(version.out.find("qdyn") != std::string::npos);

    CliResult res = run_cli("evolve --method markovian --R 1 --tau-stop 1 --tau-step 0.5");
    CHECK(res.code == 0);
    CHECK(res.out.rfind("tau,markovian_pe,markovian_wx,markovian_wy,markovian_wz,"
                        "markovian_mineig\n", 0) == 0);
    CHECK(std::count(res.out.begin(), res.out.end(), '\n') == 4);  // header + 3 rows
}

TEST_CASE("cli: repeated runs are byte-identical") {
    if (!cli_available()) { MESSAGE("QDYN_CLI not set; skipping"); return; }
    auto dir = make_temp_dir("determinism");
    std::string base = "evolve --method post-markovian --method exact --R 5 --oracle "
                       "--tau-stop 5 --tau-step 0.1 --out ";
    CHECK(run_cli(base + (dir / "a.csv").string()).code == 0);
    CHECK(run_cli(base + (dir / "b.csv").string()).code == 0);
    CHECK(read_file(dir / "a.csv") == read_file(dir / "b.csv"));
    CHECK(read_file(dir / "a.csv.meta.json") == read_file(dir / "b.csv.meta.json"));

    std::string scan = "scan --method memory-kernel --R 0.2 --tau-stop 5 --out ";
    CHECK(run_cli(scan + (dir / "s1.csv").string()).code == 0);
    CHECK(run_cli(scan + (dir / "s2.csv").string()).code == 0);
    CHECK(read_file(dir / "s1.csv") == read_file(dir / "s2.csv"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("cli: exit codes distinguish failure classes") {
    if (!cli_available()) { MESSAGE("QDYN_CLI not set; skipping"); return; }
    CHECK(run_cli("evolve --method bogus").code == kExitConfig);
    CHECK(run_cli("evolve --method markovian --tau-step 0").code == kExitConfig);
    CHECK(run_cli("evolve --method markovian --gamma0 1 --R 2").code == kExitConfig);
    CHECK(run_cli("evolve --method exact --N 1").code == kExitUnsupported);
    CHECK(run_cli("evolve --method post-markovian --R 1e12 --oracle --tau-stop 10").code ==
          kExitNumeric);
    CHECK(run_cli("figure1 --out-dir /proc/1/qdyn_forbidden").code == kExitIo);
}

TEST_CASE("cli: a config file and equivalent flags produce identical output") {
    if (!cli_available()) { MESSAGE("QDYN_CLI not set; skipping"); return; }
    auto dir = make_temp_dir("config");
    {
        std::ofstream cfg(dir / "run.cfg");
        cfg << "# comparison run\n"
               "method = post-markovian\n"
               "R = 2.5\n"
               "tau-stop = 3\n"
               "tau-step = 0.1\n";
    }
    CHECK(run_cli("evolve --config " + (dir / "run.cfg").string() + " --out " +
                  (dir / "from_config.csv").string())
              .code == 0);
    CHECK(run_cli("evolve --method post-markovian --R 2.5 --tau-stop 3 --tau-step 0.1 --out " +
                  (dir / "from_flags.csv").string())
              .code == 0);
    CHECK(read_file(dir / "from_config.csv") == read_file(dir / "from_flags.csv"));
    CHECK(read_file(dir / "from_config.csv.meta.json") ==
          read_file(dir / "from_flags.csv.meta.json"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("cli: JSON output parses and mirrors the table") {
    if (!cli_available()) { MESSAGE("QDYN_CLI not set; skipping"); return; }
    CliResult res =
        run_cli("evolve --method exact --R 5 --tau-stop 2 --tau-step 0.5 --format json");
    REQUIRE(res.code == 0);
    nlohmann::json j = nlohmann::json::parse(res.out);
    REQUIRE(j.contains("columns"));
    REQUIRE(j.contains("rows"));
    REQUIRE(j.contains("scenario"));
    CHECK(j["columns"].size() == 6);
    CHECK(j["rows"].size() == 5);
    CHECK(j["scenario"]["method"] == "exact");
}

TEST_CASE("cli: scan emits the criterion table") {
    if (!cli_available()) { MESSAGE("QDYN_CLI not set; skipping"); return; }
    CliResult res = run_cli("scan --method memory-kernel --R 0.2 --tau-stop 2");
    REQUIRE(res.code == 0);
    CHECK(res.out.rfind("method,R,N,coherence_arg,tau_max", 0) == 0);
    CHECK(res.out.find("\nmemory-kernel,0.2,0,consistent,2,") != std::string::npos);

    CliResult ranged = run_cli(
        "scan --method exact --R-start 0.5 --R-stop 1.5 --R-steps 3 --tau-stop 2");
    REQUIRE(ranged.code == 0);
    CHECK(ranged.out.find("\nexact,1,") != std::string::npos);
    CHECK(run_cli("scan --method exact --tau-stop 2").code == kExitConfig);
}

TEST_CASE("cli: compare prints pairwise and solver deviations") {
    if (!cli_available()) { MESSAGE("QDYN_CLI not set; skipping"); return; }
    CliResult res = run_cli(
        "compare --method post-markovian --method exact --R 1 --tau-stop 5 --tau-step 0.05 "
        "--oracle");
    REQUIRE(res.code == 0);
    CHECK(res.out.find("post-markovian vs exact: max_abs_diff=") != std::string::npos);
    CHECK(res.out.find("oracle post-markovian: max_abs_delta=") != std::string::npos);
    CHECK(res.out.find("oracle exact: max_abs_delta=") != std::string::npos);
}

TEST_CASE("cli: figure command writes the three panels") {
    if (!cli_available()) { MESSAGE("QDYN_CLI not set; skipping"); return; }
    auto dir = make_temp_dir("cli_figure");
    CliResult res = run_cli("figure1 --out-dir " + dir.string());
    REQUIRE(res.code == 0);
    for (const char* name : {"figure1_R5.csv", "figure1_R1.csv", "figure1_R0p05.csv"}) {
        CHECK(res.out.find(name) != std::string::npos);
        CHECK(std::filesystem::exists(dir / name));
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("cli: kernel check reports its verdict") {
    if (!cli_available()) { MESSAGE("QDYN_CLI not set; skipping"); return; }
    CliResult res = run_cli("kernel-check --gamma0 2 --lambda 0.5");
    CHECK(res.code == 0);
    CHECK(res.out.find("worst_rel_error=") != std::string::npos);
    CHECK(res.out.find("PASS") != std::string::npos);
}

#include "pineq/report.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace pineq;

namespace {

namespace fs = std::filesystem;

fs::path temp_file(const std::string& stem) {
    return fs::temp_directory_path() / ("pineq_test_" + stem);
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Run the CLI binary, capture stdout to a file, return the exit code.
int run_cli(const std::string& args, const fs::path& stdout_path) {
    const std::string cmd = std::string(PINEQ_CLI_PATH) + " " + args + " > " +
                            stdout_path.string() + " 2> /dev/null";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

RunReport sample_report() {
    RunReport report("demo", 7, 1.0);
    report.metric("alpha", 0.5, 1e-9);
    report.metric("nested/beta", -3.25, 1e-6);
    report.metric("nested/gamma", 1.0 / 3.0, 0.0);
    report.info("flags", {{"ok", true}});
    return report;
}

}  // namespace

TEST_CASE("report emission") {
    const RunReport report = sample_report();

    SECTION("JSON round-trips through the parser") {
        const std::string bytes = emit_report(report, ReportFormat::Json);
        REQUIRE(bytes.back() == '\n');
        const auto parsed = nlohmann::ordered_json::parse(bytes);
        REQUIRE(parsed == report.doc);
        REQUIRE(parsed["seed"] == 7);
        REQUIRE(parsed["nested"]["beta"]["value"] == -3.25);
    }
    SECTION("CSV has a header and one row per metric") {
        const std::string bytes = emit_report(report, ReportFormat::Csv);
        std::istringstream in(bytes);
        std::string line;
        std::vector<std::string> lines;
        while (std::getline(in, line)) lines.push_back(line);
        REQUIRE(lines.size() == 4);  // header + 3 metrics
        REQUIRE(lines[0] == "metric,value,tolerance");
        REQUIRE(lines[1].rfind("alpha,", 0) == 0);
        REQUIRE(lines[2].rfind("nested/beta,", 0) == 0);
    }
    SECTION("numbers render with full precision") {
        REQUIRE(format_17g(1.0 / 3.0) == "0.33333333333333331");
        REQUIRE(format_17g(0.5) == "0.5");
        const std::string csv = emit_report(report, ReportFormat::Csv);
        REQUIRE(csv.find("0.33333333333333331") != std::string::npos);
    }
}

TEST_CASE("cli end to end") {
    const fs::path cfg_path = temp_file("cfg.ini");
    const fs::path out_path = temp_file("out.json");

    SECTION("complete graph verify-poincare passes with constant 1/2") {
        write_file(cfg_path,
                   "[scenario]\n"
                   "kind = graph\n"
                   "graph = complete\n"
                   "vertices = 5\n"
                   "root = 0\n"
                   "decay_rate = 0\n"
                   "[constants]\n"
                   "validation = 50\n");
        const int code =
            run_cli("verify-poincare --config " + cfg_path.string(), out_path);
        REQUIRE(code == 0);
        const auto doc = nlohmann::json::parse(read_file(out_path));
        REQUIRE(doc["exact_p2"]["value"]["value"].get<double>() ==
                Catch::Approx(0.5).epsilon(1e-10));
        REQUIRE(doc["validation"]["violations"] == 0);
    }
    SECTION("reports are byte-identical for a fixed seed") {
        write_file(cfg_path,
                   "[scenario]\n"
                   "kind = graph\n"
                   "graph = complete\n"
                   "vertices = 5\n"
                   "decay_rate = 0\n");
        const fs::path out2 = temp_file("out2.json");
        REQUIRE(run_cli("check-admissibility --config " + cfg_path.string() + " --seed 11",
                        out_path) == 0);
        REQUIRE(run_cli("check-admissibility --config " + cfg_path.string() + " --seed 11",
                        out2) == 0);
        const std::string a = read_file(out_path);
        REQUIRE_FALSE(a.empty());
        REQUIRE(a == read_file(out2));
        fs::remove(out2);
    }
    SECTION("csv format emits metric rows") {
        write_file(cfg_path,
                   "[scenario]\n"
                   "kind = graph\n"
                   "graph = complete\n"
                   "vertices = 4\n"
                   "decay_rate = 0\n");
        const int code = run_cli(
            "check-admissibility --config " + cfg_path.string() + " --format csv", out_path);
        REQUIRE(code == 0);
        const std::string csv = read_file(out_path);
        REQUIRE(csv.rfind("metric,value,tolerance\n", 0) == 0);
        REQUIRE(csv.find("growth/lambda0,") != std::string::npos);
    }
    SECTION("unknown config key exits with code 2") {
        write_file(cfg_path,
                   "[scenario]\n"
                   "kind = graph\n"
                   "graph = complete\n"
                   "vertices = 4\n"
                   "decay_rate = 0\n"
                   "typo_key = 1\n");
        REQUIRE(run_cli("verify-poincare --config " + cfg_path.string(), out_path) == 2);
    }
    SECTION("unknown section exits with code 2") {
        write_file(cfg_path,
                   "[scenario]\n"
                   "kind = graph\n"
                   "[mystery]\n"
                   "x = 1\n");
        REQUIRE(run_cli("verify-poincare --config " + cfg_path.string(), out_path) == 2);
    }
    SECTION("missing config exits with code 2") {
        REQUIRE(run_cli("verify-poincare --config /nonexistent/cfg.ini", out_path) == 2);
    }
    SECTION("unknown subcommand exits with code 2") {
        REQUIRE(run_cli("frobnicate", out_path) == 2);
    }
    SECTION("infeasible admissibility exits with code 2") {
        // Constant weights on a path make X0 the whole vertex set, and the
        // endpoints are not unit-related, so the X0 pair condition fails.
        write_file(cfg_path,
                   "[scenario]\n"
                   "kind = graph\n"
                   "graph = path\n"
                   "vertices = 7\n"
                   "root = 3\n"
                   "decay_rate = 0\n"
                   "[admissibility]\n"
                   "lambda = 64\n"
                   "epsilon = 1\n"
                   "s = 0\n");
        const int code =
            run_cli("check-admissibility --config " + cfg_path.string(), out_path);
        REQUIRE(code == 2);
        const auto doc = nlohmann::json::parse(read_file(out_path));
        REQUIRE(doc["feasible"] == false);
    }

    fs::remove(cfg_path);
    fs::remove(out_path);
}

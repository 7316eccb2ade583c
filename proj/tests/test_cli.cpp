#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "quatode/scenario.hpp"

#ifndef QUATODE_BIN
#error "QUATODE_BIN must point at the quatode executable"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace quatode;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "quatode-cli-tests";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
    const fs::path p = work_dir() / name;
    std::ofstream out(p);
    out << text;
    return p;
}

RunResult run(const std::string& args) {
    const fs::path log = work_dir() / "last_run.log";
    const std::string cmd =
        std::string(QUATODE_BIN) + " " + args + " > " + log.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(log);
    std::ostringstream buf;
    buf << in.rdbuf();
    r.output = buf.str();
    return r;
}

// first worked homogeneous equation: psi'' + j psi' + (1-k) psi = 0
const char* kExample1 = R"({
  "kind": "homogeneous-const",
  "a": [0, 0, -1, 0],
  "b": [-1, 0, 0, 1],
  "q": [0, -1, 0, 0]
})";

} // namespace

TEST_CASE("invalid scenarios exit with the validation code") {
    CHECK(run("solve " + write_file("empty.json", "").string()).exit_code == 2);
    CHECK(run("solve " + write_file("notjson.json", "{oops").string()).exit_code == 2);
    CHECK(run("solve " + write_file("nokind.json", R"({"a": [0,0,0,0]})").string())
              .exit_code == 2);
    const RunResult bad_quat = run(
        "solve " +
        write_file("badquat.json",
                   R"({"kind": "homogeneous-const", "a": [1, 2], "b": [0,0,0,0], "q": [0,-1,0,0]})")
            .string());
    CHECK(bad_quat.exit_code == 2);
    CHECK(bad_quat.output.find("a:") != std::string::npos);
    CHECK(run("solve /nonexistent/path.json").exit_code == 2);
    // wrong kind for the subcommand
    CHECK(run("integrate " + write_file("ex1.json", kExample1).string() + " --out " +
              (work_dir() / "never.csv").string())
              .exit_code == 2);
}

TEST_CASE("solve reports the known Wronskian modulus") {
    const fs::path scn = write_file("ex1.json", kExample1);
    const fs::path rep = work_dir() / "ex1_report.json";
    const RunResult r = run("solve " + scn.string() + " --json " + rep.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("|W|^2") != std::string::npos);

    std::ifstream in(rep);
    REQUIRE(in.good());
    json report;
    in >> report;
    CHECK(report["kind"] == "homogeneous-const");
    // xi from the definite integral is normalized to xi(0) = 0, xi'(0) = 1,
    // so |W(0)|^2 = |phi(0)|^2 |xi'(0)|^2 = 1
    CHECK(std::abs(report["wronskian_modulus_squared"].get<double>() - 1.0) < 1e-9);
    CHECK(report["independent"].get<bool>());
    // xi(0) = 0 for the definite-integral second solution
    const auto& s0 = report["xi"]["samples"][0];
    CHECK(s0["x"].get<double>() == 0.0);
    for (const auto& c : s0["value"]) CHECK(std::abs(c.get<double>()) < 1e-12);
}

TEST_CASE("solve handles a forced scenario end to end") {
    const fs::path scn = write_file("ex4.json", R"({
      "kind": "nonhomogeneous-const",
      "a": [0, 0, -1, 0],
      "b": [-1, 0, 0, 1],
      "q": [0, -1, 0, 0],
      "rho": [[1, [0, 1, 0, 0]]],
      "f": [1, 0, 0, 0],
      "g": [0, -1, 0, 0]
    })");
    const fs::path rep = work_dir() / "ex4_report.json";
    const RunResult r = run("solve " + scn.string() + " --json " + rep.string());
    CHECK(r.exit_code == 0);
    std::ifstream in(rep);
    REQUIRE(in.good());
    json report;
    in >> report;
    CHECK(report["kind"] == "nonhomogeneous-const");
    CHECK(report.contains("particular"));
    CHECK(report.contains("q1"));
    CHECK(report.contains("q2"));
}

TEST_CASE("solve rejects a q that does not satisfy the equation") {
    const fs::path scn = write_file("notasol.json", R"({
      "kind": "homogeneous-const",
      "a": [0, 0, -1, 0],
      "b": [-1, 0, 0, 1],
      "q": [0, 0, 0, 1]
    })");
    const RunResult r = run("solve " + scn.string());
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("NotASolution") != std::string::npos);
}

TEST_CASE("integrate writes a CSV trajectory") {
    const fs::path scn = write_file("ivp_zero.json", R"({
      "kind": "ivp-numeric",
      "a": [0, 0, 0, 0],
      "b": [0, 0, 0, 0],
      "f": [1, 0, 0, 0],
      "g": [0, 0, 0, 0],
      "x_end": 1.0
    })");
    const fs::path csv = work_dir() / "zero.csv";
    const RunResult r = run("integrate " + scn.string() + " --out " + csv.string() +
                            " --h 0.25");
    CHECK(r.exit_code == 0);

    std::ifstream in(csv);
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,psi0,psi1,psi2,psi3,dpsi0,dpsi1,dpsi2,dpsi3,residual_norm");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        // constant solution psi = 1: every row is x,1,0,0,0,0,0,0,0,0
        std::istringstream ls(line);
        std::string cell;
        std::getline(ls, cell, ',');
        std::getline(ls, cell, ',');
        CHECK(std::stod(cell) == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK(rows == 5);
}

TEST_CASE("integrate exits with the non-finite code on blow-up") {
    const fs::path scn = write_file("blowup.json", R"({
      "kind": "ivp-numeric",
      "a": [0, 0, 0, 0],
      "b": [100000000.0, 0, 0, 0],
      "f": [1, 0, 0, 0],
      "g": [0, 0, 0, 0],
      "x_end": 2.0
    })");
    const RunResult r = run("integrate " + scn.string() + " --out " +
                            (work_dir() / "blowup.csv").string());
    CHECK(r.exit_code == 4);
    CHECK(r.output.find("NonFiniteState") != std::string::npos);
}

TEST_CASE("wronskian subcommand prints the variants") {
    const std::string scn_text = std::string(R"({"kind": "wronskian-check",)") +
                                 R"( "a": [0, 0, -1, 0], "b": [-1, 0, 0, 1],)" +
                                 R"( "q": [0, -1, 0, 0]})";
    const fs::path scn = write_file("wron.json", scn_text);
    const RunResult r = run("wronskian " + scn.string() + " --x 0.7");
    CHECK(r.exit_code == 0);
    const std::string tag = "|W|^2 at x = 0.7: ";
    const auto pos = r.output.find(tag);
    REQUIRE(pos != std::string::npos);
    // Re(a) = 0 keeps |W| constant at its x = 0 value of 1
    CHECK(std::stod(r.output.substr(pos + tag.size())) ==
          doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.output.find("W_L = ") != std::string::npos);
    CHECK(r.output.find("independent") != std::string::npos);
}

TEST_CASE("verify-paper --list names every check") {
    const RunResult r = run("verify-paper --list");
    CHECK(r.exit_code == 0);
    int lines = 0;
    std::istringstream is(r.output);
    std::string line;
    while (std::getline(is, line))
        if (!line.empty()) ++lines;
    CHECK(lines >= 8);
}

TEST_CASE("verify-paper --perturb is a working negative control") {
    const RunResult r = run("verify-paper --perturb 0.05");
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("FAIL") != std::string::npos);
}

TEST_CASE("scenario parser round-trips through its own JSON form") {
    const Scenario sc = parse_scenario(kExample1);
    json doc = {
        {"kind", to_string(sc.kind)},
        {"a", {sc.a.w, sc.a.x, sc.a.y, sc.a.z}},
        {"b", {sc.b.w, sc.b.x, sc.b.y, sc.b.z}},
        {"q", {sc.q->w, sc.q->x, sc.q->y, sc.q->z}},
    };
    const Scenario back = parse_scenario(doc.dump());
    CHECK(back.kind == sc.kind);
    CHECK((back.a - sc.a).norm() == 0.0);
    CHECK((back.b - sc.b).norm() == 0.0);
    CHECK((*back.q - *sc.q).norm() == 0.0);
}

#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "quatode/oracle.hpp"
#include "quatode/scenario.hpp"
#include "quatode/solver.hpp"
#include "quatode/verify.hpp"
#include "quatode/wronskian.hpp"

namespace {

using nlohmann::json;
using namespace quatode;

constexpr int kExitOk = 0;
constexpr int kExitCheckFail = 1;
constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;
constexpr int kExitNonFinite = 4;

json quat_json(const Quaternion& q) {
    return json::array({q.w, q.x, q.y, q.z});
}

int run_solve(const std::string& file, const std::string& json_out) {
    const Scenario sc = load_scenario(file);
    if (sc.kind != ScenarioKind::HomogeneousConst &&
        sc.kind != ScenarioKind::NonhomogeneousConst)
        throw ScenarioError("kind: solve expects homogeneous-const or nonhomogeneous-const");

    const ConstCoeffEq eq{sc.a, sc.b};
    const Quaternion q = *sc.q;
    const QExpr phi = QExpr::exp(q);
    const QExpr xi = reduce_order(eq, q);
    const FundamentalPair pair(phi, xi);
    const double w2 = modulus_squared(pair, sc.x0);

    json report;
    report["kind"] = quatode::to_string(sc.kind);
    report["phi"] = {{"form", "exp(q x)"}, {"q", quat_json(q)}};
    report["xi"] = {{"form", "exp(q x) * int_0^x exp(-q t) exp((a-q) t) dt"}};
    report["wronskian_modulus_squared"] = w2;
    report["independent"] = !dependence_test(pair, sc.x0);

    std::cout << "equation: psi'' = (" << sc.a << ") psi' + (" << sc.b << ") psi";
    if (!sc.rho.empty()) std::cout << " + rho";
    std::cout << "\nphi(x) = exp[(" << q << ") x]\n";
    std::cout << "xi(x)  = exp[(" << q << ") x] * int_0^x exp[-(" << q
              << ") t] exp[(" << sc.a - q << ") t] dt\n";
    std::cout << "xi samples: xi(0) = " << xi.eval(0.0) << ", xi(1) = " << xi.eval(1.0)
              << "\n";
    std::cout << "|W|^2 at x0 = " << std::setprecision(12) << w2 << "\n";

    json xi_samples = json::array();
    for (double x : {0.0, 0.5, 1.0, 1.5, 2.0})
        xi_samples.push_back({{"x", x}, {"value", quat_json(xi.eval(x))}});
    report["xi"]["samples"] = xi_samples;

    if (!sc.rho.empty()) {
        const double lo = std::min(sc.x0, sc.x_end), hi = std::max(sc.x0, sc.x_end);
        const VariationResult vr =
            variation_of_parameters(phi, xi, sc.rho_expr(), sc.x0, lo, hi);
        json psamples = json::array();
        for (double x : {0.0, 0.5, 1.0, 1.5, 2.0}) {
            const Quaternion v = vr.particular(x);
            psamples.push_back({{"x", x}, {"value", quat_json(v)}});
        }
        report["particular"] = {{"samples", psamples}};
        std::cout << "particular: psi_p(0) = " << vr.particular(0.0)
                  << ", psi_p(1) = " << vr.particular(1.0) << "\n";
        if (sc.f && sc.g) {
            const GeneralSolution gs =
                fit_initial_conditions(phi, xi, vr, sc.x0, *sc.f, *sc.g);
            report["q1"] = quat_json(gs.q1);
            report["q2"] = quat_json(gs.q2);
            std::cout << "q1 = " << gs.q1 << "\nq2 = " << gs.q2 << "\n";
        }
    } else if (sc.f && sc.g) {
        const GeneralSolution gs = fit_initial_conditions(phi, xi, sc.x0, *sc.f, *sc.g);
        report["q1"] = quat_json(gs.q1);
        report["q2"] = quat_json(gs.q2);
        std::cout << "q1 = " << gs.q1 << "\nq2 = " << gs.q2 << "\n";
    }

    if (!json_out.empty()) {
        std::ofstream out(json_out);
        if (!out) throw Error("cannot open JSON output file: " + json_out);
        out << report.dump(2) << "\n";
    }
    return kExitOk;
}

int run_integrate(const std::string& file, const std::string& csv_out, double h_override) {
    const Scenario sc = load_scenario(file);
    if (sc.kind != ScenarioKind::IvpNumeric)
        throw ScenarioError("kind: integrate expects ivp-numeric");
    IVP ivp = sc.to_ivp();
    const double h = h_override > 0 ? h_override : sc.h;
    const Trajectory traj = integrate(to_real_system(ivp), sc.x_end, h);

    std::ofstream out(csv_out);
    if (!out) throw Error("cannot open CSV output file: " + csv_out);
    write_csv(traj, ivp, out);
    std::cout << "wrote " << traj.samples.size() << " samples to " << csv_out << "\n";
    std::cout << "max residual norm (finite difference): " << std::setprecision(6)
              << max_fd_residual(traj, ivp) << "\n";
    return kExitOk;
}

int run_wronskian(const std::string& file, double x) {
    const Scenario sc = load_scenario(file);
    if (sc.kind != ScenarioKind::WronskianCheck)
        throw ScenarioError("kind: wronskian expects wronskian-check");
    const ConstCoeffEq eq{sc.a, sc.b};
    const QExpr phi = QExpr::exp(*sc.q);
    const QExpr xi = reduce_order(eq, *sc.q);
    const FundamentalPair pair(phi, xi);
    const double w2 = modulus_squared(pair, x);
    std::cout << std::setprecision(12);
    std::cout << "|W|^2 at x = " << x << ": " << w2 << "\n";
    std::cout << "Dieudonne det^2: " << dieudonne_det_squared(pair, x) << "\n";
    const WronskianVariants v = variants(pair, x);
    std::cout << "W_L = " << v.wl << "\nW_R = " << v.wr << "\nW_L~ = " << v.wl_tilde
              << "\nW_R~ = " << v.wr_tilde << "\n";
    std::cout << "pair is " << (dependence_test(pair, x) ? "dependent" : "independent")
              << " at x\n";
    return kExitOk;
}

int run_verify(bool list_only, double perturb) {
    if (list_only) {
        for (const auto& name : verify::check_names()) std::cout << name << "\n";
        return kExitOk;
    }
    const auto results = verify::run_checks(perturb);
    bool all_pass = true;
    for (const auto& r : results) {
        std::cout << (r.pass ? "PASS" : "FAIL") << "  " << std::left << std::setw(24)
                  << r.name << " " << r.detail << "\n";
        all_pass = all_pass && r.pass;
    }
    std::cout << (all_pass ? "all checks passed" : "some checks FAILED") << "\n";
    return all_pass ? kExitOk : kExitCheckFail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quatode - quaternionic second-order ODE solver and verifier"};
    app.require_subcommand(1);

    std::string scenario_file, json_out, csv_out;
    double h_override = 0.0, x_at = 0.0, perturb = 0.0;
    bool list_only = false;

    auto* solve = app.add_subcommand("solve", "analytic solve of a constant-coefficient scenario");
    solve->add_option("file", scenario_file, "scenario JSON file")->required();
    solve->add_option("--json", json_out, "write a machine-readable JSON report");

    auto* integ = app.add_subcommand("integrate", "RK4 numeric integration of an IVP scenario");
    integ->set_help_flag("--help", "print help"); // frees -h/--h for the step size
    integ->add_option("file", scenario_file, "scenario JSON file")->required();
    integ->add_option("--out", csv_out, "trajectory CSV output path")->required();
    integ->add_option("--h", h_override, "step size override");

    auto* wron = app.add_subcommand("wronskian", "Wronskian variants and |W|^2 at a point");
    wron->add_option("file", scenario_file, "scenario JSON file")->required();
    wron->add_option("--x", x_at, "evaluation point");

    auto* verify_cmd = app.add_subcommand("verify-paper", "run the golden example suite");
    verify_cmd->add_flag("--list", list_only, "print check names without running");
    verify_cmd->add_option("--perturb", perturb, "perturb the Example-1 psi-coefficient (negative control)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return run_solve(scenario_file, json_out);
        if (integ->parsed()) return run_integrate(scenario_file, csv_out, h_override);
        if (wron->parsed()) return run_wronskian(scenario_file, x_at);
        return run_verify(list_only, perturb);
    } catch (const ScenarioError& e) {
        std::cerr << "ScenarioError: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NonFiniteState& e) {
        std::cerr << "NonFiniteState: " << e.what() << "\n";
        return kExitNonFinite;
    } catch (const NotASolution& e) {
        std::cerr << "NotASolution: " << e.what() << "\n";
        return kExitSolver;
    } catch (const DependentPair& e) {
        std::cerr << "DependentPair: " << e.what() << "\n";
        return kExitSolver;
    } catch (const NearZeroQuaternion& e) {
        std::cerr << "NearZeroQuaternion: " << e.what() << "\n";
        return kExitSolver;
    } catch (const Error& e) {
        std::cerr << "Error: " << e.what() << "\n";
        return kExitSolver;
    }
}

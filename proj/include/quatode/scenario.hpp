#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quatode/problem.hpp"
#include "quatode/quaternion.hpp"

namespace quatode {

enum class ScenarioKind {
    HomogeneousConst,
    NonhomogeneousConst,
    IvpNumeric,
    WronskianCheck,
};

std::string to_string(ScenarioKind kind);

/// Validation failure with a field-level message.
struct ScenarioError : Error {
    explicit ScenarioError(const std::string& msg) : Error(msg) {}
};

/// One term of a polynomial forcing: coefficient * x^degree.
struct ForcingTerm {
    int degree = 0;
    Quaternion coeff;
};

/// A solver/integrator input as read from a JSON scenario file.
/// Constant coefficients use the convention psi'' = a psi' + b psi (+ rho).
struct Scenario {
    ScenarioKind kind = ScenarioKind::HomogeneousConst;
    Quaternion a, b;
    std::optional<Quaternion> q; // known first exponent
    std::vector<ForcingTerm> rho;
    double x0 = 0.0;
    double x_end = 2.0;
    double h = 1e-3;
    std::optional<Quaternion> f, g;

    QExpr rho_expr() const;
    IVP to_ivp() const;
};

/// Parses and validates a scenario JSON document. Quaternions are
/// 4-element real arrays [w, x, y, z]; rho is a list of [degree, coeff]
/// pairs. Throws ScenarioError with a field-level message on invalid input.
Scenario parse_scenario(const std::string& json_text);

Scenario load_scenario(const std::string& path);

} // namespace quatode

#include "quatode/scenario.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace quatode {

namespace {

using nlohmann::json;

Quaternion quat_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 4)
        throw ScenarioError(field + ": expected a 4-element real array [w, x, y, z]");
    for (const auto& v : j)
        if (!v.is_number()) throw ScenarioError(field + ": components must be numbers");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
            j[3].get<double>()};
}

ScenarioKind kind_from_string(const std::string& s) {
    if (s == "homogeneous-const") return ScenarioKind::HomogeneousConst;
    if (s == "nonhomogeneous-const") return ScenarioKind::NonhomogeneousConst;
    if (s == "ivp-numeric") return ScenarioKind::IvpNumeric;
    if (s == "wronskian-check") return ScenarioKind::WronskianCheck;
    throw ScenarioError("kind: unknown scenario kind \"" + s + "\"");
}

} // namespace

std::string to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::HomogeneousConst: return "homogeneous-const";
        case ScenarioKind::NonhomogeneousConst: return "nonhomogeneous-const";
        case ScenarioKind::IvpNumeric: return "ivp-numeric";
        case ScenarioKind::WronskianCheck: return "wronskian-check";
    }
    return "?";
}

QExpr Scenario::rho_expr() const {
    std::vector<QExpr> terms;
    for (const auto& t : rho)
        terms.push_back(QExpr::left_scale(t.coeff, QExpr::monomial(t.degree)));
    return QExpr::sum(std::move(terms));
}

IVP Scenario::to_ivp() const {
    IVP ivp;
    ivp.alpha = QExpr::constant(a);
    ivp.beta = QExpr::constant(b);
    ivp.rho = rho_expr();
    ivp.x0 = x0;
    ivp.f = f.value_or(Quaternion{});
    ivp.g = g.value_or(Quaternion{});
    return ivp;
}

Scenario parse_scenario(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ScenarioError("scenario: expected a JSON object");
    if (!doc.contains("kind")) throw ScenarioError("kind: missing required field");
    if (!doc["kind"].is_string()) throw ScenarioError("kind: expected a string");

    Scenario s;
    s.kind = kind_from_string(doc["kind"].get<std::string>());

    auto need_quat = [&](const char* field) {
        if (!doc.contains(field))
            throw ScenarioError(std::string(field) + ": missing required field for kind " +
                                to_string(s.kind));
        return quat_from_json(doc[field], field);
    };
    auto opt_quat = [&](const char* field) -> std::optional<Quaternion> {
        if (!doc.contains(field)) return std::nullopt;
        return quat_from_json(doc[field], field);
    };
    auto opt_real = [&](const char* field, double fallback) {
        if (!doc.contains(field)) return fallback;
        if (!doc[field].is_number())
            throw ScenarioError(std::string(field) + ": expected a number");
        return doc[field].get<double>();
    };

    s.a = need_quat("a");
    s.b = need_quat("b");
    s.q = opt_quat("q");
    s.f = opt_quat("f");
    s.g = opt_quat("g");
    s.x0 = opt_real("x0", 0.0);
    s.x_end = opt_real("x_end", 2.0);
    s.h = opt_real("h", 1e-3);

    if (doc.contains("rho")) {
        if (!doc["rho"].is_array())
            throw ScenarioError("rho: expected a list of [degree, coefficient] pairs");
        for (const auto& term : doc["rho"]) {
            if (!term.is_array() || term.size() != 2 || !term[0].is_number_integer())
                throw ScenarioError("rho: each term must be [degree, [w, x, y, z]]");
            const int deg = term[0].get<int>();
            if (deg < 0) throw ScenarioError("rho: degree must be nonnegative");
            s.rho.push_back({deg, quat_from_json(term[1], "rho coefficient")});
        }
    }

    switch (s.kind) {
        case ScenarioKind::HomogeneousConst:
        case ScenarioKind::WronskianCheck:
            if (!s.q) throw ScenarioError("q: required for kind " + to_string(s.kind));
            break;
        case ScenarioKind::NonhomogeneousConst:
            if (!s.q) throw ScenarioError("q: required for kind " + to_string(s.kind));
            if (s.rho.empty())
                throw ScenarioError("rho: required for kind nonhomogeneous-const");
            break;
        case ScenarioKind::IvpNumeric:
            if (!s.f) throw ScenarioError("f: required for kind ivp-numeric");
            if (!s.g) throw ScenarioError("g: required for kind ivp-numeric");
            if (!(s.h > 0)) throw ScenarioError("h: must be positive");
            break;
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

} // namespace quatode

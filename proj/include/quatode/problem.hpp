#pragma once

#include <functional>
#include <utility>

#include "quatode/qexpr.hpp"
#include "quatode/quaternion.hpp"

namespace quatode {

/// Constant-coefficient homogeneous equation, convention psi'' = a psi' + b psi.
struct ConstCoeffEq {
    Quaternion a; // coefficient of psi'
    Quaternion b; // coefficient of psi
};

/// Second-order quaternionic initial value problem
///   psi'' = alpha psi' + beta psi + rho,  psi(x0) = f, psi'(x0) = g.
struct IVP {
    QExpr alpha, beta, rho;
    double x0 = 0.0;
    Quaternion f, g;

    static IVP constant(const ConstCoeffEq& eq, double x0, const Quaternion& f,
                        const Quaternion& g, QExpr rho = QExpr::constant({})) {
        return IVP{QExpr::constant(eq.a), QExpr::constant(eq.b), std::move(rho),
                   x0, f, g};
    }
};

/// psi(x) = phi(x) q1 + xi(x) q2 + particular(x); constants multiply from
/// the right. particular is the zero function for homogeneous problems.
struct GeneralSolution {
    QExpr phi, xi;
    Quaternion q1, q2;
    std::function<Quaternion(double)> particular;
    std::function<Quaternion(double)> particular_prime;

    Quaternion eval(double x) const {
        Quaternion v = phi.eval(x) * q1 + xi.eval(x) * q2;
        if (particular) v = v + particular(x);
        return v;
    }

    Quaternion eval_prime(double x) const {
        Quaternion v = phi.derivative().eval(x) * q1 + xi.derivative().eval(x) * q2;
        if (particular_prime) v = v + particular_prime(x);
        return v;
    }
};

} // namespace quatode

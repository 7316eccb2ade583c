#pragma once

#include <cassert>
#include <cmath>
#include <utility>

#include "quatode/qexpr.hpp"
#include "quatode/quadrature.hpp"

namespace quatode {

/// Two candidate solutions (phi, xi) with exact derivatives.
struct FundamentalPair {
    QExpr phi, xi;
    QExpr phi_d, xi_d;

    FundamentalPair(QExpr phi_, QExpr xi_)
        : phi(std::move(phi_)), xi(std::move(xi_)),
          phi_d(phi.derivative()), xi_d(xi.derivative()) {}
};

/// The four quaternion-valued Wronskian candidates at a point. They differ
/// as quaternions but share one modulus.
struct WronskianVariants {
    Quaternion wl, wr, wl_tilde, wr_tilde;
};

/// W_L = phi (xi' - phi' phi^-1 xi), W_R = (xi' - phi' phi^-1 xi) phi,
/// and the phi <-> xi swapped (tilded, negated) versions.
/// Throws NearZeroQuaternion if a required inverse does not exist at x.
inline WronskianVariants variants(const FundamentalPair& p, double x) {
    const Quaternion phi = p.phi.eval(x), xi = p.xi.eval(x);
    const Quaternion dphi = p.phi_d.eval(x), dxi = p.xi_d.eval(x);
    const Quaternion core = dxi - dphi * inverse(phi) * xi;
    const Quaternion core_t = dphi - dxi * inverse(xi) * phi;
    WronskianVariants v;
    v.wl = phi * core;
    v.wr = core * phi;
    v.wl_tilde = -(xi * core_t);
    v.wr_tilde = -(core_t * xi);
    return v;
}

/// The unique real functional
///   |W|^2 = |phi|^2 |xi'|^2 + |xi|^2 |phi'|^2
///           - phi' phi_c xi xi'_c - xi' xi_c phi phi'_c.
/// The two product terms are mutual conjugates, so their sum is real;
/// the imaginary residue is asserted below 1e-10 (scaled) and the result
/// is clamped at 0 against -epsilon roundoff.
inline double modulus_squared(const FundamentalPair& p, double x) {
    const Quaternion phi = p.phi.eval(x), xi = p.xi.eval(x);
    const Quaternion dphi = p.phi_d.eval(x), dxi = p.xi_d.eval(x);
    const Quaternion t = dphi * conj(phi) * xi * conj(dxi) +
                         dxi * conj(xi) * phi * conj(dphi);
    const double imag = std::sqrt(t.x * t.x + t.y * t.y + t.z * t.z);
    assert(imag < 1e-10 * std::max(1.0, std::abs(t.w)));
    (void)imag;
    double w2 = phi.norm_sq() * dxi.norm_sq() + xi.norm_sq() * dphi.norm_sq() - t.w;
    if (w2 < 0.0 && w2 > -1e-12) w2 = 0.0;
    return w2;
}

/// [Det(M)]^2 = det(M M^+) for M = ((phi, xi), (phi', xi')).
/// M M^+ is Hermitian with real diagonal, so the 2x2 expansion reduces to
/// a*d - |b|^2 with a, d real. This is an algebraic route independent of
/// modulus_squared.
inline double dieudonne_det_squared(const FundamentalPair& p, double x) {
    const Quaternion phi = p.phi.eval(x), xi = p.xi.eval(x);
    const Quaternion dphi = p.phi_d.eval(x), dxi = p.xi_d.eval(x);
    const double a = phi.norm_sq() + xi.norm_sq();
    const double d = dphi.norm_sq() + dxi.norm_sq();
    const Quaternion b = phi * conj(dphi) + xi * conj(dxi);
    return a * d - b.norm_sq();
}

/// Scaling law |W(x1)| = exp(int_{x0}^{x1} Re alpha) |W(x0)|.
/// Returns (lhs, rhs); the caller compares at its own tolerance.
inline std::pair<double, double> scaling_check(const FundamentalPair& p,
                                               const QExpr& alpha, double x0,
                                               double x1) {
    const double lhs = std::sqrt(std::max(0.0, modulus_squared(p, x1)));
    const double integral = adaptive_simpson(
        [&](double y) { return alpha.eval(y).w; }, x0, x1, 1e-10);
    const double rhs = std::exp(integral) * std::sqrt(std::max(0.0, modulus_squared(p, x0)));
    return {lhs, rhs};
}

/// Theorem-2 test at a single point: dependent iff |W|^2(x0) < 1e-9.
inline bool dependence_test(const FundamentalPair& p, double x0) {
    constexpr double tau_dep = 1e-9;
    return modulus_squared(p, x0) < tau_dep;
}

} // namespace quatode

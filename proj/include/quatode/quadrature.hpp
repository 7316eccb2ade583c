#pragma once

#include <cmath>
#include <functional>

#include "quatode/quaternion.hpp"

namespace quatode {

namespace detail {

inline double simpson(double a, double fa, double fm, double b, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                                   double fa, double b, double fb, double m, double fm,
                                   double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, fa, flm, m, fm);
    const double right = simpson(m, fm, frm, b, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

} // namespace detail

/// Adaptive Simpson quadrature of a real integrand over [a, b].
inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double tol = 1e-10, int max_depth = 40) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = detail::simpson(a, fa, fm, b, fb);
    return detail::adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

/// Componentwise adaptive Simpson quadrature of a quaternion-valued integrand.
inline Quaternion adaptive_simpson_q(const std::function<Quaternion(double)>& f,
                                     double a, double b, double tol = 1e-10) {
    Quaternion r;
    r.w = adaptive_simpson([&](double t) { return f(t).w; }, a, b, tol);
    r.x = adaptive_simpson([&](double t) { return f(t).x; }, a, b, tol);
    r.y = adaptive_simpson([&](double t) { return f(t).y; }, a, b, tol);
    r.z = adaptive_simpson([&](double t) { return f(t).z; }, a, b, tol);
    return r;
}

} // namespace quatode

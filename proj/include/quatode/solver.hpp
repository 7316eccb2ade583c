#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "quatode/linop.hpp"
#include "quatode/problem.hpp"
#include "quatode/quadrature.hpp"
#include "quatode/wronskian.hpp"

namespace quatode {

/// int_0^x e^{ut} e^{vt} dt.
///
/// With A = L_u + R_v and f(t) = e^{ut} e^{vt}, f solves f' = A f, so the
/// integral splits into a pseudo-inverse part on the range of A and a term
/// linear in x on the kernel:
///   A^+ (f(x) - f(0)) + x P_ker f(0),  f(0) = 1.
/// When A is invertible this is A^-1 (e^{ux} e^{vx} - 1).
inline Quaternion integrate_exp_product(const Quaternion& u, const Quaternion& v,
                                        double x) {
    const LinOp a = LinOp::left_mul(u) + LinOp::right_mul(v);
    const OpResolution res = resolve(a);
    const Quaternion one{1.0};
    const Quaternion fx = exp_qx(u, x) * exp_qx(v, x);
    return res.pinv.apply(fx - one) + x * res.ker_proj.apply(one);
}

/// Second solution of psi'' = a psi' + b psi given the first exponential
/// solution phi = e^{qx}:
///   xi(x) = e^{qx} int_0^x e^{-qt} e^{(a-q)t} dt,
/// built as an exact expression tree (pseudo-inverse term, constant offset
/// from the definite lower limit 0, and a kernel term linear in x).
/// Throws NotASolution unless q^2 = a q + b.
inline QExpr reduce_order(const ConstCoeffEq& eq, const Quaternion& q) {
    const Quaternion char_res = q * q - (eq.a * q + eq.b);
    const double scale = std::max(1.0, std::max(q.norm_sq(), eq.a.norm() * q.norm() + eq.b.norm()));
    if (char_res.norm() > 1e-10 * scale)
        throw NotASolution("reduce_order: q^2 != a q + b (residual " +
                           std::to_string(char_res.norm()) + ")");

    const Quaternion u = -q;
    const Quaternion v = eq.a - q;
    const LinOp a = LinOp::left_mul(u) + LinOp::right_mul(v);
    const OpResolution res = resolve(a);
    const Quaternion one{1.0};

    const QExpr product = QExpr::prod(QExpr::exp(u), QExpr::exp(v));
    const QExpr integral = QExpr::sum(
        {QExpr::apply_op(res.pinv, product),
         QExpr::constant(-res.pinv.apply(one)),
         QExpr::prod(QExpr::monomial(1), QExpr::constant(res.ker_proj.apply(one)))});
    return QExpr::prod(QExpr::exp(q), integral);
}

namespace detail {

/// Sampled function with exact derivative values at the nodes; evaluation
/// is cubic Hermite interpolation on the containing segment.
struct SampledFn {
    std::vector<double> xs;
    std::vector<Quaternion> vals;
    std::vector<Quaternion> ders;

    Quaternion eval(double x) const {
        const std::size_t n = xs.size();
        if (x <= xs.front()) return hermite(0, x);
        if (x >= xs.back()) return hermite(n - 2, x);
        std::size_t lo = 0, hi = n - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (xs[mid] <= x ? lo : hi) = mid;
        }
        return hermite(lo, x);
    }

private:
    Quaternion hermite(std::size_t seg, double x) const {
        const double h = xs[seg + 1] - xs[seg];
        const double t = (x - xs[seg]) / h;
        const double t2 = t * t, t3 = t2 * t;
        const double h00 = 2 * t3 - 3 * t2 + 1;
        const double h10 = t3 - 2 * t2 + t;
        const double h01 = -2 * t3 + 3 * t2;
        const double h11 = t3 - t2;
        return vals[seg] * h00 + ders[seg] * (h * h10) + vals[seg + 1] * h01 +
               ders[seg + 1] * (h * h11);
    }
};

/// Solves the quaternionic 2x2 system
///   a11 u + a12 v = r1
///   a21 u + a22 v = r2
/// (unknowns multiplied from the right) through its 8x8 real representation
/// with partial pivoting. Unlike the explicit block-inverse formula this only
/// needs the full system to be nonsingular (|W| != 0), not every individual
/// block: e.g. xi(x0) = 0 for the definite-integral second solution.
inline std::pair<Quaternion, Quaternion> solve_quat_2x2(
    const Quaternion& a11, const Quaternion& a12, const Quaternion& a21,
    const Quaternion& a22, const Quaternion& r1, const Quaternion& r2) {
    std::array<std::array<double, 9>, 8> aug{};
    auto fill = [&](int row0, const Quaternion& left, const Quaternion& right,
                    const Quaternion& rhs) {
        const LinOp ll = LinOp::left_mul(left), lr = LinOp::left_mul(right);
        const auto rc = rhs.components();
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) {
                aug[static_cast<std::size_t>(row0 + r)][static_cast<std::size_t>(c)] = ll.at(r, c);
                aug[static_cast<std::size_t>(row0 + r)][static_cast<std::size_t>(4 + c)] = lr.at(r, c);
            }
            aug[static_cast<std::size_t>(row0 + r)][8] = rc[static_cast<std::size_t>(r)];
        }
    };
    fill(0, a11, a12, r1);
    fill(4, a21, a22, r2);

    double scale = 0.0;
    for (const auto& row : aug)
        for (int c = 0; c < 8; ++c) scale = std::max(scale, std::abs(row[static_cast<std::size_t>(c)]));

    for (int col = 0; col < 8; ++col) {
        int piv = col;
        for (int r = col + 1; r < 8; ++r)
            if (std::abs(aug[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) >
                std::abs(aug[static_cast<std::size_t>(piv)][static_cast<std::size_t>(col)]))
                piv = r;
        std::swap(aug[static_cast<std::size_t>(col)], aug[static_cast<std::size_t>(piv)]);
        const double p = aug[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
        if (std::abs(p) < 1e-12 * std::max(scale, 1.0))
            throw DependentPair("solve_quat_2x2: singular fundamental system");
        for (int r = 0; r < 8; ++r) {
            if (r == col) continue;
            const double factor = aug[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] / p;
            if (factor == 0.0) continue;
            for (int c = col; c <= 8; ++c)
                aug[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
                    factor * aug[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)];
        }
    }
    Vec4 u{}, v{};
    for (int r = 0; r < 4; ++r) {
        u[static_cast<std::size_t>(r)] =
            aug[static_cast<std::size_t>(r)][8] / aug[static_cast<std::size_t>(r)][static_cast<std::size_t>(r)];
        v[static_cast<std::size_t>(r)] =
            aug[static_cast<std::size_t>(r + 4)][8] / aug[static_cast<std::size_t>(r + 4)][static_cast<std::size_t>(r + 4)];
    }
    return {from_components(u), from_components(v)};
}

} // namespace detail

/// Variation-of-parameters output: nu1, nu2 as sampled antiderivatives with
/// exact derivative closures, and the assembled particular solution.
/// The imposed condition phi nu1' + xi nu2' = 0 makes
///   psi_p'  = phi' nu1 + xi' nu2
///   psi_p'' = phi'' nu1 + phi' nu1' + xi'' nu2 + xi' nu2'
/// exact up to the quadrature error in nu1, nu2.
class VariationResult {
public:
    VariationResult(QExpr phi, QExpr xi, QExpr rho, double x0, double x_lo,
                    double x_hi, int grid_n)
        : phi_(std::move(phi)), xi_(std::move(xi)), rho_(std::move(rho)),
          phi_d_(phi_.derivative()), xi_d_(xi_.derivative()),
          phi_dd_(phi_d_.derivative()), xi_dd_(xi_d_.derivative()) {
        const FundamentalPair pair(phi_, xi_);
        constexpr double tau_dep = 1e-9;
        const int probes = 17;
        for (int t = 0; t < probes; ++t) {
            const double x = x_lo + (x_hi - x_lo) * t / (probes - 1);
            if (modulus_squared(pair, x) < tau_dep)
                throw DependentPair("variation_of_parameters: |W|^2 below tolerance at x = " +
                                    std::to_string(x));
        }
        build(x0, x_lo, x_hi, grid_n);
    }

    // nu1' = [phi' - xi' xi^-1 phi]^-1 rho and nu2' = [xi' - phi' phi^-1 xi]^-1 rho,
    // computed jointly from phi nu1' + xi nu2' = 0, phi' nu1' + xi' nu2' = rho
    // via the real 8x8 representation: same values wherever the block-inverse
    // formulas are defined, but still valid at isolated zeros of phi or xi.
    Quaternion nu1_prime(double x) const { return nu_primes(x).first; }

    Quaternion nu2_prime(double x) const { return nu_primes(x).second; }

    std::pair<Quaternion, Quaternion> nu_primes(double x) const {
        return detail::solve_quat_2x2(phi_.eval(x), xi_.eval(x), phi_d_.eval(x),
                                      xi_d_.eval(x), Quaternion{}, rho_.eval(x));
    }

    Quaternion nu1(double x) const { return nu1_.eval(x); }
    Quaternion nu2(double x) const { return nu2_.eval(x); }

    Quaternion particular(double x) const {
        return phi_.eval(x) * nu1(x) + xi_.eval(x) * nu2(x);
    }

    Quaternion particular_prime(double x) const {
        return phi_d_.eval(x) * nu1(x) + xi_d_.eval(x) * nu2(x);
    }

    Quaternion particular_second(double x) const {
        return phi_dd_.eval(x) * nu1(x) + phi_d_.eval(x) * nu1_prime(x) +
               xi_dd_.eval(x) * nu2(x) + xi_d_.eval(x) * nu2_prime(x);
    }

private:
    void build(double x0, double x_lo, double x_hi, int grid_n) {
        nu1_.xs.resize(static_cast<std::size_t>(grid_n));
        for (int t = 0; t < grid_n; ++t)
            nu1_.xs[static_cast<std::size_t>(t)] = x_lo + (x_hi - x_lo) * t / (grid_n - 1);
        nu2_.xs = nu1_.xs;

        auto fill = [&](detail::SampledFn& fn, auto&& deriv) {
            const std::size_t n = fn.xs.size();
            fn.vals.resize(n);
            fn.ders.resize(n);
            for (std::size_t t = 0; t < n; ++t) fn.ders[t] = deriv(fn.xs[t]);
            fn.vals[0] = Quaternion{};
            for (std::size_t t = 1; t < n; ++t)
                fn.vals[t] = fn.vals[t - 1] +
                             adaptive_simpson_q(deriv, fn.xs[t - 1], fn.xs[t], 1e-10);
            // Shift so the antiderivative vanishes at the basis point x0.
            const Quaternion at_x0 = fn.eval(x0);
            for (auto& v : fn.vals) v = v - at_x0;
        };
        fill(nu1_, [this](double x) { return nu1_prime(x); });
        fill(nu2_, [this](double x) { return nu2_prime(x); });
    }

    QExpr phi_, xi_, rho_;
    QExpr phi_d_, xi_d_, phi_dd_, xi_dd_;
    detail::SampledFn nu1_, nu2_;
};

/// Particular solution psi_p = phi nu1 + xi nu2 with
///   nu1' = [phi' - xi' xi^-1 phi]^-1 rho,
///   nu2' = [xi' - phi' phi^-1 xi]^-1 rho,
/// integrated from x0 by adaptive Simpson on a fixed grid over
/// [x_lo, x_hi] with cubic Hermite interpolation between nodes.
inline VariationResult variation_of_parameters(QExpr phi, QExpr xi, QExpr rho,
                                               double x0, double x_lo = 0.0,
                                               double x_hi = 2.0, int grid_n = 257) {
    return VariationResult(std::move(phi), std::move(xi), std::move(rho), x0,
                           x_lo, x_hi, grid_n);
}

/// Solves phi(x0) q1 + xi(x0) q2 = f - psi_p(x0),
///        phi'(x0) q1 + xi'(x0) q2 = g - psi_p'(x0)
/// with the explicit quaternionic inverse of the 2x2 fundamental matrix.
inline std::pair<Quaternion, Quaternion> solve_right_constants(
    const QExpr& phi, const QExpr& xi, double x0, const Quaternion& rhs_f,
    const Quaternion& rhs_g) {
    const FundamentalPair pair(phi, xi);
    if (dependence_test(pair, x0))
        throw DependentPair("fit_initial_conditions: pair is dependent at x0");
    const Quaternion a = phi.eval(x0), b = xi.eval(x0);
    const Quaternion c = pair.phi_d.eval(x0), d = pair.xi_d.eval(x0);
    try {
        // explicit inverse of the 2x2 fundamental matrix
        const Quaternion q1 = inverse(a - b * inverse(d) * c) * rhs_f +
                              inverse(c - d * inverse(b) * a) * rhs_g;
        const Quaternion q2 = inverse(b - a * inverse(c) * d) * rhs_f +
                              inverse(d - c * inverse(a) * b) * rhs_g;
        return {q1, q2};
    } catch (const NearZeroQuaternion&) {
        // a zero block (e.g. xi(x0) = 0) breaks the explicit formula even
        // though the system itself is nonsingular; solve it directly
        return detail::solve_quat_2x2(a, b, c, d, rhs_f, rhs_g);
    }
}

/// Homogeneous case (no particular solution).
inline GeneralSolution fit_initial_conditions(const QExpr& phi, const QExpr& xi,
                                              double x0, const Quaternion& f,
                                              const Quaternion& g) {
    const auto [q1, q2] = solve_right_constants(phi, xi, x0, f, g);
    return GeneralSolution{phi, xi, q1, q2, nullptr, nullptr};
}

/// Particular solution given as an exact expression.
inline GeneralSolution fit_initial_conditions(const QExpr& phi, const QExpr& xi,
                                              const QExpr& particular, double x0,
                                              const Quaternion& f,
                                              const Quaternion& g) {
    const QExpr pd = particular.derivative();
    const auto [q1, q2] = solve_right_constants(
        phi, xi, x0, f - particular.eval(x0), g - pd.eval(x0));
    return GeneralSolution{phi, xi, q1, q2,
                           [particular](double x) { return particular.eval(x); },
                           [pd](double x) { return pd.eval(x); }};
}

/// Particular solution from variation of parameters.
inline GeneralSolution fit_initial_conditions(const QExpr& phi, const QExpr& xi,
                                              const VariationResult& vr, double x0,
                                              const Quaternion& f,
                                              const Quaternion& g) {
    const auto [q1, q2] = solve_right_constants(
        phi, xi, x0, f - vr.particular(x0), g - vr.particular_prime(x0));
    auto vp = std::make_shared<VariationResult>(vr);
    return GeneralSolution{phi, xi, q1, q2,
                           [vp](double x) { return vp->particular(x); },
                           [vp](double x) { return vp->particular_prime(x); }};
}

} // namespace quatode

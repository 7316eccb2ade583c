#include "quatode/verify.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "quatode/oracle.hpp"
#include "quatode/solver.hpp"
#include "quatode/wronskian.hpp"

namespace quatode::verify {

namespace {

const Quaternion qi = Quaternion::i();
const Quaternion qj = Quaternion::j();
const Quaternion qk = Quaternion::k();

Quaternion random_quat(std::mt19937& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    return {dist(rng), dist(rng), dist(rng), dist(rng)};
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

/// Solves xs(x) = target(x) * c + phi(x) * d for the right constants (c, d)
/// from samples at two points, via the 8x8 real representation. Right
/// multiplication by c maps to left_mul(target(x)) on components.
std::pair<Quaternion, Quaternion> fit_right_factors(
    const std::function<Quaternion(double)>& xs,
    const std::function<Quaternion(double)>& target,
    const std::function<Quaternion(double)>& phi, double x1, double x2) {
    std::array<std::array<double, 9>, 8> aug{};
    auto fill_row_block = [&](int row0, double x) {
        const LinOp lt = LinOp::left_mul(target(x));
        const LinOp lp = LinOp::left_mul(phi(x));
        const auto rhs = xs(x).components();
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) {
                aug[static_cast<std::size_t>(row0 + r)][static_cast<std::size_t>(c)] = lt.at(r, c);
                aug[static_cast<std::size_t>(row0 + r)][static_cast<std::size_t>(4 + c)] = lp.at(r, c);
            }
            aug[static_cast<std::size_t>(row0 + r)][8] = rhs[static_cast<std::size_t>(r)];
        }
    };
    fill_row_block(0, x1);
    fill_row_block(4, x2);

    // Gaussian elimination with partial pivoting.
    for (int col = 0; col < 8; ++col) {
        int piv = col;
        for (int r = col + 1; r < 8; ++r)
            if (std::abs(aug[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) >
                std::abs(aug[static_cast<std::size_t>(piv)][static_cast<std::size_t>(col)]))
                piv = r;
        std::swap(aug[static_cast<std::size_t>(col)], aug[static_cast<std::size_t>(piv)]);
        const double p = aug[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
        for (int r = 0; r < 8; ++r) {
            if (r == col) continue;
            const double factor = aug[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] / p;
            if (factor == 0.0) continue;
            for (int c = col; c <= 8; ++c)
                aug[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
                    factor * aug[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)];
        }
    }
    std::array<double, 8> sol{};
    for (int r = 0; r < 8; ++r)
        sol[static_cast<std::size_t>(r)] =
            aug[static_cast<std::size_t>(r)][8] / aug[static_cast<std::size_t>(r)][static_cast<std::size_t>(r)];
    return {Quaternion{sol[0], sol[1], sol[2], sol[3]},
            Quaternion{sol[4], sol[5], sol[6], sol[7]}};
}

// Example 1: psi'' + j psi' + (1 - k) psi = 0; solution basis
// (e^{-ix}, e^{-(i+j)x}); the printed pair (e^{-ix}, e^{(i-j)x}) is kept
// for the Wronskian-modulus value sqrt(5).
const ConstCoeffEq kEx1{-qj, -(Quaternion{1.0} - qk)};
// Example 3: psi'' + i psi' + (k/2) psi = 0.
const ConstCoeffEq kEx3{-qi, qk * -0.5};

CheckResult example1_wronskian() {
    CheckResult r{"example1-wronskian", 1, false, ""};
    const FundamentalPair pair(QExpr::exp(-qi), QExpr::exp(qi - qj));
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const double x = 2.0 * t / 19.0;
        worst = std::max(worst, std::abs(modulus_squared(pair, x) - 5.0));
    }
    const double w_at_0 = std::sqrt(modulus_squared(pair, 0.0));
    worst = std::max(worst, std::abs(w_at_0 - std::sqrt(5.0)));
    r.pass = worst <= 1e-10;
    r.detail = "|W|^2 = 5 at 20 points, max deviation " + fmt(worst);
    return r;
}

CheckResult example1_residual(double perturb) {
    CheckResult r{"example1-residual", 0, false, ""};
    ConstCoeffEq eq = kEx1;
    eq.b.w += perturb;
    const IVP ivp = IVP::constant(eq, 0.0, {}, {});
    // Under ij = k the exponent i-j does not satisfy q^2 + jq + (1-k) = 0;
    // its conjugate -(i+j) does (j e^{(i-j)x} = e^{-(i+j)x} j), and it is
    // also the basis used for the same equation in the forced example.
    double worst = 0.0;
    for (const QExpr& sol : {QExpr::exp(-qi), QExpr::exp(-(qi + qj))})
        for (int t = 0; t <= 40; ++t)
            worst = std::max(worst, residual(sol, ivp, 2.0 * t / 40.0).norm());
    r.pass = worst <= 1e-10;
    r.detail = "max residual " + fmt(worst) +
               (perturb != 0.0 ? " (perturb " + fmt(perturb) + ")" : "");
    return r;
}

CheckResult example2_reduction() {
    CheckResult r{"example2-reduction", 2, false, ""};
    const LinOp a = LinOp::left_mul(qi) + LinOp::right_mul(qi - qj);
    const OpResolution res = resolve(a);
    const LinOp expected_inv = LinOp::left_mul(qi) - LinOp::right_mul(qi - qj);
    const double pinv_err = (res.pinv - expected_inv).max_abs();

    // The printed result exp[(i-j)x]*j equals exp[-(i+j)x] with the factor j
    // moved through the exponential; only the latter solves the equation
    // under ij = k, so that is the target (right factor still j).
    const QExpr xs = reduce_order(kEx1, -qi);
    const QExpr phi = QExpr::exp(-qi);
    const QExpr target = QExpr::exp(-(qi + qj));
    const auto [c, d] = fit_right_factors(
        [&](double x) { return xs.eval(x); },
        [&](double x) { return target.eval(x); },
        [&](double x) { return phi.eval(x); }, 0.4, 1.3);
    double worst = 0.0;
    for (int t = 0; t <= 100; ++t) {
        const double x = 2.0 * t / 100.0;
        worst = std::max(worst,
                         (xs.eval(x) - (target.eval(x) * c + phi.eval(x) * d)).norm());
    }
    const double unit_err = std::abs(c.norm() - 1.0);
    r.pass = res.invertible && pinv_err <= 1e-10 && worst <= 1e-8 && unit_err <= 1e-8;
    r.detail = "xi = exp[-(i+j)x]*(" + quatode::to_string(c) +
               "), pointwise deviation " + fmt(worst) + ", pinv deviation " + fmt(pinv_err);
    return r;
}

CheckResult example3_kernel() {
    CheckResult r{"example3-kernel", 3, false, ""};
    const Quaternion q = (qi + qj) * -0.5;
    const LinOp a = LinOp::left_mul(-q) + LinOp::right_mul(kEx3.a - q);
    const OpResolution res = resolve(a);
    const Quaternion ker_one = res.ker_proj.apply(Quaternion{1.0});
    const double ker_err = (ker_one - (Quaternion{1.0} + qk) * 0.5).norm();

    const QExpr xs = reduce_order(kEx3, q);
    const QExpr phi = QExpr::exp(q);
    const QExpr target = QExpr::prod(
        QExpr::sum({QExpr::monomial(1), QExpr::constant((qi - qj) * 0.5)}),
        QExpr::exp(q));
    const auto [c, d] = fit_right_factors(
        [&](double x) { return xs.eval(x); },
        [&](double x) { return target.eval(x); },
        [&](double x) { return phi.eval(x); }, 0.4, 1.3);
    double worst = 0.0;
    for (int t = 0; t <= 100; ++t) {
        const double x = 2.0 * t / 100.0;
        worst = std::max(worst,
                         (xs.eval(x) - (target.eval(x) * c + phi.eval(x) * d)).norm());
    }

    // Negative control: x e^{qx} alone is not a solution.
    const QExpr bare = QExpr::prod(QExpr::monomial(1), QExpr::exp(q));
    const IVP ivp = IVP::constant(kEx3, 0.0, {}, {});
    double bare_residual = 0.0;
    for (int t = 0; t <= 40; ++t)
        bare_residual = std::max(bare_residual, residual(bare, ivp, 2.0 * t / 40.0).norm());

    r.pass = !res.invertible && res.rank == 2 && ker_err <= 1e-10 && worst <= 1e-8 &&
             bare_residual > 0.1;
    r.detail = "rank " + std::to_string(res.rank) + ", right factor " +
               quatode::to_string(c) + ", pointwise deviation " + fmt(worst) +
               ", bare-term residual " + fmt(bare_residual);
    return r;
}

CheckResult example4_variation() {
    CheckResult r{"example4-variation", 4, false, ""};
    const QExpr phi = QExpr::exp(-qi);
    const QExpr xi = QExpr::exp(-(qi + qj));
    const QExpr rho = QExpr::left_scale(qi, QExpr::monomial(1));
    const VariationResult vr = variation_of_parameters(phi, xi, rho, 0.0, 0.0, 2.0);

    double nu1p_err = 0.0;
    for (int t = 0; t <= 20; ++t) {
        const double x = 2.0 * t / 20.0;
        const Quaternion expected = exp_qx(qi, x) * x * qk;
        nu1p_err = std::max(nu1p_err, (vr.nu1_prime(x) - expected).norm());
    }

    // psi_p = (1/2)[(i+j)x + k]; our definite-integral convention shifts the
    // particular solution by a homogeneous piece, so fit that piece at x0.
    auto targetf = [](double x) { return ((qi + qj) * x + qk) * 0.5; };
    const Quaternion target_d = (qi + qj) * 0.5;
    const auto [c1, c2] = solve_right_constants(
        phi, xi, 0.0, targetf(0.0) - vr.particular(0.0),
        target_d - vr.particular_prime(0.0));
    double worst = 0.0;
    for (int t = 0; t <= 200; ++t) {
        const double x = 2.0 * t / 200.0;
        const Quaternion ours =
            vr.particular(x) + phi.eval(x) * c1 + xi.eval(x) * c2;
        worst = std::max(worst, (ours - targetf(x)).norm());
    }
    r.pass = nu1p_err <= 1e-10 && worst <= 1e-6;
    r.detail = "nu1' deviation " + fmt(nu1p_err) + ", psi_p deviation " + fmt(worst);
    return r;
}

CheckResult theorem2_scaling() {
    CheckResult r{"theorem2-scaling", 5, false, ""};
    // Example 1: Re(alpha) = 0, so |W| is constant sqrt(5).
    const FundamentalPair ex1(QExpr::exp(-qi), QExpr::exp(qi - qj));
    const QExpr alpha1 = QExpr::constant(-qj);
    double worst = 0.0;
    for (int t = 0; t <= 8; ++t) {
        const auto [lhs, rhs] = scaling_check(ex1, alpha1, 0.0, 2.0 * t / 8.0);
        worst = std::max(worst, std::abs(lhs - rhs) / rhs);
    }

    std::mt19937 rng(20230601);
    for (int it = 0; it < 25; ++it) {
        const Quaternion q = random_quat(rng);
        const Quaternion a = random_quat(rng);
        const ConstCoeffEq eq{a, q * q - a * q};
        const FundamentalPair pair(QExpr::exp(q), reduce_order(eq, q));
        const QExpr alpha = QExpr::constant(a);
        for (int t = 1; t <= 8; ++t) {
            const double x1 = 2.0 * t / 8.0;
            const auto [lhs, rhs] = scaling_check(pair, alpha, 0.0, x1);
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(rhs, 1e-300));
        }
    }
    r.pass = worst <= 1e-6;
    r.detail = "25 random equations + Example 1, worst relative deviation " + fmt(worst);
    return r;
}

CheckResult dieudonne_equivalence() {
    CheckResult r{"dieudonne-equivalence", 6, false, ""};
    std::mt19937 rng(7771);
    std::uniform_real_distribution<double> xs(-1.0, 1.5);
    double worst = 0.0;
    for (int it = 0; it < 100; ++it) {
        auto random_fn = [&]() {
            return QExpr::sum(
                {QExpr::left_scale(random_quat(rng), QExpr::exp(random_quat(rng))),
                 QExpr::prod(QExpr::monomial(it % 3),
                             QExpr::right_scale(QExpr::exp(random_quat(rng)),
                                                random_quat(rng)))});
        };
        const FundamentalPair pair(random_fn(), random_fn());
        const double x = xs(rng);
        const double w2 = modulus_squared(pair, x);
        const double d2 = dieudonne_det_squared(pair, x);
        worst = std::max(worst, std::abs(w2 - d2) / std::max(1.0, std::abs(w2)));
    }
    r.pass = worst <= 1e-10;
    r.detail = "100 random pairs, worst relative deviation " + fmt(worst);
    return r;
}

CheckResult operator_algebra() {
    CheckResult r{"operator-algebra", 7, false, ""};
    std::mt19937 rng(424242);
    double worst = 0.0;
    for (int it = 0; it < 100; ++it) {
        const Quaternion q = random_quat(rng), p = random_quat(rng);
        const LinOp lq = LinOp::left_mul(q), lp = LinOp::left_mul(p);
        const LinOp rq = LinOp::right_mul(q), rp = LinOp::right_mul(p);
        worst = std::max(worst, (lq * lp - LinOp::left_mul(q * p)).max_abs());
        worst = std::max(worst, (rq * rp - LinOp::right_mul(p * q)).max_abs());
        worst = std::max(worst, (lq * rp - rp * lq).max_abs());
    }
    r.pass = worst <= 1e-12;
    r.detail = "100 random pairs, worst entrywise deviation " + fmt(worst);
    return r;
}

CheckResult oracle_agreement() {
    CheckResult r{"oracle-agreement", 8, false, ""};
    struct Case {
        ConstCoeffEq eq;
        QExpr rho;
        QExpr analytic;
    };
    const QExpr zero = QExpr::constant({});
    std::vector<Case> cases;
    cases.push_back({kEx1, zero, QExpr::exp(-qi)});
    cases.push_back({kEx1, zero, QExpr::right_scale(QExpr::exp(-(qi + qj)), qj)});
    cases.push_back({kEx3, zero,
                     QExpr::prod(QExpr::sum({QExpr::monomial(1),
                                             QExpr::constant((qi - qj) * 0.5)}),
                                 QExpr::exp((qi + qj) * -0.5))});
    // Example 4: homogeneous basis with q1 = q2 = 1 plus the particular part.
    cases.push_back({kEx1, QExpr::left_scale(qi, QExpr::monomial(1)),
                     QExpr::sum({QExpr::exp(-qi), QExpr::exp(-(qi + qj)),
                                 QExpr::left_scale((qi + qj) * 0.5, QExpr::monomial(1)),
                                 QExpr::constant(qk * 0.5)})});

    double worst = 0.0;
    for (const Case& c : cases) {
        IVP ivp;
        ivp.alpha = QExpr::constant(c.eq.a);
        ivp.beta = QExpr::constant(c.eq.b);
        ivp.rho = c.rho;
        ivp.x0 = 0.0;
        ivp.f = c.analytic.eval(0.0);
        ivp.g = c.analytic.derivative().eval(0.0);
        const Trajectory traj = integrate(to_real_system(ivp), 2.0, 1e-3);
        for (const auto& s : traj.samples)
            worst = std::max(worst, (s.psi - c.analytic.eval(s.x)).norm());
    }

    // Observed convergence order on Example 1 (errors at h and h/2).
    IVP conv;
    conv.alpha = QExpr::constant(kEx1.a);
    conv.beta = QExpr::constant(kEx1.b);
    conv.rho = zero;
    conv.x0 = 0.0;
    conv.f = Quaternion{1.0};
    conv.g = -qi;
    const QExpr analytic = QExpr::exp(-qi);
    auto end_error = [&](double h) {
        const Trajectory t = integrate(to_real_system(conv), 2.0, h);
        return (t.samples.back().psi - analytic.eval(2.0)).norm();
    };
    const double order = std::log2(end_error(0.05) / end_error(0.025));

    // Forward-backward round trip on the full Example 4 IVP.
    IVP ex4;
    ex4.alpha = QExpr::constant(kEx1.a);
    ex4.beta = QExpr::constant(kEx1.b);
    ex4.rho = QExpr::left_scale(qi, QExpr::monomial(1));
    ex4.x0 = 0.0;
    ex4.f = Quaternion{1.0, 0.5, -0.25, 0.75};
    ex4.g = Quaternion{-0.5, 1.0, 0.0, 0.25};
    const double probe = uniqueness_probe(ex4, 2.0, 1e-3);

    r.pass = worst <= 1e-5 && order >= 3.7 && order <= 4.3 && probe < 1e-6;
    r.detail = "max |analytic - rk4| " + fmt(worst) + ", order " + fmt(order) +
               ", round-trip " + fmt(probe);
    return r;
}

} // namespace

std::vector<std::string> check_names() {
    return {"example1-wronskian", "example1-residual",   "example2-reduction",
            "example3-kernel",    "example4-variation",  "theorem2-scaling",
            "dieudonne-equivalence", "operator-algebra", "oracle-agreement"};
}

std::vector<CheckResult> run_checks(double perturb) {
    std::vector<CheckResult> out;
    out.push_back(example1_wronskian());
    out.push_back(example1_residual(perturb));
    out.push_back(example2_reduction());
    out.push_back(example3_kernel());
    out.push_back(example4_variation());
    out.push_back(theorem2_scaling());
    out.push_back(dieudonne_equivalence());
    out.push_back(operator_algebra());
    out.push_back(oracle_agreement());
    return out;
}

} // namespace quatode::verify

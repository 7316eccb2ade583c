#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "quatode/wronskian.hpp"

using namespace quatode;

namespace {
const Quaternion qi = Quaternion::i();
const Quaternion qj = Quaternion::j();
const Quaternion qk = Quaternion::k();

Quaternion random_quat(std::mt19937& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> d(-scale, scale);
    return {d(rng), d(rng), d(rng), d(rng)};
}

FundamentalPair example1_pair() {
    return FundamentalPair(QExpr::exp(-qi), QExpr::exp(qi - qj));
}
} // namespace

TEST_CASE("variants vanish for a dependent pair") {
    const QExpr phi = QExpr::exp(qi - qj);
    const QExpr xi = QExpr::right_scale(phi, Quaternion{0.5, 1, -2, 0.25});
    const FundamentalPair pair(phi, xi);
    for (double x : {0.1, 0.8, 1.9}) {
        const WronskianVariants v = variants(pair, x);
        CHECK(v.wl.norm() < 1e-12);
        CHECK(v.wr.norm() < 1e-12);
        CHECK(v.wl_tilde.norm() < 1e-12);
        CHECK(v.wr_tilde.norm() < 1e-12);
    }
}

TEST_CASE("complex pair reduces to the classic Wronskian") {
    const FundamentalPair pair(QExpr::exp(-qi), QExpr::exp(qi));
    for (double x : {0.0, 0.5, 1.3}) {
        const WronskianVariants v = variants(pair, x);
        // phi xi' - phi' xi = 2i for (e^{-ix}, e^{ix})
        CHECK((v.wl - 2.0 * qi).norm() < 1e-13);
        CHECK((v.wr - 2.0 * qi).norm() < 1e-13);
        CHECK((v.wl_tilde - 2.0 * qi).norm() < 1e-13);
        CHECK((v.wr_tilde - 2.0 * qi).norm() < 1e-13);
        CHECK(modulus_squared(pair, x) == doctest::Approx(4.0).epsilon(1e-12));
    }
}

TEST_CASE("first worked example has |W| = sqrt(5) everywhere") {
    const FundamentalPair pair = example1_pair();
    for (int t = 0; t < 20; ++t) {
        const double x = 2.0 * t / 19.0;
        CHECK(std::abs(modulus_squared(pair, x) - 5.0) < 1e-10);
        const WronskianVariants v = variants(pair, x);
        for (const Quaternion& w : {v.wl, v.wr, v.wl_tilde, v.wr_tilde})
            CHECK(w.norm() == doctest::Approx(std::sqrt(5.0)).epsilon(1e-10));
    }
}

TEST_CASE("modulus_squared of a dependent pair is zero") {
    const QExpr phi = QExpr::exp((qi + qj) * 0.5);
    const QExpr xi = QExpr::right_scale(phi, Quaternion{1, 2, 3, 4});
    const FundamentalPair pair(phi, xi);
    for (double x : {0.0, 0.7, 1.6}) CHECK(modulus_squared(pair, x) < 1e-12);
}

TEST_CASE("complex subcase equals the squared classic Wronskian") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    std::uniform_real_distribution<double> xs(0.0, 2.0);
    for (int t = 0; t < 20; ++t) {
        const Quaternion c1{d(rng), d(rng), 0, 0}, c2{d(rng), d(rng), 0, 0};
        const QExpr phi = QExpr::left_scale(c1, QExpr::exp(qi * d(rng)));
        const QExpr xi = QExpr::left_scale(c2, QExpr::exp(qi * d(rng)));
        const FundamentalPair pair(phi, xi);
        const double x = xs(rng);
        const Quaternion classic = phi.eval(x) * pair.xi_d.eval(x) -
                                   pair.phi_d.eval(x) * xi.eval(x);
        CHECK(modulus_squared(pair, x) ==
              doctest::Approx(classic.norm_sq()).epsilon(1e-10));
    }
}

TEST_CASE("all four variant moduli agree with modulus_squared") {
    std::mt19937 rng(32);
    std::uniform_real_distribution<double> xs(0.1, 1.9);
    for (int t = 0; t < 40; ++t) {
        const FundamentalPair pair(
            QExpr::left_scale(random_quat(rng), QExpr::exp(random_quat(rng))),
            QExpr::left_scale(random_quat(rng), QExpr::exp(random_quat(rng))));
        const double x = xs(rng);
        const Quaternion phi = pair.phi.eval(x), xi = pair.xi.eval(x);
        const Quaternion dphi = pair.phi_d.eval(x);
        if (phi.norm() < 1e-3 || xi.norm() < 1e-3 || dphi.norm() < 1e-3) continue;
        const double w2 = modulus_squared(pair, x);
        const WronskianVariants v = variants(pair, x);
        for (const Quaternion& w : {v.wl, v.wr, v.wl_tilde, v.wr_tilde})
            CHECK(w.norm_sq() == doctest::Approx(w2).epsilon(1e-10));
    }
}

TEST_CASE("dieudonne determinant equals the Wronskian modulus") {
    CHECK(dieudonne_det_squared(example1_pair(), 0.9) == doctest::Approx(5.0).epsilon(1e-12));
    // M = identity at x = 0 for (1, x)
    const FundamentalPair unit(QExpr::constant(Quaternion{1.0}), QExpr::monomial(1));
    CHECK(dieudonne_det_squared(unit, 0.0) == doctest::Approx(1.0));

    std::mt19937 rng(33);
    std::uniform_real_distribution<double> xs(-1.0, 1.5);
    for (int t = 0; t < 100; ++t) {
        const FundamentalPair pair(
            QExpr::sum({QExpr::left_scale(random_quat(rng), QExpr::exp(random_quat(rng))),
                        QExpr::prod(QExpr::monomial(t % 3), QExpr::exp(random_quat(rng)))}),
            QExpr::sum({QExpr::left_scale(random_quat(rng), QExpr::exp(random_quat(rng))),
                        QExpr::constant(random_quat(rng))}));
        const double x = xs(rng);
        const double w2 = modulus_squared(pair, x);
        CHECK(dieudonne_det_squared(pair, x) ==
              doctest::Approx(w2).epsilon(1e-10));
        CHECK(w2 >= 0.0);
    }
}

TEST_CASE("scaling law") {
    const QExpr alpha = QExpr::constant(-qj); // Re = 0
    const FundamentalPair pair = example1_pair();
    for (double x1 : {0.0, 0.5, 1.0, 2.0}) {
        const auto [lhs, rhs] = scaling_check(pair, alpha, 0.0, x1);
        CHECK(lhs == doctest::Approx(std::sqrt(5.0)).epsilon(1e-10));
        CHECK(rhs == doctest::Approx(std::sqrt(5.0)).epsilon(1e-10));
    }
    // trivial x1 = x0
    const auto [l0, r0] = scaling_check(pair, alpha, 0.7, 0.7);
    CHECK(l0 == doctest::Approx(r0));
}

TEST_CASE("scaling law with a real coefficient alpha = 1") {
    // phi = e^{q1 x}, xi = e^{q2 x} solve psi'' = a psi' + b psi when
    // q^2 = a q + b; pick a = 1, q1, q2 the complex roots of q^2 - q - b = 0
    // with b = -1: q = (1 +/- i sqrt(3)) / 2.
    const Quaternion q1{0.5, std::sqrt(3.0) / 2.0, 0, 0};
    const Quaternion q2{0.5, -std::sqrt(3.0) / 2.0, 0, 0};
    const FundamentalPair pair(QExpr::exp(q1), QExpr::exp(q2));
    const QExpr alpha = QExpr::constant(Quaternion{1.0});
    const double w0 = std::sqrt(modulus_squared(pair, 0.0));
    for (double x1 : {0.5, 1.0, 2.0}) {
        const auto [lhs, rhs] = scaling_check(pair, alpha, 0.0, x1);
        CHECK(lhs == doctest::Approx(std::exp(x1) * w0).epsilon(1e-6));
        CHECK(rhs == doctest::Approx(std::exp(x1) * w0).epsilon(1e-6));
    }
}

TEST_CASE("dependence test") {
    const QExpr phi = QExpr::exp(-qi);
    CHECK(dependence_test(FundamentalPair(phi, QExpr::right_scale(phi, qk)), 0.3));
    CHECK_FALSE(dependence_test(example1_pair(), 0.0));
    CHECK(dependence_test(FundamentalPair(phi, QExpr::constant(Quaternion{})), 1.0));
}

TEST_CASE("naive complex formula fails on quaternionic dependent pairs") {
    // phi xi' - phi' xi is generically nonzero even though xi = phi q.
    // A single exponential commutes with its own derivative, so phi must mix
    // two exponential axes (at different frequencies, or the cross terms
    // cancel) for the naive formula to misfire.
    const QExpr phi = QExpr::sum({QExpr::exp(qi), QExpr::exp(qj * 2.0)});
    const QExpr xi = QExpr::right_scale(phi, qk);
    const FundamentalPair pair(phi, xi);
    const double x = 0.9;
    const Quaternion naive =
        phi.eval(x) * pair.xi_d.eval(x) - pair.phi_d.eval(x) * xi.eval(x);
    CHECK(naive.norm() > 1e-3);
    CHECK(modulus_squared(pair, x) < 1e-12);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "quatode/linop.hpp"

using namespace quatode;

namespace {
const Quaternion qi = Quaternion::i();
const Quaternion qj = Quaternion::j();
const Quaternion qk = Quaternion::k();

Quaternion random_quat(std::mt19937& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> d(-scale, scale);
    return {d(rng), d(rng), d(rng), d(rng)};
}

bool is_skew(const LinOp& a, double tol = 1e-14) {
    return (a + a.transpose()).max_abs() < tol;
}
} // namespace

TEST_CASE("left_mul and right_mul patterns") {
    CHECK((LinOp::left_mul(Quaternion{1.0}) - LinOp::identity()).max_abs() == 0.0);
    CHECK((LinOp::right_mul(Quaternion{1.0}) - LinOp::identity()).max_abs() == 0.0);

    const LinOp li = LinOp::left_mul(qi);
    const double expected[16] = {0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0};
    for (int t = 0; t < 16; ++t) CHECK(li.m[static_cast<std::size_t>(t)] == expected[t]);

    // apply(left_mul(j), i) = j i = -k ; apply(right_mul(i), j) = j i = -k
    CHECK((LinOp::left_mul(qj).apply(qi) + qk).norm() == 0.0);
    CHECK((LinOp::right_mul(qi).apply(qj) + qk).norm() == 0.0);

    std::mt19937 rng(21);
    for (int t = 0; t < 50; ++t) {
        const Quaternion q = random_quat(rng), psi = random_quat(rng);
        CHECK((LinOp::left_mul(q).apply(psi) - q * psi).norm() < 1e-13);
        CHECK((LinOp::right_mul(q).apply(psi) - psi * q).norm() < 1e-13);
    }
}

TEST_CASE("operator homomorphism and commutation") {
    std::mt19937 rng(22);
    for (int t = 0; t < 100; ++t) {
        const Quaternion q = random_quat(rng), p = random_quat(rng);
        const LinOp lq = LinOp::left_mul(q), lp = LinOp::left_mul(p);
        const LinOp rq = LinOp::right_mul(q), rp = LinOp::right_mul(p);
        CHECK((lq * lp - LinOp::left_mul(q * p)).max_abs() < 1e-12);
        CHECK((rq * rp - LinOp::right_mul(p * q)).max_abs() < 1e-12);
        CHECK((lq * rp - rp * lq).max_abs() < 1e-12);
    }
}

TEST_CASE("pure imaginary operators are skew-symmetric with even rank") {
    std::mt19937 rng(23);
    for (int t = 0; t < 30; ++t) {
        Quaternion u = random_quat(rng), v = random_quat(rng);
        u.w = 0.0;
        v.w = 0.0;
        const LinOp a = LinOp::left_mul(u) + LinOp::right_mul(v);
        CHECK(is_skew(a));
        const int rank = resolve(a).rank;
        CHECK(rank % 2 == 0);
    }
}

TEST_CASE("resolve on the reduction-of-order operators") {
    // invertible case: (L_i - R_{i-j})(L_i + R_{i-j}) = 1
    const LinOp a = LinOp::left_mul(qi) + LinOp::right_mul(qi - qj);
    const OpResolution ra = resolve(a);
    CHECK(ra.invertible);
    CHECK(ra.rank == 4);
    CHECK((ra.pinv - (LinOp::left_mul(qi) - LinOp::right_mul(qi - qj))).max_abs() < 1e-10);
    CHECK((a * ra.pinv - LinOp::identity()).max_abs() < 1e-10);
    CHECK(ra.ker_proj.max_abs() < 1e-12);

    // kernel case: L_{(i+j)/2} + R_{(j-i)/2}
    const LinOp b = LinOp::left_mul((qi + qj) * 0.5) + LinOp::right_mul((qj - qi) * 0.5);
    const OpResolution rb = resolve(b);
    CHECK_FALSE(rb.invertible);
    CHECK(rb.rank == 2);
    const Quaternion p1 = rb.ker_proj.apply(Quaternion{1.0});
    CHECK((p1 - (Quaternion{1.0} + qk) * 0.5).norm() < 1e-10);
}

TEST_CASE("resolve invariants on random operators") {
    std::mt19937 rng(24);
    for (int t = 0; t < 50; ++t) {
        Quaternion u = random_quat(rng), v = random_quat(rng);
        if (t % 3 == 0) { // force rank-deficient skew cases into the mix
            u.w = 0.0;
            v.w = 0.0;
            v = u * (t % 2 ? 1.0 : -1.0);
        }
        const LinOp a = LinOp::left_mul(u) + LinOp::right_mul(v);
        const OpResolution r = resolve(a);
        CHECK((a * r.pinv * a - a).max_abs() < 1e-10);
        CHECK((r.pinv * a * r.pinv - r.pinv).max_abs() < 1e-10);
        CHECK((r.ker_proj * r.ker_proj - r.ker_proj).max_abs() < 1e-10);
        CHECK((r.ker_proj - r.ker_proj.transpose()).max_abs() < 1e-12);
        CHECK((a * r.ker_proj).max_abs() < 1e-10);
        CHECK(r.invertible == (r.rank == 4));
        if (r.invertible) {
            CHECK(r.ker_proj.max_abs() < 1e-12);
            CHECK((a * r.pinv - LinOp::identity()).max_abs() < 1e-10);
        }
    }
}

TEST_CASE("resolve of the zero operator") {
    const OpResolution r = resolve(LinOp::zero());
    CHECK(r.rank == 0);
    CHECK_FALSE(r.invertible);
    CHECK((r.ker_proj - LinOp::identity()).max_abs() < 1e-14);
    CHECK(r.pinv.max_abs() == 0.0);
}

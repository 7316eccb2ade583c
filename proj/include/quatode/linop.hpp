#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "quatode/quaternion.hpp"

namespace quatode {

using Vec4 = std::array<double, 4>;

/// A real 4x4 matrix acting on the component vector (psi0, psi1, psi2, psi3).
/// Covers every real-linear combination/product of left/right multiplication
/// operators.
struct LinOp {
    std::array<double, 16> m{}; // row-major

    double& at(int r, int c) { return m[static_cast<std::size_t>(4 * r + c)]; }
    double at(int r, int c) const { return m[static_cast<std::size_t>(4 * r + c)]; }

    static LinOp zero() { return LinOp{}; }

    static LinOp identity() {
        LinOp a;
        for (int d = 0; d < 4; ++d) a.at(d, d) = 1.0;
        return a;
    }

    /// Matrix of psi -> q*psi (left pattern).
    static LinOp left_mul(const Quaternion& q) {
        LinOp a;
        const double q0 = q.w, q1 = q.x, q2 = q.y, q3 = q.z;
        a.m = {q0, -q1, -q2, -q3,
               q1,  q0, -q3,  q2,
               q2,  q3,  q0, -q1,
               q3, -q2,  q1,  q0};
        return a;
    }

    /// Matrix of psi -> psi*p (right pattern).
    static LinOp right_mul(const Quaternion& p) {
        LinOp a;
        const double p0 = p.w, p1 = p.x, p2 = p.y, p3 = p.z;
        a.m = {p0, -p1, -p2, -p3,
               p1,  p0,  p3, -p2,
               p2, -p3,  p0,  p1,
               p3,  p2, -p1,  p0};
        return a;
    }

    Vec4 apply(const Vec4& v) const {
        Vec4 r{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) r[static_cast<std::size_t>(i)] += at(i, j) * v[static_cast<std::size_t>(j)];
        return r;
    }

    Quaternion apply(const Quaternion& q) const {
        return from_components(apply(q.components()));
    }

    LinOp operator*(const LinOp& o) const {
        LinOp r;
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k) {
                const double a = at(i, k);
                if (a == 0.0) continue;
                for (int j = 0; j < 4; ++j) r.at(i, j) += a * o.at(k, j);
            }
        return r;
    }

    LinOp operator+(const LinOp& o) const {
        LinOp r;
        for (std::size_t t = 0; t < 16; ++t) r.m[t] = m[t] + o.m[t];
        return r;
    }

    LinOp operator-(const LinOp& o) const {
        LinOp r;
        for (std::size_t t = 0; t < 16; ++t) r.m[t] = m[t] - o.m[t];
        return r;
    }

    LinOp operator*(double s) const {
        LinOp r;
        for (std::size_t t = 0; t < 16; ++t) r.m[t] = m[t] * s;
        return r;
    }

    LinOp transpose() const {
        LinOp r;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) r.at(i, j) = at(j, i);
        return r;
    }

    double max_abs() const {
        double a = 0.0;
        for (double v : m) a = std::max(a, std::abs(v));
        return a;
    }
};

/// Rank structure of a LinOp: Moore-Penrose pseudo-inverse, orthogonal
/// projector onto the kernel, rank, invertibility flag.
struct OpResolution {
    LinOp pinv;
    LinOp ker_proj;
    int rank = 0;
    bool invertible = false;
};

namespace detail {

/// Cyclic Jacobi eigen-decomposition of a symmetric 4x4 matrix.
/// On return b is (numerically) diagonal and v holds the eigenvectors
/// in its columns: b_in = v * diag * v^T.
inline void jacobi_eigen_sym4(LinOp& b, LinOp& v) {
    v = LinOp::identity();
    for (int sweep = 0; sweep < 50; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) off += b.at(p, q) * b.at(p, q);
        if (off < 1e-300) break;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) {
                const double apq = b.at(p, q);
                if (apq == 0.0) continue;
                const double app = b.at(p, p), aqq = b.at(q, q);
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int r = 0; r < 4; ++r) {
                    const double brp = b.at(r, p), brq = b.at(r, q);
                    b.at(r, p) = c * brp - s * brq;
                    b.at(r, q) = s * brp + c * brq;
                }
                for (int r = 0; r < 4; ++r) {
                    const double bpr = b.at(p, r), bqr = b.at(q, r);
                    b.at(p, r) = c * bpr - s * bqr;
                    b.at(q, r) = s * bpr + c * bqr;
                }
                for (int r = 0; r < 4; ++r) {
                    const double vrp = v.at(r, p), vrq = v.at(r, q);
                    v.at(r, p) = c * vrp - s * vrq;
                    v.at(r, q) = s * vrp + c * vrq;
                }
            }
    }
}

} // namespace detail

/// SVD-based resolution of a 4x4 operator via eigen-decomposition of A^T A.
/// Rank threshold: 1e-10 * (largest singular value, or 1 for A = 0).
/// Rank-deficiency is data, not an error.
inline OpResolution resolve(const LinOp& a) {
    LinOp b = a.transpose() * a; // symmetric positive semidefinite
    LinOp v;
    detail::jacobi_eigen_sym4(b, v);

    // Singular values as |A v_d| rather than sqrt(eigenvalue): forming A^T A
    // floors computable eigenvalues at ~eps*smax^2, which would misclassify
    // kernel directions as rank sqrt(eps)*smax >> tau_rank.
    std::array<Vec4, 4> av{};
    std::array<double, 4> sigma{};
    for (int d = 0; d < 4; ++d) {
        Vec4 vd{};
        for (int r = 0; r < 4; ++r) vd[static_cast<std::size_t>(r)] = v.at(r, d);
        av[static_cast<std::size_t>(d)] = a.apply(vd);
        double s2 = 0.0;
        for (double c : av[static_cast<std::size_t>(d)]) s2 += c * c;
        sigma[static_cast<std::size_t>(d)] = std::sqrt(s2);
    }
    double smax = 0.0;
    for (double s : sigma) smax = std::max(smax, s);
    const double tau_rank = 1e-10 * (smax > 0.0 ? smax : 1.0);

    OpResolution res;
    res.pinv = LinOp::zero();
    res.ker_proj = LinOp::zero();
    for (int d = 0; d < 4; ++d) {
        Vec4 vd{};
        for (int r = 0; r < 4; ++r) vd[static_cast<std::size_t>(r)] = v.at(r, d);
        if (sigma[static_cast<std::size_t>(d)] > tau_rank) {
            ++res.rank;
            Vec4 ud = av[static_cast<std::size_t>(d)];
            const double inv_s = 1.0 / sigma[static_cast<std::size_t>(d)];
            for (auto& u : ud) u *= inv_s;
            // pinv += v_d u_d^T / sigma_d
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c)
                    res.pinv.at(r, c) += vd[static_cast<std::size_t>(r)] * ud[static_cast<std::size_t>(c)] * inv_s;
        } else {
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c)
                    res.ker_proj.at(r, c) += vd[static_cast<std::size_t>(r)] * vd[static_cast<std::size_t>(c)];
        }
    }
    res.invertible = (res.rank == 4);
    return res;
}

} // namespace quatode

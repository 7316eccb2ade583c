#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include "quatode/linop.hpp"
#include "quatode/problem.hpp"

namespace quatode {

using State8 = std::array<double, 8>; // psi components then psi' components

/// The quaternionic IVP rewritten as an 8-dimensional real first-order
/// system. The coefficient blocks are the left-pattern matrices of alpha
/// and beta, constructed through LinOp::left_mul.
struct RealSystem {
    IVP ivp;

    State8 initial() const {
        State8 y{};
        const auto fc = ivp.f.components(), gc = ivp.g.components();
        for (std::size_t d = 0; d < 4; ++d) {
            y[d] = fc[d];
            y[d + 4] = gc[d];
        }
        return y;
    }

    State8 rhs(double x, const State8& y) const {
        const LinOp la = LinOp::left_mul(ivp.alpha.eval(x));
        const LinOp lb = LinOp::left_mul(ivp.beta.eval(x));
        const auto rc = ivp.rho.eval(x).components();
        Vec4 psi{y[0], y[1], y[2], y[3]};
        Vec4 dpsi{y[4], y[5], y[6], y[7]};
        const Vec4 acc_a = la.apply(dpsi);
        const Vec4 acc_b = lb.apply(psi);
        State8 dy{};
        for (std::size_t d = 0; d < 4; ++d) {
            dy[d] = dpsi[d];
            dy[d + 4] = acc_a[d] + acc_b[d] + rc[d];
        }
        return dy;
    }
};

inline RealSystem to_real_system(const IVP& ivp) { return RealSystem{ivp}; }

struct TrajectorySample {
    double x;
    Quaternion psi, dpsi;
};

struct Trajectory {
    std::vector<TrajectorySample> samples; // strictly increasing or decreasing x
    double h = 0.0;
    std::string method = "rk4";
};

namespace detail {

inline State8 axpy(const State8& y, double s, const State8& d) {
    State8 r;
    for (std::size_t t = 0; t < 8; ++t) r[t] = y[t] + s * d[t];
    return r;
}

inline State8 rk4_step(const RealSystem& sys, double x, const State8& y, double h) {
    const State8 k1 = sys.rhs(x, y);
    const State8 k2 = sys.rhs(x + 0.5 * h, axpy(y, 0.5 * h, k1));
    const State8 k3 = sys.rhs(x + 0.5 * h, axpy(y, 0.5 * h, k2));
    const State8 k4 = sys.rhs(x + h, axpy(y, h, k3));
    State8 r;
    for (std::size_t t = 0; t < 8; ++t)
        r[t] = y[t] + h / 6.0 * (k1[t] + 2.0 * k2[t] + 2.0 * k3[t] + k4[t]);
    return r;
}

inline TrajectorySample to_sample(double x, const State8& y) {
    return {x, Quaternion{y[0], y[1], y[2], y[3]}, Quaternion{y[4], y[5], y[6], y[7]}};
}

} // namespace detail

/// Fixed-step classical RK4 from ivp.x0 to x_end; the final partial step is
/// shortened to land exactly on x_end. Backward integration when
/// x_end < x0. Throws NonFiniteState on overflow/NaN.
inline Trajectory integrate(const RealSystem& sys, double x_end, double h = 1e-3) {
    if (!(h > 0.0)) throw Error("integrate: step size must be positive");
    const double x0 = sys.ivp.x0;
    const double dir = (x_end >= x0) ? 1.0 : -1.0;
    Trajectory traj;
    traj.h = h;
    State8 y = sys.initial();
    double x = x0;
    traj.samples.push_back(detail::to_sample(x, y));
    while (dir * (x_end - x) > 1e-15 * std::max(1.0, std::abs(x_end))) {
        const double step = dir * std::min(h, dir * (x_end - x));
        y = detail::rk4_step(sys, x, y, step);
        x += step;
        for (double v : y)
            if (!std::isfinite(v))
                throw NonFiniteState("integrate: non-finite state at x = " +
                                     std::to_string(x));
        traj.samples.push_back(detail::to_sample(x, y));
    }
    return traj;
}

/// psi''(x) - alpha(x) psi'(x) - beta(x) psi(x) - rho(x), with exact
/// QExpr derivatives.
inline Quaternion residual(const QExpr& psi, const IVP& ivp, double x) {
    const QExpr d1 = psi.derivative();
    const QExpr d2 = d1.derivative();
    return d2.eval(x) - ivp.alpha.eval(x) * d1.eval(x) -
           ivp.beta.eval(x) * psi.eval(x) - ivp.rho.eval(x);
}

/// Max discrepancy between (a) integration at h vs h/2 and (b) a forward
/// then backward round trip. A falsifiable proxy for well-posedness.
inline double uniqueness_probe(const IVP& ivp, double x_end, double h = 1e-3) {
    const RealSystem sys = to_real_system(ivp);
    const Trajectory t1 = integrate(sys, x_end, h);
    const Trajectory t2 = integrate(sys, x_end, 0.5 * h);
    const TrajectorySample& e1 = t1.samples.back();
    const TrajectorySample& e2 = t2.samples.back();
    double disc = std::max((e1.psi - e2.psi).norm(), (e1.dpsi - e2.dpsi).norm());

    IVP back = ivp;
    back.x0 = x_end;
    back.f = e1.psi;
    back.g = e1.dpsi;
    const Trajectory t3 = integrate(to_real_system(back), ivp.x0, h);
    const TrajectorySample& e3 = t3.samples.back();
    disc = std::max(disc, (e3.psi - ivp.f).norm());
    disc = std::max(disc, (e3.dpsi - ivp.g).norm());
    return disc;
}

/// CSV export: x, psi0..psi3, dpsi0..dpsi3, residual_norm. The residual is
/// the centered finite-difference residual of the sampled trajectory
/// (zero at the end points, where no centered stencil exists).
inline void write_csv(const Trajectory& traj, const IVP& ivp, std::ostream& os) {
    os << "x,psi0,psi1,psi2,psi3,dpsi0,dpsi1,dpsi2,dpsi3,residual_norm\n";
    os << std::setprecision(15);
    const std::size_t n = traj.samples.size();
    for (std::size_t t = 0; t < n; ++t) {
        const auto& s = traj.samples[t];
        double rnorm = 0.0;
        if (t > 0 && t + 1 < n) {
            const auto& prev = traj.samples[t - 1];
            const auto& next = traj.samples[t + 1];
            const double hl = s.x - prev.x, hr = next.x - s.x;
            if (std::abs(hl - hr) < 1e-12 * std::max(hl, hr)) {
                const Quaternion second =
                    (next.psi - s.psi * 2.0 + prev.psi) / (hl * hr);
                const Quaternion res = second - ivp.alpha.eval(s.x) * s.dpsi -
                                       ivp.beta.eval(s.x) * s.psi - ivp.rho.eval(s.x);
                rnorm = res.norm();
            }
        }
        os << s.x;
        for (double c : s.psi.components()) os << ',' << c;
        for (double c : s.dpsi.components()) os << ',' << c;
        os << ',' << rnorm << '\n';
    }
}

/// Max finite-difference residual norm over the interior samples.
inline double max_fd_residual(const Trajectory& traj, const IVP& ivp) {
    double worst = 0.0;
    const std::size_t n = traj.samples.size();
    for (std::size_t t = 1; t + 1 < n; ++t) {
        const auto& prev = traj.samples[t - 1];
        const auto& s = traj.samples[t];
        const auto& next = traj.samples[t + 1];
        const double hl = s.x - prev.x, hr = next.x - s.x;
        if (std::abs(hl - hr) > 1e-12 * std::max(std::abs(hl), std::abs(hr))) continue;
        const Quaternion second = (next.psi - s.psi * 2.0 + prev.psi) / (hl * hr);
        const Quaternion res = second - ivp.alpha.eval(s.x) * s.dpsi -
                               ivp.beta.eval(s.x) * s.psi - ivp.rho.eval(s.x);
        worst = std::max(worst, res.norm());
    }
    return worst;
}

} // namespace quatode

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <iosfwd>
#include <sstream>
#include <string>

#include "quatode/errors.hpp"

namespace quatode {

/// One element of H = span{1, i, j, k} with i^2 = j^2 = k^2 = ijk = -1.
/// Immutable value type; all operations are pure.
struct Quaternion {
    double w = 0.0; // real part
    double x = 0.0; // i component
    double y = 0.0; // j component
    double z = 0.0; // k component

    constexpr Quaternion() = default;
    constexpr Quaternion(double w_, double x_, double y_, double z_)
        : w(w_), x(x_), y(y_), z(z_) {}
    constexpr Quaternion(double real) : w(real) {}

    static constexpr Quaternion i() { return {0, 1, 0, 0}; }
    static constexpr Quaternion j() { return {0, 0, 1, 0}; }
    static constexpr Quaternion k() { return {0, 0, 0, 1}; }

    constexpr bool operator==(const Quaternion&) const = default;

    constexpr Quaternion operator+(const Quaternion& o) const {
        return {w + o.w, x + o.x, y + o.y, z + o.z};
    }
    constexpr Quaternion operator-(const Quaternion& o) const {
        return {w - o.w, x - o.x, y - o.y, z - o.z};
    }
    constexpr Quaternion operator-() const { return {-w, -x, -y, -z}; }

    // Hamilton product; not commutative.
    constexpr Quaternion operator*(const Quaternion& o) const {
        return {w * o.w - x * o.x - y * o.y - z * o.z,
                w * o.x + x * o.w + y * o.z - z * o.y,
                w * o.y - x * o.z + y * o.w + z * o.x,
                w * o.z + x * o.y - y * o.x + z * o.w};
    }

    constexpr Quaternion operator*(double s) const { return {w * s, x * s, y * s, z * s}; }
    constexpr Quaternion operator/(double s) const { return {w / s, x / s, y / s, z / s}; }

    friend constexpr Quaternion operator*(double s, const Quaternion& q) { return q * s; }

    constexpr std::array<double, 4> components() const { return {w, x, y, z}; }

    double norm_sq() const { return w * w + x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm_sq()); }
    double max_abs() const {
        return std::max(std::max(std::abs(w), std::abs(x)),
                        std::max(std::abs(y), std::abs(z)));
    }
    constexpr bool is_finite() const {
        return std::isfinite(w) && std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

constexpr Quaternion conj(const Quaternion& q) { return {q.w, -q.x, -q.y, -q.z}; }

inline Quaternion from_components(const std::array<double, 4>& c) {
    return {c[0], c[1], c[2], c[3]};
}

/// conj(q)/|q|^2. Throws NearZeroQuaternion when |q| is below the
/// machine-epsilon scale guard 1e-12 * max(1, |q|_inf).
inline Quaternion inverse(const Quaternion& q) {
    const double tau = 1e-12 * std::max(1.0, q.max_abs());
    const double n2 = q.norm_sq();
    if (std::sqrt(n2) <= tau) {
        throw NearZeroQuaternion("inverse of near-zero quaternion (|q| <= " +
                                 std::to_string(tau) + ")");
    }
    return conj(q) / n2;
}

/// e^{qx} via polar decomposition:
///   e^{(w+v)x} = e^{wx} (cos(|v|x) + v_hat sin(|v|x)),  v the imaginary part.
/// For |v|x near zero the sin(theta)/theta series avoids the 0/0.
inline Quaternion exp_qx(const Quaternion& q, double x) {
    const double vnorm = std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
    const double theta = vnorm * x;
    const double scale = std::exp(q.w * x);
    double sinc; // sin(theta)/theta
    if (std::abs(theta) < 1e-4) {
        const double t2 = theta * theta;
        sinc = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
    } else {
        sinc = std::sin(theta) / theta;
    }
    // v_hat sin(theta) = v * x * sinc(theta), well defined for v = 0.
    const double s = x * sinc * scale;
    return {scale * std::cos(theta), q.x * s, q.y * s, q.z * s};
}

/// Renders "a+bi+cj+dk" with minus-sign normalization and zero terms dropped.
inline std::string to_string(const Quaternion& q) {
    std::ostringstream os;
    os.precision(12);
    bool first = true;
    auto emit = [&](double c, const char* unit) {
        if (c == 0.0) return;
        if (first) {
            if (unit[0] != '\0' && c == 1.0) {
                os << unit;
            } else if (unit[0] != '\0' && c == -1.0) {
                os << '-' << unit;
            } else {
                os << c << unit;
            }
        } else {
            os << (c < 0 ? "-" : "+");
            const double a = std::abs(c);
            if (unit[0] == '\0' || a != 1.0) os << a;
            os << unit;
        }
        first = false;
    };
    emit(q.w, "");
    emit(q.x, "i");
    emit(q.y, "j");
    emit(q.z, "k");
    if (first) os << "0";
    return os.str();
}

/// Parses the "a+bi+cj+dk" grammar with optional whitespace.
/// Throws Error on malformed input.
inline Quaternion parse_quaternion(const std::string& text) {
    std::string s;
    s.reserve(text.size());
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw Error("empty quaternion literal");

    Quaternion q{0, 0, 0, 0};
    std::size_t pos = 0;
    while (pos < s.size()) {
        double sign = 1.0;
        while (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
            if (s[pos] == '-') sign = -sign;
            ++pos;
        }
        if (pos >= s.size()) throw Error("dangling sign in quaternion literal: " + text);
        double coeff = 1.0;
        bool have_number = false;
        if (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.') {
            char* end = nullptr;
            coeff = std::strtod(s.c_str() + pos, &end);
            pos = static_cast<std::size_t>(end - s.c_str());
            have_number = true;
        }
        coeff *= sign;
        if (pos < s.size() && (s[pos] == 'i' || s[pos] == 'j' || s[pos] == 'k')) {
            switch (s[pos]) {
                case 'i': q.x += coeff; break;
                case 'j': q.y += coeff; break;
                case 'k': q.z += coeff; break;
            }
            ++pos;
        } else if (have_number) {
            q.w += coeff;
        } else {
            throw Error("malformed quaternion literal: " + text);
        }
    }
    return q;
}

inline std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
    return os << to_string(q);
}

} // namespace quatode

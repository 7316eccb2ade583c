#pragma once

#include <stdexcept>
#include <string>

namespace quatode {

/// Base class for all quatode errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Inversion of a quaternion whose modulus is below tolerance.
struct NearZeroQuaternion : Error {
    explicit NearZeroQuaternion(const std::string& msg) : Error(msg) {}
};

/// reduce_order called with an exponent q that does not satisfy q^2 = a q + b.
struct NotASolution : Error {
    explicit NotASolution(const std::string& msg) : Error(msg) {}
};

/// A fundamental pair failed the |W| independence test.
struct DependentPair : Error {
    explicit DependentPair(const std::string& msg) : Error(msg) {}
};

/// Numeric integration produced an overflow or NaN.
struct NonFiniteState : Error {
    explicit NonFiniteState(const std::string& msg) : Error(msg) {}
};

} // namespace quatode

#pragma once

#include <optional>

#include "heightforge/arith.hpp"
#include "heightforge/polynomial.hpp"

namespace heightforge {

// Closed p-adic disk D(center, p^-precision).  The center is reduced to a
// canonical representative A / p^k with 0 <= A < p^(precision + k).
struct PadicBall {
    Prime p = 2;
    Rational center;
    long precision = 0;

    static PadicBall around(const Rational& x, Prime p, long precision);

    /// Valuation shared by every point of the ball, if there is one.
    std::optional<long> valuation() const;
    /// Smallest valuation of a point of the ball.
    long min_valuation() const;
    bool contains(const PadicBall& other) const;
};

/// Representative of x modulo p^precision (x with non-p denominators allowed).
Rational reduce_padic(const Rational& x, Prime p, long precision);

/// Image ball: contains f(D) for every point of D.
PadicBall image(const Polynomial& f, const PadicBall& ball);

}  // namespace heightforge

#include "heightforge/padic_ball.hpp"

#include <algorithm>
#include <limits>

namespace heightforge {

namespace {

Integer prime_power(Prime p, long k) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
    return r;
}

}  // namespace

Rational reduce_padic(const Rational& x, Prime p, long precision) {
    if (x == 0) return 0;
    const long v = padic_valuation(x, p);
    if (v >= precision) return 0;
    const long k = std::max(0L, -v);
    Rational y = x * prime_power(p, k);  // p-integral, denominator prime to p
    Integer modulus = prime_power(p, precision + k);
    Integer inv, a;
    if (mpz_invert(inv.get_mpz_t(), y.get_den().get_mpz_t(), modulus.get_mpz_t()) == 0)
        throw DomainError("reduce_padic: denominator not invertible");
    a = y.get_num() * inv;
    mpz_mod(a.get_mpz_t(), a.get_mpz_t(), modulus.get_mpz_t());
    Rational r(a, prime_power(p, k));
    r.canonicalize();
    return r;
}

PadicBall PadicBall::around(const Rational& x, Prime p, long precision) {
    return PadicBall{p, reduce_padic(x, p, precision), precision};
}

std::optional<long> PadicBall::valuation() const {
    if (center == 0) return std::nullopt;
    long v = padic_valuation(center, p);
    if (v < precision) return v;
    return std::nullopt;
}

long PadicBall::min_valuation() const {
    if (center == 0) return precision;
    return std::min(padic_valuation(center, p), precision);
}

bool PadicBall::contains(const PadicBall& other) const {
    if (other.p != p || other.precision < precision) return false;
    Rational diff = other.center - center;
    return diff == 0 || padic_valuation(diff, p) >= precision;
}

PadicBall image(const Polynomial& f, const PadicBall& ball) {
    Polynomial taylor = f.taylor_shift(ball.center);
    long np = std::numeric_limits<long>::max();
    for (int j = 1; j <= taylor.degree(); ++j) {
        const Rational& c = taylor.coeffs()[j];
        if (c == 0) continue;
        np = std::min(np, padic_valuation(c, ball.p) + j * ball.precision);
    }
    if (np == std::numeric_limits<long>::max()) np = ball.precision;  // constant map
    return PadicBall::around(taylor.coeff(0), ball.p, np);
}

}  // namespace heightforge

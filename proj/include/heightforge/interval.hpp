#pragma once

#include <string>

#include <gmpxx.h>
#include <mpfr.h>

namespace heightforge {

// Closed interval of doubles.  Every arithmetic operation widens the result
// by one ulp in each direction, so the enclosure survives round-to-nearest.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    static Interval point(double x) { return {x, x}; }
    static Interval hull(double a, double b) { return a <= b ? Interval{a, b} : Interval{b, a}; }

    double width() const { return hi - lo; }
    double mid() const { return lo + 0.5 * (hi - lo); }
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
    bool overlaps(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }

    Interval& operator+=(const Interval& o);
    Interval& operator-=(const Interval& o);
};

Interval operator+(Interval a, const Interval& b);
Interval operator-(Interval a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, double s);
Interval max(const Interval& a, const Interval& b);
Interval hull(const Interval& a, const Interval& b);
Interval widen(const Interval& a);

Interval enclose(const mpq_class& q);
Interval enclose(const mpz_class& n);
/// log q for q > 0.
Interval log_enclosure(const mpq_class& q);
Interval log_enclosure(const mpz_class& n);
Interval log_prime(unsigned long p);

// Sets MPFR's exponent range to its maximum for the calling thread.  Orbits
// that escape to infinity produce numbers with astronomically large exponents.
void ensure_mpfr_range();

// Owning mpfr_t.
class Mpfr {
public:
    explicit Mpfr(mpfr_prec_t prec);
    Mpfr(const Mpfr& other);
    Mpfr(Mpfr&& other) noexcept;
    Mpfr& operator=(const Mpfr& other);
    Mpfr& operator=(Mpfr&& other) noexcept;
    ~Mpfr();

    mpfr_ptr get() { return value_; }
    mpfr_srcptr get() const { return value_; }
    mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

private:
    mpfr_t value_;
};

// Interval with MPFR endpoints and directed rounding on every operation.
class MpInterval {
public:
    explicit MpInterval(mpfr_prec_t prec);
    MpInterval(const mpq_class& q, mpfr_prec_t prec);

    const Mpfr& lo() const { return lo_; }
    const Mpfr& hi() const { return hi_; }
    mpfr_prec_t precision() const { return lo_.precision(); }

    bool is_finite() const;
    bool contains_zero() const;
    /// min |x| and max |x| over the interval, rounded down/up respectively.
    Mpfr mag_lower() const;
    Mpfr mag_upper() const;

    friend MpInterval operator+(const MpInterval& a, const MpInterval& b);
    friend MpInterval operator*(const MpInterval& a, const MpInterval& b);

    Interval to_interval() const;

private:
    Mpfr lo_, hi_;
};

double round_down(const Mpfr& x);
double round_up(const Mpfr& x);

}  // namespace heightforge

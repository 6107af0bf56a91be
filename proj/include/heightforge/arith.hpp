#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "heightforge/interval.hpp"

namespace heightforge {

using Integer = mpz_class;
using Rational = mpq_class;
using Prime = std::uint64_t;

// Error taxonomy shared by every module.  Domain errors are mathematical
// precondition failures (valuation of zero, pole of a cover, ...); spec
// errors are malformed inputs (unparseable rationals, bad JSON).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class SpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Parses "num/den" or "num".  Denominator zero is a SpecError.
Rational parse_rational(std::string_view text);
/// Canonical "num/den" form (integers print as "n/1").
std::string to_string(const Rational& q);

Integer to_integer(const Rational& q);  // requires den == 1

/// A place of Q: the archimedean absolute value or the p-adic one.
class Place {
public:
    static Place infinity() { return Place(0); }
    static Place finite(Prime p);
    /// "inf" or a decimal prime.
    static Place parse(std::string_view text);

    bool is_archimedean() const { return prime_ == 0; }
    Prime prime() const;
    std::string to_string() const;

    auto operator<=>(const Place&) const = default;

private:
    explicit Place(Prime p) : prime_(p) {}
    Prime prime_;  // 0 encodes the archimedean place
};

bool is_prime(Prime p);

long padic_valuation(const Integer& n, Prime p);
/// v_p(q) = v_p(num) - v_p(den).  Throws DomainError for q = 0.
long padic_valuation(const Rational& q, Prime p);

/// Distinct prime divisors of |n| in increasing order (n != 0).
std::vector<Prime> prime_factors(const Integer& n);

/// Finite places where |q|_p != 1, in increasing order.
std::vector<Place> support(const Rational& q);

/// c * log p, exactly.
struct ExactLog {
    Rational coeff;
    Prime prime;
};

/// A local quantity: exact rational multiple of log p at a finite place, or
/// an outward-rounded enclosure.
class LocalValue {
public:
    LocalValue() : repr_(Interval::point(0.0)) {}
    LocalValue(ExactLog e) : repr_(std::move(e)) {}
    LocalValue(Interval i) : repr_(i) {}

    static LocalValue zero_at(Prime p) { return ExactLog{Rational(0), p}; }

    bool is_exact() const { return std::holds_alternative<ExactLog>(repr_); }
    const ExactLog& exact() const { return std::get<ExactLog>(repr_); }
    Interval enclosure() const;

private:
    std::variant<ExactLog, Interval> repr_;
};

/// log+ |q|_v.
LocalValue log_plus(const Rational& q, const Place& v);

/// Finite sum of rational multiples of logs of primes, kept exact.
class LogSum {
public:
    LogSum() = default;
    LogSum(const ExactLog& term) { add(term.coeff, term.prime); }

    void add(const Rational& coeff, Prime p);
    LogSum& operator+=(const LogSum& other);
    LogSum operator-() const;
    friend LogSum operator+(LogSum a, const LogSum& b) { return a += b; }
    friend LogSum operator-(LogSum a, const LogSum& b) { return a += -b; }
    LogSum scaled(const Rational& s) const;

    const std::map<Prime, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Rational coeff(Prime p) const;

    /// Exact sign: sum c_p log p compared with 0 via prod p^(D c_p) vs 1.
    int sign() const;
    Interval enclosure() const;

private:
    std::map<Prime, Rational> terms_;  // zero coefficients are never stored
};

int compare(const LogSum& a, const LogSum& b);

/// log n for a positive integer n, exact.
struct LogInteger {
    Integer value;
    Interval enclosure() const;
};

/// One edge of a Newton polygon: lower hull slope and horizontal length.
struct NewtonSegment {
    Rational slope;
    long length;

    bool operator==(const NewtonSegment&) const = default;
};

/// Lower convex hull of (i, v_i) over finite entries, slopes increasing.
/// Root valuations of the polynomial are the negated slopes.
std::vector<NewtonSegment> newton_polygon(std::span<const std::optional<long>> valuations);

}  // namespace heightforge

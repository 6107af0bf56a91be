#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>

#include "heightforge/arith.hpp"
#include "heightforge/family.hpp"

namespace heightforge {

// A function on places vanishing off a finite set.  Finite values are exact
// multiples of log p; the archimedean value is an enclosure.
struct MKConstant {
    Interval archimedean = Interval::point(0.0);
    std::map<Prime, Rational> finite;  // coefficient of log p, nonzero entries only

    Interval at(const Place& v) const;
    /// Exact coefficient of log p (0 off the support).
    Rational coeff(Prime p) const;
    void set(Prime p, const Rational& coeff);
};

MKConstant mk_a(const Family& fam);
MKConstant mk_b(const Family& fam);
/// Throws DomainError when d = e.
MKConstant mk_mvt(const Family& fam);
/// max(max(0, a + e), 2b - a) + log 2_v.
MKConstant mk_c(const Family& fam);

std::set<Place> exceptional_places(const Family& fam);

/// min(1/e, 1 - 1/e - 1/d); throws DomainError when d = e.
Rational pigeonhole_delta(const Family& fam);

// delta / (2 d^orbitBound), kept symbolic.
struct Epsilon {
    Rational delta;
    int d = 0;
    Integer orbit_bound;
    double approx = 0.0;  // may underflow to 0
    double log10 = 0.0;
};

struct ConstantsReport {
    bool computed = false;
    std::string not_computed_reason;
    MKConstant a, b, mvt_e, c;
    Rational delta;
    std::set<Place> exceptional;
    int bad_places = 0;
    int places_in_S = 0;  // bad_places + 1
    Integer orbit_bound;
    Epsilon epsilon;
    /// C' = sum over places of the per-place pairing floor.
    Interval c_prime;
    /// C = C' / (2 d^orbitBound), as an enclosure and a base-10 log of its upper end.
    Interval C;
    double log10_C = 0.0;
};

ConstantsReport height_bound_constants(const Family& fam, int bad_places);

struct ResultantModel {
    Rational resultant;        // Sylvester determinant of the integral model
    Integer leading_integer;   // A_n, leading coefficient of the primitive integer form
};

/// Resultant of the integral homogeneous model of f_t (monic conjugate used
/// for non-monic families; DomainError when none exists).
ResultantModel model_resultant(const Family& fam, const Rational& t);

struct ResultantBound {
    Rational resultant;
    Interval lhs;
    Interval rhs;
    bool ok = false;  // decided exactly
};

ResultantBound resultant_bound_check(const Family& fam, const Rational& t);

}  // namespace heightforge

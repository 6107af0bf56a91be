#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "heightforge/arith.hpp"
#include "heightforge/family.hpp"

namespace heightforge {

enum class OrbitEvent { CycleFound, EscapeCertified, BudgetExceeded };

const char* to_string(OrbitEvent event);

struct OrbitRecord {
    std::vector<Rational> points;
    std::vector<Interval> naive_heights;
    OrbitEvent event = OrbitEvent::BudgetExceeded;
    int preperiod = 0;
    int period = 0;
    std::optional<Place> escape_place;
    int escape_step = -1;
};

/// Exact forward orbit; escape is only tested once h(w) > height_cutoff.
OrbitRecord iterate_orbit(const Polynomial& f, const Rational& z, int max_steps, double height_cutoff);
OrbitRecord iterate_orbit(const Family& fam, const Rational& t, const Rational& z, int max_steps,
                          double height_cutoff);

/// First place (archimedean, then primes in increasing order) at which w lies
/// in the escape region of f.
std::optional<Place> escape_witness(const Polynomial& f, const Rational& w);

struct Certificate {
    bool preperiodic = false;
    int preperiod = 0;
    int period = 0;
    /// Wandering: 0 < hhat_lower <= hhat.
    double hhat_lower = 0.0;
    std::optional<Place> witness;  // escape place, or empty for height-interval evidence
    std::string evidence;
};

/// want_bound = false skips computing hhat_lower for wandering points.
Certificate certify_point(const Polynomial& f, const Rational& z, bool want_bound = true);
Certificate certify_point(const Family& fam, const Rational& t, const Rational& z);

struct PlaceObstruction {
    Prime p = 0;
    long valuation_t = 0;
    bool obstructed = false;
    /// Forced v_p(z) of every preperiodic point when not obstructed.
    std::optional<Rational> forced_valuation;
    std::string reason;
};

/// Finite places outside the exceptional set with |t|_p > 1.  Non-monic
/// families go through their monic conjugate.
std::vector<PlaceObstruction> bad_place_obstruction(const Family& fam, const Rational& t);
bool obstructed(const std::vector<PlaceObstruction>& places);

struct CriterionResult {
    bool solvable = false;
    std::optional<Integer> witness;  // w with |x^m + y^m| = w^d
    Integer value;                   // x^m + y^m
};

/// Whether x^m + y^m = +-w^d is solvable for t = x/y.
CriterionResult power_criterion(int d, int m, const Rational& t);

/// Smallest prime p outside S with v_p(phi(t)) < 0 and e not dividing it.
std::optional<Place> find_nonpower_place(const CoverAnalysis& cov, int e, const std::set<Place>& S,
                                         const Rational& t);

}  // namespace heightforge

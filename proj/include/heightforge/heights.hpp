#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <utility>

#include "heightforge/arith.hpp"
#include "heightforge/family.hpp"

namespace heightforge {

inline constexpr double kDefaultTol = 1e-9;

enum class GreenMode { ExactEscape, ExactBounded, Interval };

const char* to_string(GreenMode mode);

struct GreenResult {
    Place place = Place::infinity();
    Interval value = Interval::point(0.0);
    /// Coefficient of log p when the value is exact at a finite place.
    std::optional<Rational> exact;
    GreenMode mode = GreenMode::Interval;
    int steps = 0;
};

// Iteration ran out before the requested precision; carries what was proven.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string& what, Interval best) : std::runtime_error(what), best_(best) {}
    Interval best() const { return best_; }

private:
    Interval best_;
};

/// h(x/y) = log max(|x|, |y|).
LogInteger naive_height(const Rational& t);

/// C with |h(f_t(w)) - d h(w)| <= C for all rational w; upper end is the bound.
Interval height_defect_bound(const Family& fam, const Rational& t);
/// Same for an explicit polynomial of degree d >= 2.
Interval height_defect_bound(const Polynomial& f);

/// G_{f_t, v}(z).  Families without a rational monic conjugate are reported
/// in interval mode only.
GreenResult local_green(const Family& fam, const Rational& t, const Place& v, const Rational& z,
                        double tol = kDefaultTol);
/// Same, for an explicit polynomial map.
GreenResult local_green(const Polynomial& f, const Place& v, const Rational& z, double tol = kDefaultTol,
                        bool allow_exact = true);

/// rho_p: w escapes p-adically under f iff -v_p(w) > rho_p.
Rational finite_escape_exponent(const Polynomial& f, Prime p);
/// R such that |w| > R forces |f^n(w)| to grow without bound.
Rational archimedean_escape_radius(const Polynomial& f);

/// Places where G_{f, v} can be nonzero at z: infinity, primes in the
/// coefficients of f and in the denominator of z.
std::set<Place> green_support(const Polynomial& f, const Rational& z);

enum class HeightMethod { Exact, Local, Global };

struct HeightResult {
    Interval value;
    HeightMethod method = HeightMethod::Local;
    int steps = 0;
};

const char* to_string(HeightMethod method);

/// Canonical height as the sum of local Green functions (global method for
/// non-monic families without a rational monic conjugate).
HeightResult canonical_height(const Family& fam, const Rational& t, const Rational& z, double tol = kDefaultTol);
HeightResult canonical_height(const Polynomial& f, const Rational& z, double tol = kDefaultTol);

/// d^-N h(f^N z) +- C/((d-1) d^N), iterating exactly while the numbers stay
/// below max_bits.
HeightResult global_height(const Polynomial& f, const Rational& z, long max_bits = 1 << 16);

/// g_v(x, y) = -log|x - y|_v + G_v(x) + G_v(y).
GreenResult arakelov_green(const Family& fam, const Rational& t, const Place& v, const Rational& x,
                           const Rational& y, double tol = kDefaultTol);

/// a == nullopt denotes the point at infinity.
LocalValue lambda_local(const std::optional<Rational>& a, const Place& v, const Rational& t);
LogSum conductor_count(const std::optional<Rational>& a, const std::set<Place>& S, const Rational& t);

struct L1L2 {
    LogSum l1;
    LogSum l2;
};

L1L2 l1_l2_split(const CoverAnalysis& cov, int e, const std::set<Place>& S, const Rational& t);

}  // namespace heightforge

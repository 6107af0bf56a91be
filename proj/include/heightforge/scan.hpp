#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "heightforge/arith.hpp"
#include "heightforge/family.hpp"

namespace heightforge {

struct ScanOptions {
    /// Heights bound t = x/y and z = a/b by max(|x|, |y|) <= floor(exp(H)).
    double t_height = 0.0;
    double z_height = 0.0;
    /// Explicit parameter list; replaces the t box when set.
    std::optional<std::vector<Rational>> t_values;
    int jobs = 1;
    /// Maximum number of certify_point calls; 0 means unlimited.
    long budget = 0;
    bool use_filters = true;
};

struct ScanFinding {
    Rational t;
    Rational parameter;  // phi(t), or t when there is no cover
    Rational z;
    int preperiod = 0;
    int period = 0;
};

// How one parameter was settled.
struct ParameterOutcome {
    Rational t;
    std::optional<Rational> parameter;
    /// "pole", "obstruction", "power-criterion" or "certified".
    std::string filter;
    long candidates = 0;
    int findings = 0;
};

struct HeightBucket {
    long parameters = 0;
    long candidates = 0;
    long findings = 0;
};

struct ScanReport {
    std::string family;
    std::optional<std::string> cover;
    double t_height = 0.0;
    double z_height = 0.0;
    Integer t_bound;
    Integer z_bound;
    std::vector<ScanFinding> findings;
    std::vector<ParameterOutcome> parameters;
    /// Keyed by floor(h(t)).
    std::map<long, HeightBucket> counts_by_height;
    bool complete = true;
    long certify_calls = 0;
    double elapsed_seconds = 0.0;
};

/// All t = x/y in lowest terms with max(|x|, |y|) <= bound, ordered by
/// height, then numerator, then denominator.
std::vector<Rational> rationals_in_box(const Integer& bound);

/// floor(exp(h)) computed so that integer heights land on their integer.
Integer box_bound(double height);

/// Candidate preperiodic points of f inside the box: if filtered, only
/// denominators allowed by the p-adic escape exponents and numerators
/// inside the archimedean escape radius.
std::vector<Rational> candidate_points(const Polynomial& f, const Integer& bound, bool filtered);

/// m when the cover is 1/(1 + t^m).
std::optional<int> power_cover_exponent(const CoverAnalysis& cov);

ScanReport scan(const Family& fam, const std::optional<CoverAnalysis>& cover, const ScanOptions& options);

/// t,parameter,z,preperiod,period with a header row.
std::string findings_csv(const ScanReport& report);

}  // namespace heightforge

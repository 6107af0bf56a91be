#pragma once

#include <functional>
#include <string>
#include <vector>

namespace heightforge {

struct AcceptanceResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    int jobs = 1;
    unsigned long long seed = 20240611;
};

AcceptanceResult check_functional_equation(const AcceptanceOptions& opt);
AcceptanceResult check_preperiodic_inventory(const AcceptanceOptions& opt);
AcceptanceResult check_green_lower_bound(const AcceptanceOptions& opt);
AcceptanceResult check_obstruction_scan(const AcceptanceOptions& opt);
AcceptanceResult check_pairing_floor(const AcceptanceOptions& opt);
AcceptanceResult check_resultant_bound(const AcceptanceOptions& opt);
AcceptanceResult check_height_inequality(const AcceptanceOptions& opt);
AcceptanceResult check_power_cover_scan(const AcceptanceOptions& opt);
AcceptanceResult check_e_generality(const AcceptanceOptions& opt);
AcceptanceResult check_oracle_equivalence(const AcceptanceOptions& opt);

/// Criteria 1..10 in order; ids outside the list are skipped.
std::vector<AcceptanceResult> run_acceptance(const AcceptanceOptions& opt, const std::vector<int>& ids = {});

/// Res(f, g) as lead(f)^deg g * prod g(alpha) over the complex roots of f,
/// with the roots taken from companion-matrix eigenvalues.  Coefficients
/// constant term first.
double resultant_by_roots(const std::vector<double>& f, const std::vector<double>& g);

}  // namespace heightforge

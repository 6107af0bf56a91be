#include "heightforge/repro.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include "heightforge/constants.hpp"
#include "heightforge/heights.hpp"
#include "heightforge/preperiodic.hpp"
#include "heightforge/scan.hpp"

namespace heightforge {

namespace {

using Clock = std::chrono::steady_clock;

class Rng {
public:
    explicit Rng(unsigned long long seed) : gen_(seed) {}
    long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen_); }
    Rational rational(long bound, bool nonzero = false) {
        for (;;) {
            long x = uniform(-bound, bound), y = uniform(1, bound);
            if (nonzero && x == 0) continue;
            Rational q(x, y);
            q.canonicalize();
            return q;
        }
    }
    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<std::size_t>(uniform(0, static_cast<long>(v.size()) - 1))];
    }

private:
    std::mt19937_64 gen_;
};

std::vector<Family> standard_families() {
    return {build_family({1, 1}, 2), build_family({1, 1}, 3), build_family({1, -3, 1}, 3)};
}

const std::vector<Prime> kSmallPrimes{2, 3, 5, 7, 11, 13};

Integer ipow(const Integer& b, unsigned long k) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), k);
    return r;
}

struct Timer {
    Clock::time_point start = Clock::now();
    double seconds() const { return std::chrono::duration<double>(Clock::now() - start).count(); }
};

AcceptanceResult finish(AcceptanceResult r, const Timer& timer, const std::ostringstream& detail) {
    r.seconds = timer.seconds();
    r.detail = detail.str();
    return r;
}

}  // namespace

double resultant_by_roots(const std::vector<double>& f, const std::vector<double>& g) {
    const int n = static_cast<int>(f.size()) - 1;
    const int m = static_cast<int>(g.size()) - 1;
    const double lead = f.back();
    std::complex<double> prod = std::pow(lead, m);
    if (n >= 1) {
        Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
        for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
        for (int i = 0; i < n; ++i) companion(i, n - 1) = -f[static_cast<std::size_t>(i)] / lead;
        Eigen::EigenSolver<Eigen::MatrixXd> solver(companion);
        for (const auto& root : solver.eigenvalues()) {
            std::complex<double> value = 0;
            for (int j = m; j >= 0; --j) value = value * root + g[static_cast<std::size_t>(j)];
            prod *= value;
        }
    }
    return prod.real();
}

AcceptanceResult check_functional_equation(const AcceptanceOptions& opt) {
    Timer timer;
    AcceptanceResult r{1, "functional equation hhat(f(z)) = d hhat(z)", false, "", 0.0};
    Rng rng(opt.seed + 1);
    auto fams = standard_families();
    int violations = 0;
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const Family& fam = fams[static_cast<std::size_t>(i % 3)];
        Rational t = rng.rational(100), z = rng.rational(100);
        Polynomial f = fam.specialize(t);
        Interval a = canonical_height(f, z, 1e-9).value;
        Interval b = canonical_height(f, f(z), 1e-9).value;
        double gap = std::abs(b.mid() - fam.d() * a.mid());
        worst = std::max(worst, gap);
        if (gap > 3e-9) ++violations;
    }
    r.passed = violations == 0 && timer.seconds() <= 60.0;
    std::ostringstream d;
    d << "200 samples, violations " << violations << ", max gap " << worst << ", runtime " << timer.seconds() << " s";
    return finish(r, timer, d);
}

AcceptanceResult check_preperiodic_inventory(const AcceptanceOptions& opt) {
    Timer timer;
    AcceptanceResult r{2, "preperiodic iff canonical height zero", false, "", 0.0};
    Family fam = build_family({1, 1}, 2);
    auto q = [](long a, long b) { Rational x(a, b); x.canonicalize(); return x; };
    const std::vector<std::pair<Rational, std::vector<Rational>>> inventory{
        {q(0, 1), {q(0, 1), q(1, 1), q(-1, 1)}},
        {q(-1, 1), {q(0, 1), q(1, 1), q(-1, 1)}},
        {q(-2, 1), {q(0, 1), q(1, 1), q(-1, 1), q(2, 1), q(-2, 1)}},
        {q(1, 4), {q(1, 2), q(-1, 2)}},
        {q(-3, 4), {q(1, 2), q(-1, 2), q(3, 2), q(-3, 2)}},
    };
    int misclassified = 0, wandering = 0, preperiodic = 0;
    for (const auto& [t, points] : inventory)
        for (const auto& z : points) {
            Certificate c = certify_point(fam, t, z);
            if (!c.preperiodic) ++misclassified;
            Polynomial f = fam.specialize(t);
            Rational w = z;
            for (int k = 0; k < c.preperiod; ++k) w = f(w);
            Rational u = w;
            for (int k = 0; k < c.period; ++k) u = f(u);
            if (u != w) ++misclassified;
            ++preperiodic;
        }
    Rng rng(opt.seed + 2);
    while (wandering < 1000) {
        const auto& [t, points] = inventory[static_cast<std::size_t>(wandering % inventory.size())];
        Rational z = rng.rational(50);
        if (std::find(points.begin(), points.end(), z) != points.end()) continue;
        Certificate c = certify_point(fam, t, z);
        if (c.preperiodic || !(c.hhat_lower > 0)) ++misclassified;
        ++wandering;
    }
    // Independent census: the unfiltered scan of the full box finds exactly the inventory.
    ScanOptions so;
    so.z_height = std::log(50.0);
    so.use_filters = false;
    so.jobs = opt.jobs;
    std::vector<Rational> ts;
    for (const auto& entry : inventory) ts.push_back(entry.first);
    so.t_values = ts;
    ScanReport census = scan(fam, std::nullopt, so);
    std::size_t expected = 0;
    for (const auto& entry : inventory) expected += entry.second.size();
    bool census_ok = census.findings.size() == expected && census.complete;
    r.passed = misclassified == 0 && census_ok;
    std::ostringstream d;
    d << preperiodic << " inventory points, " << wandering << " wandering samples, misclassified " << misclassified
      << ", box census " << census.findings.size() << "/" << expected;
    return finish(r, timer, d);
}

AcceptanceResult check_green_lower_bound(const AcceptanceOptions& opt) {
    Timer timer;
    AcceptanceResult r{3, "G_p >= (1/d) log+|t|_p when e does not divide v_p(t) < 0", false, "", 0.0};
    Rng rng(opt.seed + 3);
    std::vector<Family> fams = standard_families();
    fams.push_back(build_family({1, 0, 1}, 2));
    std::vector<std::set<Place>> exceptional;
    for (const auto& f : fams) exceptional.push_back(exceptional_places(f));
    int samples = 0, violations = 0, inexact = 0;
    while (samples < 1000) {
        std::size_t k = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(fams.size()) - 1));
        const Family& fam = fams[k];
        Prime p = rng.pick(kSmallPrimes);
        if (exceptional[k].count(Place::finite(p))) continue;
        long v = -rng.uniform(1, 4);
        if (v % fam.e() == 0) continue;
        Integer x = rng.uniform(1, 60) * (rng.uniform(0, 1) ? 1 : -1);
        if (x % static_cast<unsigned long>(p) == 0) continue;
        Rational t(x, ipow(Integer(static_cast<unsigned long>(p)), static_cast<unsigned long>(-v)) *
                          Integer(rng.uniform(1, 5)));
        t.canonicalize();
        if (padic_valuation(t, p) != v) continue;
        Rational z = rng.rational(200);
        GreenResult g = local_green(fam, t, Place::finite(p), z);
        Rational floor_coeff(-v, fam.d());
        floor_coeff.canonicalize();
        if (!g.exact) {
            ++inexact;
            ++violations;
        } else if (*g.exact < floor_coeff) {
            ++violations;
        }
        ++samples;
    }
    r.passed = violations == 0;
    std::ostringstream d;
    d << samples << " samples, violations " << violations << " (non-exact " << inexact << ")";
    return finish(r, timer, d);
}

AcceptanceResult check_obstruction_scan(const AcceptanceOptions& opt) {
    Timer timer;
    AcceptanceResult r{4, "obstruction filter versus unfiltered scan at t = 1/n", false, "", 0.0};
    Family fam = build_family({1, 1}, 2);
    std::set<Place> exceptional = exceptional_places(monic_normalize(fam).family);
    std::vector<Rational> ts;
    int predicted = 0, unpredicted = 0;
    for (long n = 2; n <= 500; ++n) {
        bool squarefree = true;
        for (Prime p : prime_factors(Integer(n)))
            if (n % static_cast<long>(p * p) == 0) squarefree = false;
        if (!squarefree) continue;
        Rational t(1, n);
        ts.push_back(t);
        bool outside = false;
        for (Prime p : prime_factors(Integer(n)))
            if (!exceptional.count(Place::finite(p))) outside = true;
        bool filter = obstructed(bad_place_obstruction(fam, t));
        if (outside && filter) ++predicted;
        if (outside != filter) ++unpredicted;
    }
    ScanOptions so;
    so.z_height = std::log(100.0);
    so.use_filters = false;
    so.jobs = opt.jobs;
    so.t_values = ts;
    ScanReport rep = scan(fam, std::nullopt, so);
    r.passed = rep.findings.empty() && rep.complete && unpredicted == 0 && timer.seconds() <= 300.0;
    std::ostringstream d;
    d << ts.size() << " parameters, obstruction predicted " << predicted << ", filter mismatches " << unpredicted
      << ", unfiltered findings " << rep.findings.size() << " from " << rep.certify_calls << " certified points, runtime "
      << timer.seconds() << " s";
    return finish(r, timer, d);
}

AcceptanceResult check_pairing_floor(const AcceptanceOptions& opt) {
    Timer timer;
    AcceptanceResult r{5, "pairing floor g_v >= -max(a_v, b_v) - log 2_v at good parameters", false, "", 0.0};
    Rng rng(opt.seed + 5);
    auto fams = standard_families();
    std::vector<MKConstant> as, bs;
    for (const auto& f : fams) {
        as.push_back(mk_a(f));
        bs.push_back(mk_b(f));
    }
    const std::vector<Place> places{Place::infinity(), Place::finite(2), Place::finite(3), Place::finite(5)};
    int samples = 0, violations = 0;
    double worst = 1e300;
    while (samples < 10000) {
        std::size_t k = static_cast<std::size_t>(rng.uniform(0, 2));
        const Place& v = rng.pick(places);
        Rational t = rng.rational(30);
        if (v.is_archimedean() ? abs(t) > 1 : (t != 0 && padic_valuation(t, v.prime()) < 0)) continue;
        Rational x = rng.rational(40), y = rng.rational(40);
        if (x == y) continue;
        GreenResult g = arakelov_green(fams[k], t, v, x, y);
        Interval floor = -max(as[k].at(v), bs[k].at(v));
        if (v.is_archimedean()) floor = floor - log_prime(2);
        double margin = g.value.lo - floor.hi;
        worst = std::min(worst, margin);
        if (margin < -1e-9) ++violations;
        ++samples;
    }
    r.passed = violations == 0;
    std::ostringstream d;
    d << samples << " pairs, violations " << violations << ", smallest margin " << worst;
    return finish(r, timer, d);
}

AcceptanceResult check_resultant_bound(const AcceptanceOptions& opt) {
    Timer timer;
    AcceptanceResult r{6, "model resultant bound", false, "", 0.0};
    Rng rng(opt.seed + 6);
    std::vector<Family> fams = standard_families();
    fams.push_back(build_family({1, 0, 1}, 2));
    fams.push_back(build_family({4, 1}, 3));
    int failures = 0;
    for (int i = 0; i < 1000; ++i) {
        const Family& fam = rng.pick(fams);
        Rational t = rng.rational(500, true);
        if (!resultant_bound_check(fam, t).ok) ++failures;
    }
    Family quad = build_family({1, 1}, 2);
    Rational third(1, 3);
    ResultantBound eq = resultant_bound_check(quad, third);
    Interval four_log3 = log_prime(3) * 4.0;
    bool equality = eq.ok && eq.resultant == 81 && eq.lhs.overlaps(eq.rhs) && eq.lhs.overlaps(four_log3) &&
                    eq.rhs.overlaps(four_log3);
    r.passed = failures == 0 && equality;
    std::ostringstream d;
    d << "1000 samples, failures " << failures << "; z^2+1/3: Res = " << to_string(eq.resultant) << ", lhs ["
      << eq.lhs.lo << ", " << eq.lhs.hi << "], rhs [" << eq.rhs.lo << ", " << eq.rhs.hi << "]";
    return finish(r, timer, d);
}

AcceptanceResult check_height_inequality(const AcceptanceOptions& opt) {
    Timer timer;
    AcceptanceResult r{7, "hhat >= eps h(t) - C with one bad prime", false, "", 0.0};
    Rng rng(opt.seed + 7);
    Family fam = build_family({1, 0, 1}, 2);
    ConstantsReport k = height_bound_constants(fam, 1);
    int samples = 0, violations = 0, skipped = 0;
    while (samples < 1000) {
        Prime p = rng.pick(kSmallPrimes);
        long e = rng.uniform(1, 5);
        Integer x = rng.uniform(1, 200) * (rng.uniform(0, 1) ? 1 : -1);
        if (x % static_cast<unsigned long>(p) == 0) continue;
        Rational t(x, ipow(Integer(static_cast<unsigned long>(p)), static_cast<unsigned long>(e)));
        t.canonicalize();
        Rational z = rng.rational(100);
        Polynomial f = fam.specialize(t);
        if (certify_point(f, z, false).preperiodic) {
            ++skipped;
            continue;
        }
        Interval h = canonical_height(f, z).value;
        Interval ht = naive_height(t).enclosure();
        Interval floor = ht * k.epsilon.approx - k.C;
        if (h.hi < floor.lo) ++violations;
        ++samples;
    }
    r.passed = k.computed && violations == 0;
    std::ostringstream d;
    d << samples << " wandering samples, violations " << violations << ", preperiodic skipped " << skipped
      << ", log10 eps " << k.epsilon.log10 << ", log10 C " << k.log10_C;
    return finish(r, timer, d);
}

AcceptanceResult check_power_cover_scan(const AcceptanceOptions& opt) {
    Timer timer;
    AcceptanceResult r{8, "z^2 + 1/(1+t^4) has no rational preperiodic points", false, "", 0.0};
    Family fam = build_family({1, 1}, 2);
    CoverAnalysis cov = analyze_cover(Polynomial{Rational(1)}, Polynomial{1, 0, 0, 0, 1});
    ScanOptions so;
    so.t_height = std::log(50.0);
    so.z_height = std::log(100.0);
    so.jobs = opt.jobs;
    ScanReport rep = scan(fam, cov, so);
    int solvable = 0;
    for (const auto& p : rep.parameters)
        if (p.t != 0 && power_criterion(2, 4, p.t).solvable) ++solvable;
    // Unfiltered scan on the low-height part of the box, to check the filter from the other side.
    std::vector<Rational> low;
    for (const Rational& t : rationals_in_box(Integer(6))) low.push_back(t);
    ScanOptions raw = so;
    raw.use_filters = false;
    raw.t_values = low;
    ScanReport cross = scan(fam, cov, raw);
    r.passed = rep.findings.empty() && rep.complete && solvable == 0 && cross.findings.empty() && cross.complete &&
               timer.seconds() <= 600.0;
    std::ostringstream d;
    d << rep.parameters.size() << " parameters, findings " << rep.findings.size() << ", power criterion solvable at "
      << solvable << " t != 0; unfiltered cross-check over " << low.size() << " parameters: findings "
      << cross.findings.size() << " from " << cross.certify_calls << " points; runtime " << timer.seconds() << " s";
    return finish(r, timer, d);
}

AcceptanceResult check_e_generality(const AcceptanceOptions&) {
    Timer timer;
    AcceptanceResult r{9, "e-generality table", false, "", 0.0};
    auto poly = [](std::initializer_list<long> c) {
        std::vector<Rational> v;
        for (long x : c) v.emplace_back(x);
        return Polynomial(v);
    };
    struct Fixture {
        const char* name;
        Polynomial numer, denom;
        int e;
        bool general;
    };
    const Polynomial t_minus = poly({-1, 1});
    const std::vector<Fixture> fixtures{
        {"1/(1+t^5), e=2", poly({1}), poly({1, 0, 0, 0, 0, 1}), 2, true},
        {"1/(1+t^4), e=2", poly({1}), poly({1, 0, 0, 0, 1}), 2, false},
        {"1/(1+t^4), e=3", poly({1}), poly({1, 0, 0, 0, 1}), 3, true},
        {"1/t^2, e=2", poly({1}), poly({0, 0, 1}), 2, false},
        {"t^5, e=2", poly({0, 0, 0, 0, 0, 1}), poly({1}), 2, false},
        {"1/((t^2+1)(t^3-2)), e=2", poly({1}), poly({1, 0, 1}) * poly({-2, 0, 0, 1}), 2, true},
        {"1/(t^3-t), e=3", poly({1}), poly({0, -1, 0, 1}), 3, false},
        {"1/(t^3-t), e=4", poly({1}), poly({0, -1, 0, 1}), 4, true},
        {"1/((t-1)^2(t-2)^2(t-3)(t-4)(t-5)), e=2", poly({1}),
         poly({-1, 1}) * poly({-1, 1}) * poly({-2, 1}) * poly({-2, 1}) * poly({-3, 1}) * poly({-4, 1}) * poly({-5, 1}), 2,
         false},
        {"1/((t-1)^2(t-2)^2(t-3)(t-4)(t-5)), e=3", poly({1}),
         poly({-1, 1}) * poly({-1, 1}) * poly({-2, 1}) * poly({-2, 1}) * poly({-3, 1}) * poly({-4, 1}) * poly({-5, 1}), 3,
         true},
        {"t^7/(t^2-2), e=4", poly({0, 0, 0, 0, 0, 0, 0, 1}), poly({-2, 0, 1}), 4, false},
        {"1/((t^2+1)^3 (t-1)), e=3", poly({1}), poly({1, 0, 1}) * poly({1, 0, 1}) * poly({1, 0, 1}) * t_minus, 3, false},
    };
    int mismatches = 0;
    std::ostringstream d;
    for (int e = 2; e <= 6; ++e)
        if (required_poles(e) != (e == 2 ? 5 : e == 3 ? 4 : 3)) ++mismatches;
    for (const auto& fx : fixtures) {
        EGenerality g = is_e_general(analyze_cover(fx.numer, fx.denom), fx.e);
        if (g.general != fx.general) {
            ++mismatches;
            d << "mismatch: " << fx.name << "; ";
        }
    }
    r.passed = mismatches == 0;
    d << fixtures.size() << " covers, N_e table for e = 2..6, mismatches " << mismatches;
    return finish(r, timer, d);
}

AcceptanceResult check_oracle_equivalence(const AcceptanceOptions& opt) {
    Timer timer;
    AcceptanceResult r{10, "local-global agreement and resultant oracle", false, "", 0.0};
    Rng rng(opt.seed + 10);
    std::vector<Family> fams = standard_families();
    fams.push_back(build_family({1, 0, 1}, 2));
    int disjoint = 0;
    for (int i = 0; i < 500; ++i) {
        const Family& fam = rng.pick(fams);
        Rational t = rng.rational(30), z = rng.rational(30);
        Polynomial f = fam.specialize(t);
        Interval local = canonical_height(f, z).value;
        Interval global = global_height(f, z).value;
        if (!local.overlaps(global)) ++disjoint;
    }
    int mismatched = 0;
    for (int i = 0; i < 50; ++i) {
        auto random_poly = [&](int deg) {
            std::vector<Rational> c;
            for (int j = 0; j < deg; ++j) c.emplace_back(rng.uniform(-9, 9));
            long lead = 0;
            while (lead == 0) lead = rng.uniform(-9, 9);
            c.emplace_back(lead);
            return Polynomial(c);
        };
        Polynomial f = random_poly(static_cast<int>(rng.uniform(1, 4)));
        Polynomial g = random_poly(static_cast<int>(rng.uniform(1, 4)));
        Rational exact = resultant(f, g);
        std::vector<double> fd, gd;
        for (const auto& c : f.coeffs()) fd.push_back(c.get_d());
        for (const auto& c : g.coeffs()) gd.push_back(c.get_d());
        double oracle = resultant_by_roots(fd, gd);
        if (std::abs(oracle - exact.get_d()) > 1e-6 * std::max(1.0, std::abs(exact.get_d()))) ++mismatched;
    }
    r.passed = disjoint == 0 && mismatched == 0;
    std::ostringstream d;
    d << "500 height pairs, disjoint " << disjoint << "; 50 resultant fixtures, mismatched " << mismatched;
    return finish(r, timer, d);
}

std::vector<AcceptanceResult> run_acceptance(const AcceptanceOptions& opt, const std::vector<int>& ids) {
    using Check = AcceptanceResult (*)(const AcceptanceOptions&);
    const Check checks[] = {check_functional_equation, check_preperiodic_inventory, check_green_lower_bound,
                            check_obstruction_scan,    check_pairing_floor,         check_resultant_bound,
                            check_height_inequality,   check_power_cover_scan,      check_e_generality,
                            check_oracle_equivalence};
    ensure_mpfr_range();
    std::vector<AcceptanceResult> out;
    for (int id = 1; id <= 10; ++id) {
        if (!ids.empty() && std::find(ids.begin(), ids.end(), id) == ids.end()) continue;
        try {
            out.push_back(checks[id - 1](opt));
        } catch (const std::exception& err) {
            out.push_back(AcceptanceResult{id, "criterion " + std::to_string(id), false,
                                           std::string("exception: ") + err.what(), 0.0});
        }
    }
    return out;
}

}  // namespace heightforge

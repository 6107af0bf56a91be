#include "heightforge/scan.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

#include "heightforge/heights.hpp"
#include "heightforge/preperiodic.hpp"

namespace heightforge {

namespace {

Integer height_key(const Rational& t) { return std::max(Integer(abs(t.get_num())), Integer(t.get_den())); }

// Is f(z) = z^d + 1/(1 + t^m) with d = e?
bool is_unicritical_power(const Family& fam) {
    return fam.form_degree() == 1 && fam.form()[0] == 1 && fam.form()[1] == 1;
}

void extend_denominators(const std::vector<std::pair<Prime, long>>& primes, std::size_t i, const Integer& acc,
                         const Integer& bound, std::vector<Integer>& out) {
    if (i == primes.size()) {
        out.push_back(acc);
        return;
    }
    Integer cur = acc;
    for (long k = 0; k <= primes[i].second && cur <= bound; ++k) {
        extend_denominators(primes, i + 1, cur, bound, out);
        cur *= primes[i].first;
    }
}

struct Job {
    ParameterOutcome outcome;
    std::vector<ScanFinding> findings;
    long calls = 0;
    bool complete = true;
};

}  // namespace

Integer box_bound(double height) {
    if (height < 0) throw DomainError("height bound must be nonnegative");
    double x = std::floor(std::exp(height) + 1e-9);
    return Integer(x);
}

std::vector<Rational> rationals_in_box(const Integer& bound) {
    std::vector<Rational> out;
    if (bound < 1) return {Rational(0)};
    const long B = bound.get_si();
    out.emplace_back(0);
    for (long y = 1; y <= B; ++y)
        for (long x = -B; x <= B; ++x) {
            if (x == 0 || std::gcd(x, y) != 1) continue;
            out.emplace_back(x, y);
        }
    std::stable_sort(out.begin(), out.end(), [](const Rational& a, const Rational& b) {
        Integer ha = height_key(a), hb = height_key(b);
        if (ha != hb) return ha < hb;
        return a < b;
    });
    return out;
}

std::vector<Rational> candidate_points(const Polynomial& f, const Integer& bound, bool filtered) {
    std::vector<Integer> dens;
    Rational radius = 0;
    if (filtered) {
        std::set<Prime> primes;
        for (const Rational& c : f.coeffs()) {
            if (c == 0) continue;
            for (Prime p : prime_factors(c.get_den())) primes.insert(p);
        }
        for (Prime p : prime_factors(abs(f.leading().get_num()))) primes.insert(p);
        std::vector<std::pair<Prime, long>> allowed;
        for (Prime p : primes) {
            Rational rho = finite_escape_exponent(f, p);
            Integer fl;
            mpz_fdiv_q(fl.get_mpz_t(), rho.get_num().get_mpz_t(), rho.get_den().get_mpz_t());
            if (fl > 0) allowed.emplace_back(p, fl.get_si());
        }
        extend_denominators(allowed, 0, Integer(1), bound, dens);
        std::sort(dens.begin(), dens.end());
        radius = archimedean_escape_radius(f);
    } else {
        for (Integer b = 1; b <= bound; ++b) dens.push_back(b);
    }
    std::vector<Rational> out;
    for (const Integer& b : dens) {
        if (b > bound) continue;
        Integer amax = bound;
        if (filtered) {
            Rational lim = radius * b;
            Integer fl;
            mpz_fdiv_q(fl.get_mpz_t(), lim.get_num().get_mpz_t(), lim.get_den().get_mpz_t());
            amax = std::min(amax, fl);
        }
        for (Integer a = -amax; a <= amax; ++a) {
            Integer g;
            mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
            if (g != 1) continue;
            out.emplace_back(a, b);
        }
    }
    return out;
}

std::optional<int> power_cover_exponent(const CoverAnalysis& cov) {
    if (!(cov.numer == Polynomial{Rational(1)})) return std::nullopt;
    const Polynomial& q = cov.denom;
    int m = q.degree();
    if (m < 1 || q.coeff(0) != 1 || q.coeff(m) != 1) return std::nullopt;
    for (int j = 1; j < m; ++j)
        if (q.coeff(j) != 0) return std::nullopt;
    return m;
}

ScanReport scan(const Family& fam, const std::optional<CoverAnalysis>& cover, const ScanOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    ScanReport report;
    report.family = fam.describe();
    if (cover) report.cover = "(" + cover->numer.to_string('t') + ") / (" + cover->denom.to_string('t') + ")";
    report.t_height = options.t_height;
    report.z_height = options.z_height;
    report.t_bound = box_bound(options.t_height);
    report.z_bound = box_bound(options.z_height);

    const std::vector<Rational> ts = options.t_values ? *options.t_values : rationals_in_box(report.t_bound);
    std::optional<int> power_m;
    if (cover && is_unicritical_power(fam) && fam.e() == fam.d()) power_m = power_cover_exponent(*cover);

    std::vector<Job> jobs(ts.size());
    std::atomic<std::size_t> next{0};
    std::atomic<long> calls{0};
    std::atomic<bool> exhausted{false};

    auto run_one = [&](std::size_t i) {
        Job& job = jobs[i];
        const Rational& t = ts[i];
        job.outcome.t = t;
        Rational s = t;
        if (cover) {
            try {
                s = (*cover)(t);
            } catch (const DomainError&) {
                job.outcome.filter = "pole";
                return;
            }
        }
        job.outcome.parameter = s;
        std::vector<PlaceObstruction> forced;
        if (options.use_filters) {
            if (power_m && t != 0 && !power_criterion(fam.d(), *power_m, t).solvable) {
                job.outcome.filter = "power-criterion";
                return;
            }
            try {
                forced = bad_place_obstruction(fam, s);
            } catch (const NormalizationUnavailable&) {
                forced.clear();
            }
            if (obstructed(forced)) {
                job.outcome.filter = "obstruction";
                return;
            }
        }
        job.outcome.filter = "certified";
        Polynomial f = fam.specialize(s);
        for (const Rational& z : candidate_points(f, report.z_bound, options.use_filters)) {
            bool keep = true;
            for (const auto& o : forced)
                if (o.forced_valuation && (z == 0 || Rational(padic_valuation(z, o.p)) != *o.forced_valuation))
                    keep = false;
            if (!keep) continue;
            ++job.outcome.candidates;
            if (options.budget > 0 && calls.fetch_add(1) >= options.budget) {
                exhausted = true;
                job.complete = false;
                return;
            }
            ++job.calls;
            Certificate c;
            try {
                c = certify_point(f, z, false);
            } catch (const std::exception&) {
                job.complete = false;
                continue;
            }
            if (c.preperiodic) {
                job.findings.push_back(ScanFinding{t, s, z, c.preperiod, c.period});
                ++job.outcome.findings;
            }
        }
    };

    auto worker = [&] {
        ensure_mpfr_range();
        for (std::size_t i = next++; i < ts.size(); i = next++) {
            if (exhausted) {
                jobs[i].outcome.t = ts[i];
                jobs[i].outcome.filter = "skipped";
                jobs[i].complete = false;
                continue;
            }
            run_one(i);
        }
    };

    const int n = std::max(1, options.jobs);
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < n; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (Job& job : jobs) {
        report.certify_calls += job.calls;
        report.complete = report.complete && job.complete;
        double h = naive_height(job.outcome.t).enclosure().mid();
        HeightBucket& bucket = report.counts_by_height[static_cast<long>(std::floor(h + 1e-12))];
        ++bucket.parameters;
        bucket.candidates += job.outcome.candidates;
        bucket.findings += job.outcome.findings;
        for (auto& fnd : job.findings) report.findings.push_back(std::move(fnd));
        report.parameters.push_back(std::move(job.outcome));
    }
    report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::string findings_csv(const ScanReport& report) {
    std::ostringstream out;
    out << "t,parameter,z,preperiod,period\n";
    for (const auto& f : report.findings)
        out << to_string(f.t) << ',' << to_string(f.parameter) << ',' << to_string(f.z) << ',' << f.preperiod << ','
            << f.period << '\n';
    return out.str();
}

}  // namespace heightforge

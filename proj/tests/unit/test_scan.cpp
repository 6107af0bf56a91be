#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "generators.hpp"
#include "heightforge/preperiodic.hpp"
#include "heightforge/scan.hpp"

using namespace heightforge;

namespace {

Rational q(long a, long b = 1) {
    Rational r(a, b);
    r.canonicalize();
    return r;
}

Polynomial P(std::initializer_list<long> c) {
    std::vector<Rational> v;
    for (long x : c) v.emplace_back(x);
    return Polynomial(v);
}

std::vector<Rational> zs(const ScanReport& r) {
    std::vector<Rational> out;
    for (const auto& f : r.findings) out.push_back(f.z);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("boxes") {
    CHECK(box_bound(std::log(20.0)) == 20);
    CHECK(box_bound(std::log(100.0)) == 100);
    CHECK(box_bound(0.0) == 1);
    auto unit = rationals_in_box(Integer(1));
    std::sort(unit.begin(), unit.end());
    CHECK(unit == std::vector<Rational>{q(-1), q(0), q(1)});
    for (long B = 1; B <= 12; ++B) {
        long count = 1;
        for (long y = 1; y <= B; ++y)
            for (long x = 1; x <= B; ++x)
                if (std::gcd(x, y) == 1) count += 2;
        auto box = rationals_in_box(Integer(B));
        CHECK(static_cast<long>(box.size()) == count);
        std::sort(box.begin(), box.end());
        CHECK(std::adjacent_find(box.begin(), box.end()) == box.end());
    }
    CHECK(power_cover_exponent(analyze_cover(P({1}), P({1, 0, 0, 0, 1}))) == 4);
    CHECK(!power_cover_exponent(analyze_cover(P({1}), P({2, 0, 0, 0, 1}))));
    CHECK(!power_cover_exponent(analyze_cover(P({0, 1}), P({1}))));
}

TEST_CASE("scan examples") {
    Family quad = build_family({1, 1}, 2);
    ScanOptions so;
    so.z_height = std::log(10.0);
    so.t_values = std::vector<Rational>{q(-2)};
    ScanReport r = scan(quad, std::nullopt, so);
    CHECK(zs(r) == std::vector<Rational>{q(-2), q(-1), q(0), q(1), q(2)});
    CHECK(r.complete);
    for (const auto& f : r.findings) {
        Certificate c = certify_point(quad, f.t, f.z);
        CHECK(c.preperiodic);
        CHECK(c.preperiod == f.preperiod);
        CHECK(c.period == f.period);
    }
    so.t_values = std::vector<Rational>{q(1, 3)};
    so.z_height = std::log(1000.0);
    ScanReport ob = scan(quad, std::nullopt, so);
    CHECK(ob.findings.empty());
    CHECK(ob.certify_calls == 0);
    REQUIRE(ob.parameters.size() == 1);
    CHECK(ob.parameters[0].filter == "obstruction");
}

TEST_CASE("power cover scan") {
    Family quad = build_family({1, 1}, 2);
    CoverAnalysis cov = analyze_cover(P({1}), P({1, 0, 0, 0, 1}));
    ScanOptions so;
    so.t_height = std::log(20.0);
    so.z_height = std::log(20.0);
    so.jobs = 2;
    ScanReport r = scan(quad, cov, so);
    CHECK(r.findings.empty());
    CHECK(r.complete);
    for (const auto& p : r.parameters) {
        if (p.t == 0)
            CHECK(p.filter == "certified");
        else
            CHECK(p.filter == "power-criterion");
    }
    long total = 0;
    for (const auto& [h, b] : r.counts_by_height) total += b.parameters;
    CHECK(total == static_cast<long>(r.parameters.size()));
}

TEST_CASE("property: criterion consistency both ways") {
    Family quad = build_family({1, 1}, 2);
    for (int m : {3, 4}) {
        std::vector<Rational> den(m + 1, Rational(0));
        den[0] = 1;
        den[static_cast<std::size_t>(m)] = 1;
        CoverAnalysis cov = analyze_cover(P({1}), Polynomial(den));
        ScanOptions so;
        so.t_height = std::log(5.0);
        so.z_height = std::log(20.0);
        so.use_filters = false;
        ScanReport r = scan(quad, cov, so);
        for (const auto& p : r.parameters) {
            if (p.filter == "pole" || p.t == 0) continue;
            bool solvable = power_criterion(2, m, p.t).solvable;
            if (!solvable) CHECK(p.findings == 0);
            if (p.findings > 0) CHECK(solvable);
        }
    }
}

TEST_CASE("property: filtered candidates keep every preperiodic point") {
    gen::Source src(81);
    const std::vector<Family> fams{build_family({1, 1}, 2), build_family({1, 1}, 3), build_family({1, 0, 1}, 2)};
    for (int i = 0; i < 40; ++i) {
        const Family& fam = src.pick(fams);
        Rational t = i % 3 ? src.rational(8) : q(-src.range(0, 3), src.pick(std::vector<long>{1, 4, 16}));
        Polynomial f = fam.specialize(t);
        auto all = candidate_points(f, Integer(24), false);
        auto few = candidate_points(f, Integer(24), true);
        CHECK(few.size() <= all.size());
        std::vector<Rational> sorted = few;
        std::sort(sorted.begin(), sorted.end());
        for (const Rational& z : all)
            if (certify_point(f, z, false).preperiodic) CHECK(std::binary_search(sorted.begin(), sorted.end(), z));
    }
}

TEST_CASE("determinism, budget and CSV") {
    Family quad = build_family({1, 1}, 2);
    ScanOptions so;
    so.t_height = std::log(4.0);
    so.z_height = std::log(8.0);
    so.use_filters = false;
    ScanReport one = scan(quad, std::nullopt, so);
    so.jobs = 4;
    ScanReport four = scan(quad, std::nullopt, so);
    REQUIRE(one.findings.size() == four.findings.size());
    for (std::size_t i = 0; i < one.findings.size(); ++i) {
        CHECK(one.findings[i].t == four.findings[i].t);
        CHECK(one.findings[i].z == four.findings[i].z);
    }
    CHECK(one.certify_calls == four.certify_calls);
    so.budget = 5;
    ScanReport cut = scan(quad, std::nullopt, so);
    CHECK(!cut.complete);
    CHECK(cut.certify_calls <= 5);
    std::string csv = findings_csv(one);
    CHECK(csv.rfind("t,parameter,z,preperiod,period\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(one.findings.size()) + 1);
}

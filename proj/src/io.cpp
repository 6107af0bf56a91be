#include "heightforge/io.hpp"

#include <fstream>

namespace heightforge {

namespace {

Json interval_or_null(double lo, double hi) { return Json{{"lo", lo}, {"hi", hi}}; }

std::vector<Rational> rational_list(const Json& j, const char* field) {
    if (!j.contains(field) || !j[field].is_array()) throw SpecError(std::string("missing array field '") + field + "'");
    std::vector<Rational> out;
    for (const auto& x : j[field]) out.push_back(rational_from_json(x));
    return out;
}

Json rational_list_json(const std::vector<Rational>& v) {
    Json out = Json::array();
    for (const auto& q : v) out.push_back(to_json(q));
    return out;
}

}  // namespace

Rational rational_from_json(const Json& j) {
    if (j.is_number_integer()) return Rational(Integer(std::to_string(j.get<long long>())));
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw SpecError("expected a rational as \"num/den\" or an integer, got " + j.dump());
}

Json to_json(const Rational& q) { return to_string(q); }

Json to_json(const Interval& i) { return interval_or_null(i.lo, i.hi); }

Json to_json(const Place& v) { return v.to_string(); }

Json to_json(const LogSum& s) {
    Json terms = Json::array();
    for (const auto& [p, c] : s.terms()) terms.push_back({{"coeff", to_string(c)}, {"prime", std::to_string(p)}});
    Interval e = s.enclosure();
    return {{"terms", terms}, {"lo", e.lo}, {"hi", e.hi}};
}

Family family_from_json(const Json& j) {
    if (!j.is_object()) throw SpecError("family spec must be a JSON object");
    if (!j.contains("e") || !j["e"].is_number_integer()) throw SpecError("family spec needs an integer field 'e'");
    std::vector<Rational> form = rational_list(j, "F");
    try {
        return build_family(form, j["e"].get<int>());
    } catch (const DomainError& err) {
        throw SpecError(std::string("invalid family: ") + err.what());
    }
}

Json family_to_json(const Family& fam) {
    return {{"e", fam.e()}, {"F", rational_list_json(fam.form_leading_first())}, {"d", fam.d()},
            {"description", fam.describe()}};
}

CoverAnalysis cover_from_json(const Json& j) {
    if (!j.is_object()) throw SpecError("cover spec must be a JSON object");
    Polynomial numer(rational_list(j, "numer"));
    Polynomial denom(rational_list(j, "denom"));
    if (denom.is_zero()) throw SpecError("cover denominator is zero");
    if (numer.is_zero()) throw SpecError("cover numerator is zero");
    try {
        return analyze_cover(numer, denom);
    } catch (const DomainError& err) {
        throw SpecError(std::string("invalid cover: ") + err.what());
    }
}

Json cover_to_json(const CoverAnalysis& cov) {
    Json poles = Json::array();
    for (const auto& p : cov.poles) {
        Json pj{{"order", p.order}, {"count", p.count}};
        if (p.at_infinity)
            pj["at"] = "inf";
        else
            pj["factor"] = rational_list_json(p.factor.coeffs());
        poles.push_back(pj);
    }
    return {{"numer", rational_list_json(cov.numer.coeffs())},
            {"denom", rational_list_json(cov.denom.coeffs())},
            {"poles", poles}};
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& err) {
        throw SpecError(path + ": " + err.what());
    }
}

Json to_json(const GreenResult& g) {
    Json out{{"place", to_json(g.place)}, {"lo", g.value.lo}, {"hi", g.value.hi}, {"mode", to_string(g.mode)},
             {"steps", g.steps}};
    if (g.exact) out["exact"] = {{"coeff", to_string(*g.exact)}, {"prime", g.place.to_string()}};
    return out;
}

Json to_json(const HeightResult& h) {
    return {{"lo", h.value.lo}, {"hi", h.value.hi}, {"method", to_string(h.method)}, {"steps", h.steps}};
}

Json to_json(const MKConstant& c) {
    Json fin = Json::object();
    for (const auto& [p, q] : c.finite) fin[std::to_string(p)] = {{"coeff", to_string(q)}, {"prime", std::to_string(p)}};
    return {{"inf", to_json(c.archimedean)}, {"finite", fin}};
}

Json to_json(const ConstantsReport& r) {
    if (!r.computed) return {{"computed", false}, {"reason", r.not_computed_reason}};
    Json exc = Json::array();
    for (const auto& v : r.exceptional) exc.push_back(to_json(v));
    return {{"computed", true},
            {"a", to_json(r.a)},
            {"b", to_json(r.b)},
            {"e", to_json(r.mvt_e)},
            {"c", to_json(r.c)},
            {"delta", to_json(r.delta)},
            {"exceptionalPlaces", exc},
            {"badPlaces", r.bad_places},
            {"placesInS", r.places_in_S},
            {"orbitBound", r.orbit_bound.get_str()},
            {"epsilon",
             {{"delta", to_string(r.epsilon.delta)},
              {"d", r.epsilon.d},
              {"orbitBound", r.epsilon.orbit_bound.get_str()},
              {"approx", r.epsilon.approx},
              {"log10", r.epsilon.log10}}},
            {"cPrime", to_json(r.c_prime)},
            {"C", to_json(r.C)},
            {"log10C", r.log10_C}};
}

Json to_json(const ResultantBound& r) {
    return {{"resultant", to_json(r.resultant)}, {"lhs", to_json(r.lhs)}, {"rhs", to_json(r.rhs)}, {"ok", r.ok}};
}

Json to_json(const OrbitRecord& r) {
    Json pts = Json::array(), hs = Json::array();
    for (const auto& q : r.points) pts.push_back(to_json(q));
    for (const auto& h : r.naive_heights) hs.push_back(h.mid());
    Json ev{{"kind", to_string(r.event)}};
    if (r.event == OrbitEvent::CycleFound) {
        ev["preperiod"] = r.preperiod;
        ev["period"] = r.period;
    } else if (r.event == OrbitEvent::EscapeCertified) {
        ev["place"] = to_json(*r.escape_place);
        ev["step"] = r.escape_step;
    }
    return {{"points", pts}, {"event", ev}, {"naiveHeights", hs}};
}

Json to_json(const Certificate& c) {
    if (c.preperiodic)
        return {{"verdict", "preperiodic"}, {"preperiod", c.preperiod}, {"period", c.period}, {"evidence", c.evidence}};
    Json out{{"verdict", "wandering"}, {"hhatLowerBound", c.hhat_lower}, {"evidence", c.evidence}};
    out["witness"] = c.witness ? to_json(*c.witness) : Json(nullptr);
    return out;
}

Json to_json(const std::vector<PlaceObstruction>& obs) {
    Json places = Json::array();
    for (const auto& o : obs) {
        Json pj{{"place", std::to_string(o.p)}, {"valuation", o.valuation_t}, {"obstructed", o.obstructed},
                {"reason", o.reason}};
        if (o.forced_valuation) pj["forcedValuation"] = to_json(*o.forced_valuation);
        places.push_back(pj);
    }
    return {{"obstructed", obstructed(obs)}, {"places", places}};
}

Json to_json(const CriterionResult& r) {
    Json out{{"solvable", r.solvable}, {"value", r.value.get_str()}};
    out["witness"] = r.witness ? Json(r.witness->get_str()) : Json(nullptr);
    return out;
}

Json to_json(const ScanReport& r) {
    Json findings = Json::array();
    for (const auto& f : r.findings)
        findings.push_back({{"t", to_json(f.t)},
                            {"parameter", to_json(f.parameter)},
                            {"z", to_json(f.z)},
                            {"preperiod", f.preperiod},
                            {"period", f.period}});
    Json hist = Json::array();
    for (const auto& [h, b] : r.counts_by_height)
        hist.push_back({{"height", h}, {"parameters", b.parameters}, {"candidates", b.candidates}, {"findings", b.findings}});
    Json filters = Json::object();
    for (const auto& p : r.parameters) filters[p.filter] = filters.value(p.filter, 0) + 1;
    return {{"schema", kScanSchema},
            {"family", r.family},
            {"cover", r.cover ? Json(*r.cover) : Json(nullptr)},
            {"tHeight", r.t_height},
            {"zHeight", r.z_height},
            {"tBoxBound", r.t_bound.get_str()},
            {"zBoxBound", r.z_bound.get_str()},
            {"complete", r.complete},
            {"parameters", r.parameters.size()},
            {"filters", filters},
            {"certifyCalls", r.certify_calls},
            {"preperiodicFindings", findings},
            {"countsByHeight", hist},
            {"elapsedSeconds", r.elapsed_seconds}};
}

ScanReport scan_report_from_json(const Json& j) {
    if (!j.is_object() || j.value("schema", "") != std::string(kScanSchema))
        throw SpecError(std::string("expected a scan report with schema ") + kScanSchema);
    ScanReport r;
    try {
        r.family = j.at("family").get<std::string>();
        if (!j.at("cover").is_null()) r.cover = j.at("cover").get<std::string>();
        r.t_height = j.at("tHeight").get<double>();
        r.z_height = j.at("zHeight").get<double>();
        r.t_bound = Integer(j.at("tBoxBound").get<std::string>());
        r.z_bound = Integer(j.at("zBoxBound").get<std::string>());
        r.complete = j.at("complete").get<bool>();
        r.certify_calls = j.at("certifyCalls").get<long>();
        r.elapsed_seconds = j.at("elapsedSeconds").get<double>();
        for (const auto& f : j.at("preperiodicFindings"))
            r.findings.push_back(ScanFinding{rational_from_json(f.at("t")), rational_from_json(f.at("parameter")),
                                             rational_from_json(f.at("z")), f.at("preperiod").get<int>(),
                                             f.at("period").get<int>()});
        for (const auto& b : j.at("countsByHeight"))
            r.counts_by_height[b.at("height").get<long>()] =
                HeightBucket{b.at("parameters").get<long>(), b.at("candidates").get<long>(), b.at("findings").get<long>()};
    } catch (const Json::exception& err) {
        throw SpecError(std::string("malformed scan report: ") + err.what());
    }
    return r;
}

}  // namespace heightforge

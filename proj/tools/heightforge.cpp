#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"

#include "heightforge/constants.hpp"
#include "heightforge/heights.hpp"
#include "heightforge/io.hpp"
#include "heightforge/preperiodic.hpp"
#include "heightforge/repro.hpp"
#include "heightforge/scan.hpp"

using namespace heightforge;

namespace {

enum Exit { kOk = 0, kSpec = 1, kDomain = 2, kBudget = 3 };

int emit_error(const char* kind, const std::string& message, int code, std::optional<Interval> best = {}) {
    Json err{{"kind", kind}, {"message", message}};
    if (best) err["best"] = to_json(*best);
    std::cout << Json{{"error", err}}.dump(2) << '\n';
    return code;
}

double default_tol() {
    if (const char* env = std::getenv("HEIGHTFORGE_TOL")) {
        char* end = nullptr;
        double v = std::strtod(env, &end);
        if (end == env || *end != '\0' || !(v > 0)) throw SpecError(std::string("HEIGHTFORGE_TOL is not a positive number: ") + env);
        return v;
    }
    return kDefaultTol;
}

Family load_family(const std::string& path) { return family_from_json(read_json_file(path)); }
CoverAnalysis load_cover(const std::string& path) { return cover_from_json(read_json_file(path)); }

std::vector<Rational> parse_list(const std::string& text) {
    std::vector<Rational> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_rational(item));
    return out;
}

std::set<Place> parse_places(const std::string& text) {
    std::set<Place> out{Place::infinity()};
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.insert(Place::parse(item));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"heightforge: canonical heights and preperiodic points of weighted homogeneous families"};
    app.require_subcommand(1);

    std::string family_path, cover_path, t_text, z_text, x_text, y_text, place_text = "inf", out_path, csv_path;
    std::string t_values_text, s_text, criteria_text;
    std::string method = "local";
    double tol = 0.0, t_height = 0.0, z_height = 0.0;
    int bad_places = 0, d = 0, m = 0, e = 0, jobs = 1;
    long budget = 0;
    bool no_filters = false;

    auto* height = app.add_subcommand("height", "canonical height with a preperiodicity certificate");
    height->add_option("--family", family_path, "family spec JSON")->required();
    height->add_option("--t", t_text, "parameter")->required();
    height->add_option("--z", z_text, "point")->required();
    height->add_option("--tol", tol, "interval width target");
    height->add_option("--method", method, "local or global")->check(CLI::IsMember({"local", "global"}));

    auto* green = app.add_subcommand("green", "local Green function G_v");
    green->add_option("--family", family_path)->required();
    green->add_option("--t", t_text)->required();
    green->add_option("--z", z_text)->required();
    green->add_option("--place", place_text, "inf or a prime");
    green->add_option("--tol", tol);

    auto* pairing = app.add_subcommand("pairing", "Arakelov-Green pairing g_v(x, y)");
    pairing->add_option("--family", family_path)->required();
    pairing->add_option("--t", t_text)->required();
    pairing->add_option("--x", x_text)->required();
    pairing->add_option("--y", y_text)->required();
    pairing->add_option("--place", place_text);
    pairing->add_option("--tol", tol);

    auto* constants = app.add_subcommand("constants", "explicit constants of the height inequality");
    constants->add_option("--family", family_path)->required();
    constants->add_option("--bad-places", bad_places, "number s of bad places")->required();

    auto* res = app.add_subcommand("resultant", "model resultant and its height bound");
    res->add_option("--family", family_path)->required();
    res->add_option("--t", t_text)->required();

    auto* obstruct = app.add_subcommand("obstruct", "bad-place obstruction to rational preperiodic points");
    obstruct->add_option("--family", family_path)->required();
    obstruct->add_option("--t", t_text)->required();

    auto* criterion = app.add_subcommand("criterion", "x^m + y^m = +-w^d solvability for t = x/y");
    criterion->add_option("--d", d)->required();
    criterion->add_option("--m", m)->required();
    criterion->add_option("--t", t_text)->required();

    auto* cover = app.add_subcommand("cover", "pole structure, e-generality and witness places of a cover");
    cover->add_option("--cover", cover_path)->required();
    cover->add_option("--e", e)->required();
    cover->add_option("--t", t_text, "evaluate phi(t) and search a witness place");
    cover->add_option("--S", s_text, "comma separated primes added to S = {inf}");

    auto* scan_cmd = app.add_subcommand("scan", "enumerate rational preperiodic points in a box");
    scan_cmd->add_option("--family", family_path)->required();
    scan_cmd->add_option("--cover", cover_path);
    scan_cmd->add_option("--t-height", t_height);
    scan_cmd->add_option("--t-values", t_values_text, "comma separated parameters instead of a box");
    scan_cmd->add_option("--z-height", z_height)->required();
    scan_cmd->add_option("--jobs", jobs);
    scan_cmd->add_option("--budget", budget, "maximum number of certified points, 0 for unlimited");
    scan_cmd->add_flag("--no-filters", no_filters, "certify every candidate");
    scan_cmd->add_option("--out", out_path, "write the JSON report here instead of stdout");
    scan_cmd->add_option("--csv", csv_path, "write findings as CSV");

    auto* repro = app.add_subcommand("repro", "run the acceptance checks");
    repro->add_option("--criteria", criteria_text, "comma separated ids, default all");
    repro->add_option("--jobs", jobs);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& ex) {
        return app.exit(ex);
    } catch (const CLI::ParseError& ex) {
        return emit_error("spec", ex.what(), kSpec);
    }

    try {
        if (!(tol > 0)) tol = default_tol();
        ensure_mpfr_range();
        Json out;
        if (*height) {
            Family fam = load_family(family_path);
            Rational t = parse_rational(t_text), z = parse_rational(z_text);
            Polynomial f = fam.specialize(t);
            HeightResult h = method == "global" ? global_height(f, z) : canonical_height(fam, t, z, tol);
            out = to_json(h);
            out["certificate"] = to_json(certify_point(fam, t, z));
        } else if (*green) {
            Family fam = load_family(family_path);
            out = to_json(local_green(fam, parse_rational(t_text), Place::parse(place_text), parse_rational(z_text), tol));
        } else if (*pairing) {
            Family fam = load_family(family_path);
            out = to_json(arakelov_green(fam, parse_rational(t_text), Place::parse(place_text), parse_rational(x_text),
                                         parse_rational(y_text), tol));
        } else if (*constants) {
            out = to_json(height_bound_constants(load_family(family_path), bad_places));
        } else if (*res) {
            Family fam = load_family(family_path);
            out = to_json(resultant_bound_check(fam, parse_rational(t_text)));
        } else if (*obstruct) {
            out = to_json(bad_place_obstruction(load_family(family_path), parse_rational(t_text)));
        } else if (*criterion) {
            out = to_json(power_criterion(d, m, parse_rational(t_text)));
        } else if (*cover) {
            CoverAnalysis cov = load_cover(cover_path);
            EGenerality g = is_e_general(cov, e);
            out = cover_to_json(cov);
            out["e"] = e;
            out["general"] = g.general;
            out["qualifyingPoles"] = g.qualifying;
            out["requiredPoles"] = g.required;
            if (!t_text.empty()) {
                Rational t = parse_rational(t_text);
                out["t"] = to_json(t);
                out["phi"] = to_json(cov(t));
                std::set<Place> S = parse_places(s_text);
                auto w = find_nonpower_place(cov, e, S, t);
                out["witness"] = w ? to_json(*w) : Json(nullptr);
                L1L2 split = l1_l2_split(cov, e, S, t);
                out["l1"] = to_json(split.l1);
                out["l2"] = to_json(split.l2);
            }
        } else if (*scan_cmd) {
            Family fam = load_family(family_path);
            std::optional<CoverAnalysis> cov;
            if (!cover_path.empty()) cov = load_cover(cover_path);
            ScanOptions so;
            so.t_height = t_height;
            so.z_height = z_height;
            so.jobs = jobs;
            so.budget = budget;
            so.use_filters = !no_filters;
            if (!t_values_text.empty()) so.t_values = parse_list(t_values_text);
            else if (!(t_height >= 0)) throw SpecError("--t-height must be nonnegative");
            ScanReport rep = scan(fam, cov, so);
            out = to_json(rep);
            if (!csv_path.empty()) {
                std::ofstream csv(csv_path);
                if (!csv) throw SpecError("cannot write " + csv_path);
                csv << findings_csv(rep);
            }
            if (!out_path.empty()) {
                std::ofstream f(out_path);
                if (!f) throw SpecError("cannot write " + out_path);
                f << out.dump(2) << '\n';
                out = Json{{"report", out_path}, {"findings", rep.findings.size()}, {"complete", rep.complete}};
            }
        } else if (*repro) {
            AcceptanceOptions opt;
            opt.jobs = jobs;
            std::vector<int> ids;
            std::stringstream ss(criteria_text);
            std::string item;
            while (std::getline(ss, item, ','))
                if (!item.empty()) ids.push_back(std::stoi(item));
            bool all = true;
            Json rows = Json::array();
            for (const auto& r : run_acceptance(opt, ids)) {
                all = all && r.passed;
                rows.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail},
                                {"seconds", r.seconds}});
            }
            out = Json{{"criteria", rows}, {"allPassed", all}};
        }
        std::cout << out.dump(2) << '\n';
        return kOk;
    } catch (const SpecError& err) {
        return emit_error("spec", err.what(), kSpec);
    } catch (const BudgetExceeded& err) {
        return emit_error("budget", err.what(), kBudget, err.best());
    } catch (const DomainError& err) {
        return emit_error("domain", err.what(), kDomain);
    } catch (const std::invalid_argument& err) {
        return emit_error("spec", err.what(), kSpec);
    }
}

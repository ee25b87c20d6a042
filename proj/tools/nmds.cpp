// nmds: command-line front end. JSON on stdout, a readable summary on stderr.
//
// Exit codes: 0 success or CONSISTENT, 2 VIOLATION, 3 BUDGET_PARTIAL, 1 error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nmds/code.hpp"
#include "nmds/curve.hpp"
#include "nmds/extendability.hpp"
#include "nmds/geometry.hpp"
#include "nmds/report.hpp"
#include "nmds/secants.hpp"

namespace {

using namespace nmds;

struct RunConfig {
    std::string command;
    std::uint64_t q = 0;
    std::optional<std::uint64_t> r;
    std::string curve;
    int k = 0;
    int h = 1;
    std::uint64_t budget = Budget::kDefaultLimit;
    std::uint64_t seed = 1;
    std::uint64_t sample = 0;
    unsigned workers = 0;
    bool force = false;
    std::string json_out;
    std::string matrix;
    std::string point;
    std::string theorem = "main";
    std::string filter;
    std::string path = "both";
    bool complete = false;
    int max_add = 3;
    std::uint64_t max_order = 169;
};

Json config_json(const RunConfig& c) {
    Json j{{"command", c.command}, {"q", c.q}};
    j["r"] = c.r ? Json(*c.r) : Json(nullptr);
    j["curve"] = c.curve.empty() ? Json(nullptr) : Json(c.curve);
    j["k"] = c.k ? Json(c.k) : Json(nullptr);
    j["h"] = c.h;
    j["budget"] = c.budget;
    j["seed"] = c.seed;
    j["sample"] = c.sample;
    j["workers"] = c.workers;
    j["force"] = c.force;
    j["jsonOut"] = c.json_out.empty() ? Json(nullptr) : Json(c.json_out);
    if (!c.matrix.empty()) j["matrix"] = c.matrix;
    if (!c.point.empty()) j["point"] = c.point;
    if (c.command == "verify") j["theorem"] = c.theorem;
    if (c.command == "curve-scan") j["filter"] = c.filter.empty() ? Json(nullptr) : Json(c.filter);
    if (c.command == "classify") j["path"] = c.path;
    if (c.command == "arc") {
        j["complete"] = c.complete;
        j["maxAdd"] = c.max_add;
    }
    return j;
}

FieldPtr make_field(const RunConfig& c) {
    if (c.q == 0) fail(ErrorKind::InvalidArgument, "--q is required");
    if (c.r) return Field::make(c.q, *c.r);
    return Field::of_order(c.q);
}

std::vector<std::int64_t> parse_list(const std::string& s, const std::string& what) {
    std::vector<std::int64_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoll(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            fail(ErrorKind::Parse, what + ": cannot parse \"" + item + "\"");
        }
    }
    return out;
}

EllipticCurve make_curve(const FieldPtr& F, const RunConfig& c) {
    if (c.curve.empty()) fail(ErrorKind::InvalidArgument, "--curve a1,a2,a3,a4,a5 is required");
    const auto v = parse_list(c.curve, "--curve");
    if (v.size() != 5) fail(ErrorKind::Parse, "--curve needs exactly five encodings");
    Coefficients a{};
    for (std::size_t i = 0; i < 5; ++i) {
        if (v[i] < 0 || static_cast<std::uint64_t>(v[i]) >= F->q())
            fail(ErrorKind::InvalidArgument, "curve coefficient outside [0, q)");
        a[i] = static_cast<Elem>(v[i]);
    }
    return EllipticCurve::make(F, a);
}

struct Outcome {
    Json result;
    int exit_code = 0;
    std::optional<FieldPtr> field;
    std::optional<Coefficients> curve;
    std::uint64_t spent = 0;
};

Outcome cmd_nq1(const RunConfig& c) {
    Outcome o;
    o.result = Json{{"q", c.q}, {"nq1", nq1(c.q)}};
    o.field = make_field(c);
    return o;
}

Outcome cmd_curve_scan(const RunConfig& c) {
    Outcome o;
    const auto F = make_field(c);
    o.field = F;
    CurveFilter filter;
    if (c.filter == "j0")
        filter = [](const CurveSummary& s) { return s.j_is_zero; };
    else if (c.filter == "jnonzero")
        filter = [](const CurveSummary& s) { return !s.j_is_zero; };
    else if (c.filter == "neven")
        filter = [](const CurveSummary& s) { return s.n_is_even; };
    else if (!c.filter.empty())
        fail(ErrorKind::InvalidArgument, "unknown filter " + c.filter + " (j0, jnonzero, neven)");
    ScanOptions opts;
    opts.max_order = c.max_order;
    opts.parallel.workers = c.workers;
    std::size_t count = 0, max_n = 0;
    Json curves = Json::array();
    curve_scan(
        F, filter,
        [&](const EllipticCurve& E) {
            ++count;
            max_n = std::max(max_n, E.n());
            curves.push_back(Json{{"coeffs", coeffs_json(E.coeffs())}, {"n", E.n()}, {"j", E.j()}});
        },
        opts);
    o.result = Json{{"q", F->q()}, {"count", count}, {"maxN", max_n}, {"nq1", nq1(F->q())}, {"curves", std::move(curves)}};
    return o;
}

Outcome cmd_build(const RunConfig& c) {
    Outcome o;
    const auto F = make_field(c);
    const auto E = make_curve(F, c);
    o.field = F;
    o.curve = E.coeffs();
    ArcOptions ao;
    ao.verify_limit = c.budget;
    ao.parallel.workers = c.workers;
    const auto A = arc_make(E, c.k, ao);
    const auto C = generator_matrix(A);
    o.result = Json{{"curve", curve_json(E)},
                    {"k", c.k},
                    {"arcVerified", A.verified()},
                    {"generator", matrix_json(C.generator())}};
    return o;
}

Outcome cmd_classify(const RunConfig& c) {
    Outcome o;
    Budget budget(c.budget);
    Parallelism par{c.workers};
    std::optional<LinearCode> C;
    if (!c.matrix.empty()) {
        std::ifstream in(c.matrix);
        if (!in) fail(ErrorKind::InvalidArgument, "cannot open " + c.matrix);
        auto pm = parse_matrix(in);
        o.field = pm.field;
        C.emplace(pm.field, std::move(pm.G));
    } else {
        const auto F = make_field(c);
        const auto E = make_curve(F, c);
        o.field = F;
        o.curve = E.coeffs();
        ArcOptions ao;
        ao.verify_limit = c.budget;
        ao.parallel = par;
        C.emplace(generator_matrix(E, c.k, ao));
    }
    if (c.path != "both" && c.path != "codewords" && c.path != "hyperplanes")
        fail(ErrorKind::InvalidArgument, "--path must be codewords, hyperplanes or both");
    const DistancePath first = c.path == "hyperplanes" ? DistancePath::Hyperplanes : DistancePath::Codewords;
    const auto p = classify(*C, budget, par, first);
    o.result = parameters_json(p);
    if (c.path == "both") {
        const std::size_t d2 = min_distance_hyperplanes(*C, budget, par);
        o.result["dHyperplanes"] = d2;
        o.result["pathsAgree"] = d2 == p.d;
        if (d2 != p.d) o.exit_code = 2;
    }
    o.spent = budget.spent();
    return o;
}

Outcome cmd_trisecants(const RunConfig& c) {
    Outcome o;
    const auto F = make_field(c);
    const auto E = make_curve(F, c);
    o.field = F;
    o.curve = E.coeffs();
    if (!c.point.empty()) {
        const auto v = parse_list(c.point, "--point");
        if (v.size() != 3) fail(ErrorKind::Parse, "--point needs three coordinates X1,X2,X3");
        std::vector<Elem> pv;
        for (auto x : v) {
            if (x < 0 || static_cast<std::uint64_t>(x) >= F->q()) fail(ErrorKind::InvalidArgument, "point coordinate outside [0, q)");
            pv.push_back(static_cast<Elem>(x));
        }
        const auto P = ProjPoint::from(*F, pv);
        o.result = line_profile_json(line_profile(P, E), F->q());
    } else {
        const auto s = min_trisecants(E, Parallelism{c.workers});
        o.result = trisecant_scan_json(s);
        o.result["miooHypotheses"] = mioo_hypotheses(E);
    }
    return o;
}

Outcome cmd_arc(const RunConfig& c) {
    Outcome o;
    const auto F = make_field(c);
    const auto E = make_curve(F, c);
    o.field = F;
    o.curve = E.coeffs();
    Budget budget(c.budget);
    Parallelism par{c.workers};
    ArcOptions ao;
    ao.verify_limit = c.budget;
    ao.parallel = par;
    const auto A = arc_make(E, c.k, ao);
    const auto hist = secant_profile(A, budget, par);
    const auto addable = addable_points(A, budget, par);
    o.result = Json{{"k", c.k},
                    {"n", A.n()},
                    {"arcVerified", A.verified()},
                    {"secantProfile", secant_profile_json(hist)},
                    {"addable", tuples_json(addable)},
                    {"complete", addable.empty()}};
    if (c.complete) {
        const auto comp = complete_from(A, addable, c.max_add);
        o.result["completionAdded"] = tuples_json(comp.added);
        o.result["completionComplete"] = comp.complete;
    }
    o.spent = budget.spent();
    return o;
}

Outcome cmd_verify(const RunConfig& c) {
    Outcome o;
    const auto F = make_field(c);
    const auto E = make_curve(F, c);
    o.field = F;
    o.curve = E.coeffs();
    VerifyOptions vo;
    if (c.theorem == "main")
        vo.theorem = Theorem::Main;
    else if (c.theorem == "j0")
        vo.theorem = Theorem::J0;
    else
        fail(ErrorKind::InvalidArgument, "--theorem must be main or j0");
    vo.budget = c.budget;
    vo.seed = c.seed;
    vo.sample = c.sample;
    vo.force = c.force;
    vo.parallel.workers = c.workers;
    const auto rep = verify_theorem(E, c.k, vo);
    o.result = verify_json(rep);
    o.spent = rep.budget_spent;
    o.exit_code = rep.verdict == Verdict::Violation ? 2 : rep.verdict == Verdict::BudgetPartial ? 3 : 0;
    return o;
}

Outcome cmd_oracle(const RunConfig& c) {
    Outcome o;
    const auto F = make_field(c);
    o.field = F;
    Budget budget(c.budget);
    Parallelism par{c.workers};
    std::vector<EllipticCurve> curves;
    if (!c.curve.empty()) {
        curves.push_back(make_curve(F, c));
        o.curve = curves.front().coeffs();
    } else {
        ScanOptions so;
        so.max_order = c.max_order;
        curves = collect_curves(F, {}, so);
    }
    Json rows = Json::array();
    std::size_t disagreements = 0;
    for (const auto& E : curves) {
        if (static_cast<std::size_t>(c.k) + 1 > E.n()) continue;
        const auto A = arc_make(E, c.k);
        const auto C = generator_matrix(A);
        const std::size_t d = min_distance_codewords(C, budget, par);
        const int threshold = static_cast<int>(E.n() - d);
        const auto addable = addable_points(A, budget, par, threshold);
        const bool oracle = h_extendability_oracle(C, static_cast<std::size_t>(c.h), budget, d);
        Json row{{"coeffs", coeffs_json(E.coeffs())}, {"n", E.n()}, {"d", d}, {"addable", addable.size()}, {"oracle", oracle}};
        if (c.h == 1) {
            const bool agree = oracle == !addable.empty();
            row["agree"] = agree;
            disagreements += !agree;
        }
        rows.push_back(std::move(row));
    }
    o.result = Json{{"q", F->q()}, {"k", c.k}, {"h", c.h}, {"curves", std::move(rows)}};
    if (c.h == 1) o.result["disagreements"] = disagreements;
    o.spent = budget.spent();
    o.exit_code = disagreements ? 2 : 0;
    return o;
}

void print_table(const Json& j, const std::string& prefix = "") {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string key = prefix + it.key();
        if (it->is_object() && prefix.empty() && it.key() != "config")
            print_table(*it, key + ".");
        else if (!it->is_array() && !it->is_object())
            std::cerr << "  " << key << ": " << it->dump() << "\n";
        else if (it->is_array())
            std::cerr << "  " << key << ": [" << it->size() << " entries]\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Near-MDS codes from elliptic curves over finite fields of odd order"};
    app.set_help_flag("--help", "print this help and exit");
    app.require_subcommand(1);
    RunConfig cfg;

    auto common = [&](CLI::App* s) {
        s->add_option("--q", cfg.q, "field order (or the prime, with --r)");
        s->add_option("--r", cfg.r, "extension degree; the order is then q^r");
        s->add_option("--budget", cfg.budget, "element-operation cap")->capture_default_str();
        s->add_option("--workers", cfg.workers, "worker threads (0 = all cores)");
        s->add_option("--json-out", cfg.json_out, "also write the JSON report to this path");
    };
    auto with_curve = [&](CLI::App* s) {
        s->add_option("--curve", cfg.curve, "a1,a2,a3,a4,a5 as integer encodings");
    };
    auto with_k = [&](CLI::App* s) { s->add_option("--k", cfg.k, "code dimension"); };

    auto* s_nq1 = app.add_subcommand("nq1", "maximum number of rational points of an elliptic curve over F_q");
    common(s_nq1);
    auto* s_scan = app.add_subcommand("curve-scan", "enumerate nonsingular curves y^2 = x^3 + ax^2 + bx + c");
    common(s_scan);
    s_scan->add_option("--filter", cfg.filter, "j0, jnonzero or neven");
    s_scan->add_option("--max-order", cfg.max_order, "refuse fields larger than this")->capture_default_str();
    auto* s_build = app.add_subcommand("build", "generator matrix of the k-elliptic code");
    common(s_build);
    with_curve(s_build);
    with_k(s_build);
    auto* s_class = app.add_subcommand("classify", "parameters and MDS/NMDS label of a code");
    common(s_class);
    with_curve(s_class);
    with_k(s_class);
    s_class->add_option("--matrix", cfg.matrix, "matrix file: \"q k n\" then k rows");
    s_class->add_option("--path", cfg.path, "codewords, hyperplanes or both")->capture_default_str();
    auto* s_tri = app.add_subcommand("trisecants", "line profile of a point, or the minimum over all external points");
    common(s_tri);
    with_curve(s_tri);
    s_tri->add_option("--point", cfg.point, "X1,X2,X3 of a point off the curve");
    auto* s_arc = app.add_subcommand("arc", "secant profile and addable points of phi_k(E)");
    common(s_arc);
    with_curve(s_arc);
    with_k(s_arc);
    s_arc->add_flag("--complete", cfg.complete, "greedily complete the arc");
    s_arc->add_option("--max-add", cfg.max_add, "cap on points added by --complete")->capture_default_str();
    auto* s_ver = app.add_subcommand("verify", "check the non-extendability statements for k = 3..6");
    common(s_ver);
    with_curve(s_ver);
    with_k(s_ver);
    s_ver->add_option("--theorem", cfg.theorem, "main or j0")->capture_default_str();
    s_ver->add_option("--seed", cfg.seed, "sampling seed")->capture_default_str();
    s_ver->add_option("--sample", cfg.sample, "sampled points (0 = default for k)");
    s_ver->add_flag("--force", cfg.force, "run outside the hypotheses");
    auto* s_or = app.add_subcommand("oracle", "brute-force h-extendability against the arc decision");
    common(s_or);
    with_curve(s_or);
    with_k(s_or);
    s_or->add_option("--h", cfg.h, "number of added columns")->capture_default_str();
    s_or->add_option("--max-order", cfg.max_order, "refuse fields larger than this when scanning curves")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        Outcome o;
        cfg.command = app.get_subcommands().front()->get_name();
        if (cfg.command == "nq1")
            o = cmd_nq1(cfg);
        else if (cfg.command == "curve-scan")
            o = cmd_curve_scan(cfg);
        else if (cfg.command == "build")
            o = cmd_build(cfg);
        else if (cfg.command == "classify")
            o = cmd_classify(cfg);
        else if (cfg.command == "trisecants")
            o = cmd_trisecants(cfg);
        else if (cfg.command == "arc")
            o = cmd_arc(cfg);
        else if (cfg.command == "verify")
            o = cmd_verify(cfg);
        else
            o = cmd_oracle(cfg);

        Json report = o.result;
        report["config"] = config_json(cfg);
        report["field"] = o.field ? field_json(**o.field) : Json(nullptr);
        report["curveCoeffs"] = o.curve ? coeffs_json(*o.curve) : Json(nullptr);
        report["tool"] = Json{{"name", "nmds"}, {"version", kVersion}};
        report["budget"] = Json{{"limit", cfg.budget}, {"spent", o.spent}};
        const std::string text = report.dump(2);
        std::cout << text << "\n";
        if (!cfg.json_out.empty()) {
            std::ofstream out(cfg.json_out);
            if (!out) fail(ErrorKind::InvalidArgument, "cannot write " + cfg.json_out);
            out << text << "\n";
        }
        std::cerr << "nmds " << cfg.command << "\n";
        print_table(o.result);
        return o.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

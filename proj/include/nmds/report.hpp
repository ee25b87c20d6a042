#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nmds/code.hpp"
#include "nmds/curve.hpp"
#include "nmds/extendability.hpp"
#include "nmds/geometry.hpp"
#include "nmds/gf.hpp"
#include "nmds/secants.hpp"

namespace nmds {

inline constexpr const char* kVersion = "1.0.0";

using Json = nlohmann::ordered_json;

inline Json field_json(const Field& F) {
    return Json{{"p", F.p()}, {"r", F.r()}, {"modulus", F.modulus()}};
}

inline Json coeffs_json(const Coefficients& a) { return Json(std::vector<Elem>(a.begin(), a.end())); }

inline Json point_json(const CurvePoint& P) {
    if (P.infinite) return "inf";
    return Json::array({P.x, P.y});
}

inline Json curve_json(const EllipticCurve& E, bool with_points = true) {
    Json j{{"q", E.field().q()}, {"coeffs", coeffs_json(E.coeffs())}, {"n", E.n()}, {"j", E.j()}};
    if (with_points) {
        Json pts = Json::array();
        for (const auto& P : E.points()) pts.push_back(point_json(P));
        j["points"] = std::move(pts);
    }
    return j;
}

template <class Tag>
Json tuple_json(const ProjectiveTuple<Tag>& t) {
    return Json(t.coords());
}

inline Json tuples_json(const std::vector<ProjPoint>& v) {
    Json a = Json::array();
    for (const auto& p : v) a.push_back(tuple_json(p));
    return a;
}

inline Json parameters_json(const CodeParameters& p) {
    return Json{{"n", p.n},         {"k", p.k},           {"d", p.d},
                {"dDual", p.d_dual}, {"s", p.s},           {"sDual", p.s_dual},
                {"label", to_string(p.label)}};
}

inline Json matrix_json(const Matrix& M) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < M.rows; ++i) rows.push_back(std::vector<Elem>(M.row(i).begin(), M.row(i).end()));
    return rows;
}

inline Json secant_profile_json(const std::vector<std::uint64_t>& hist) {
    Json j = Json::object();
    for (std::size_t s = 0; s < hist.size(); ++s) j[std::to_string(s)] = hist[s];
    return j;
}

inline Json line_profile_json(const LineProfile& p, std::uint32_t q) {
    return Json{{"point", tuple_json(p.point)},
                {"tangents", p.tangents},
                {"trisecants", p.trisecants},
                {"chords", p.chords},
                {"sparse", p.sparse},
                {"hasNonVerticalTangent", p.affine ? Json(p.has_nonvertical_tangent) : Json(nullptr)},
                {"hasRationalNonVerticalTangent", p.affine ? Json(p.has_rational_nonvertical_tangent) : Json(nullptr)},
                {"sumsToQPlus1", p.total() == q + 1}};
}

inline Json trisecant_scan_json(const TrisecantScan& s) {
    Json hist = Json::object();
    for (auto [k, v] : s.histogram) hist[std::to_string(k)] = v;
    return Json{{"min", s.min_count},
                {"argmin", s.points_scanned ? tuple_json(s.argmin) : Json(nullptr)},
                {"pointsScanned", s.points_scanned},
                {"maxTangents", s.max_tangents},
                {"affineWithoutNonVerticalTangent", s.affine_without_nonvertical_tangent},
                {"affineWithoutRationalNonVerticalTangent", s.affine_without_rational_nonvertical_tangent},
                {"histogram", std::move(hist)}};
}

inline Json frame_json(const Frame& f) {
    return Json{{"u", f.u},
                {"r", f.r},
                {"s", f.s},
                {"t", f.t},
                {"identity", f.identity()},
                {"verticalMeetsTwoAffine", f.vertical_ok},
                {"yZeroTrisecant", f.y0_ok},
                {"diagonalTrisecant", f.diagonal_ok}};
}

inline Json witness_json(const WitnessReport& w) {
    return Json{{"point", tuple_json(w.q)},
                {"case", w.case_tag},
                {"hyperplane", tuple_json(w.hyperplane)},
                {"secantPoints", w.secant_points}};
}

inline Json verify_json(const VerifyReport& r) {
    Json cases = Json::object();
    for (const auto& [k, v] : r.cases) cases[k] = v;
    Json j{{"theorem", to_string(r.theorem)},
           {"k", r.k},
           {"q", r.q},
           {"curve", coeffs_json(r.curve)},
           {"n", r.n},
           {"j", r.j},
           {"verdict", to_string(r.verdict)},
           {"tag", r.in_hypothesis ? Json(nullptr) : Json("OUT_OF_HYPOTHESIS")},
           {"path", r.path},
           {"frame", r.frame ? frame_json(*r.frame) : Json(nullptr)},
           {"framedCurve", r.framed_curve ? coeffs_json(*r.framed_curve) : Json(nullptr)},
           {"candidates", r.candidates},
           {"addable", tuples_json(r.addable)},
           {"completionAdded", tuples_json(r.completion_added)},
           {"completionComplete", r.completion_complete},
           {"sampled", r.sampled},
           {"seed", r.seed},
           {"witnessFailures", tuples_json(r.witness_failures)},
           {"cases", std::move(cases)},
           {"violations", r.violations},
           {"note", r.note}};
    return j;
}

}  // namespace nmds

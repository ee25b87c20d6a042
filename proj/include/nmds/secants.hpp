#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nmds/curve.hpp"
#include "nmds/error.hpp"
#include "nmds/geometry.hpp"
#include "nmds/gf.hpp"
#include "nmds/parallel.hpp"

namespace nmds {

/// Planar coordinates (X1:X2:X3) of a curve point: (1:x:y), or (0:0:1) at infinity.
inline std::array<Elem, 3> plane_coords(const CurvePoint& P) {
    if (P.infinite) return {0, 0, 1};
    return {1, P.x, P.y};
}

inline ProjPoint plane_point(const Field& F, const CurvePoint& P) {
    const auto c = plane_coords(P);
    return ProjPoint::from(F, {c[0], c[1], c[2]});
}

inline std::array<Elem, 3> cross(const Field& F, std::span<const Elem> a, std::span<const Elem> b) {
    return {F.sub(F.mul(a[1], b[2]), F.mul(a[2], b[1])), F.sub(F.mul(a[2], b[0]), F.mul(a[0], b[2])),
            F.sub(F.mul(a[0], b[1]), F.mul(a[1], b[0]))};
}

/// Gradient of the homogenized f at a rational point: the dual coordinates of
/// the tangent line there.
inline std::array<Elem, 3> tangent_coords(const EllipticCurve& E, const CurvePoint& R) {
    if (R.infinite) return {1, 0, 0};
    const Field& F = E.field();
    const auto& a = E.coeffs();
    const Elem x = R.x, y = R.y;
    const auto c = [&](std::int64_t v) { return F.from_int(v); };
    Elem t1 = F.add(F.mul(y, y), F.mul(a[0], F.mul(x, y)));
    t1 = F.add(t1, F.mul(c(2), F.mul(a[1], y)));
    t1 = F.sub(t1, F.mul(a[2], F.mul(x, x)));
    t1 = F.sub(t1, F.mul(c(2), F.mul(a[3], x)));
    t1 = F.sub(t1, F.mul(c(3), a[4]));
    Elem t2 = F.sub(F.mul(a[0], y), F.mul(c(3), F.mul(x, x)));
    t2 = F.sub(t2, F.mul(c(2), F.mul(a[2], x)));
    t2 = F.sub(t2, a[3]);
    const Elem t3 = F.add(F.add(F.mul(c(2), y), F.mul(a[0], x)), a[1]);
    return {t1, t2, t3};
}

inline Hyperplane tangent_line(const EllipticCurve& E, const CurvePoint& R) {
    const auto t = tangent_coords(E, R);
    return Hyperplane::from(E.field(), {t[0], t[1], t[2]});
}

enum class MeetKind { Trisecant, Tangent, Chord, Sparse };

inline std::string to_string(MeetKind k) {
    switch (k) {
        case MeetKind::Trisecant: return "trisecant";
        case MeetKind::Tangent: return "tangent";
        case MeetKind::Chord: return "chord";
        case MeetKind::Sparse: return "sparse";
    }
    return "sparse";
}

/// Rational intersection points of a line with the curve and their
/// intersection multiplicities. The remaining multiplicity (3 minus the sum)
/// belongs to a conjugate pair of irrational points.
struct LineMeet {
    std::vector<CurvePoint> points;
    std::vector<int> multiplicity;
    MeetKind kind = MeetKind::Sparse;

    int rational_degree() const {
        int s = 0;
        for (int m : multiplicity) s += m;
        return s;
    }
};

namespace detail {

inline MeetKind classify_meet(const std::vector<int>& mult) {
    if (mult.size() == 3) return MeetKind::Trisecant;
    for (int m : mult)
        if (m >= 2) return MeetKind::Tangent;
    if (mult.size() == 2) return MeetKind::Chord;
    return MeetKind::Sparse;
}

// Roots with multiplicity of the monic cubic x^3 + c2 x^2 + c1 x + c0, by
// evaluation at every element and repeated synthetic division.
inline std::vector<std::pair<Elem, int>> cubic_roots(const Field& F, Elem c2, Elem c1, Elem c0) {
    std::vector<std::pair<Elem, int>> out;
    for (Elem x = 0; x < F.q(); ++x) {
        std::vector<Elem> poly{c0, c1, c2, 1};  // low degree first
        int m = 0;
        while (poly.size() > 1) {
            // Horner division by (X - x)
            Elem acc = 0;
            std::vector<Elem> quot(poly.size() - 1);
            for (std::size_t i = poly.size(); i-- > 0;) {
                const Elem next = F.add(F.mul(acc, x), poly[i]);
                if (i > 0) quot[i - 1] = next;
                acc = next;
            }
            if (acc != 0) break;
            ++m;
            poly = std::move(quot);
        }
        if (m > 0) out.emplace_back(x, m);
    }
    return out;
}

}  // namespace detail

inline LineMeet line_meet(const Hyperplane& line, const EllipticCurve& E) {
    if (line.dim() != 3) fail(ErrorKind::DimensionMismatch, "lines of the plane have 3 dual coordinates");
    const Field& F = E.field();
    const auto& a = E.coeffs();
    const Elem l1 = line[0], l2 = line[1], l3 = line[2];
    LineMeet out;
    if (l2 == 0 && l3 == 0) {  // X1 = 0
        out.points.push_back(CurvePoint::at_infinity());
        out.multiplicity.push_back(3);
    } else if (l3 == 0) {  // vertical x = x0, through P_inf
        const Elem x0 = F.neg(F.div(l1, l2));
        const auto ys = E.fiber(x0);
        for (Elem y : ys) {
            out.points.push_back({x0, y, false});
            out.multiplicity.push_back(ys.size() == 1 ? 2 : 1);
        }
        out.points.push_back(CurvePoint::at_infinity());
        out.multiplicity.push_back(1);
    } else {  // y = m x + t
        const Elem m = F.neg(F.div(l2, l3));
        const Elem t = F.neg(F.div(l1, l3));
        const Elem c2 = F.sub(F.sub(a[2], F.mul(m, m)), F.mul(a[0], m));
        Elem c1 = F.sub(a[3], F.mul(F.from_int(2), F.mul(m, t)));
        c1 = F.sub(F.sub(c1, F.mul(a[0], t)), F.mul(a[1], m));
        const Elem c0 = F.sub(F.sub(a[4], F.mul(t, t)), F.mul(a[1], t));
        for (auto [x, mult] : detail::cubic_roots(F, c2, c1, c0)) {
            out.points.push_back({x, F.add(F.mul(m, x), t), false});
            out.multiplicity.push_back(mult);
        }
    }
    out.kind = detail::classify_meet(out.multiplicity);
    return out;
}

struct LineProfile {
    ProjPoint point;
    std::size_t tangents = 0;
    std::size_t trisecants = 0;
    std::size_t chords = 0;
    std::size_t sparse = 0;
    bool affine = false;
    /// Some non-vertical line through P touches E at a point over the algebraic closure.
    bool has_nonvertical_tangent = false;
    /// Some non-vertical rational line through P is tangent (so touches at a rational point).
    bool has_rational_nonvertical_tangent = false;

    std::size_t total() const { return tangents + trisecants + chords + sparse; }
};

/// Groups the rational points of E by the line joining them to a point P of
/// the plane. Returns one entry per line through P that meets E(F_q), ordered
/// by line rank; a P on E is listed on every line.
struct PencilLine {
    std::uint64_t rank = 0;
    std::array<Elem, 3> line{};
    std::vector<std::uint32_t> members;  // curve point indices, ascending
};

class PencilScratch {
public:
    explicit PencilScratch(std::uint32_t q) : space_(q, 3), slot_(space_.size(), 0), stamp_(space_.size(), 0) {}

    std::vector<PencilLine> lines_through(const EllipticCurve& E, std::span<const Elem> P) {
        const Field& F = E.field();
        ++epoch_;
        lines_.clear();
        std::optional<std::uint32_t> self;
        const auto& pts = E.points();
        for (std::uint32_t i = 0; i < pts.size(); ++i) {
            const auto c = plane_coords(pts[i]);
            auto l = cross(F, P, c);
            if (!normalize(F, l)) {
                self = i;
                continue;
            }
            const std::uint64_t r = space_.rank(l);
            if (stamp_[r] != epoch_) {
                stamp_[r] = epoch_;
                slot_[r] = static_cast<std::uint32_t>(lines_.size());
                lines_.push_back({r, l, {}});
            }
            lines_[slot_[r]].members.push_back(i);
        }
        if (self) {
            // every line through P; only those carrying other points were seen
            std::vector<Elem> pv(P.begin(), P.end());
            Matrix M(1, 3);
            for (int j = 0; j < 3; ++j) M(0, j) = pv[j];
            const auto ns = nullspace(F, M);
            for (Elem lam = 0; lam <= F.q(); ++lam) {
                std::array<Elem, 3> l{};
                for (int j = 0; j < 3; ++j)
                    l[j] = lam == F.q() ? ns[1][j] : F.add(ns[0][j], F.mul(lam, ns[1][j]));
                normalize(F, l);
                const std::uint64_t r = space_.rank(l);
                if (stamp_[r] != epoch_) {
                    stamp_[r] = epoch_;
                    slot_[r] = static_cast<std::uint32_t>(lines_.size());
                    lines_.push_back({r, l, {}});
                }
                auto& mem = lines_[slot_[r]].members;
                mem.insert(std::lower_bound(mem.begin(), mem.end(), *self), *self);
            }
        }
        std::sort(lines_.begin(), lines_.end(), [](const PencilLine& a, const PencilLine& b) { return a.rank < b.rank; });
        return lines_;
    }

private:
    ProjectiveSpace space_;
    std::vector<std::uint32_t> slot_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_ = 0;
    std::vector<PencilLine> lines_;
};

inline bool on_curve(const EllipticCurve& E, std::span<const Elem> P) { return E.contains(P[0], P[1], P[2]); }

namespace detail {

using Poly = std::vector<Elem>;  // coefficients, constant term first

inline Poly poly_mul(const Field& F, const Poly& a, const Poly& b) {
    Poly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = F.add(c[i + j], F.mul(a[i], b[j]));
    return c;
}

}  // namespace detail

/// Whether a non-vertical line through the affine point (x0, y0) is tangent to
/// E at some point over the algebraic closure. In the canonical form
/// Y^2 = g(X) the tangency points R = (x, y) seen from P satisfy
/// 2 y y0 = 2 g(x) + g'(x)(x0 - x), so their abscissae are the roots of
/// H = (2g + g'(x0 - X))^2 - 4 y0^2 g, a sextic with leading coefficient 1.
/// The only vertical candidate is x = x0, hence the answer is H != (X - x0)^6.
inline bool nonvertical_tangent_exists(const EllipticCurve& E, Elem x0, Elem y0) {
    const Field& F = E.field();
    const auto& a = E.coeffs();
    const auto sf = E.canonical();
    const Elem inv2 = F.inv(F.from_int(2));
    const Elem v0 = F.add(y0, F.mul(F.add(F.mul(a[0], x0), a[1]), inv2));
    const detail::Poly g{sf.c, sf.b, sf.a, 1};
    const detail::Poly dg{sf.b, F.mul(F.from_int(2), sf.a), F.from_int(3)};
    detail::Poly A(4, 0);
    for (std::size_t i = 0; i < 4; ++i) A[i] = F.mul(F.from_int(2), g[i]);
    const auto lin = detail::poly_mul(F, dg, {x0, F.neg(1)});
    for (std::size_t i = 0; i < lin.size(); ++i) A[i] = F.add(A[i], lin[i]);
    auto H = detail::poly_mul(F, A, A);
    const Elem w = F.mul(F.from_int(4), F.mul(v0, v0));
    for (std::size_t i = 0; i < 4; ++i) H[i] = F.sub(H[i], F.mul(w, g[i]));
    detail::Poly target{1};
    for (int i = 0; i < 6; ++i) target = detail::poly_mul(F, target, {F.neg(x0), 1});
    return H != target;
}

/// Counts over the q+1 lines through an external point. A rational line is
/// tangent exactly when P lies on the tangent at one of its rational points
/// (tangency at an irrational point would force its conjugate as well).
inline LineProfile line_profile(const ProjPoint& P, const EllipticCurve& E, PencilScratch* scratch = nullptr) {
    if (P.dim() != 3) fail(ErrorKind::DimensionMismatch, "points of the plane have 3 coordinates");
    const Field& F = E.field();
    if (on_curve(E, P.span())) fail(ErrorKind::PointOnCurve, "point lies on the curve");
    std::optional<PencilScratch> local;
    if (!scratch) scratch = &local.emplace(F.q());
    const auto lines = scratch->lines_through(E, P.span());
    LineProfile out;
    out.point = P;
    out.affine = P[0] != 0;
    const auto& pts = E.points();
    for (const auto& L : lines) {
        bool tangent = false;
        for (auto i : L.members) {
            const auto T = tangent_coords(E, pts[i]);
            if (dot(F, T, P.span()) == 0) tangent = true;
        }
        if (L.members.size() == 3)
            ++out.trisecants;
        else if (tangent)
            ++out.tangents;
        else if (L.members.size() == 2)
            ++out.chords;
        if (tangent && out.affine && L.line[2] != 0) out.has_rational_nonvertical_tangent = true;
    }
    if (out.affine) {
        const Elem inv = F.inv(P[0]);
        out.has_nonvertical_tangent = nonvertical_tangent_exists(E, F.mul(P[1], inv), F.mul(P[2], inv));
    }
    out.sparse = F.q() + 1 - out.trisecants - out.tangents - out.chords;
    return out;
}

/// Same counts by intersecting every line through P with the curve.
inline LineProfile line_profile_exact(const ProjPoint& P, const EllipticCurve& E) {
    if (P.dim() != 3) fail(ErrorKind::DimensionMismatch, "points of the plane have 3 coordinates");
    const Field& F = E.field();
    if (on_curve(E, P.span())) fail(ErrorKind::PointOnCurve, "point lies on the curve");
    Matrix M(1, 3);
    for (int j = 0; j < 3; ++j) M(0, j) = P[j];
    const auto ns = nullspace(F, M);
    LineProfile out;
    out.point = P;
    out.affine = P[0] != 0;
    for (Elem lam = 0; lam <= F.q(); ++lam) {
        std::vector<Elem> l(3);
        for (int j = 0; j < 3; ++j) l[j] = lam == F.q() ? ns[1][j] : F.add(ns[0][j], F.mul(lam, ns[1][j]));
        const auto H = Hyperplane::from(F, l);
        const auto meet = line_meet(H, E);
        switch (meet.kind) {
            case MeetKind::Trisecant: ++out.trisecants; break;
            case MeetKind::Tangent:
                ++out.tangents;
                if (out.affine && H[2] != 0) out.has_rational_nonvertical_tangent = true;
                break;
            case MeetKind::Chord: ++out.chords; break;
            case MeetKind::Sparse: ++out.sparse; break;
        }
    }
    if (out.affine) {
        const Elem inv = F.inv(P[0]);
        out.has_nonvertical_tangent = nonvertical_tangent_exists(E, F.mul(P[1], inv), F.mul(P[2], inv));
    }
    return out;
}

/// Points of P^2 off the curve: affine (1:x:y) by (x, y), then (0:1:m) by m.
template <class Visit>
void for_each_external_point(const EllipticCurve& E, Visit&& visit) {
    const Field& F = E.field();
    const std::uint32_t q = F.q();
    for (Elem x = 0; x < q; ++x)
        for (Elem y = 0; y < q; ++y)
            if (!E.contains_affine(x, y)) visit(std::array<Elem, 3>{1, x, y});
    for (Elem m = 0; m < q; ++m) visit(std::array<Elem, 3>{0, 1, m});
}

struct TrisecantScan {
    std::size_t min_count = 0;
    ProjPoint argmin;
    std::size_t points_scanned = 0;
    std::map<std::size_t, std::uint64_t> histogram;
    std::size_t max_tangents = 0;
    std::size_t affine_without_nonvertical_tangent = 0;
    std::size_t affine_without_rational_nonvertical_tangent = 0;
};

/// Profiles every external point; min over trisecant counts with the first
/// point in scan order as witness.
inline TrisecantScan min_trisecants(const EllipticCurve& E, Parallelism par = {}) {
    const Field& F = E.field();
    const std::uint32_t q = F.q();
    std::vector<std::array<Elem, 3>> pts;
    for_each_external_point(E, [&](const std::array<Elem, 3>& p) { pts.push_back(p); });
    const std::size_t chunk = 256;
    const std::size_t chunks = (pts.size() + chunk - 1) / chunk;
    struct Part {
        std::size_t min_count = SIZE_MAX;
        std::size_t argmin = 0;
        std::map<std::size_t, std::uint64_t> hist;
        std::size_t max_tangents = 0;
        std::size_t bad_affine = 0;
        std::size_t bad_rational = 0;
    };
    auto parts = parallel_chunks<Part>(chunks, par, [&](std::size_t c) {
        Part part;
        PencilScratch scratch(q);
        const std::size_t hi = std::min(pts.size(), (c + 1) * chunk);
        for (std::size_t i = c * chunk; i < hi; ++i) {
            const auto P = ProjPoint::from(F, {pts[i][0], pts[i][1], pts[i][2]});
            const auto prof = line_profile(P, E, &scratch);
            ++part.hist[prof.trisecants];
            part.max_tangents = std::max(part.max_tangents, prof.tangents);
            if (prof.affine && !prof.has_nonvertical_tangent) ++part.bad_affine;
            if (prof.affine && !prof.has_rational_nonvertical_tangent) ++part.bad_rational;
            if (prof.trisecants < part.min_count) {
                part.min_count = prof.trisecants;
                part.argmin = i;
            }
        }
        return part;
    });
    TrisecantScan out;
    out.points_scanned = pts.size();
    out.min_count = SIZE_MAX;
    std::size_t arg = 0;
    for (const auto& p : parts) {
        if (p.min_count < out.min_count) {
            out.min_count = p.min_count;
            arg = p.argmin;
        }
        for (auto [k, v] : p.hist) out.histogram[k] += v;
        out.max_tangents = std::max(out.max_tangents, p.max_tangents);
        out.affine_without_nonvertical_tangent += p.bad_affine;
        out.affine_without_rational_nonvertical_tangent += p.bad_rational;
    }
    if (pts.empty()) {
        out.min_count = 0;
        return out;
    }
    out.argmin = ProjPoint::from(F, {pts[arg][0], pts[arg][1], pts[arg][2]});
    return out;
}

/// The hypotheses under which j = 0 curves are treated: p > 3, q > 9887,
/// j = 0, n even, and r even or p = 1 mod 3.
inline bool mioo_hypotheses(std::uint32_t p, std::uint32_t r, std::uint64_t q, bool j_zero, bool n_even) {
    return p > 3 && q > 9887 && j_zero && n_even && (r % 2 == 0 || p % 3 == 1);
}

inline bool mioo_hypotheses(const EllipticCurve& E) {
    const Field& F = E.field();
    return mioo_hypotheses(F.p(), F.r(), F.q(), E.j() == 0, E.n() % 2 == 0);
}

}  // namespace nmds

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nmds/code.hpp"
#include "nmds/curve.hpp"
#include "nmds/error.hpp"
#include "nmds/geometry.hpp"
#include "nmds/parallel.hpp"
#include "nmds/secants.hpp"

namespace nmds {

// ---------------------------------------------------------------------------
// Frames.

/// X = u^2 X' + r, Y = u^3 Y' + s u^2 X' + t.
struct Frame {
    Elem u = 1, r = 0, s = 0, t = 0;
    bool vertical_ok = false;  // X = 0 meets E in two affine points, neither (0,0)
    bool y0_ok = false;        // Y = 0 meets E in three affine points
    bool diagonal_ok = false;  // X = Y meets E in three affine points

    bool identity() const { return u == 1 && r == 0 && s == 0 && t == 0; }
    bool all() const { return vertical_ok && y0_ok && diagonal_ok; }
};

/// Coefficients after the substitution, using the standard transformation
/// rules for (A1, A2, A3, A4, A6) = (a1, a3, a2, a4, a5).
inline Coefficients transform_coefficients(const Field& F, const Coefficients& a, Elem u, Elem r, Elem s, Elem t) {
    const Elem A1 = a[0], A3 = a[1], A2 = a[2], A4 = a[3], A6 = a[4];
    const auto c = [&](std::int64_t v) { return F.from_int(v); };
    const auto M = [&](Elem x, Elem y) { return F.mul(x, y); };
    const Elem ui = F.inv(u);
    const Elem u2 = M(ui, ui), u3 = M(u2, ui), u4 = M(u2, u2), u6 = M(u3, u3);
    const Elem n1 = F.add(A1, M(c(2), s));
    Elem n2 = F.sub(A2, M(s, A1));
    n2 = F.add(n2, M(c(3), r));
    n2 = F.sub(n2, M(s, s));
    Elem n3 = F.add(A3, M(r, A1));
    n3 = F.add(n3, M(c(2), t));
    Elem n4 = F.sub(A4, M(s, A3));
    n4 = F.add(n4, M(c(2), M(r, A2)));
    n4 = F.sub(n4, M(F.add(t, M(r, s)), A1));
    n4 = F.add(n4, M(c(3), M(r, r)));
    n4 = F.sub(n4, M(c(2), M(s, t)));
    Elem n6 = F.add(A6, M(r, A4));
    n6 = F.add(n6, M(M(r, r), A2));
    n6 = F.add(n6, M(r, M(r, r)));
    n6 = F.sub(n6, M(t, A3));
    n6 = F.sub(n6, M(t, t));
    n6 = F.sub(n6, M(M(r, t), A1));
    return {M(n1, ui), M(n3, u3), M(n2, u2), M(n4, u4), M(n6, u6)};
}

inline CurvePoint transform_point(const Field& F, const CurvePoint& P, const Frame& fr) {
    if (P.infinite) return P;
    const Elem ui = F.inv(fr.u);
    const Elem u2 = F.mul(ui, ui), u3 = F.mul(u2, ui);
    const Elem dx = F.sub(P.x, fr.r);
    return {F.mul(dx, u2), F.mul(F.sub(F.sub(P.y, F.mul(fr.s, dx)), fr.t), u3), false};
}

/// Rechecks the three frame conditions by intersecting the lines with E.
inline Frame frame_conditions(const EllipticCurve& E) {
    const Field& F = E.field();
    Frame out;
    auto affine_points = [](const LineMeet& m) {
        std::vector<CurvePoint> pts;
        for (std::size_t i = 0; i < m.points.size(); ++i)
            if (!m.points[i].infinite && m.multiplicity[i] == 1) pts.push_back(m.points[i]);
        return pts;
    };
    {
        const auto m = line_meet(Hyperplane::from(F, {0, 1, 0}), E);
        const auto pts = affine_points(m);
        out.vertical_ok = pts.size() == 2 && std::none_of(pts.begin(), pts.end(), [](const CurvePoint& p) {
                              return p.x == 0 && p.y == 0;
                          });
    }
    {
        const auto m = line_meet(Hyperplane::from(F, {0, 0, 1}), E);
        out.y0_ok = affine_points(m).size() == 3;
    }
    {
        const auto m = line_meet(Hyperplane::from(F, {0, 1, F.neg(1)}), E);
        out.diagonal_ok = affine_points(m).size() == 3;
    }
    return out;
}

struct FramedCurve {
    EllipticCurve curve;
    Frame frame;
};

inline EllipticCurve apply_frame(const EllipticCurve& E, const Frame& fr) {
    return EllipticCurve::make(E.field_ptr(), transform_coefficients(E.field(), E.coeffs(), fr.u, fr.r, fr.s, fr.t));
}

struct FrameOptions {
    bool force = false;
};

/// Identity first; otherwise the first (r, t) in encoding order whose vertical
/// X = r carries two rational points other than (r, t), with the two smallest
/// slopes s < s' of non-vertical trisecants through (r, t); u = s' - s.
inline FramedCurve choose_frame(const EllipticCurve& E, FrameOptions opts = {}) {
    const Field& F = E.field();
    const std::uint32_t q = F.q();
    if (!opts.force) {
        if (q < 121) fail(ErrorKind::HypothesisNotMet, "frame search needs q >= 121 (q = " + std::to_string(q) + ")");
        if (E.j() == 0 && !mioo_hypotheses(E)) fail(ErrorKind::HypothesisNotMet, "frame search needs j != 0");
    }
    {
        Frame id = frame_conditions(E);
        if (id.all()) return {E, id};
    }
    const auto& pts = E.points();
    std::vector<std::uint32_t> count(q, 0);
    for (Elem r = 0; r < q; ++r) {
        const auto fib = E.fiber(r);
        if (fib.size() != 2) continue;
        for (Elem t = 0; t < q; ++t) {
            if (t == fib[0] || t == fib[1]) continue;
            std::fill(count.begin(), count.end(), 0);
            for (const auto& P : pts) {
                if (P.infinite || P.x == r) continue;
                ++count[F.div(F.sub(P.y, t), F.sub(P.x, r))];
            }
            std::vector<Elem> slopes;
            for (Elem s = 0; s < q && slopes.size() < 2; ++s)
                if (count[s] == 3) slopes.push_back(s);
            if (slopes.size() < 2) continue;
            Frame fr;
            fr.r = r;
            fr.t = t;
            fr.s = slopes[0];
            fr.u = F.sub(slopes[1], slopes[0]);
            EllipticCurve framed = apply_frame(E, fr);
            const Frame chk = frame_conditions(framed);
            fr.vertical_ok = chk.vertical_ok;
            fr.y0_ok = chk.y0_ok;
            fr.diagonal_ok = chk.diagonal_ok;
            if (!fr.all()) fail(ErrorKind::FrameViolation, "substituted curve fails the frame conditions");
            return {std::move(framed), fr};
        }
    }
    fail(ErrorKind::NoFrameFound, "no frame found among the searched substitutions");
}

// ---------------------------------------------------------------------------
// Witness hyperplanes.

struct WitnessReport {
    ProjPoint q;
    std::string case_tag;
    Hyperplane hyperplane;
    std::vector<std::size_t> secant_points;
};

namespace detail {

inline std::array<Elem, 6> conic_product(const Field& F, const std::array<Elem, 3>& a, const std::array<Elem, 3>& b) {
    return {F.mul(a[0], b[0]),
            F.add(F.mul(a[0], b[1]), F.mul(a[1], b[0])),
            F.add(F.mul(a[0], b[2]), F.mul(a[2], b[0])),
            F.mul(a[1], b[1]),
            F.add(F.mul(a[1], b[2]), F.mul(a[2], b[1])),
            F.mul(a[2], b[2])};
}

struct Recipe {
    std::string tag;
    bool direct = false;                  // hyperplane given outright
    std::vector<Elem> hyperplane;         // when direct
    std::optional<std::array<Elem, 3>> L0;  // fixed line factor (k = 5, 6)
    std::array<Elem, 3> planar{};         // the line l must pass through this point
    bool candidate = false;               // no case applies: Q survives
};

}  // namespace detail

/// Per-thread buffers for witness searches over one arc.
class WitnessContext {
public:
    WitnessContext(const EllipticArc& A) : arc_(&A), scratch_(A.field().q()) {}

    const EllipticArc& arc() const { return *arc_; }

    /// Case dispatch on the coordinates of Q, then the smallest-rank line
    /// through the derived planar point that carries three rational points of
    /// E and lifts to a hyperplane meeting the arc in exactly k points.
    WitnessReport witness(const ProjPoint& Q) {
        const EllipticArc& A = *arc_;
        const Field& F = A.field();
        const int k = A.k();
        if (Q.dim() != static_cast<std::size_t>(k)) fail(ErrorKind::DimensionMismatch, "point dimension differs from k");
        if (A.contains(Q)) fail(ErrorKind::InvalidArgument, "point belongs to the arc");
        const auto R = recipe(Q);
        if (R.candidate) fail(ErrorKind::NoWitnessFound, R.tag + ": no case applies");
        if (R.direct) {
            auto H = Hyperplane::from(F, R.hyperplane);
            auto rep = finish(Q, R.tag, std::move(H));
            if (!rep) fail(ErrorKind::NoWitnessFound, R.tag + ": fixed hyperplane is not " + std::to_string(k) + "-secant");
            return std::move(*rep);
        }
        const auto lines = scratch_.lines_through(A.curve(), R.planar);
        for (const auto& L : lines) {
            if (L.members.size() != 3) continue;
            std::vector<Elem> h(k, 0);
            if (R.L0) {
                const auto c = detail::conic_product(F, *R.L0, L.line);
                std::copy(c.begin(), c.begin() + k, h.begin());
            } else {
                std::copy(L.line.begin(), L.line.end(), h.begin());
            }
            if (!normalize(F, h)) continue;
            if (auto rep = finish(Q, R.tag, Hyperplane::from(F, std::move(h)))) return std::move(*rep);
        }
        fail(ErrorKind::NoWitnessFound, R.tag + ": no qualifying line through the planar point");
    }

    /// True when Q meets the k = 5 candidate conditions.
    static bool is_k5_candidate(const EllipticCurve& E, std::span<const Elem> Q) {
        const Field& F = E.field();
        if (Q[1] == 0 || Q[4] == 0 || Q[3] != 0) return false;
        return E.contains_affine(0, F.div(Q[4], Q[1]));
    }

private:
    std::optional<WitnessReport> finish(const ProjPoint& Q, const std::string& tag, Hyperplane H) {
        const EllipticArc& A = *arc_;
        const Field& F = A.field();
        if (dot(F, H.span(), Q.span()) != 0) return std::nullopt;
        auto pts = secant_points(H, A);
        if (pts.size() != static_cast<std::size_t>(A.k())) return std::nullopt;
        return WitnessReport{Q, tag, std::move(H), std::move(pts)};
    }

    detail::Recipe recipe(const ProjPoint& Qn) const {
        const EllipticArc& A = *arc_;
        const Field& F = A.field();
        const EllipticCurve& E = A.curve();
        const int k = A.k();
        detail::Recipe R;
        std::vector<Elem> Q(Qn.coords());
        switch (k) {
            case 3:
                R.tag = "k3";
                R.planar = {Q[0], Q[1], Q[2]};
                return R;
            case 4:
                if (Q[0] == 0 && Q[1] == 0) {
                    R.tag = "k4-fundamental-line";
                    R.candidate = true;
                    return R;
                }
                R.tag = "k4";
                R.planar = {Q[0], Q[1], Q[2]};
                return R;
            case 5: {
                if (Q[4] == 0) {
                    R.tag = "k5-case1";
                    R.direct = true;
                    R.hyperplane = {0, 0, 0, 0, 1};
                    return R;
                }
                const Elem inv = F.inv(Q[4]);
                for (auto& c : Q) c = F.mul(c, inv);
                R.L0 = std::array<Elem, 3>{0, 1, 0};
                R.planar = {Q[1], Q[3], 1};
                if (Q[1] == 0 && Q[3] == 0)
                    R.tag = "k5-case2";
                else if (Q[1] == 0)
                    R.tag = "k5-case3";
                else if (Q[3] != 0)
                    R.tag = "k5-case4";
                else if (!E.contains_affine(0, F.inv(Q[1])))
                    R.tag = "k5-case5";
                else {
                    R.tag = "k5-candidate";
                    R.candidate = true;
                }
                return R;
            }
            case 6: {
                if (Q[4] == 0) {
                    R.tag = "k6-case1";
                    R.direct = true;
                    R.hyperplane = {0, 0, 0, 0, 1, 0};
                    return R;
                }
                const Elem inv = F.inv(Q[4]);
                for (auto& c : Q) c = F.mul(c, inv);
                const Elem m1 = F.neg(1);
                if (Q[3] == 0 && Q[5] == 0) {
                    R.L0 = std::array<Elem, 3>{0, 1, m1};
                    if (Q[1] != Q[2]) {
                        const Elem di = F.inv(F.sub(Q[2], Q[1]));
                        R.tag = "k6-case2";
                        R.planar = {1, di, F.neg(di)};
                    } else {
                        R.tag = "k6-case3";
                        R.planar = {0, 1, m1};
                    }
                } else if (Q[5] != 0) {
                    R.L0 = std::array<Elem, 3>{0, 0, 1};
                    if (Q[2] == 0) {
                        R.tag = "k6-case4";
                        R.planar = {0, 1, Q[5]};
                    } else {
                        const Elem i3 = F.inv(Q[2]);
                        R.tag = "k6-case5";
                        R.planar = {1, i3, F.mul(Q[5], i3)};
                    }
                } else if (Q[3] != 0) {
                    R.L0 = std::array<Elem, 3>{0, 1, 0};
                    if (Q[1] == 0) {
                        R.tag = "k6-case6";
                        R.planar = {0, Q[3], 1};
                    } else {
                        const Elem i2 = F.inv(Q[1]);
                        R.tag = "k6-case7";
                        R.planar = {1, F.mul(Q[3], i2), i2};
                    }
                } else {
                    fail(ErrorKind::InvalidArgument, "k = 6 case dispatch fell through");
                }
                return R;
            }
            default:
                fail(ErrorKind::KOutOfRange, "witness recipes exist for k = 3..6 only");
        }
    }

    const EllipticArc* arc_;
    PencilScratch scratch_;
};

inline WitnessReport witness_hyperplane(const ProjPoint& Q, const EllipticArc& A) {
    if (A.k() >= 5) {
        const auto fr = frame_conditions(A.curve());
        if (!fr.all()) fail(ErrorKind::FrameViolation, "curve does not satisfy the frame conditions");
    }
    WitnessContext ctx(A);
    return ctx.witness(Q);
}

// ---------------------------------------------------------------------------
// k = 5 candidates.

/// Points (Q1, Q2, Q3, 0, Q5), Q2 Q5 != 0, with (1, 0, Q5/Q2) on E; in rank
/// order of P^4.
inline std::vector<ProjPoint> k5_candidates(const EllipticCurve& E) {
    const Field& F = E.field();
    const std::uint32_t q = F.q();
    std::vector<ProjPoint> out;
    for (Elem lam : E.fiber(0)) {
        if (lam == 0) continue;
        for (Elem q3 = 0; q3 < q; ++q3) out.push_back(ProjPoint::from(F, {0, 1, q3, 0, lam}));
        for (Elem q2 = 1; q2 < q; ++q2)
            for (Elem q3 = 0; q3 < q; ++q3) out.push_back(ProjPoint::from(F, {1, q2, q3, 0, F.mul(lam, q2)}));
    }
    std::sort(out.begin(), out.end(), [](const ProjPoint& a, const ProjPoint& b) { return a.coords() < b.coords(); });
    return out;
}

/// Addable points among the k = 5 candidates: each full hyperplane cuts the
/// plane span(e1, e3, e2 + lam e5) in a line (or contains it), and the
/// candidates off every such line are addable.
inline std::vector<ProjPoint> addable_k5_candidates(const EllipticArc& A, Budget& budget, Parallelism par = {}) {
    if (A.k() != 5) fail(ErrorKind::KOutOfRange, "k = 5 only");
    const Field& F = A.field();
    const EllipticCurve& E = A.curve();
    std::vector<Elem> lams;
    for (Elem lam : E.fiber(0))
        if (lam != 0) lams.push_back(lam);
    const ProjectiveSpace plane(F.q(), 3);
    struct Marks {
        std::vector<Bitset> per_lambda;
        std::vector<bool> whole;
    };
    const std::size_t L = lams.size();
    auto parts = reduce_full_hyperplanes<Marks>(
        F, A.points(), budget, par,
        [&] {
            return Marks{std::vector<Bitset>(L, Bitset(plane.size())), std::vector<bool>(L, false)};
        },
        [&](Marks& m, std::span<const Elem> h, std::span<const std::uint32_t>) {
            for (std::size_t i = 0; i < L; ++i) {
                std::array<Elem, 3> line{h[0], F.add(h[1], F.mul(lams[i], h[4])), h[2]};
                if (!normalize(F, line)) {
                    m.whole[i] = true;
                    continue;
                }
                for_each_point_on_hyperplane(F, line, [&](std::uint64_t r) { m.per_lambda[i].set(r); });
            }
        });
    std::vector<ProjPoint> out;
    std::vector<Elem> abc(3);
    for (std::size_t i = 0; i < L; ++i) {
        bool whole = false;
        for (const auto& p : parts) whole = whole || p.whole[i];
        if (whole) continue;
        for (std::uint64_t r = 0; r < plane.size(); ++r) {
            bool marked = false;
            for (const auto& p : parts)
                if (p.per_lambda[i].test(r)) {
                    marked = true;
                    break;
                }
            if (marked) continue;
            plane.unrank(r, abc);
            if (abc[1] == 0) continue;  // off the candidate set
            out.push_back(ProjPoint::from(F, {abc[0], abc[1], abc[2], 0, F.mul(lams[i], abc[1])}));
        }
    }
    std::sort(out.begin(), out.end(), [](const ProjPoint& a, const ProjPoint& b) { return a.coords() < b.coords(); });
    return out;
}

// ---------------------------------------------------------------------------
// Sampling.

/// Uniform draws below a bound by rejection on 64-bit outputs, so streams are
/// identical across standard libraries.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    for (;;) {
        const std::uint64_t x = rng();
        if (x < limit) return x % bound;
    }
}

inline std::mt19937_64 chunk_rng(std::uint64_t seed, std::uint64_t chunk) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
    return std::mt19937_64(seq);
}

struct SampleOutcome {
    std::uint64_t sampled = 0;
    std::vector<ProjPoint> failures;
    std::map<std::string, std::uint64_t> cases;
};

/// Witness checks on `count` points of P^{k-1} outside the arc drawn from
/// deterministic per-chunk streams; `skip` rejects further points.
template <class Skip>
SampleOutcome sample_witnesses(const EllipticArc& A, std::uint64_t count, std::uint64_t seed, Parallelism par,
                               Skip&& skip) {
    const Field& F = A.field();
    const ProjectiveSpace space(F.q(), static_cast<std::size_t>(A.k()));
    constexpr std::uint64_t kChunk = 1000;
    const std::uint64_t chunks = (count + kChunk - 1) / kChunk;
    auto parts = parallel_chunks<SampleOutcome>(chunks, par, [&](std::size_t c) {
        SampleOutcome out;
        auto rng = chunk_rng(seed, c);
        WitnessContext ctx(A);
        const std::uint64_t todo = std::min(kChunk, count - c * kChunk);
        std::vector<Elem> v(space.dim());
        while (out.sampled < todo) {
            space.unrank(uniform_below(rng, space.size()), v);
            auto Q = ProjPoint::from(F, v);
            if (A.contains(Q) || skip(Q)) continue;
            ++out.sampled;
            try {
                const auto rep = ctx.witness(Q);
                ++out.cases[rep.case_tag];
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::NoWitnessFound) throw;
                out.failures.push_back(Q);
            }
        }
        return out;
    });
    SampleOutcome all;
    for (auto& p : parts) {
        all.sampled += p.sampled;
        for (auto& f : p.failures) all.failures.push_back(std::move(f));
        for (auto& [k, v] : p.cases) all.cases[k] += v;
    }
    std::sort(all.failures.begin(), all.failures.end(),
              [](const ProjPoint& a, const ProjPoint& b) { return a.coords() < b.coords(); });
    return all;
}

// ---------------------------------------------------------------------------
// Verification of the non-extendability statements.

enum class Verdict { Consistent, Violation, BudgetPartial };

inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Consistent: return "CONSISTENT";
        case Verdict::Violation: return "VIOLATION";
        case Verdict::BudgetPartial: return "BUDGET_PARTIAL";
    }
    return "VIOLATION";
}

enum class Theorem { Main, J0 };

struct VerifyOptions {
    Theorem theorem = Theorem::Main;
    std::uint64_t budget = Budget::kDefaultLimit;
    std::uint64_t seed = 1;
    /// Points sampled for witness checks; 0 picks 10^4 for k = 5 and 10^5 for k = 6.
    std::uint64_t sample = 0;
    bool force = false;
    Parallelism parallel{};
};

struct VerifyReport {
    Theorem theorem = Theorem::Main;
    int k = 0;
    std::uint32_t q = 0;
    Coefficients curve{};
    std::size_t n = 0;
    Elem j = 0;
    bool in_hypothesis = true;
    std::string path;  // which procedure ran
    std::optional<Frame> frame;
    std::optional<Coefficients> framed_curve;
    Verdict verdict = Verdict::Consistent;
    std::vector<ProjPoint> addable;
    std::vector<ProjPoint> completion_added;
    bool completion_complete = false;
    std::uint64_t candidates = 0;
    std::uint64_t sampled = 0;
    std::uint64_t seed = 0;
    std::vector<ProjPoint> witness_failures;
    std::map<std::string, std::uint64_t> cases;
    std::vector<std::string> violations;
    std::string note;
    std::uint64_t budget_spent = 0;
    std::uint64_t budget_limit = 0;
};

inline std::string to_string(Theorem t) { return t == Theorem::Main ? "main" : "j0"; }

namespace detail {

inline void check_hypotheses(const EllipticCurve& E, int k, const VerifyOptions& opts, VerifyReport& rep) {
    const Field& F = E.field();
    if (k < 3 || k > 6) fail(ErrorKind::KOutOfRange, "k must be in 3..6");
    bool ok;
    std::string why;
    if (opts.theorem == Theorem::Main) {
        ok = F.q() >= 121 && E.j() != 0;
        if (!ok) why = F.q() < 121 ? "q < 121" : "j = 0";
    } else {
        ok = mioo_hypotheses(E);
        if (!ok) why = "j = 0 hypotheses (p > 3, q > 9887, j = 0, n even, r even or p = 1 mod 3) not met";
    }
    rep.in_hypothesis = ok;
    if (!ok && !opts.force) fail(ErrorKind::HypothesisNotMet, why);
}

}  // namespace detail

/// Runs the procedure matching k and reports whether the computation agrees
/// with the stated non-extendability. Out-of-hypothesis runs need `force` and
/// are reported with in_hypothesis = false.
inline VerifyReport verify_theorem(const EllipticCurve& E, int k, const VerifyOptions& opts = {}) {
    VerifyReport rep;
    rep.theorem = opts.theorem;
    rep.k = k;
    rep.q = E.field().q();
    rep.curve = E.coeffs();
    rep.n = E.n();
    rep.j = E.j();
    rep.seed = opts.seed;
    detail::check_hypotheses(E, k, opts, rep);
    Budget budget(opts.budget);
    rep.budget_limit = budget.limit();
    const Parallelism par = opts.parallel;
    ArcOptions aopts;
    aopts.verify_limit = std::min<std::uint64_t>(opts.budget, 500'000'000ULL);
    aopts.parallel = par;

    auto violation = [&](std::string msg) {
        rep.verdict = Verdict::Violation;
        rep.violations.push_back(std::move(msg));
    };

    try {
        if (k == 3 || k == 4) {
            const auto A = EllipticArc::make(E, k, aopts);
            rep.path = "full-scan";
            rep.addable = addable_points(A, budget, par);
            if (k == 3) {
                if (!rep.addable.empty()) violation("P^2 scan found " + std::to_string(rep.addable.size()) + " addable points");
                rep.completion_complete = rep.addable.empty();
            } else {
                for (const auto& Q : rep.addable)
                    if (Q[0] != 0 || Q[1] != 0) {
                        violation("addable point off the line X1 = X2 = 0");
                        break;
                    }
                const auto c = complete_from(A, rep.addable, 2);
                rep.completion_added = c.added;
                rep.completion_complete = c.complete;
                if (c.added.size() > 1 || !c.complete) violation("completion needs more than one point");
            }
        } else {
            std::optional<FramedCurve> framed;
            try {
                framed = choose_frame(E, {opts.force || rep.in_hypothesis});
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::NoFrameFound && e.kind() != ErrorKind::FrameViolation) throw;
                rep.note = std::string("frame search failed: ") + e.what();
            }
            if (!framed) {
                // no frame: only a direct full-space scan remains
                rep.path = "fallback-full-scan";
                const auto A = EllipticArc::make(E, k, aopts);
                rep.addable = addable_points(A, budget, par);
                const std::size_t allowed = k == 5 ? 2 : 0;
                const auto c = complete_from(A, rep.addable, static_cast<int>(allowed) + 1);
                rep.completion_added = c.added;
                rep.completion_complete = c.complete;
                if (c.added.size() > allowed || !c.complete) violation("completion exceeds the stated bound");
            } else {
                rep.frame = framed->frame;
                rep.framed_curve = framed->curve.coeffs();
                const auto A = EllipticArc::make(framed->curve, k, aopts);
                rep.path = "witness";
                if (k == 5) {
                    rep.candidates = k5_candidates(framed->curve).size();
                    rep.addable = addable_k5_candidates(A, budget, par);
                    const auto c = complete_from(A, rep.addable, 3);
                    rep.completion_added = c.added;
                    rep.completion_complete = c.complete;
                    if (c.added.size() > 2 || !c.complete) violation("completion needs more than two points");
                    const std::uint64_t count = opts.sample ? opts.sample : 10'000;
                    budget.charge(sat_mul(count, A.n() * 4), "witness sampling");
                    const auto s = sample_witnesses(A, count, opts.seed, par, [&](const ProjPoint& Q) {
                        return WitnessContext::is_k5_candidate(framed->curve, Q.span());
                    });
                    rep.sampled = s.sampled;
                    rep.cases = s.cases;
                    rep.witness_failures = s.failures;
                    if (!s.failures.empty())
                        violation(std::to_string(s.failures.size()) + " sampled non-candidates without a witness");
                } else {
                    const ProjectiveSpace space(rep.q, 6);
                    const std::uint64_t full_cost = sat_mul(space.size(), A.n() * 4);
                    if (budget.allows(full_cost) && opts.sample == 0) {
                        budget.charge(full_cost, "full witness scan");
                        rep.path = "witness-full";
                        WitnessContext ctx(A);
                        std::vector<Elem> v(6);
                        for (std::uint64_t r = 0; r < space.size(); ++r) {
                            space.unrank(r, v);
                            auto Q = ProjPoint::from(E.field(), v);
                            if (A.contains(Q)) continue;
                            ++rep.sampled;
                            try {
                                ++rep.cases[ctx.witness(Q).case_tag];
                            } catch (const Error& e) {
                                if (e.kind() != ErrorKind::NoWitnessFound) throw;
                                rep.witness_failures.push_back(Q);
                            }
                        }
                        rep.completion_complete = rep.witness_failures.empty();
                    } else {
                        const std::uint64_t count = opts.sample ? opts.sample : 100'000;
                        budget.charge(sat_mul(count, A.n() * 4), "witness sampling");
                        rep.path = "witness-sampled";
                        const auto s = sample_witnesses(A, count, opts.seed, par, [](const ProjPoint&) { return false; });
                        rep.sampled = s.sampled;
                        rep.cases = s.cases;
                        rep.witness_failures = s.failures;
                        if (rep.verdict != Verdict::Violation) rep.verdict = Verdict::BudgetPartial;
                    }
                    if (!rep.witness_failures.empty())
                        violation(std::to_string(rep.witness_failures.size()) + " points without a witness hyperplane");
                }
            }
        }
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::BudgetExceeded) throw;
        if (rep.verdict != Verdict::Violation) rep.verdict = Verdict::BudgetPartial;
        rep.note = e.what();
    }
    rep.budget_spent = budget.spent();
    return rep;
}

inline VerifyReport verify_main_theorem(const EllipticCurve& E, int k, VerifyOptions opts = {}) {
    opts.theorem = Theorem::Main;
    return verify_theorem(E, k, opts);
}

inline VerifyReport verify_j0_theorem(const EllipticCurve& E, int k, VerifyOptions opts = {}) {
    opts.theorem = Theorem::J0;
    return verify_theorem(E, k, opts);
}

}  // namespace nmds

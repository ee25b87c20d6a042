#include <gtest/gtest.h>

#include <algorithm>
#include <optional>
#include <set>

#include "nmds/geometry.hpp"

using namespace nmds;

namespace {

using Vec = std::vector<Elem>;

// Every normalized vector of length dim, in lexicographic order of encodings.
std::vector<Vec> all_points(const Field& F, std::size_t dim) {
    std::vector<Vec> out;
    Vec v(dim, 0);
    for (;;) {
        std::size_t lead = 0;
        while (lead < dim && v[lead] == 0) ++lead;
        if (lead < dim && v[lead] == 1) out.push_back(v);
        std::size_t pos = dim;
        while (pos > 0) {
            --pos;
            if (++v[pos] < F.q()) break;
            v[pos] = 0;
            if (pos == 0) return out;
        }
    }
}

Elem naive_dot(const Field& F, const Vec& a, std::span<const Elem> b) {
    Elem s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s = F.add(s, F.mul(a[i], b[i]));
    return s;
}

std::size_t on_plane(const Field& F, const Vec& h, const PointSet& pts) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) c += naive_dot(F, h, pts[i]) == 0;
    return c;
}

// Addable points by testing every hyperplane through every candidate.
std::vector<Vec> naive_addable(const Field& F, const PointSet& pts, std::size_t threshold) {
    const auto space = all_points(F, pts.dim);
    std::vector<Vec> out;
    for (const auto& Q : space) {
        bool in_set = false;
        for (std::size_t i = 0; i < pts.size(); ++i) in_set = in_set || std::equal(Q.begin(), Q.end(), pts[i].begin());
        if (in_set) continue;
        bool blocked = false;
        for (const auto& h : space)
            if (naive_dot(F, h, Q) == 0 && on_plane(F, h, pts) >= threshold) {
                blocked = true;
                break;
            }
        if (!blocked) out.push_back(Q);
    }
    return out;
}

EllipticCurve first_curve(std::uint64_t q, std::size_t min_n = 0) {
    for (const auto& E : collect_curves(Field::of_order(q)))
        if (E.n() >= min_n) return E;
    throw std::runtime_error("no curve");
}

}  // namespace

TEST(ProjectiveSpace, RankIsLexicographicPosition) {
    for (std::uint64_t q : {3u, 5u, 9u})
        for (std::size_t dim : {2u, 3u, 4u}) {
            const auto F = Field::of_order(q);
            const ProjectiveSpace S(F->q(), dim);
            const auto pts = all_points(*F, dim);
            ASSERT_EQ(S.size(), pts.size());
            std::vector<std::uint64_t> ranks;
            for (const auto& v : pts) ranks.push_back(S.rank(v));
            std::vector<std::uint64_t> sorted = ranks;
            std::sort(sorted.begin(), sorted.end());
            for (std::uint64_t i = 0; i < sorted.size(); ++i) EXPECT_EQ(sorted[i], i);
            for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_EQ(S.unrank(ranks[i]), pts[i]);
        }
}

TEST(ProjectiveSpace, RankOrderMatchesEncodedTupleOrder) {
    const auto F = Field::of_order(5);
    const ProjectiveSpace S(5, 3);
    for (std::uint64_t r = 0; r + 1 < S.size(); ++r) EXPECT_LT(S.unrank(r), S.unrank(r + 1));
}

TEST(ProjectiveTuple, NormalizesAndRejectsZero) {
    const auto F = Field::of_order(7);
    const auto P = ProjPoint::from(*F, {0, 3, 6});
    EXPECT_EQ(P.coords(), (Vec{0, 1, 2}));
    EXPECT_THROW(ProjPoint::from(*F, {0, 0, 0}), Error);
    EXPECT_TRUE(incident(*F, Hyperplane::from(*F, {0, 2, 6}), P));
}

TEST(Psi, MonomialsAndPhi) {
    const auto F = Field::of_order(7);
    // psi_2..psi_6 = X, Y, X^2, XY, Y^2
    const Elem x = 3, y = 5;
    EXPECT_EQ(psi(*F, 2, x, y), x);
    EXPECT_EQ(psi(*F, 3, x, y), y);
    EXPECT_EQ(psi(*F, 4, x, y), F->mul(x, x));
    EXPECT_EQ(psi(*F, 5, x, y), F->mul(x, y));
    EXPECT_EQ(psi(*F, 6, x, y), F->mul(y, y));
    EXPECT_EQ(psi(*F, 7, x, y), F->mul(F->mul(x, x), y));
    EXPECT_THROW(psi(*F, 1, x, y), Error);
    EXPECT_EQ(phi(*F, CurvePoint{x, y, false}, 6).coords(),
              (Vec{1, x, y, F->mul(x, x), F->mul(x, y), F->mul(y, y)}));
    EXPECT_EQ(phi(*F, CurvePoint::at_infinity(), 5).coords(), (Vec{0, 0, 0, 0, 1}));
}

TEST(HyperplanePoints, MatchBruteForce) {
    for (std::uint64_t q : {3u, 5u, 9u})
        for (std::size_t dim : {2u, 3u, 4u}) {
            const auto F = Field::of_order(q);
            const ProjectiveSpace S(F->q(), dim);
            const auto pts = all_points(*F, dim);
            for (const auto& h : pts) {
                std::vector<std::uint64_t> got;
                for_each_point_on_hyperplane(*F, h, [&](std::uint64_t r) { got.push_back(r); });
                std::vector<std::uint64_t> want;
                for (const auto& v : pts)
                    if (naive_dot(*F, h, v) == 0) want.push_back(S.rank(v));
                std::sort(got.begin(), got.end());
                ASSERT_EQ(got, want) << "q " << q << " dim " << dim;
            }
        }
}

TEST(HyperplaneScan, CountsMatchBruteForce) {
    for (std::size_t k : {3u, 4u}) {
        const auto E = first_curve(7, 8);
        const auto A = arc_make(E, static_cast<int>(k));
        const Field& F = A.field();
        const ProjectiveSpace S(F.q(), k);
        std::vector<std::uint32_t> by_rank(S.size(), UINT32_MAX);
        scan_hyperplanes(F, A.points(), Parallelism{2}, [&](const HyperplaneBlock& blk, std::span<const Elem>) {
            for (std::size_t t = 0; t < blk.counts.size(); ++t) by_rank[blk.first_rank + t] = blk.counts[t];
        });
        for (const auto& h : all_points(F, k)) EXPECT_EQ(by_rank[S.rank(h)], on_plane(F, h, A.points()));
        Budget b;
        const auto hist = secant_histogram(F, A.points(), b);
        std::uint64_t total = 0;
        for (auto c : hist) total += c;
        EXPECT_EQ(total, S.size());
    }
}

TEST(PencilEnumeration, FindsExactlyTheFullHyperplanes) {
    for (std::uint64_t q : {5u, 7u, 9u})
        for (int k : {3, 4, 5}) {
            const auto E = first_curve(q, static_cast<std::size_t>(k) + 2);
            const auto A = arc_make(E, k);
            const Field& F = A.field();
            Budget b;
            const auto full = full_hyperplanes(F, A.points(), b);
            const auto scan = hyperplanes_at_least(F, A.points(), static_cast<std::uint32_t>(k), b);
            std::set<Vec> a, c;
            for (const auto& fh : full) {
                EXPECT_TRUE(a.insert(fh.plane.coords()).second) << "duplicate hyperplane";
                ASSERT_EQ(fh.members.size(), static_cast<std::size_t>(k));
                for (auto m : fh.members) EXPECT_EQ(naive_dot(F, fh.plane.coords(), A.points()[m]), 0u);
            }
            for (const auto& h : scan) {
                EXPECT_EQ(on_plane(F, h.coords(), A.points()), static_cast<std::size_t>(k));
                c.insert(h.coords());
            }
            EXPECT_EQ(a, c) << "q " << q << " k " << k;
        }
}

TEST(PencilEnumeration, DetectsViolations) {
    const auto F = Field::of_order(5);
    PointSet collinear(3);
    for (Vec v : {Vec{1, 0, 0}, Vec{1, 1, 0}, Vec{1, 2, 0}, Vec{1, 3, 0}, Vec{0, 0, 1}}) collinear.push(v);
    Budget b;
    try {
        check_arc_property(*F, collinear, b);
        FAIL() << "expected ArcPropertyViolated";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ArcPropertyViolated);
    }
    PointSet repeated(3);
    for (Vec v : {Vec{1, 0, 0}, Vec{1, 0, 0}, Vec{0, 1, 0}, Vec{0, 0, 1}}) repeated.push(v);
    EXPECT_THROW(check_arc_property(*F, repeated, b), Error);
}

TEST(MaxIncidence, MatchesBruteForce) {
    const auto F = Field::of_order(5);
    const auto space4 = all_points(*F, 4);
    const auto E = first_curve(5, 8);
    const auto A = arc_make(E, 4);
    PointSet S = A.points();
    S.push(space4[7]);
    S.push(space4[7]);  // multiset
    std::size_t best = 0;
    for (const auto& h : space4) best = std::max(best, on_plane(*F, h, S));
    EXPECT_EQ(max_hyperplane_incidence(*F, S), best);
    for (std::size_t a = 0; a < space4.size(); a += 11)
        for (std::size_t c = 0; c < space4.size(); c += 29) {
            std::size_t want = 0;
            for (const auto& h : space4)
                if (naive_dot(*F, h, space4[a]) == 0 && naive_dot(*F, h, space4[c]) == 0)
                    want = std::max(want, on_plane(*F, h, S));
            EXPECT_EQ(max_hyperplane_incidence(*F, S, {space4[a], space4[c]}), want);
        }
}

TEST(EllipticArc, BuildsVerifiedArcs) {
    const auto E = first_curve(7, 10);
    for (int k = 3; k < static_cast<int>(E.n()); ++k) {
        const auto A = arc_make(E, k);
        EXPECT_TRUE(A.verified());
        EXPECT_EQ(A.n(), E.n());
        for (std::size_t i = 0; i < A.n(); ++i) EXPECT_TRUE(A.contains(A.point(i)));
    }
    for (int k : {2, static_cast<int>(E.n())}) {
        try {
            arc_make(E, k);
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::KOutOfRange);
        }
    }
    const auto A = arc_make(E, 3);
    EXPECT_THROW(secant_count(Hyperplane::from(E.field(), {1, 0, 0, 0}), A), Error);
}

TEST(EllipticArc, SecantCountsAgreeWithProfile) {
    const auto E = first_curve(5, 7);
    const auto A = arc_make(E, 3);
    Budget b;
    const auto hist = secant_profile(A, b);
    std::vector<std::uint64_t> want(4, 0);
    for (const auto& h : all_points(A.field(), 3)) ++want[secant_count(Hyperplane::from(A.field(), h), A)];
    EXPECT_EQ(hist, want);
}

TEST(Addability, MatchesBruteForceAtSmallQ) {
    for (std::uint64_t q : {5u, 7u})
        for (int k : {3, 4}) {
            std::size_t checked = 0;
            for (const auto& E : collect_curves(Field::of_order(q))) {
                if (E.n() <= static_cast<std::size_t>(k)) continue;
                if (++checked > (q == 5 ? 40u : 6u)) break;
                const auto A = arc_make(E, k);
                Budget b;
                for (int thr : {k - 1, k}) {
                    const auto got = addable_points(A, b, {}, thr);
                    const auto want = naive_addable(A.field(), A.points(), static_cast<std::size_t>(thr));
                    ASSERT_EQ(got.size(), want.size());
                    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_EQ(got[i].coords(), want[i]);
                }
            }
        }
}

TEST(Addability, GreedyCompletionIsValidAndMaximal) {
    for (const auto& E : collect_curves(Field::of_order(5))) {
        if (E.n() < 5) continue;
        const auto A = arc_make(E, 3);
        Budget b;
        const auto c = complete_arc(A, 10, b);
        PointSet S = A.points();
        for (const auto& Q : c.added) {
            const auto now = naive_addable(A.field(), S, 3);
            EXPECT_NE(std::find(now.begin(), now.end(), Q.coords()), now.end());
            S.push(Q.span());
        }
        if (c.complete) { EXPECT_TRUE(naive_addable(A.field(), S, 3).empty()); }
    }
}

TEST(Determinism, ScansAgreeAcrossWorkerCounts) {
    const auto E = first_curve(9, 12);
    const auto A = arc_make(E, 4);
    Budget b;
    EXPECT_EQ(secant_profile(A, b, Parallelism{1}), secant_profile(A, b, Parallelism{3}));
    const auto x = addable_points(A, b, Parallelism{1});
    const auto y = addable_points(A, b, Parallelism{4});
    EXPECT_EQ(x, y);
    const auto f1 = full_hyperplanes(A.field(), A.points(), b, Parallelism{1});
    const auto f2 = full_hyperplanes(A.field(), A.points(), b, Parallelism{5});
    ASSERT_EQ(f1.size(), f2.size());
    for (std::size_t i = 0; i < f1.size(); ++i) EXPECT_EQ(f1[i].plane, f2[i].plane);
}

TEST(Budget, RefusesOversizedWork) {
    const auto E = first_curve(13, 15);
    const auto A = arc_make(E, 4);
    Budget tiny(1000);
    try {
        secant_profile(A, tiny);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::BudgetExceeded);
    }
    EXPECT_EQ(tiny.spent(), 0u);
}

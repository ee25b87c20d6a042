#include <gtest/gtest.h>

#include <random>
#include <set>

#include "nmds/extendability.hpp"

using namespace nmds;

namespace {

std::optional<ErrorKind> error_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return std::nullopt;
}

// A few j != 0 curves over F_121 in scan order, spread out by a stride.
std::vector<EllipticCurve> curves121(std::size_t count) {
    const auto F = Field::of_order(121);
    std::vector<EllipticCurve> out;
    for (Elem c = 1; out.size() < count; c += 7) {
        auto E = EllipticCurve::try_make(F, {0, 0, 0, static_cast<Elem>(out.size() + 1), c % 121});
        if (E && E->j() != 0) out.push_back(std::move(*E));
    }
    return out;
}

std::size_t naive_secants(const Field& F, const Hyperplane& H, const EllipticArc& A) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < A.n(); ++i) {
        Elem s = 0;
        for (std::size_t j = 0; j < H.dim(); ++j) s = F.add(s, F.mul(H[j], A.points()[i][j]));
        c += s == 0;
    }
    return c;
}

}  // namespace

TEST(Frame, SubstitutionPreservesCountAndJ) {
    for (std::uint64_t q : {11u, 13u, 25u}) {
        const auto F = Field::of_order(q);
        std::mt19937_64 rng(q);
        std::size_t tried = 0;
        for (const auto& E : collect_curves(F)) {
            if (rng() % 60) continue;
            ++tried;
            Frame fr;
            fr.u = static_cast<Elem>(1 + rng() % (q - 1));
            fr.r = static_cast<Elem>(rng() % q);
            fr.s = static_cast<Elem>(rng() % q);
            fr.t = static_cast<Elem>(rng() % q);
            const auto G = apply_frame(E, fr);
            EXPECT_EQ(G.n(), E.n());
            EXPECT_EQ(G.j(), E.j());
            for (const auto& P : E.points()) EXPECT_TRUE(G.index_of(transform_point(*F, P, fr)).has_value());
        }
        EXPECT_GT(tried, 5u);
    }
}

TEST(Frame, IdentityLeavesCoefficients) {
    const auto F = Field::of_order(13);
    const Coefficients a{0, 0, 3, 4, 5};
    EXPECT_EQ(transform_coefficients(*F, a, 1, 0, 0, 0), a);
}

TEST(Frame, ChosenFramesSatisfyConditions) {
    for (const auto& E : curves121(4)) {
        const auto fc = choose_frame(E);
        EXPECT_TRUE(fc.frame.all());
        EXPECT_TRUE(frame_conditions(fc.curve).all());
        EXPECT_EQ(fc.curve.n(), E.n());
        EXPECT_EQ(fc.curve.j(), E.j());
        if (!fc.frame.identity()) { EXPECT_FALSE(frame_conditions(E).all()); }
    }
}

TEST(Frame, HypothesisGate) {
    const auto E = EllipticCurve::make_short(Field::of_order(13), 0, 1, 1);
    EXPECT_EQ(error_of([&] { choose_frame(E); }), ErrorKind::HypothesisNotMet);
    try {
        const auto fc = choose_frame(E, {true});
        EXPECT_TRUE(frame_conditions(fc.curve).all());
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NoFrameFound);
    }
}

TEST(Witness, SelfVerifyingAtSmallQForK3AndK4) {
    std::size_t witnessed = 0;
    for (int k : {3, 4}) {
        for (const auto& E : collect_curves(Field::of_order(13))) {
            if (E.n() < 16) continue;
            const auto A = arc_make(E, k);
            Budget b;
            const auto addable = addable_points(A, b);
            const std::set<std::vector<Elem>> add_set = [&] {
                std::set<std::vector<Elem>> s;
                for (const auto& Q : addable) s.insert(Q.coords());
                return s;
            }();
            WitnessContext ctx(A);
            const ProjectiveSpace S(13, static_cast<std::size_t>(k));
            std::vector<Elem> v(k);
            for (std::uint64_t r = 0; r < S.size(); r += (k == 3 ? 1 : 13)) {
                S.unrank(r, v);
                const auto Q = ProjPoint::from(A.field(), v);
                if (A.contains(Q)) continue;
                try {
                    const auto w = ctx.witness(Q);
                    EXPECT_TRUE(incident(A.field(), w.hyperplane, Q));
                    EXPECT_EQ(naive_secants(A.field(), w.hyperplane, A), static_cast<std::size_t>(k));
                    EXPECT_EQ(w.secant_points.size(), static_cast<std::size_t>(k));
                    EXPECT_FALSE(add_set.count(Q.coords()));
                    ++witnessed;
                } catch (const Error& e) {
                    EXPECT_EQ(e.kind(), ErrorKind::NoWitnessFound);
                }
            }
            break;
        }
    }
    EXPECT_GT(witnessed, 100u);
}

TEST(Witness, SampledPointsAtQ121) {
    for (const auto& E : curves121(2)) {
        const auto fc = choose_frame(E);
        for (int k : {5, 6}) {
            const auto A = arc_make(fc.curve, k);
            const auto s = sample_witnesses(A, 300, 5, {}, [&](const ProjPoint& Q) {
                return k == 5 && WitnessContext::is_k5_candidate(fc.curve, Q.span());
            });
            EXPECT_EQ(s.sampled, 300u);
            EXPECT_TRUE(s.failures.empty());
            WitnessContext ctx(A);
            auto rng = chunk_rng(9, 0);
            const ProjectiveSpace S(121, static_cast<std::size_t>(k));
            for (int i = 0; i < 50; ++i) {
                const auto Q = ProjPoint::from(A.field(), S.unrank(uniform_below(rng, S.size())));
                if (A.contains(Q) || (k == 5 && WitnessContext::is_k5_candidate(fc.curve, Q.span()))) continue;
                const auto w = witness_hyperplane(Q, A);
                EXPECT_TRUE(incident(A.field(), w.hyperplane, Q));
                EXPECT_EQ(naive_secants(A.field(), w.hyperplane, A), static_cast<std::size_t>(k));
            }
        }
    }
}

TEST(Witness, CaseTagsCoverTheDispatch) {
    const auto E = curves121(1).front();
    const auto fc = choose_frame(E);
    const auto A = arc_make(fc.curve, 6);
    const auto s = sample_witnesses(A, 2000, 3, {}, [](const ProjPoint&) { return false; });
    EXPECT_TRUE(s.failures.empty());
    for (const auto& [tag, n] : s.cases) EXPECT_EQ(tag.rfind("k6-case", 0), 0u) << tag;
    EXPECT_GE(s.cases.size(), 3u);
}

TEST(Witness, RequiresFrameForK5) {
    for (const auto& E : curves121(6)) {
        if (frame_conditions(E).all()) continue;
        const auto A = arc_make(E, 5);
        EXPECT_EQ(error_of([&] { witness_hyperplane(ProjPoint::from(A.field(), {1, 0, 0, 0, 0}), A); }),
                  ErrorKind::FrameViolation);
        return;
    }
}

TEST(K5Candidates, MatchFilterOverWholeSpace) {
    bool ran = false;
    for (const auto& E : collect_curves(Field::of_order(7))) {
        if (E.fiber(0).size() != 2 || E.n() < 7) continue;
        const auto cands = k5_candidates(E);
        std::vector<ProjPoint> want;
        const ProjectiveSpace S(7, 5);
        for (std::uint64_t r = 0; r < S.size(); ++r) {
            const auto v = S.unrank(r);
            if (WitnessContext::is_k5_candidate(E, v)) want.push_back(ProjPoint::from(E.field(), v));
        }
        EXPECT_EQ(cands, want);
        std::size_t lams = 0;
        for (Elem y : E.fiber(0)) lams += y != 0;
        EXPECT_EQ(cands.size(), lams * 49);

        const auto A = arc_make(E, 5);
        Budget b;
        std::vector<ProjPoint> full;
        for (const auto& Q : addable_points(A, b))
            if (WitnessContext::is_k5_candidate(E, Q.span())) full.push_back(Q);
        EXPECT_EQ(addable_k5_candidates(A, b), full);
        ran = true;
        break;
    }
    EXPECT_TRUE(ran);
}

TEST(Sampling, StreamsAreReproducible) {
    auto a = chunk_rng(42, 3), b = chunk_rng(42, 3), c = chunk_rng(42, 4);
    EXPECT_EQ(a(), b());
    EXPECT_NE(a(), c());
    auto r = chunk_rng(1, 0);
    for (int i = 0; i < 1000; ++i) EXPECT_LT(uniform_below(r, 17), 17u);
    const auto E = curves121(1).front();
    const auto A = arc_make(choose_frame(E).curve, 6);
    const auto none = [](const ProjPoint&) { return false; };
    const auto s1 = sample_witnesses(A, 2500, 8, Parallelism{1}, none);
    const auto s2 = sample_witnesses(A, 2500, 8, Parallelism{3}, none);
    EXPECT_EQ(s1.cases, s2.cases);
    EXPECT_EQ(s1.sampled, 2500u);
}

TEST(Verify, MainTheoremSmallKAtQ121) {
    const auto E = curves121(1).front();
    const auto r3 = verify_main_theorem(E, 3);
    EXPECT_EQ(r3.verdict, Verdict::Consistent);
    EXPECT_TRUE(r3.addable.empty());
    EXPECT_TRUE(r3.in_hypothesis);
    VerifyOptions opts;
    opts.sample = 500;
    const auto r5 = verify_main_theorem(E, 5, opts);
    EXPECT_EQ(r5.verdict, Verdict::Consistent);
    EXPECT_EQ(r5.sampled, 500u);
    EXPECT_TRUE(r5.frame.has_value());
    const auto r6 = verify_main_theorem(E, 6, opts);
    EXPECT_EQ(r6.verdict, Verdict::BudgetPartial);
    EXPECT_TRUE(r6.witness_failures.empty());
}

TEST(Verify, HypothesesAndForce) {
    const auto F = Field::of_order(13);
    const auto E = EllipticCurve::make_short(F, 0, 1, 1);
    EXPECT_EQ(error_of([&] { verify_main_theorem(E, 4); }), ErrorKind::HypothesisNotMet);
    EXPECT_EQ(error_of([&] { verify_j0_theorem(E, 4); }), ErrorKind::HypothesisNotMet);
    EXPECT_EQ(error_of([&] { verify_main_theorem(E, 7); }), ErrorKind::KOutOfRange);
    VerifyOptions force;
    force.force = true;
    const auto r = verify_main_theorem(E, 3, force);
    EXPECT_FALSE(r.in_hypothesis);
    EXPECT_NE(r.verdict, Verdict::BudgetPartial);
}

TEST(Verify, BudgetExhaustionIsPartial) {
    const auto E = curves121(1).front();
    VerifyOptions opts;
    opts.budget = 1'000'000;
    const auto r = verify_main_theorem(E, 4, opts);
    EXPECT_EQ(r.verdict, Verdict::BudgetPartial);
    EXPECT_FALSE(r.note.empty());
}

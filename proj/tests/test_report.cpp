#include <gtest/gtest.h>

#include "nmds/report.hpp"

using namespace nmds;

TEST(Report, FieldAndCurve) {
    const auto F = Field::of_order(9);
    const auto j = field_json(*F);
    EXPECT_EQ(j["p"], 3);
    EXPECT_EQ(j["r"], 2);
    EXPECT_EQ(j["modulus"], Json::array({1, 0, 1}));
    const auto E = EllipticCurve::make_short(Field::of_order(5), 0, 1, 0);
    const auto c = curve_json(E);
    EXPECT_EQ(c["n"], 4);
    EXPECT_EQ(c["j"], 3);
    EXPECT_EQ(c["points"].back(), "inf");
    EXPECT_EQ(c["coeffs"], Json::array({0, 0, 0, 1, 0}));
}

TEST(Report, ParametersKeys) {
    CodeParameters p{10, 3, 7, 3, 1, 1, CodeLabel::NMDS};
    const auto j = parameters_json(p);
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    EXPECT_EQ(keys, (std::vector<std::string>{"n", "k", "d", "dDual", "s", "sDual", "label"}));
    EXPECT_EQ(j["label"], "NMDS");
}

TEST(Report, LineProfileTotals) {
    const auto F = Field::of_order(7);
    const auto E = EllipticCurve::make_short(F, 0, 1, 3);
    const auto P = ProjPoint::from(*F, {0, 1, 2});
    const auto j = line_profile_json(line_profile(P, E), 7);
    EXPECT_EQ(j["sumsToQPlus1"], true);
    EXPECT_TRUE(j["hasNonVerticalTangent"].is_null());
}

TEST(Report, VerifyReportIsStable) {
    const auto F = Field::of_order(13);
    const auto E = EllipticCurve::make_short(F, 0, 2, 5);
    VerifyOptions opts;
    opts.force = true;
    const auto a = verify_json(verify_main_theorem(E, 4, opts)).dump();
    const auto b = verify_json(verify_main_theorem(E, 4, opts)).dump();
    EXPECT_EQ(a, b);
    const auto j = Json::parse(a);
    EXPECT_EQ(j["tag"], "OUT_OF_HYPOTHESIS");
    EXPECT_EQ(j.begin().key(), "theorem");
}

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nmds/error.hpp"
#include "nmds/gf.hpp"
#include "nmds/integer.hpp"
#include "nmds/parallel.hpp"

namespace nmds {

/// A rational point of the curve. The point at infinity is (0:0:1) in the
/// (X1:X2:X3) = (1:x:y) convention.
struct CurvePoint {
    Elem x = 0;
    Elem y = 0;
    bool infinite = false;

    static CurvePoint at_infinity() { return {0, 0, true}; }

    friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
    friend auto operator<=>(const CurvePoint& a, const CurvePoint& b) {
        if (a.infinite != b.infinite) return a.infinite <=> b.infinite;
        if (a.x != b.x) return a.x <=> b.x;
        return a.y <=> b.y;
    }
};

/// Coefficients (a1..a5) of f(X,Y) = Y^2 + a1 XY + a2 Y - X^3 - a3 X^2 - a4 X - a5.
/// In the usual Weierstrass labels y^2 + A1 xy + A3 y = x^3 + A2 x^2 + A4 x + A6
/// this is (A1, A3, A2, A4, A6) = (a1, a2, a3, a4, a5).
using Coefficients = std::array<Elem, 5>;

/// Coefficients of the canonical form Y^2 = X^3 + aX^2 + bX + c.
struct ShortForm {
    Elem a = 0, b = 0, c = 0;
    friend bool operator==(const ShortForm&, const ShortForm&) = default;
};

namespace detail {

inline ShortForm complete_square(const Field& F, const Coefficients& a) {
    // (Y + (a1 X + a2)/2)^2 = X^3 + a3 X^2 + a4 X + a5 + (a1 X + a2)^2 / 4
    const Elem inv4 = F.inv(F.from_int(4));
    const Elem inv2 = F.inv(F.from_int(2));
    return {F.add(a[2], F.mul(F.mul(a[0], a[0]), inv4)), F.add(a[3], F.mul(F.mul(a[0], a[1]), inv2)),
            F.add(a[4], F.mul(F.mul(a[1], a[1]), inv4))};
}

struct Invariants {
    Elem c4 = 0;
    Elem delta = 0;
};

// b2/b4/b6/b8 chain on the canonical form; valid in every odd characteristic
// (the integer constants reduce mod p, which is the characteristic-3
// specialisation j = a^6 / (a^2 b^2 - a^3 c - b^3)).
inline Invariants invariants(const Field& F, const ShortForm& s) {
    const auto k = [&](std::int64_t v) { return F.from_int(v); };
    const Elem b2 = F.mul(k(4), s.a);
    const Elem b4 = F.mul(k(2), s.b);
    const Elem b6 = F.mul(k(4), s.c);
    const Elem b8 = F.sub(F.mul(k(4), F.mul(s.a, s.c)), F.mul(s.b, s.b));
    Elem delta = F.neg(F.mul(F.mul(b2, b2), b8));
    delta = F.sub(delta, F.mul(k(8), F.mul(b4, F.mul(b4, b4))));
    delta = F.sub(delta, F.mul(k(27), F.mul(b6, b6)));
    delta = F.add(delta, F.mul(k(9), F.mul(b2, F.mul(b4, b6))));
    const Elem c4 = F.sub(F.mul(b2, b2), F.mul(k(24), b4));
    return {c4, delta};
}

}  // namespace detail

class EllipticCurve {
public:
    static std::optional<EllipticCurve> try_make(FieldPtr field, const Coefficients& a) {
        const Field& F = *field;
        if (!F.is_odd()) fail(ErrorKind::EvenCharacteristic, "curves require odd characteristic");
        for (auto c : a)
            if (c >= F.q()) fail(ErrorKind::InvalidArgument, "coefficient encoding out of range");
        const auto sf = detail::complete_square(F, a);
        const auto inv = detail::invariants(F, sf);
        if (inv.delta == 0) return std::nullopt;
        EllipticCurve E;
        E.field_ = std::move(field);
        E.a_ = a;
        E.short_ = sf;
        E.j_ = F.div(F.mul(inv.c4, F.mul(inv.c4, inv.c4)), inv.delta);
        E.enumerate();
        return E;
    }

    static EllipticCurve make(FieldPtr field, const Coefficients& a) {
        auto E = try_make(std::move(field), a);
        if (!E) fail(ErrorKind::Singular, "discriminant vanishes");
        return std::move(*E);
    }

    /// y^2 = x^3 + a x^2 + b x + c
    static EllipticCurve make_short(FieldPtr field, Elem a, Elem b, Elem c) { return make(std::move(field), {0, 0, a, b, c}); }

    const Field& field() const noexcept { return *field_; }
    const FieldPtr& field_ptr() const noexcept { return field_; }
    const Coefficients& coeffs() const noexcept { return a_; }
    const std::vector<CurvePoint>& points() const noexcept { return points_; }
    std::size_t n() const noexcept { return points_.size(); }
    Elem j() const noexcept { return j_; }
    const ShortForm& canonical() const noexcept { return short_; }
    bool is_short() const noexcept { return a_[0] == 0 && a_[1] == 0; }

    /// f(x, y) = y^2 + a1xy + a2y - x^3 - a3x^2 - a4x - a5.
    Elem f(Elem x, Elem y) const noexcept {
        const Field& F = *field_;
        Elem v = F.mul(y, F.add(y, F.add(F.mul(a_[0], x), a_[1])));
        const Elem cubic = F.add(F.mul(F.add(F.mul(F.add(x, a_[2]), x), a_[3]), x), a_[4]);
        return F.sub(v, cubic);
    }

    bool contains_affine(Elem x, Elem y) const noexcept { return f(x, y) == 0; }

    /// Membership of a projective point (X1:X2:X3) of the plane.
    bool contains(Elem x1, Elem x2, Elem x3) const {
        const Field& F = *field_;
        if (x1 == 0) return x2 == 0 && x3 != 0;
        const Elem inv = F.inv(x1);
        return contains_affine(F.mul(x2, inv), F.mul(x3, inv));
    }

    std::optional<std::size_t> index_of(const CurvePoint& P) const {
        if (P.infinite) return points_.size() - 1;
        auto it = std::lower_bound(points_.begin(), points_.end() - 1, P);
        if (it != points_.end() - 1 && *it == P) return static_cast<std::size_t>(it - points_.begin());
        return std::nullopt;
    }

    /// Affine rational points over x (0, 1 or 2 of them, y ascending).
    std::vector<Elem> fiber(Elem x) const {
        const Field& F = *field_;
        const Elem B = F.add(F.mul(a_[0], x), a_[1]);
        const Elem C = F.add(F.mul(F.add(F.mul(F.add(x, a_[2]), x), a_[3]), x), a_[4]);
        const Elem D = F.add(F.mul(B, B), F.mul(F.from_int(4), C));
        const auto s = F.sqrt(D);
        if (!s) return {};
        const Elem inv2 = F.inv(F.from_int(2));
        const Elem y1 = F.mul(F.sub(*s, B), inv2);
        if (*s == 0) return {y1};
        const Elem y2 = F.mul(F.sub(F.neg(*s), B), inv2);
        return y1 < y2 ? std::vector<Elem>{y1, y2} : std::vector<Elem>{y2, y1};
    }

private:
    EllipticCurve() = default;

    void enumerate() {
        const Field& F = *field_;
        points_.clear();
        for (Elem x = 0; x < F.q(); ++x)
            for (Elem y : fiber(x)) points_.push_back({x, y, false});
        points_.push_back(CurvePoint::at_infinity());
        const std::int64_t t = static_cast<std::int64_t>(points_.size()) - static_cast<std::int64_t>(F.q()) - 1;
        if (static_cast<std::uint64_t>(t * t) > 4ULL * F.q())
            fail(ErrorKind::InvalidArgument, "point count outside the Hasse interval");
    }

    FieldPtr field_;
    Coefficients a_{};
    ShortForm short_{};
    Elem j_ = 0;
    std::vector<CurvePoint> points_;
};

inline ShortForm short_form(const EllipticCurve& E) { return E.canonical(); }

inline Elem j_invariant(const EllipticCurve& E) { return E.j(); }

/// Maximum number of rational points of an elliptic curve over F_q.
/// floor(2 sqrt q) is computed as isqrt(4q).
inline std::uint64_t nq1(std::uint64_t q) {
    const auto pp = prime_power(q);
    if (!pp) fail(ErrorKind::NotPrimePower, std::to_string(q) + " is not a prime power");
    const std::uint64_t m = isqrt(4 * q);
    if (m % pp->p == 0 && pp->r % 2 == 1 && pp->r >= 3) return q + m;
    return q + m + 1;
}

struct CurveSummary {
    Coefficients coeffs{};
    std::size_t n = 0;
    Elem j = 0;
    bool j_is_zero = false;
    bool n_is_even = false;
    unsigned r_parity = 0;
    unsigned p_mod3 = 0;
};

inline CurveSummary summarize(const EllipticCurve& E) {
    return {E.coeffs(), E.n(), E.j(), E.j() == 0, E.n() % 2 == 0, E.field().r() % 2, E.field().p() % 3};
}

using CurveFilter = std::function<bool(const CurveSummary&)>;

struct ScanOptions {
    std::uint64_t max_order = 169;
    Parallelism parallel{};
};

/// Visits every nonsingular canonical-form curve y^2 = x^3 + ax^2 + bx + c
/// accepted by the filter, ordered by (a, b, c) encodings.
template <class Visitor>
void curve_scan(const FieldPtr& field, const CurveFilter& filter, Visitor&& visit, ScanOptions opts = {}) {
    const std::uint32_t q = field->q();
    if (q > opts.max_order)
        fail(ErrorKind::ScanLimitExceeded, "q = " + std::to_string(q) + " exceeds scan limit " + std::to_string(opts.max_order));
    if (!field->is_odd()) fail(ErrorKind::EvenCharacteristic, "curves require odd characteristic");
    for (Elem a = 0; a < q; ++a) {
        auto slices = parallel_chunks<std::vector<EllipticCurve>>(q, opts.parallel, [&](std::size_t b) {
            std::vector<EllipticCurve> out;
            for (Elem c = 0; c < q; ++c) {
                auto E = EllipticCurve::try_make(field, {0, 0, a, static_cast<Elem>(b), c});
                if (E && (!filter || filter(summarize(*E)))) out.push_back(std::move(*E));
            }
            return out;
        });
        for (auto& slice : slices)
            for (auto& E : slice) visit(E);
    }
}

inline std::vector<EllipticCurve> collect_curves(const FieldPtr& field, const CurveFilter& filter = {}, ScanOptions opts = {}) {
    std::vector<EllipticCurve> out;
    curve_scan(field, filter, [&](const EllipticCurve& E) { out.push_back(E); }, opts);
    return out;
}

}  // namespace nmds

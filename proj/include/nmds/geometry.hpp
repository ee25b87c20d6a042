#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "nmds/curve.hpp"
#include "nmds/error.hpp"
#include "nmds/gf.hpp"
#include "nmds/integer.hpp"
#include "nmds/linalg.hpp"
#include "nmds/parallel.hpp"

namespace nmds {

/// Scales v so that its first nonzero coordinate is 1. Returns false for the
/// zero vector.
inline bool normalize(const Field& F, std::span<Elem> v) {
    std::size_t lead = 0;
    while (lead < v.size() && v[lead] == 0) ++lead;
    if (lead == v.size()) return false;
    if (v[lead] != 1) {
        const Elem inv = F.inv(v[lead]);
        for (std::size_t i = lead; i < v.size(); ++i) v[i] = F.mul(v[i], inv);
    }
    return true;
}

struct PointTag {};
struct HyperplaneTag {};

/// Normalized homogeneous coordinates; Tag separates points from dual
/// coordinates of hyperplanes.
template <class Tag>
class ProjectiveTuple {
public:
    ProjectiveTuple() = default;

    static ProjectiveTuple from(const Field& F, std::vector<Elem> coords) {
        if (!normalize(F, coords)) fail(ErrorKind::InvalidArgument, "all-zero homogeneous coordinates");
        ProjectiveTuple t;
        t.c_ = std::move(coords);
        return t;
    }

    std::size_t dim() const noexcept { return c_.size(); }
    Elem operator[](std::size_t i) const { return c_[i]; }
    const std::vector<Elem>& coords() const noexcept { return c_; }
    std::span<const Elem> span() const noexcept { return c_; }

    friend bool operator==(const ProjectiveTuple&, const ProjectiveTuple&) = default;
    friend auto operator<=>(const ProjectiveTuple&, const ProjectiveTuple&) = default;

private:
    std::vector<Elem> c_;
};

using ProjPoint = ProjectiveTuple<PointTag>;
using Hyperplane = ProjectiveTuple<HyperplaneTag>;

inline bool incident(const Field& F, const Hyperplane& H, const ProjPoint& P) {
    if (H.dim() != P.dim()) fail(ErrorKind::DimensionMismatch, "hyperplane and point dimensions differ");
    return dot(F, H.span(), P.span()) == 0;
}

/// Normalized points of P^{dim-1}(F_q) ranked in lexicographic order of their
/// coordinate encodings, so rank order equals the order of the encoded tuples.
class ProjectiveSpace {
public:
    ProjectiveSpace(std::uint32_t q, std::size_t dim) : q_(q), dim_(dim), pow_(dim + 1, 1) {
        for (std::size_t i = 1; i <= dim; ++i) pow_[i] = sat_mul(pow_[i - 1], q);
    }

    std::size_t dim() const noexcept { return dim_; }
    std::uint64_t size() const noexcept { return (pow_[dim_] - 1) / (q_ - 1); }

    /// Number of points whose leading coordinate sits after position lead.
    std::uint64_t offset(std::size_t lead) const noexcept { return (pow_[dim_ - 1 - lead] - 1) / (q_ - 1); }
    std::uint64_t place(std::size_t j) const noexcept { return pow_[dim_ - 1 - j]; }

    std::uint64_t rank(std::span<const Elem> v) const noexcept {
        std::size_t lead = 0;
        while (v[lead] == 0) ++lead;
        std::uint64_t r = offset(lead);
        for (std::size_t j = lead + 1; j < dim_; ++j) r += v[j] * pow_[dim_ - 1 - j];
        return r;
    }

    void unrank(std::uint64_t r, std::span<Elem> out) const noexcept {
        std::fill(out.begin(), out.end(), 0);
        std::size_t lead = dim_ - 1;
        for (;;) {
            const std::uint64_t block = pow_[dim_ - 1 - lead];
            if (r < offset(lead) + block || lead == 0) break;
            --lead;
        }
        r -= offset(lead);
        out[lead] = 1;
        for (std::size_t j = dim_; j-- > lead + 1;) {
            out[j] = static_cast<Elem>(r % q_);
            r /= q_;
        }
    }

    std::vector<Elem> unrank(std::uint64_t r) const {
        std::vector<Elem> v(dim_);
        unrank(r, v);
        return v;
    }

private:
    std::uint32_t q_;
    std::size_t dim_;
    std::vector<std::uint64_t> pow_;
};

/// Flat storage for a list of coordinate vectors of equal length.
struct PointSet {
    std::size_t dim = 0;
    std::vector<Elem> data;

    PointSet() = default;
    explicit PointSet(std::size_t d) : dim(d) {}

    std::size_t size() const noexcept { return dim == 0 ? 0 : data.size() / dim; }
    std::span<const Elem> operator[](std::size_t i) const { return {data.data() + i * dim, dim}; }
    void push(std::span<const Elem> v) { data.insert(data.end(), v.begin(), v.end()); }
};

class Bitset {
public:
    explicit Bitset(std::uint64_t bits = 0) : words_((bits + 63) / 64, 0), bits_(bits) {}
    void set(std::uint64_t i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    bool test(std::uint64_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1; }
    void fill() noexcept {
        std::fill(words_.begin(), words_.end(), ~std::uint64_t{0});
    }
    std::uint64_t size() const noexcept { return bits_; }
    std::uint64_t count() const noexcept {
        std::uint64_t c = 0;
        for (std::uint64_t i = 0; i < bits_; ++i) c += test(i);
        return c;
    }

private:
    std::vector<std::uint64_t> words_;
    std::uint64_t bits_;
};

// ---------------------------------------------------------------------------
// The monomials psi_i and the map phi_k.

/// psi_i(x, y): Y^s for i = 3s (s >= 1), X Y^s for i = 3s + 2, X^2 Y^s for i = 3s + 4.
inline Elem psi(const Field& F, int i, Elem x, Elem y) {
    if (i < 2) fail(ErrorKind::BadIndex, "psi index must be >= 2, got " + std::to_string(i));
    Elem base = 1;
    int s = 0;
    switch (i % 3) {
        case 0: s = i / 3; break;
        case 2: base = x; s = (i - 2) / 3; break;
        case 1: base = F.mul(x, x); s = (i - 4) / 3; break;
    }
    return F.mul(base, F.pow(y, static_cast<std::uint64_t>(s)));
}

inline void phi_into(const Field& F, const CurvePoint& P, int k, std::span<Elem> out) {
    if (P.infinite) {
        std::fill(out.begin(), out.end(), 0);
        out[k - 1] = 1;
        return;
    }
    out[0] = 1;
    for (int i = 2; i <= k; ++i) out[i - 1] = psi(F, i, P.x, P.y);
}

inline ProjPoint phi(const Field& F, const CurvePoint& P, int k) {
    if (k < 2) fail(ErrorKind::KOutOfRange, "phi_k needs k >= 2");
    std::vector<Elem> v(k);
    phi_into(F, P, k, v);
    return ProjPoint::from(F, std::move(v));
}

// ---------------------------------------------------------------------------
// Hyperplane-side enumeration.

/// Calls emit(rank) for every point of P^{dim-1} on the hyperplane h
/// (normalized). Ranks are those of ProjectiveSpace(q, dim).
template <class Emit>
void for_each_point_on_hyperplane(const Field& F, std::span<const Elem> h, Emit&& emit) {
    const std::size_t dim = h.size();
    const ProjectiveSpace space(F.q(), dim);
    const std::uint32_t q = F.q();
    std::size_t jz = dim;
    while (jz-- > 0)
        if (h[jz] != 0) break;
    const Elem scale = F.neg(F.inv(h[jz]));  // x_jz = scale * sum_{i<jz} h_i x_i

    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < dim; ++i)
        if (i != jz) free.push_back(i);
    if (free.empty()) return;  // P^0: the hyperplane is empty
    const std::size_t last = free.back();

    std::vector<Elem> x(dim, 0);
    for (std::size_t fi = 0; fi < free.size(); ++fi) {
        const std::size_t lead = free[fi];
        // outer digits: free positions strictly between lead and last
        std::vector<std::size_t> outer(free.begin() + fi + 1, free.end());
        const bool has_inner = !outer.empty();
        if (has_inner) outer.pop_back();
        std::fill(x.begin(), x.end(), 0);
        x[lead] = 1;
        for (;;) {
            Elem s_out = 0;
            for (std::size_t i = 0; i < jz; ++i)
                if (i != last || !has_inner) s_out = F.add(s_out, F.mul(h[i], x[i]));
            std::uint64_t base = space.offset(lead);
            for (auto j : outer) base += x[j] * space.place(j);
            const bool jz_counts = jz > lead;
            if (!has_inner) {
                const Elem xj = F.mul(scale, s_out);
                emit(base + (jz_counts ? xj * space.place(jz) : 0));
            } else if (last < jz) {
                const std::uint64_t pl = space.place(last), pj = space.place(jz);
                for (Elem t = 0; t < q; ++t) {
                    const Elem xj = F.mul(scale, F.add(s_out, F.mul(h[last], t)));
                    emit(base + t * pl + xj * pj);
                }
            } else {
                const Elem xj = F.mul(scale, s_out);
                const std::uint64_t b2 = base + (jz_counts ? xj * space.place(jz) : 0);
                const std::uint64_t pl = space.place(last);
                for (Elem t = 0; t < q; ++t) emit(b2 + t * pl);
            }
            // advance the outer odometer
            std::size_t pos = outer.size();
            while (pos > 0) {
                --pos;
                if (++x[outer[pos]] < q) break;
                x[outer[pos]] = 0;
                if (pos == 0) {
                    pos = SIZE_MAX;
                    break;
                }
            }
            if (outer.empty() || pos == SIZE_MAX) break;
        }
    }
}

/// Secant counts of every hyperplane of P^{dim-1} against a point list,
/// delivered per block of q hyperplanes sharing their first dim-1 dual
/// coordinates. visit(first_rank, prefix, counts) sees ranks first_rank + t for
/// t = 0..q-1; the single hyperplane X_dim = 0 arrives as a block of size 1.
struct HyperplaneBlock {
    std::uint64_t first_rank = 0;
    std::vector<std::uint32_t> counts;
};

template <class Visit>
void scan_hyperplanes(const Field& F, const PointSet& pts, Parallelism par, Visit&& visit) {
    const std::size_t dim = pts.dim;
    const std::uint32_t q = F.q();
    const std::size_t n = pts.size();
    const ProjectiveSpace full(q, dim);
    const ProjectiveSpace prefix_space(q, dim - 1);
    const std::uint64_t prefixes = prefix_space.size();

    {  // X_dim = 0
        std::uint32_t c = 0;
        for (std::size_t i = 0; i < n; ++i) c += pts[i][dim - 1] == 0;
        std::vector<Elem> h(dim, 0);
        h[dim - 1] = 1;
        visit(HyperplaneBlock{0, {c}}, std::span<const Elem>(h));
    }

    std::vector<Elem> last_inv(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        if (pts[i][dim - 1] != 0) last_inv[i] = F.neg(F.inv(pts[i][dim - 1]));

    const std::uint64_t chunk_size = std::max<std::uint64_t>(1, std::min<std::uint64_t>(prefixes, 4096));
    const std::uint64_t chunks = (prefixes + chunk_size - 1) / chunk_size;
    // Process in windows so buffered results stay bounded.
    const std::uint64_t window = std::max<std::uint64_t>(1, par.resolved() * 4);
    for (std::uint64_t w0 = 0; w0 < chunks; w0 += window) {
        const std::uint64_t wn = std::min(window, chunks - w0);
        using Out = std::vector<std::pair<std::vector<Elem>, HyperplaneBlock>>;
        auto outs = parallel_chunks<Out>(wn, par, [&](std::size_t ci) {
            Out out;
            const std::uint64_t lo = (w0 + ci) * chunk_size;
            const std::uint64_t hi = std::min(prefixes, lo + chunk_size);
            std::vector<Elem> pre(dim - 1);
            std::vector<Elem> h(dim);
            for (std::uint64_t pr = lo; pr < hi; ++pr) {
                prefix_space.unrank(pr, pre);
                std::size_t lead = 0;
                while (pre[lead] == 0) ++lead;
                HyperplaneBlock blk;
                blk.counts.assign(q, 0);
                std::uint32_t always = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    const auto p = pts[i];
                    Elem s = 0;
                    for (std::size_t j = lead; j + 1 < dim; ++j)
                        if (pre[j] != 0) s = F.add(s, F.mul(pre[j], p[j]));
                    if (p[dim - 1] == 0) {
                        always += s == 0;
                    } else {
                        ++blk.counts[F.mul(s, last_inv[i])];
                    }
                }
                if (always)
                    for (auto& c : blk.counts) c += always;
                std::copy(pre.begin(), pre.end(), h.begin());
                h[dim - 1] = 0;
                blk.first_rank = full.rank(h);
                out.emplace_back(pre, std::move(blk));
            }
            return out;
        });
        for (auto& out : outs)
            for (auto& [pre, blk] : out) visit(blk, std::span<const Elem>(pre));
    }
}

inline std::uint64_t hyperplane_scan_cost(std::uint32_t q, std::size_t dim, std::size_t n) {
    return sat_mul(ProjectiveSpace(q, dim).size(), n);
}

/// Histogram s -> number of hyperplanes meeting the points in exactly s of them.
inline std::vector<std::uint64_t> secant_histogram(const Field& F, const PointSet& pts, Budget& budget, Parallelism par = {}) {
    budget.charge(hyperplane_scan_cost(F.q(), pts.dim, pts.size()), "secant profile");
    std::vector<std::uint64_t> hist(pts.size() + 1, 0);
    scan_hyperplanes(F, pts, par, [&](const HyperplaneBlock& blk, std::span<const Elem>) {
        for (auto c : blk.counts) ++hist[c];
    });
    return hist;
}

/// Hyperplanes (ascending rank) meeting the points in at least `threshold` of them.
inline std::vector<Hyperplane> hyperplanes_at_least(const Field& F, const PointSet& pts, std::uint32_t threshold,
                                                    Budget& budget, Parallelism par = {}) {
    budget.charge(hyperplane_scan_cost(F.q(), pts.dim, pts.size()), "hyperplane scan");
    std::vector<Hyperplane> out;
    const ProjectiveSpace full(F.q(), pts.dim);
    scan_hyperplanes(F, pts, par, [&](const HyperplaneBlock& blk, std::span<const Elem>) {
        for (std::size_t t = 0; t < blk.counts.size(); ++t)
            if (blk.counts[t] >= threshold) out.push_back(Hyperplane::from(F, full.unrank(blk.first_rank + t)));
    });
    return out;
}

// ---------------------------------------------------------------------------
// Pencil enumeration: for point sets in which any dim-1 points are
// independent, every hyperplane holding exactly dim points is found once, from
// its first dim-2 points, as a pencil member holding exactly two later points.

struct FullHyperplane {
    Hyperplane plane;
    std::vector<std::uint32_t> members;
};

namespace detail {

template <class OnBucket>
void pencil_walk(const Field& F, const PointSet& pts, std::size_t first, OnBucket&& on_bucket) {
    const std::size_t dim = pts.dim;
    const std::size_t n = pts.size();
    const std::size_t t = dim - 2;
    const std::uint32_t q = F.q();
    std::vector<std::uint32_t> idx(t);
    std::vector<std::uint32_t> bucket_count(q + 1, 0), bucket_stamp(q + 1, 0), bucket_a(q + 1), bucket_b(q + 1);
    std::vector<std::uint32_t> touched;
    std::uint32_t stamp = 0;

    auto visit_subset = [&]() {
        Matrix M(t, dim);
        for (std::size_t r = 0; r < t; ++r)
            for (std::size_t c = 0; c < dim; ++c) M(r, c) = pts[idx[r]][c];
        auto ns = nullspace(F, M);
        if (ns.size() != 2) fail(ErrorKind::ArcPropertyViolated, "dependent subset of size " + std::to_string(t));
        const auto& ha = ns[0];
        const auto& hb = ns[1];
        ++stamp;
        touched.clear();
        for (std::size_t j = idx[t - 1] + 1; j < n; ++j) {
            const Elem A = dot(F, ha, pts[j]);
            const Elem B = dot(F, hb, pts[j]);
            std::uint32_t slope;
            if (B != 0)
                slope = F.div(A, B);
            else if (A != 0)
                slope = q;
            else
                fail(ErrorKind::ArcPropertyViolated, "point in the span of " + std::to_string(t) + " others");
            if (bucket_stamp[slope] != stamp) {
                bucket_stamp[slope] = stamp;
                bucket_count[slope] = 0;
                touched.push_back(slope);
            }
            const std::uint32_t c = ++bucket_count[slope];
            if (c == 1) bucket_a[slope] = static_cast<std::uint32_t>(j);
            if (c == 2) bucket_b[slope] = static_cast<std::uint32_t>(j);
        }
        for (auto s : touched) on_bucket(idx, ha, hb, bucket_count[s], bucket_a[s], bucket_b[s]);
    };

    if (t == 0) fail(ErrorKind::DimensionMismatch, "pencil walk needs dim >= 3");
    // subsets whose smallest index is `first`
    idx[0] = static_cast<std::uint32_t>(first);
    if (t == 1) {
        visit_subset();
        return;
    }
    for (std::size_t r = 1; r < t; ++r) idx[r] = idx[r - 1] + 1;
    if (idx[t - 1] >= n) return;
    for (;;) {
        visit_subset();
        std::size_t r = t - 1;
        while (r >= 1 && idx[r] == n - (t - r)) --r;
        if (r == 0) return;
        ++idx[r];
        for (std::size_t s = r + 1; s < t; ++s) idx[s] = idx[s - 1] + 1;
    }
}

}  // namespace detail

inline std::uint64_t pencil_cost(std::size_t n, std::size_t dim) {
    return sat_mul(binomial(n, dim - 1), dim * 2);
}

/// Streams every hyperplane meeting `pts` in exactly dim points into
/// per-chunk accumulators: on_plane(acc, h, members) with h normalized and
/// members the dim point indices. Throws ArcPropertyViolated if some dim-1
/// points are dependent or some hyperplane holds more than dim points.
template <class Acc, class OnPlane>
std::vector<Acc> reduce_full_hyperplanes(const Field& F, const PointSet& pts, Budget& budget, Parallelism par,
                                         const std::function<Acc()>& make_acc, OnPlane&& on_plane) {
    const std::size_t dim = pts.dim;
    const std::size_t n = pts.size();
    budget.charge(pencil_cost(n, dim), "pencil enumeration");
    if (n < dim) return {};
    return parallel_chunks<Acc>(n, par, [&](std::size_t first) {
        Acc acc = make_acc();
        std::vector<Elem> h(dim);
        std::vector<std::uint32_t> members(dim);
        detail::pencil_walk(F, pts, first,
                            [&](const std::vector<std::uint32_t>& idx, const std::vector<Elem>& ha, const std::vector<Elem>& hb,
                                std::uint32_t count, std::uint32_t a, std::uint32_t b) {
                                if (count > 2)
                                    fail(ErrorKind::ArcPropertyViolated, "hyperplane with more than " +
                                                                             std::to_string(dim) + " points");
                                if (count != 2) return;
                                const Elem A = dot(F, ha, pts[a]);
                                const Elem B = dot(F, hb, pts[a]);
                                for (std::size_t c = 0; c < dim; ++c) h[c] = F.sub(F.mul(B, ha[c]), F.mul(A, hb[c]));
                                normalize(F, h);
                                std::copy(idx.begin(), idx.end(), members.begin());
                                members[dim - 2] = a;
                                members[dim - 1] = b;
                                on_plane(acc, std::span<const Elem>(h), std::span<const std::uint32_t>(members));
                            });
        return acc;
    });
}

/// Every hyperplane meeting `pts` in exactly dim points, grouped by the
/// smallest member index.
inline std::vector<FullHyperplane> full_hyperplanes(const Field& F, const PointSet& pts, Budget& budget,
                                                    Parallelism par = {}) {
    using Acc = std::vector<FullHyperplane>;
    auto parts = reduce_full_hyperplanes<Acc>(
        F, pts, budget, par, [] { return Acc{}; },
        [&](Acc& acc, std::span<const Elem> h, std::span<const std::uint32_t> members) {
            acc.push_back({Hyperplane::from(F, std::vector<Elem>(h.begin(), h.end())),
                           std::vector<std::uint32_t>(members.begin(), members.end())});
        });
    Acc all;
    for (auto& p : parts)
        for (auto& fh : p) all.push_back(std::move(fh));
    return all;
}

/// Checks that no dim+1 of the points lie on a hyperplane and any dim-1 are
/// independent.
inline void check_arc_property(const Field& F, const PointSet& pts, Budget& budget, Parallelism par = {}) {
    (void)reduce_full_hyperplanes<int>(
        F, pts, budget, par, [] { return 0; }, [](int& acc, auto, auto) { ++acc; });
}

// ---------------------------------------------------------------------------
// Maximum incidence of hyperplanes through a flat.

namespace detail {

// pts: N vectors of length dim, all nonzero. Max over hyperplanes of P^{dim-1}
// of the number of (multiset) points on it.
inline std::size_t max_hyperplane_rec(const Field& F, std::size_t dim, std::vector<Elem> pts, std::size_t lower_bound) {
    const std::size_t N = dim == 0 ? 0 : pts.size() / dim;
    if (dim <= 1 || N == 0) return 0;
    for (std::size_t i = 0; i < N; ++i) normalize(F, {pts.data() + i * dim, dim});
    const ProjectiveSpace space(F.q(), dim);
    std::vector<std::pair<std::uint64_t, std::size_t>> order(N);
    for (std::size_t i = 0; i < N; ++i) order[i] = {space.rank({pts.data() + i * dim, dim}), i};
    std::sort(order.begin(), order.end());
    // group equal points
    std::vector<std::size_t> group_start;
    for (std::size_t i = 0; i < N; ++i)
        if (i == 0 || order[i].first != order[i - 1].first) group_start.push_back(i);
    group_start.push_back(N);
    const std::size_t groups = group_start.size() - 1;

    std::size_t best = lower_bound;
    if (dim == 2) {
        for (std::size_t g = 0; g < groups; ++g) best = std::max(best, group_start[g + 1] - group_start[g]);
        return best;
    }
    std::vector<Elem> proj;
    for (std::size_t g = 0; g < groups; ++g) {
        const std::size_t mult = group_start[g + 1] - group_start[g];
        const std::size_t later = N - group_start[g + 1];
        if (mult + later <= best) continue;
        const Elem* a = pts.data() + order[group_start[g]].second * dim;
        std::size_t lead = 0;
        while (a[lead] == 0) ++lead;
        proj.clear();
        proj.reserve(later * (dim - 1));
        for (std::size_t i = group_start[g + 1]; i < N; ++i) {
            const Elem* x = pts.data() + order[i].second * dim;
            const Elem c = x[lead];
            for (std::size_t j = 0; j < dim; ++j)
                if (j != lead) proj.push_back(c == 0 ? x[j] : F.sub(x[j], F.mul(c, a[j])));
        }
        const std::size_t sub = max_hyperplane_rec(F, dim - 1, std::move(proj), best > mult ? best - mult : 0);
        best = std::max(best, mult + sub);
        proj = {};
    }
    return best;
}

}  // namespace detail

/// max over hyperplanes H containing every vector of `through` of the number
/// of points of `pts` (as a multiset, zero vectors ignored) lying on H.
inline std::size_t max_hyperplane_incidence(const Field& F, const PointSet& pts,
                                            const std::vector<std::vector<Elem>>& through = {}) {
    const std::size_t dim = pts.dim;
    std::vector<Elem> cur;
    cur.reserve(pts.data.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto p = pts[i];
        if (std::any_of(p.begin(), p.end(), [](Elem e) { return e != 0; })) cur.insert(cur.end(), p.begin(), p.end());
    }
    std::size_t cur_dim = dim;
    std::size_t base = 0;
    std::vector<std::vector<Elem>> w = through;
    for (std::size_t wi = 0; wi < w.size(); ++wi) {
        std::vector<Elem> a = w[wi];
        if (!normalize(F, a)) continue;  // dependent on earlier vectors
        std::size_t lead = 0;
        while (a[lead] == 0) ++lead;
        auto project = [&](std::span<const Elem> x, std::vector<Elem>& out) {
            const Elem c = x[lead];
            for (std::size_t j = 0; j < cur_dim; ++j)
                if (j != lead) out.push_back(c == 0 ? x[j] : F.sub(x[j], F.mul(c, a[j])));
        };
        std::vector<Elem> next;
        const std::size_t N = cur.size() / cur_dim;
        for (std::size_t i = 0; i < N; ++i) {
            std::vector<Elem> img;
            project({cur.data() + i * cur_dim, cur_dim}, img);
            if (std::all_of(img.begin(), img.end(), [](Elem e) { return e == 0; }))
                ++base;
            else
                next.insert(next.end(), img.begin(), img.end());
        }
        for (std::size_t wj = wi + 1; wj < w.size(); ++wj) {
            std::vector<Elem> img;
            project(w[wj], img);
            w[wj] = std::move(img);
        }
        cur = std::move(next);
        --cur_dim;
    }
    if (cur_dim == 0) return base;
    return base + detail::max_hyperplane_rec(F, cur_dim, std::move(cur), 0);
}

// ---------------------------------------------------------------------------
// Elliptic arcs.

struct ArcOptions {
    /// Verify the (n;k,k-2)-set property when the pencil check costs at most this.
    std::uint64_t verify_limit = 500'000'000ULL;
    Parallelism parallel{};
};

/// phi_k of the rational points of a curve, in curve order (P_inf last).
class EllipticArc {
public:
    static EllipticArc make(const EllipticCurve& E, int k, ArcOptions opts = {}) {
        const std::size_t n = E.n();
        if (k < 3 || static_cast<std::size_t>(k) > n - 1)
            fail(ErrorKind::KOutOfRange, "k = " + std::to_string(k) + " outside [3, n-1] with n = " + std::to_string(n));
        EllipticArc A(E, k);
        const Field& F = E.field();
        std::vector<Elem> v(k);
        for (const auto& P : E.points()) {
            phi_into(F, P, k, v);
            A.points_.push(v);
        }
        if (pencil_cost(n, k) <= opts.verify_limit) {
            Budget b(opts.verify_limit);
            check_arc_property(F, A.points_, b, opts.parallel);
            A.verified_ = true;
        }
        return A;
    }

    const EllipticCurve& curve() const noexcept { return curve_; }
    const Field& field() const noexcept { return curve_.field(); }
    int k() const noexcept { return k_; }
    std::size_t n() const noexcept { return points_.size(); }
    const PointSet& points() const noexcept { return points_; }
    ProjPoint point(std::size_t i) const {
        return ProjPoint::from(field(), std::vector<Elem>(points_[i].begin(), points_[i].end()));
    }
    /// True when the arc property was checked at construction.
    bool verified() const noexcept { return verified_; }

    bool contains(const ProjPoint& P) const {
        for (std::size_t i = 0; i < n(); ++i)
            if (std::equal(P.span().begin(), P.span().end(), points_[i].begin())) return true;
        return false;
    }

private:
    EllipticArc(const EllipticCurve& E, int k) : curve_(E), k_(k), points_(static_cast<std::size_t>(k)) {}

    EllipticCurve curve_;
    int k_;
    PointSet points_;
    bool verified_ = false;
};

inline EllipticArc arc_make(const EllipticCurve& E, int k, ArcOptions opts = {}) { return EllipticArc::make(E, k, opts); }

inline std::vector<std::size_t> secant_points(const Hyperplane& H, const EllipticArc& A) {
    if (H.dim() != static_cast<std::size_t>(A.k())) fail(ErrorKind::DimensionMismatch, "hyperplane dimension differs from k");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < A.n(); ++i)
        if (dot(A.field(), H.span(), A.points()[i]) == 0) out.push_back(i);
    return out;
}

inline int secant_count(const Hyperplane& H, const EllipticArc& A) { return static_cast<int>(secant_points(H, A).size()); }

inline std::vector<std::uint64_t> secant_profile(const EllipticArc& A, Budget& budget, Parallelism par = {}) {
    auto hist = secant_histogram(A.field(), A.points(), budget, par);
    hist.resize(std::max<std::size_t>(static_cast<std::size_t>(A.k()) + 1, 1));
    return hist;
}

/// Points Q outside the arc such that every hyperplane through Q meets the arc
/// in fewer than `threshold` points (default k: Q can be added). Found by
/// marking every point of every hyperplane reaching the threshold.
inline std::vector<ProjPoint> addable_points(const EllipticArc& A, Budget& budget, Parallelism par = {}, int threshold = 0) {
    const Field& F = A.field();
    const std::size_t k = static_cast<std::size_t>(A.k());
    if (threshold <= 0) threshold = static_cast<int>(k);
    const ProjectiveSpace space(F.q(), k);
    const auto blocking = hyperplanes_at_least(F, A.points(), static_cast<std::uint32_t>(threshold), budget, par);
    const std::uint64_t per_plane = ProjectiveSpace(F.q(), k - 1).size();
    budget.charge(sat_mul(blocking.size(), per_plane), "marking blocking hyperplanes");
    Bitset marked(space.size());
    for (std::size_t i = 0; i < A.n(); ++i) marked.set(space.rank(A.points()[i]));
    for (const auto& H : blocking) for_each_point_on_hyperplane(F, H.span(), [&](std::uint64_t r) { marked.set(r); });
    std::vector<ProjPoint> out;
    for (std::uint64_t r = 0; r < space.size(); ++r)
        if (!marked.test(r)) out.push_back(ProjPoint::from(F, space.unrank(r)));
    return out;
}

struct Completion {
    std::vector<ProjPoint> added;
    bool complete = false;
};

/// Greedy completion from a known list of addable points: repeatedly adds the
/// smallest remaining point and drops those no longer addable.
inline Completion complete_from(const EllipticArc& A, std::vector<ProjPoint> addable, int max_add, int threshold = 0) {
    if (max_add < 0) fail(ErrorKind::InvalidArgument, "maxAdd must be >= 0");
    const Field& F = A.field();
    if (threshold <= 0) threshold = A.k();
    std::sort(addable.begin(), addable.end(), [&](const ProjPoint& a, const ProjPoint& b) {
        return std::lexicographical_compare(a.span().begin(), a.span().end(), b.span().begin(), b.span().end());
    });
    PointSet S = A.points();
    Completion out;
    while (!addable.empty() && static_cast<int>(out.added.size()) < max_add) {
        const ProjPoint Q = addable.front();
        out.added.push_back(Q);
        S.push(Q.span());
        std::vector<ProjPoint> keep;
        for (std::size_t i = 1; i < addable.size(); ++i) {
            const auto& R = addable[i];
            const std::size_t m = max_hyperplane_incidence(F, S, {R.coords(), Q.coords()});
            if (m < static_cast<std::size_t>(threshold)) keep.push_back(R);
        }
        addable = std::move(keep);
    }
    out.complete = addable.empty();
    return out;
}

inline Completion complete_arc(const EllipticArc& A, int max_add, Budget& budget, Parallelism par = {}, int threshold = 0) {
    if (max_add < 0) fail(ErrorKind::InvalidArgument, "maxAdd must be >= 0");
    return complete_from(A, addable_points(A, budget, par, threshold), max_add, threshold);
}

}  // namespace nmds

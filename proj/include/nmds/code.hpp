#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "nmds/curve.hpp"
#include "nmds/error.hpp"
#include "nmds/geometry.hpp"
#include "nmds/gf.hpp"
#include "nmds/linalg.hpp"
#include "nmds/parallel.hpp"

namespace nmds {

enum class CodeLabel { MDS, NMDS, AMDS, Other };

inline std::string to_string(CodeLabel l) {
    switch (l) {
        case CodeLabel::MDS: return "MDS";
        case CodeLabel::NMDS: return "NMDS";
        case CodeLabel::AMDS: return "AMDS-not-NMDS";
        case CodeLabel::Other: return "OTHER";
    }
    return "OTHER";
}

/// Code spanned by the rows of a generator matrix. k is the rank; the reduced
/// basis is what the enumerations run on.
class LinearCode {
public:
    LinearCode(FieldPtr field, Matrix G) : field_(std::move(field)), G_(std::move(G)) {
        if (G_.rows == 0 || G_.cols == 0) fail(ErrorKind::InvalidArgument, "empty generator matrix");
        for (auto e : G_.data)
            if (e >= field_->q()) fail(ErrorKind::InvalidArgument, "matrix entry out of range");
        basis_ = G_;
        pivots_ = rref(*field_, basis_);
        if (pivots_.empty()) fail(ErrorKind::InvalidArgument, "generator matrix has rank 0");
        basis_.rows = pivots_.size();
        basis_.data.resize(basis_.rows * basis_.cols);
    }

    const Field& field() const noexcept { return *field_; }
    const FieldPtr& field_ptr() const noexcept { return field_; }
    const Matrix& generator() const noexcept { return G_; }
    const Matrix& basis() const noexcept { return basis_; }
    std::size_t n() const noexcept { return G_.cols; }
    std::size_t k() const noexcept { return basis_.rows; }

    /// Columns of the generator matrix as a point list (not normalized).
    PointSet columns() const {
        PointSet s(G_.rows);
        std::vector<Elem> c(G_.rows);
        for (std::size_t j = 0; j < G_.cols; ++j) {
            for (std::size_t i = 0; i < G_.rows; ++i) c[i] = G_(i, j);
            s.push(c);
        }
        return s;
    }

    /// Rewrites a column given against basis() as the matching column for the
    /// rows of generator(), so extend() produces the same code.
    std::vector<Elem> generator_column(std::span<const Elem> basis_col) const {
        std::vector<Elem> out(G_.rows, 0);
        for (std::size_t i = 0; i < G_.rows; ++i)
            for (std::size_t j = 0; j < pivots_.size(); ++j)
                out[i] = field_->add(out[i], field_->mul(G_(i, pivots_[j]), basis_col[j]));
        return out;
    }

    friend bool operator==(const LinearCode& a, const LinearCode& b) {
        return a.field_->same_as(*b.field_) && a.basis_ == b.basis_;
    }

private:
    FieldPtr field_;
    Matrix G_;
    Matrix basis_;
    std::vector<std::size_t> pivots_;
};

/// G_k(E): columns phi_k(P_i) in curve order.
inline LinearCode generator_matrix(const EllipticArc& A) {
    const std::size_t k = static_cast<std::size_t>(A.k());
    Matrix G(k, A.n());
    for (std::size_t j = 0; j < A.n(); ++j)
        for (std::size_t i = 0; i < k; ++i) G(i, j) = A.points()[j][i];
    return LinearCode(A.curve().field_ptr(), std::move(G));
}

inline LinearCode generator_matrix(const EllipticCurve& E, int k, ArcOptions opts = {}) {
    return generator_matrix(EllipticArc::make(E, k, opts));
}

inline std::uint64_t codeword_enumeration_cost(const LinearCode& C) {
    return sat_mul(ProjectiveSpace(C.field().q(), C.k()).size(), C.n());
}

/// Minimum weight over one representative of every nonzero codeword class,
/// walking each leading position's messages as an odometer: each step adds
/// the row of every digit that moves (a wrap adds it a q-th time, i.e. zero).
inline std::size_t min_distance_codewords(const LinearCode& C, Budget& budget, Parallelism par = {}) {
    budget.charge(codeword_enumeration_cost(C), "codeword enumeration");
    const Field& F = C.field();
    const Matrix& B = C.basis();
    const std::size_t k = C.k(), n = C.n();
    const std::uint32_t q = F.q();
    struct Task {
        std::size_t lead;
        Elem second;
    };
    std::vector<Task> tasks;
    for (std::size_t i = 0; i < k; ++i) {
        if (i + 1 < k)
            for (Elem v = 0; v < q; ++v) tasks.push_back({i, v});
        else
            tasks.push_back({i, 0});
    }
    auto weight = [&](const std::vector<Elem>& c) {
        std::size_t w = 0;
        for (auto e : c) w += e != 0;
        return w;
    };
    auto mins = parallel_chunks<std::size_t>(tasks.size(), par, [&](std::size_t ti) {
        const auto [lead, second] = tasks[ti];
        std::vector<Elem> c(B.row(lead).begin(), B.row(lead).end());
        if (lead + 1 < k && second != 0)
            for (std::size_t j = 0; j < n; ++j) c[j] = F.add(c[j], F.mul(second, B(lead + 1, j)));
        std::size_t best = weight(c);
        if (lead + 2 >= k) return best;
        std::vector<Elem> digit(k, 0);
        for (;;) {
            std::size_t j = k - 1;
            for (;;) {
                const auto row = B.row(j);
                for (std::size_t t = 0; t < n; ++t) c[t] = F.add(c[t], row[t]);
                if (++digit[j] < q) break;
                digit[j] = 0;
                if (--j == lead + 1) return best;
            }
            best = std::min(best, weight(c));
        }
    });
    return *std::min_element(mins.begin(), mins.end());
}

/// d = n - max over hyperplanes of the number of columns on it.
inline std::size_t min_distance_hyperplanes(const LinearCode& C, Budget& budget, Parallelism par = {}) {
    if (C.k() != C.generator().rows) {
        LinearCode reduced(C.field_ptr(), C.basis());
        return min_distance_hyperplanes(reduced, budget, par);
    }
    const auto hist = secant_histogram(C.field(), C.columns(), budget, par);
    std::size_t top = hist.size();
    while (top-- > 0)
        if (hist[top] != 0) break;
    return C.n() - top;
}

enum class DistancePath { Codewords, Hyperplanes };

inline std::size_t min_distance(const LinearCode& C, Budget& budget, Parallelism par = {},
                                DistancePath path = DistancePath::Codewords) {
    return path == DistancePath::Codewords ? min_distance_codewords(C, budget, par)
                                           : min_distance_hyperplanes(C, budget, par);
}

inline std::uint64_t dual_distance_cost(const LinearCode& C) {
    std::uint64_t subsets = 0;
    for (std::size_t s = 0; s <= C.k(); ++s) subsets = sat_add(subsets, binomial(C.n(), s));
    return sat_mul(subsets, C.k() * C.k() + 1);
}

/// Smallest number of linearly dependent columns, i.e. d of the dual code.
/// When n = k the dual is the zero code and k + 1 is returned.
inline std::size_t dual_min_distance(const LinearCode& C, Budget& budget) {
    budget.charge(dual_distance_cost(C), "dual distance search");
    const Field& F = C.field();
    const Matrix& B = C.basis();
    const std::size_t k = C.k(), n = C.n();
    std::vector<std::vector<Elem>> cols(n, std::vector<Elem>(k));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < k; ++i) cols[j][i] = B(i, j);

    std::size_t best = k + 1;
    std::vector<std::vector<Elem>> echelon;
    std::vector<std::size_t> pivot;

    auto reduce = [&](std::vector<Elem> v) {
        for (std::size_t b = 0; b < echelon.size(); ++b) {
            const Elem c = v[pivot[b]];
            if (c == 0) continue;
            for (std::size_t i = 0; i < k; ++i) v[i] = F.sub(v[i], F.mul(c, echelon[b][i]));
        }
        return v;
    };

    // chosen columns are independent; a later column in their span closes a
    // dependent set whose largest member it is
    auto dfs = [&](auto&& self, std::size_t start) -> void {
        const std::size_t depth = echelon.size();
        if (depth + 1 >= best) return;
        for (std::size_t j = start; j < n; ++j) {
            auto v = reduce(cols[j]);
            std::size_t p = 0;
            while (p < k && v[p] == 0) ++p;
            if (p == k) {
                best = depth + 1;
                return;
            }
            if (depth + 2 >= best) continue;
            const Elem inv = F.inv(v[p]);
            for (auto& e : v) e = F.mul(e, inv);
            echelon.push_back(std::move(v));
            pivot.push_back(p);
            self(self, j + 1);
            echelon.pop_back();
            pivot.pop_back();
            if (depth + 1 >= best) return;
        }
    };
    dfs(dfs, 0);
    return best;
}

struct CodeParameters {
    std::size_t n = 0, k = 0, d = 0, d_dual = 0;
    int s = 0, s_dual = 0;
    CodeLabel label = CodeLabel::Other;
};

inline CodeLabel label_for(int s, int s_dual) {
    if (s == 0) return CodeLabel::MDS;
    if (s == 1 && s_dual == 1) return CodeLabel::NMDS;
    if (s == 1 && s_dual >= 2) return CodeLabel::AMDS;
    return CodeLabel::Other;
}

inline CodeParameters classify(const LinearCode& C, Budget& budget, Parallelism par = {},
                               DistancePath path = DistancePath::Codewords) {
    CodeParameters out;
    out.n = C.n();
    out.k = C.k();
    out.d = min_distance(C, budget, par, path);
    out.d_dual = dual_min_distance(C, budget);
    out.s = static_cast<int>(out.n - out.k + 1) - static_cast<int>(out.d);
    // the dual has dimension n - k
    out.s_dual = static_cast<int>(out.k + 1) - static_cast<int>(out.d_dual);
    out.label = label_for(out.s, out.s_dual);
    return out;
}

inline LinearCode extend(const LinearCode& C, const std::vector<Elem>& column) {
    const Matrix& G = C.generator();
    if (column.size() != G.rows) fail(ErrorKind::DimensionMismatch, "column length differs from the row count");
    Matrix E(G.rows, G.cols + 1);
    for (std::size_t i = 0; i < G.rows; ++i) {
        for (std::size_t j = 0; j < G.cols; ++j) E(i, j) = G(i, j);
        E(i, G.cols) = column[i];
    }
    return LinearCode(C.field_ptr(), std::move(E));
}

/// Restriction to the first `length` coordinates.
inline LinearCode project(const LinearCode& C, std::size_t length) {
    const Matrix& G = C.generator();
    if (length == 0 || length > G.cols) fail(ErrorKind::InvalidArgument, "projection length out of range");
    Matrix P(G.rows, length);
    for (std::size_t i = 0; i < G.rows; ++i)
        for (std::size_t j = 0; j < length; ++j) P(i, j) = G(i, j);
    return LinearCode(C.field_ptr(), std::move(P));
}

struct ExtensionResult {
    std::vector<std::vector<Elem>> added_columns;
    std::size_t h = 0;
};

inline std::uint64_t h_oracle_cost(const LinearCode& C, std::size_t h) {
    const std::uint64_t P = ProjectiveSpace(C.field().q(), C.k()).size();
    return sat_mul(sat_add(binomial(P + h - 1, h), sat_mul(C.n(), 1)), sat_mul(P, 1));
}

/// Brute force: is there an [n+h, k, d+h] code projecting onto C? Searches
/// multisets of h added columns (one normalized representative each; a
/// rescaled column changes no weight). Returns the first extension found,
/// with columns sized for the generator rows.
inline std::optional<ExtensionResult> h_extension_search(const LinearCode& C, std::size_t h, Budget& budget,
                                                         std::optional<std::size_t> known_d = std::nullopt) {
    if (h == 0) return ExtensionResult{};
    const Field& F = C.field();
    const std::size_t k = C.k();
    const ProjectiveSpace space(F.q(), k);
    const std::uint64_t P = space.size();
    budget.charge(h_oracle_cost(C, h), "h-extendability search");
    const std::size_t d = known_d ? *known_d : min_distance_codewords(C, budget);

    const Matrix& B = C.basis();
    std::vector<std::vector<Elem>> msgs;
    std::vector<std::size_t> need;
    std::vector<Elem> m(k), cw(C.n());
    for (std::uint64_t r = 0; r < P; ++r) {
        space.unrank(r, m);
        std::size_t w = 0;
        for (std::size_t j = 0; j < C.n(); ++j) {
            Elem s = 0;
            for (std::size_t i = 0; i < k; ++i) s = F.add(s, F.mul(m[i], B(i, j)));
            w += s != 0;
        }
        if (w < d + h) {
            msgs.push_back(m);
            need.push_back(d + h - w);
        }
    }
    const std::size_t M = msgs.size();
    // hit[c * M + i]: column c evaluates message i to a nonzero value
    std::vector<std::uint8_t> hit(P * M);
    std::vector<Elem> col(k);
    for (std::uint64_t c = 0; c < P; ++c) {
        space.unrank(c, col);
        for (std::size_t i = 0; i < M; ++i) hit[c * M + i] = dot(F, col, msgs[i]) != 0;
    }

    std::vector<std::uint64_t> chosen;
    auto dfs = [&](auto&& self, std::uint64_t start, std::size_t remaining) -> bool {
        if (remaining == 0) return true;
        std::vector<std::size_t> tight;
        for (std::size_t i = 0; i < M; ++i) {
            if (need[i] > remaining) return false;
            if (need[i] == remaining) tight.push_back(i);
        }
        const std::vector<std::size_t> saved = need;
        for (std::uint64_t c = start; c < P; ++c) {
            const std::uint8_t* row = hit.data() + c * M;
            bool ok = true;
            for (auto i : tight)
                if (!row[i]) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            for (std::size_t i = 0; i < M; ++i)
                if (row[i] && need[i] > 0) --need[i];
            chosen.push_back(c);
            if (self(self, c, remaining - 1)) return true;
            chosen.pop_back();
            need = saved;
        }
        return false;
    };
    if (!dfs(dfs, 0, h)) return std::nullopt;
    ExtensionResult out;
    out.h = h;
    for (auto c : chosen) out.added_columns.push_back(C.generator_column(space.unrank(c)));
    return out;
}

inline bool h_extendability_oracle(const LinearCode& C, std::size_t h, Budget& budget,
                                   std::optional<std::size_t> known_d = std::nullopt) {
    return h_extension_search(C, h, budget, known_d).has_value();
}

/// Matrix file: "q k n" then k rows of n encodings.
struct ParsedMatrix {
    FieldPtr field;
    Matrix G;
};

inline ParsedMatrix parse_matrix(std::istream& in) {
    std::string line;
    auto next_line = [&]() -> std::string {
        while (std::getline(in, line)) {
            const auto first = line.find_first_not_of(" \t\r");
            if (first != std::string::npos) return line;
        }
        fail(ErrorKind::Parse, "unexpected end of matrix file");
    };
    std::istringstream head(next_line());
    long long q = 0, k = 0, n = 0;
    if (!(head >> q >> k >> n) || q < 2 || k < 1 || n < 1) fail(ErrorKind::Parse, "header must be \"q k n\"");
    ParsedMatrix out{Field::of_order(static_cast<std::uint64_t>(q)), Matrix(static_cast<std::size_t>(k), static_cast<std::size_t>(n))};
    for (long long i = 0; i < k; ++i) {
        std::istringstream row(next_line());
        for (long long j = 0; j < n; ++j) {
            long long v = 0;
            if (!(row >> v)) fail(ErrorKind::Parse, "row " + std::to_string(i + 1) + " has fewer than n entries");
            if (v < 0 || v >= q) fail(ErrorKind::Parse, "entry " + std::to_string(v) + " outside [0, q)");
            out.G(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = static_cast<Elem>(v);
        }
        std::string extra;
        if (row >> extra) fail(ErrorKind::Parse, "row " + std::to_string(i + 1) + " has more than n entries");
    }
    return out;
}

}  // namespace nmds

#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nmds/error.hpp"
#include "nmds/integer.hpp"

namespace nmds {

/// Canonical encoding of an element of F_q: e = sum c_i p^i over the
/// polynomial-basis coefficients (c_0 .. c_{r-1}).
using Elem = std::uint32_t;

struct FieldLimits {
    std::uint64_t max_order = std::uint64_t{1} << 20;
    /// Log/exp (and, for extensions, addition) tables are built up to this order.
    std::uint64_t table_threshold = 4096;
};

class Field;
using FieldPtr = std::shared_ptr<const Field>;

class Field {
public:
    static FieldPtr make(std::uint64_t p, std::uint64_t r, FieldLimits limits = {}) {
        if (!is_prime(p)) fail(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
        if (r < 1) fail(ErrorKind::InvalidArgument, "extension degree must be >= 1");
        const std::uint64_t q = sat_pow(p, static_cast<unsigned>(std::min<std::uint64_t>(r, 64)));
        if (r > 64 || q > limits.max_order)
            fail(ErrorKind::Overflow, std::to_string(p) + "^" + std::to_string(r) + " exceeds the maximum field order " +
                                          std::to_string(limits.max_order));
        return FieldPtr(new Field(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(r),
                                  static_cast<std::uint32_t>(q), limits));
    }

    /// Field of order q, for q a prime power.
    static FieldPtr of_order(std::uint64_t q, FieldLimits limits = {}) {
        const auto pp = prime_power(q);
        if (!pp) fail(ErrorKind::NotPrimePower, std::to_string(q) + " is not a prime power");
        return make(pp->p, pp->r, limits);
    }

    std::uint32_t p() const noexcept { return p_; }
    std::uint32_t r() const noexcept { return r_; }
    std::uint32_t q() const noexcept { return q_; }
    bool is_odd() const noexcept { return p_ != 2; }
    /// Monic modulus, coefficients from degree 0 upward.
    const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }
    bool has_tables() const noexcept { return !exp_.empty(); }
    Elem generator() const noexcept { return generator_; }

    bool same_as(const Field& other) const noexcept {
        return this == &other || (p_ == other.p_ && r_ == other.r_ && modulus_ == other.modulus_);
    }

    Elem zero() const noexcept { return 0; }
    Elem one() const noexcept { return 1; }

    /// Image of an integer in the prime subfield.
    Elem from_int(std::int64_t v) const noexcept {
        const std::int64_t m = v % static_cast<std::int64_t>(p_);
        return static_cast<Elem>(m < 0 ? m + p_ : m);
    }

    Elem add(Elem a, Elem b) const noexcept {
        if (r_ == 1) {
            const Elem s = a + b;
            return s >= p_ ? s - p_ : s;
        }
        if (!add_.empty()) return add_[static_cast<std::size_t>(a) * q_ + b];
        return add_digits(a, b);
    }

    Elem neg(Elem a) const noexcept {
        if (r_ == 1) return a == 0 ? 0 : p_ - a;
        if (!neg_.empty()) return neg_[a];
        return neg_digits(a);
    }

    Elem sub(Elem a, Elem b) const noexcept { return add(a, neg(b)); }

    Elem mul(Elem a, Elem b) const noexcept {
        if (a == 0 || b == 0) return 0;
        if (!exp_.empty()) return exp_[log_[a] + log_[b]];
        if (r_ == 1) return static_cast<Elem>(static_cast<std::uint64_t>(a) * b % p_);
        return mul_poly(a, b);
    }

    Elem inv(Elem a) const {
        if (a == 0) fail(ErrorKind::DivisionByZero, "inverse of zero");
        if (!exp_.empty()) return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
        return pow(a, q_ - 2);
    }

    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

    Elem pow(Elem a, std::uint64_t e) const noexcept {
        Elem result = 1;
        Elem base = a;
        while (e) {
            if (e & 1) result = mul(result, base);
            base = mul(base, base);
            e >>= 1;
        }
        return result;
    }

    /// Odd order only; 0 counts as a square.
    bool is_square(Elem a) const noexcept { return sqrt_[a] != q_; }

    /// The square root with the smaller encoding, if any.
    std::optional<Elem> sqrt(Elem a) const noexcept {
        if (sqrt_[a] == q_) return std::nullopt;
        return sqrt_[a];
    }

    std::array<std::uint32_t, 32> digits(Elem a) const noexcept {
        std::array<std::uint32_t, 32> d{};
        for (std::uint32_t i = 0; i < r_; ++i) {
            d[i] = a % p_;
            a /= p_;
        }
        return d;
    }

    Elem from_digits(const std::array<std::uint32_t, 32>& d) const noexcept {
        Elem e = 0;
        for (std::uint32_t i = r_; i-- > 0;) e = e * p_ + d[i];
        return e;
    }

    std::string descriptor_string() const {
        std::string s = "GF(" + std::to_string(p_);
        if (r_ > 1) s += "^" + std::to_string(r_);
        return s + ")";
    }

private:
    Field(std::uint32_t p, std::uint32_t r, std::uint32_t q, const FieldLimits& limits) : p_(p), r_(r), q_(q) {
        modulus_ = r == 1 ? std::vector<std::uint32_t>{0, 1} : smallest_irreducible();
        generator_ = find_generator();
        if (q_ <= limits.table_threshold) build_tables();
        sqrt_.assign(q_, q_);
        for (Elem b = 0; b < q_; ++b) {
            const Elem s = mul(b, b);
            if (sqrt_[s] == q_) sqrt_[s] = b;
        }
    }

    using Poly = std::vector<std::uint32_t>;

    // Remainder of a modulo the monic polynomial m over F_p (low degree first).
    Poly poly_mod(Poly a, const Poly& m) const {
        const std::size_t dm = m.size() - 1;
        while (a.size() > dm) {
            const std::uint32_t lead = a.back();
            if (lead != 0) {
                const std::size_t shift = a.size() - 1 - dm;
                for (std::size_t i = 0; i <= dm; ++i)
                    a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + (p_ - lead) * std::uint64_t{m[i]}) % p_);
            }
            a.pop_back();
        }
        return a;
    }

    bool irreducible(const Poly& f) const {
        const std::uint32_t deg = static_cast<std::uint32_t>(f.size() - 1);
        for (std::uint32_t d = 1; d <= deg / 2; ++d) {
            const std::uint64_t count = sat_pow(p_, d);
            for (std::uint64_t idx = 0; idx < count; ++idx) {
                Poly g(d + 1);
                std::uint64_t t = idx;
                for (std::uint32_t i = 0; i < d; ++i) {
                    g[i] = static_cast<std::uint32_t>(t % p_);
                    t /= p_;
                }
                g[d] = 1;
                const Poly rem = poly_mod(f, g);
                bool zero = true;
                for (auto c : rem) zero = zero && c == 0;
                if (zero) return false;
            }
        }
        return true;
    }

    // Lexicographically smallest monic irreducible of degree r, coefficients
    // compared from degree 0 upward.
    Poly smallest_irreducible() const {
        const std::uint64_t count = sat_pow(p_, r_);
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            Poly f(r_ + 1);
            std::uint64_t t = idx;
            for (std::uint32_t i = r_; i-- > 0;) {
                f[i] = static_cast<std::uint32_t>(t % p_);
                t /= p_;
            }
            f[r_] = 1;
            if (f[0] == 0) continue;
            if (irreducible(f)) return f;
        }
        fail(ErrorKind::InvalidArgument, "no irreducible polynomial found");
    }

    Elem add_digits(Elem a, Elem b) const noexcept {
        Elem out = 0, scale = 1;
        for (std::uint32_t i = 0; i < r_; ++i) {
            const std::uint32_t s = a % p_ + b % p_;
            out += (s >= p_ ? s - p_ : s) * scale;
            a /= p_;
            b /= p_;
            scale *= p_;
        }
        return out;
    }

    Elem neg_digits(Elem a) const noexcept {
        Elem out = 0, scale = 1;
        for (std::uint32_t i = 0; i < r_; ++i) {
            const std::uint32_t c = a % p_;
            out += (c == 0 ? 0 : p_ - c) * scale;
            a /= p_;
            scale *= p_;
        }
        return out;
    }

    Elem mul_poly(Elem a, Elem b) const noexcept {
        const auto da = digits(a);
        const auto db = digits(b);
        std::array<std::uint64_t, 64> prod{};
        for (std::uint32_t i = 0; i < r_; ++i)
            for (std::uint32_t j = 0; j < r_; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{da[i]} * db[j]) % p_;
        for (std::uint32_t deg = 2 * r_ - 2; deg >= r_; --deg) {
            const std::uint64_t lead = prod[deg];
            if (lead != 0) {
                for (std::uint32_t i = 0; i < r_; ++i)
                    prod[deg - r_ + i] = (prod[deg - r_ + i] + (p_ - lead) * modulus_[i]) % p_;
                prod[deg] = 0;
            }
        }
        std::array<std::uint32_t, 32> out{};
        for (std::uint32_t i = 0; i < r_; ++i) out[i] = static_cast<std::uint32_t>(prod[i]);
        return from_digits(out);
    }

    Elem find_generator() const {
        if (q_ == 2) return 1;
        const auto factors = prime_factors(q_ - 1);
        for (Elem g = 1; g < q_; ++g) {
            bool ok = true;
            for (auto l : factors) {
                if (pow(g, (q_ - 1) / l) == 1) {
                    ok = false;
                    break;
                }
            }
            if (ok) return g;
        }
        fail(ErrorKind::InvalidArgument, "multiplicative group has no generator");
    }

    void build_tables() {
        std::vector<Elem> exp(2 * (q_ - 1) + 1), log(q_, 0);
        Elem x = 1;
        for (std::uint32_t i = 0; i < q_ - 1; ++i) {
            exp[i] = x;
            log[x] = i;
            x = mul(x, generator_);
        }
        for (std::uint32_t i = q_ - 1; i < exp.size(); ++i) exp[i] = exp[i - (q_ - 1)];
        exp_ = std::move(exp);
        log_ = std::move(log);
        if (r_ > 1) {
            neg_.resize(q_);
            for (Elem a = 0; a < q_; ++a) neg_[a] = neg_digits(a);
            if (q_ <= 1024) {
                add_.resize(static_cast<std::size_t>(q_) * q_);
                for (Elem a = 0; a < q_; ++a)
                    for (Elem b = 0; b < q_; ++b) add_[static_cast<std::size_t>(a) * q_ + b] = add_digits(a, b);
            }
        }
    }

    std::uint32_t p_, r_, q_;
    std::vector<std::uint32_t> modulus_;
    Elem generator_ = 1;
    std::vector<Elem> exp_, log_, neg_, add_, sqrt_;
};

/// Checked element value carrying its field; mixed-field arithmetic throws.
class FieldElement {
public:
    FieldElement(FieldPtr field, Elem value) : field_(std::move(field)), value_(value) {
        if (value_ >= field_->q()) fail(ErrorKind::InvalidArgument, "encoding out of range");
    }

    const FieldPtr& field() const noexcept { return field_; }
    Elem value() const noexcept { return value_; }

    friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
        check(a, b);
        return {a.field_, a.field_->add(a.value_, b.value_)};
    }
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
        check(a, b);
        return {a.field_, a.field_->sub(a.value_, b.value_)};
    }
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
        check(a, b);
        return {a.field_, a.field_->mul(a.value_, b.value_)};
    }
    friend FieldElement operator/(const FieldElement& a, const FieldElement& b) {
        check(a, b);
        return {a.field_, a.field_->div(a.value_, b.value_)};
    }
    FieldElement operator-() const { return {field_, field_->neg(value_)}; }
    FieldElement inverse() const { return {field_, field_->inv(value_)}; }

    friend bool operator==(const FieldElement& a, const FieldElement& b) {
        return a.field_->same_as(*b.field_) && a.value_ == b.value_;
    }

private:
    static void check(const FieldElement& a, const FieldElement& b) {
        if (!a.field_->same_as(*b.field_))
            fail(ErrorKind::FieldMismatch, a.field_->descriptor_string() + " vs " + b.field_->descriptor_string());
    }

    FieldPtr field_;
    Elem value_;
};

}  // namespace nmds

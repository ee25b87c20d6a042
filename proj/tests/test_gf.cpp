#include <gtest/gtest.h>

#include <optional>
#include <vector>

#include "nmds/gf.hpp"

using namespace nmds;

namespace {

// Schoolbook arithmetic on digit vectors modulo a given monic polynomial.
using Digits = std::vector<std::uint32_t>;

Digits to_digits(Elem e, std::uint32_t p, std::uint32_t r) {
    Digits d(r);
    for (auto& c : d) {
        c = e % p;
        e /= p;
    }
    return d;
}

Elem from_digits(const Digits& d, std::uint32_t p) {
    Elem e = 0;
    for (std::size_t i = d.size(); i-- > 0;) e = e * p + d[i];
    return e;
}

Elem naive_mul(Elem a, Elem b, std::uint32_t p, const Digits& modulus) {
    const std::uint32_t r = static_cast<std::uint32_t>(modulus.size() - 1);
    const Digits x = to_digits(a, p, r), y = to_digits(b, p, r);
    Digits prod(2 * r, 0);
    for (std::uint32_t i = 0; i < r; ++i)
        for (std::uint32_t j = 0; j < r; ++j) prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
    for (std::size_t deg = prod.size(); deg-- > r;) {
        const std::uint32_t lead = prod[deg];
        for (std::uint32_t i = 0; i <= r; ++i) prod[deg - r + i] = (prod[deg - r + i] + (p - lead) * modulus[i]) % p;
    }
    prod.resize(r);
    return from_digits(prod, p);
}

// Trial division by every monic polynomial of degree 1..r/2.
bool naive_irreducible(const Digits& f, std::uint32_t p) {
    const std::size_t r = f.size() - 1;
    for (std::size_t deg = 1; deg <= r / 2; ++deg) {
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < deg; ++i) count *= p;
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            Digits g(deg + 1);
            std::uint64_t t = idx;
            for (std::size_t i = 0; i < deg; ++i) {
                g[i] = t % p;
                t /= p;
            }
            g[deg] = 1;
            Digits rem = f;
            for (std::size_t top = r; top >= deg; --top) {
                const std::uint32_t c = rem[top];
                for (std::size_t i = 0; i <= deg; ++i) rem[top - deg + i] = (rem[top - deg + i] + (p - c) * g[i]) % p;
                if (top == deg) break;
            }
            bool zero = true;
            for (std::size_t i = 0; i < deg; ++i) zero = zero && rem[i] == 0;
            if (zero) return false;
        }
    }
    return true;
}

}  // namespace

TEST(Field, PrimeFieldArithmeticMatchesIntegers) {
    for (std::uint32_t p : {3u, 5u, 7u, 11u, 13u}) {
        const auto F = Field::of_order(p);
        EXPECT_EQ(F->p(), p);
        EXPECT_EQ(F->r(), 1u);
        for (Elem a = 0; a < p; ++a)
            for (Elem b = 0; b < p; ++b) {
                EXPECT_EQ(F->add(a, b), (a + b) % p);
                EXPECT_EQ(F->sub(a, b), (a + p - b) % p);
                EXPECT_EQ(F->mul(a, b), (a * b) % p);
            }
    }
}

TEST(Field, ExtensionMultiplicationMatchesSchoolbook) {
    for (std::uint64_t q : {9u, 25u, 27u, 49u, 121u, 125u, 169u}) {
        const auto F = Field::of_order(q);
        const Digits mod(F->modulus().begin(), F->modulus().end());
        for (Elem a = 0; a < q; ++a)
            for (Elem b = 0; b < q; b += (q > 50 ? 7 : 1)) ASSERT_EQ(F->mul(a, b), naive_mul(a, b, F->p(), mod));
    }
}

TEST(Field, ModulusIsLexSmallestIrreducible) {
    for (std::uint64_t q : {9u, 25u, 27u, 49u, 81u, 121u, 125u, 343u}) {
        const auto F = Field::of_order(q);
        const std::uint32_t p = F->p(), r = F->r();
        const Digits mod(F->modulus().begin(), F->modulus().end());
        ASSERT_EQ(mod.size(), r + 1);
        EXPECT_EQ(mod[r], 1u);
        EXPECT_TRUE(naive_irreducible(mod, p));
        // every monic degree-r polynomial smaller low-degree-first is reducible
        std::uint64_t count = 1;
        for (std::uint32_t i = 0; i < r; ++i) count *= p;
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            Digits f(r + 1);
            std::uint64_t t = idx;
            for (std::uint32_t i = r; i-- > 0;) {
                f[i] = t % p;
                t /= p;
            }
            f[r] = 1;
            if (f == mod) break;
            EXPECT_FALSE(naive_irreducible(f, p)) << "q = " << q << " idx " << idx;
        }
    }
}

TEST(Field, KnownModuli) {
    EXPECT_EQ(Field::of_order(9)->modulus(), (std::vector<std::uint32_t>{1, 0, 1}));
    EXPECT_EQ(Field::of_order(5)->modulus(), (std::vector<std::uint32_t>{0, 1}));
    // -1 is a non-square mod 11
    EXPECT_EQ(Field::of_order(121)->modulus(), (std::vector<std::uint32_t>{1, 0, 1}));
}

TEST(Field, AxiomsHoldWithAndWithoutTables) {
    for (std::uint64_t q : {27u, 121u}) {
        FieldLimits plain;
        plain.table_threshold = 0;
        const auto T = Field::of_order(q);
        const auto P = Field::of_order(q, plain);
        EXPECT_TRUE(T->has_tables());
        EXPECT_FALSE(P->has_tables());
        for (Elem a = 0; a < q; ++a) {
            EXPECT_EQ(T->add(a, T->neg(a)), 0u);
            if (a) EXPECT_EQ(T->mul(a, T->inv(a)), 1u);
            for (Elem b = 0; b < q; b += 5) {
                EXPECT_EQ(T->mul(a, b), P->mul(a, b));
                EXPECT_EQ(T->add(a, b), P->add(a, b));
                EXPECT_EQ(T->mul(a, b), T->mul(b, a));
                for (Elem c = 1; c < q; c += 17)
                    EXPECT_EQ(T->mul(a, T->add(b, c)), T->add(T->mul(a, b), T->mul(a, c)));
            }
        }
    }
}

TEST(Field, PowAndFrobenius) {
    const auto F = Field::of_order(25);
    for (Elem a = 0; a < 25; ++a) {
        EXPECT_EQ(F->pow(a, 25), a);
        EXPECT_EQ(F->pow(F->add(a, 1), 5), F->add(F->pow(a, 5), 1));
    }
}

TEST(Field, SqrtReturnsSmallerRoot) {
    for (std::uint64_t q : {5u, 7u, 9u, 13u, 27u}) {
        const auto F = Field::of_order(q);
        for (Elem a = 0; a < q; ++a) {
            std::vector<Elem> roots;
            for (Elem x = 0; x < q; ++x)
                if (F->mul(x, x) == a) roots.push_back(x);
            const auto s = F->sqrt(a);
            if (roots.empty()) {
                EXPECT_FALSE(s.has_value());
            } else {
                ASSERT_TRUE(s.has_value());
                EXPECT_EQ(*s, roots.front());
            }
        }
    }
    EXPECT_EQ(Field::of_order(5)->sqrt(4), Elem{2});
    EXPECT_FALSE(Field::of_order(5)->sqrt(2).has_value());
}

TEST(Field, FromIntReducesModP) {
    const auto F = Field::of_order(7);
    EXPECT_EQ(F->from_int(-1), 6u);
    EXPECT_EQ(F->from_int(15), 1u);
    const auto G = Field::of_order(9);
    EXPECT_EQ(G->from_int(4), 1u);
}

TEST(Field, Errors) {
    auto kind = [](auto&& fn) -> std::optional<ErrorKind> {
        try {
            fn();
        } catch (const Error& e) {
            return e.kind();
        }
        return std::nullopt;
    };
    EXPECT_EQ(kind([] { Field::of_order(12); }), ErrorKind::NotPrimePower);
    EXPECT_EQ(kind([] { Field::make(4, 1); }), ErrorKind::NotPrime);
    EXPECT_EQ(kind([] { Field::make(3, 40); }), ErrorKind::Overflow);
    EXPECT_EQ(kind([] { Field::of_order(5)->inv(0); }), ErrorKind::DivisionByZero);
    const auto A = Field::of_order(5), B = Field::of_order(7);
    EXPECT_EQ(kind([&] { (void)(FieldElement(A, 1) + FieldElement(B, 1)); }), ErrorKind::FieldMismatch);
}

TEST(Field, CheckedElements) {
    const auto F = Field::of_order(9);
    const FieldElement a(F, 4), b(F, 5);
    EXPECT_EQ((a * b).value(), F->mul(4, 5));
    EXPECT_EQ((a / b * b), a);
    EXPECT_EQ((-a + a).value(), 0u);
    EXPECT_EQ(F->descriptor_string(), "GF(3^2)");
}

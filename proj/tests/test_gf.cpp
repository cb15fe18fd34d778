#include <doctest.h>

#include <set>

#include "ffgeom/error.hpp"
#include "ffgeom/gf.hpp"

using namespace ffgeom;
using gf::Elem;
using gf::Field;

namespace {

const std::vector<std::uint32_t> orders = {2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 49, 121, 169};

}  // namespace

TEST_CASE("field axioms hold exhaustively for small orders") {
    for (auto q : orders) {
        if (q > 27) continue;
        const auto f = Field::of_order(q);
        CAPTURE(q);
        for (Elem a = 0; a < q; ++a) {
            CHECK(f.add(a, 0) == a);
            CHECK(f.mul(a, 1) == a);
            CHECK(f.add(a, f.neg(a)) == 0);
            if (a != 0) CHECK(f.mul(a, f.inv(a)) == 1);
            for (Elem b = 0; b < q; ++b) {
                REQUIRE(f.add(a, b) == f.add(b, a));
                REQUIRE(f.mul(a, b) == f.mul(b, a));
                REQUIRE(f.mul(a, b) == f.mul_reference(a, b));
                for (Elem c = 0; c < q; c += 1 + q / 7) {
                    REQUIRE(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
                    REQUIRE(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)));
                    REQUIRE(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
                }
            }
        }
    }
}

TEST_CASE("log/exp multiplication agrees with the schoolbook product on larger fields") {
    for (auto q : {49u, 81u, 121u, 169u, 625u}) {
        const auto f = Field::of_order(q);
        for (Elem a = 1; a < q; a += 7)
            for (Elem b = 0; b < q; b += 5) REQUIRE(f.mul(a, b) == f.mul_reference(a, b));
    }
}

TEST_CASE("the generator has multiplicative order q - 1") {
    for (auto q : orders) {
        const auto f = Field::of_order(q);
        std::set<Elem> powers;
        Elem x = 1;
        for (std::uint32_t i = 0; i + 1 < q; ++i) {
            powers.insert(x);
            x = f.mul(x, f.generator());
        }
        CHECK(x == 1);
        CHECK(powers.size() == q - 1);
    }
}

TEST_CASE("prime subfield is the values below p and is fixed by Frobenius") {
    for (auto q : {4u, 8u, 9u, 25u, 27u}) {
        const auto f = Field::of_order(q);
        for (Elem a = 0; a < q; ++a) CHECK((f.frobenius(a) == a) == (a < f.p()));
        for (Elem a = 0; a < f.p(); ++a)
            for (Elem b = 0; b < f.p(); ++b) {
                CHECK(f.add(a, b) == (a + b) % f.p());
                CHECK(f.mul(a, b) == (a * b) % f.p());
            }
    }
}

TEST_CASE("conjugation of GF(p^2) is an involutive automorphism fixing GF(p)") {
    for (auto p : {2u, 3u, 5u}) {
        const auto f = Field::make(p, 2);
        for (Elem a = 0; a < f.q(); ++a) {
            CHECK(f.conjugate(f.conjugate(a)) == a);
            CHECK(f.conjugate(a) == f.pow(a, p));
            CHECK((f.conjugate(a) == a) == (a < p));
            for (Elem b = 0; b < f.q(); ++b) CHECK(f.conjugate(f.mul(a, b)) == f.mul(f.conjugate(a), f.conjugate(b)));
        }
    }
    CHECK_THROWS_AS(Field::of_order(8).conjugate(1), Error);
}

TEST_CASE("squares: half the nonzero elements in odd characteristic, all of them in even") {
    for (auto q : orders) {
        const auto f = Field::of_order(q);
        std::set<Elem> sq;
        for (Elem a = 1; a < q; ++a) sq.insert(f.mul(a, a));
        std::uint32_t flagged = 0;
        for (Elem a = 1; a < q; ++a) {
            CHECK(f.is_square(a) == (sq.count(a) == 1));
            flagged += f.is_square(a);
        }
        CHECK(flagged == (q % 2 ? (q - 1) / 2 : q - 1));
    }
}

TEST_CASE("construction errors") {
    auto code = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return Errc::internal;
    };
    CHECK(code([] { Field::make(6, 1); }) == Errc::non_prime);
    CHECK(code([] { Field::make(2, 9); }) == Errc::degree_too_large);
    CHECK(code([] { Field::of_order(6); }) == Errc::unsupported_field);
    CHECK(code([] { Field::of_order(12); }) == Errc::unsupported_field);
    CHECK(code([] { Field::of_order(5).inv(0); }) == Errc::out_of_range);
}

TEST_CASE("from_int reduces modulo p and digits round-trip") {
    const auto f = Field::of_order(9);
    CHECK(f.from_int(-1) == 2);
    CHECK(f.from_int(7) == 1);
    for (Elem a = 0; a < 9; ++a) {
        const auto d = f.digits(a);
        CHECK(f.from_digits(d) == a);
    }
}

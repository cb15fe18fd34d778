#include <doctest.h>

#include <map>

#include "ffgeom/error.hpp"
#include "ffgeom/geom.hpp"
#include "ffgeom/poly.hpp"
#include "ffgeom/rng.hpp"

using namespace ffgeom;
using namespace ffgeom::poly;
using geom::AffineSpace;
using geom::PointSet;

namespace {

std::int64_t brute_count(unsigned n, std::uint32_t q, const Rational& m) {
    std::int64_t count = 0;
    const std::uint32_t lim2 = n >= 2 ? q : 1, lim3 = n >= 3 ? q : 1;
    for (std::uint32_t a = 0; a < q; ++a)
        for (std::uint32_t b = 0; b < lim2; ++b)
            for (std::uint32_t c = 0; c < lim3; ++c)
                if (Rational(a + b + c) < m * Rational(q)) ++count;
    return count;
}

using Terms = std::map<Exponent, Elem>;

Terms multiply(const Field& f, const Terms& x, const Terms& y) {
    Terms r;
    for (const auto& [ea, ca] : x)
        for (const auto& [eb, cb] : y) {
            const Exponent e{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]};
            r[e] = f.add(r[e], f.mul(ca, cb));
        }
    return r;
}

// c0 + c1 x + c2 y + c3 z
Terms linear(const Field& f, Elem c0, Elem c1, Elem c2, Elem c3) {
    Terms t;
    if (c0) t[{0, 0, 0}] = c0;
    if (c1) t[{1, 0, 0}] = c1;
    if (c2) t[{0, 1, 0}] = c2;
    if (c3) t[{0, 0, 1}] = c3;
    (void)f;
    return t;
}

MultiPoly to_poly(const BasisPtr& basis, const Terms& t) {
    MultiPoly g(basis);
    for (const auto& [e, c] : t) {
        if (c == 0) continue;
        const auto i = basis->index_of(e);
        REQUIRE(i.has_value());
        g.set_coeff(*i, c);
    }
    return g;
}

Elem eval_terms(const Field& f, const Terms& t, const geom::Point& x) {
    Elem s = 0;
    for (const auto& [e, c] : t) s = f.add(s, f.mul(c, f.mul(f.pow(x[0], e[0]), f.mul(f.pow(x[1], e[1]), f.pow(x[2], e[2])))));
    return s;
}

}  // namespace

TEST_CASE("capped monomial count equals brute force") {
    for (unsigned n = 1; n <= 3; ++n)
        for (std::uint32_t q = 2; q <= 9; ++q) {
            if (q == 6) continue;
            for (int t = 1; t <= 30; ++t) {
                const Rational m(t, 10);
                REQUIRE(count_capped_monomials(n, q, m) == brute_count(n, q, m));
            }
        }
}

TEST_CASE("monomial count examples") {
    CHECK(count_capped_monomials(3, 3, Rational(2)) == 26);
    CHECK(count_capped_monomials(3, 5, Rational(3)) == 125);
    CHECK(count_capped_monomials(3, 3, Rational(1)) == 10);
    CHECK(count_capped_monomials(1, 7, Rational(5, 2)) == 7);
    CHECK_THROWS_AS(count_capped_monomials(3, 3, Rational(0)), Error);
    CHECK(count_capped_monomials(2, 7, Rational(1)) == 28);
}

TEST_CASE("floor form agrees with the count when m q is integral and undercounts otherwise") {
    for (unsigned n = 1; n <= 3; ++n)
        for (std::uint32_t q : {2u, 3u, 4u, 5u, 7u})
            for (int t = 1; t <= 30; ++t) {
                const Rational m(t, 10);
                const auto mq = m * Rational(q);
                if (mq.denominator() == 1)
                    CHECK(inclusion_exclusion_floor_form(n, q, m) == count_capped_monomials(n, q, m));
                else
                    CHECK(inclusion_exclusion_floor_form(n, q, m) <= count_capped_monomials(n, q, m));
            }
    CHECK(inclusion_exclusion_floor_form(1, 2, Rational(3, 10)) == 0);
    CHECK(count_capped_monomials(1, 2, Rational(3, 10)) == 1);
}

TEST_CASE("basis order is graded and lookup is consistent") {
    const auto basis = MonomialBasis::capped(Field::of_order(4), 3, Rational(3, 2));
    CHECK(static_cast<std::int64_t>(basis->size()) == count_capped_monomials(3, 4, Rational(3, 2)));
    for (std::size_t i = 0; i < basis->size(); ++i) {
        REQUIRE(basis->index_of(basis->exponent(i)) == i);
        if (i) REQUIRE(basis->degree(i - 1) <= basis->degree(i));
    }
    CHECK_FALSE(basis->index_of({4, 0, 0}).has_value());
}

TEST_CASE("multiplicity of products of linear forms") {
    const auto f = Field::of_order(5);
    const auto basis = std::make_shared<const MonomialBasis>(f, 3, 12, 12);
    Rng rng(11, 0);
    for (int trial = 0; trial < 40; ++trial) {
        const geom::Point a{static_cast<Elem>(rng.below(5)), static_cast<Elem>(rng.below(5)), static_cast<Elem>(rng.below(5))};
        Terms g{{{0, 0, 0}, 1}};
        std::uint32_t through = 0;
        const unsigned factors = 1 + static_cast<unsigned>(rng.below(4));
        for (unsigned i = 0; i < factors; ++i) {
            Elem c1 = static_cast<Elem>(rng.below(5)), c2 = static_cast<Elem>(rng.below(5)), c3 = static_cast<Elem>(rng.below(5));
            if (c1 == 0 && c2 == 0 && c3 == 0) c1 = 1;
            const bool hit = rng.below(2) == 0;
            // c0 = -(c . a) puts a on the hyperplane; adding 1 moves it off.
            Elem c0 = f.neg(f.add(f.mul(c1, a[0]), f.add(f.mul(c2, a[1]), f.mul(c3, a[2]))));
            if (!hit) c0 = f.add(c0, 1);
            through += hit;
            g = multiply(f, g, linear(f, c0, c1, c2, c3));
        }
        const auto p = to_poly(basis, g);
        CHECK(multiplicity_at(p, a) == through);
        CHECK(multiplicity_via_hasse(p, a) == through);
        for (std::uint32_t x = 0; x < 125; x += 13) {
            const geom::Point pt{x / 25, (x / 5) % 5, x % 5};
            REQUIRE(p.evaluate(pt) == eval_terms(f, g, pt));
        }
    }
}

TEST_CASE("multiplicity edge cases") {
    const auto f = Field::of_order(3);
    const auto basis = MonomialBasis::capped(f, 3, Rational(3));
    const MultiPoly zero(basis);
    CHECK(multiplicity_at(zero, {0, 0, 0}) == infinite_multiplicity);
    CHECK(multiplicity_via_hasse(zero, {1, 2, 0}) == infinite_multiplicity);
    CHECK(constraints_per_point(3, 0) == 0);
    CHECK(constraints_per_point(3, 1) == 1);
    CHECK(constraints_per_point(3, 2) == 4);
    CHECK(constraints_per_point(3, 3) == 10);
    CHECK(constraints_per_point(2, 3) == 6);
}

TEST_CASE("univariate multiplicity by repeated roots") {
    const auto f = Field::of_order(7);
    // (t - 3)^2 (t - 5) = t^3 - 11 t^2 + 39 t - 45
    const UniPoly u(f, {f.from_int(-45), f.from_int(39), f.from_int(-11), 1});
    CHECK(u.multiplicity_at(f, 3) == 2);
    CHECK(u.multiplicity_at(f, 5) == 1);
    CHECK(u.multiplicity_at(f, 0) == 0);
    CHECK(u.zeros_with_multiplicity(f) == 3);
    CHECK(UniPoly(f, {0, 0}).is_zero());
}

TEST_CASE("a nonzero capped polynomial does not vanish on all of F_q^n") {
    for (auto q : {2u, 3u, 4u, 5u}) {
        const auto basis = MonomialBasis::capped(Field::of_order(q), 3, Rational(3));
        Rng rng(q, 1);
        for (int i = 0; i < 20; ++i) {
            const auto g = MultiPoly::random(basis, rng);
            if (g.is_zero()) continue;
            CHECK_FALSE(is_identically_zero_on_space(g));
        }
        CHECK(is_identically_zero_on_space(MultiPoly(basis)));
    }
    // x^q - x vanishes everywhere but violates the degree cap.
    const auto f = Field::of_order(3);
    const auto wide = std::make_shared<const MonomialBasis>(f, 3, 3, 3);
    const auto g = to_poly(wide, {{{3, 0, 0}, 1}, {{1, 0, 0}, f.neg(1)}});
    CHECK_THROWS_AS(is_identically_zero_on_space(g), Error);
}

TEST_CASE("interpolation vanishes where required") {
    for (auto q : {3u, 5u}) {
        const AffineSpace s(Field::of_order(q), 3);
        const auto basis = MonomialBasis::capped(s.field(), 3, Rational(2));
        Rng rng(q, 2);
        for (int trial = 0; trial < 10; ++trial) {
            PointSet s1 = PointSet::of(s), s2 = PointSet::of(s);
            while (static_cast<std::size_t>(4 * s1.size() + s2.size() + 4) < basis->size()) {
                const auto x = static_cast<geom::PointIndex>(rng.below(s.num_points()));
                if (s1.contains(x) || s2.contains(x)) continue;
                if (rng.below(2)) s1.insert(x);
                else s2.insert(x);
            }
            const auto g = interpolate_vanishing(s1, 2, s2, 1, basis);
            REQUIRE_FALSE(g.is_zero());
            for (auto x : s1.members()) {
                REQUIRE(g.evaluate(s.point(x)) == 0);
                REQUIRE(multiplicity_at(g, s.point(x)) >= 2);
            }
            for (auto x : s2.members()) REQUIRE(g.evaluate(s.point(x)) == 0);
        }
    }
}

TEST_CASE("interpolation preconditions") {
    const AffineSpace s(Field::of_order(3), 3);
    const auto basis = MonomialBasis::capped(s.field(), 3, Rational(1));
    auto s1 = PointSet::of(s), s2 = PointSet::of(s);
    s1.insert(0);
    s2.insert(0);
    auto code = [&](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return Errc::internal;
    };
    CHECK(code([&] { interpolate_vanishing(s1, 1, s2, 1, basis); }) == Errc::sets_not_disjoint);
    auto big = PointSet::of(s);
    for (geom::PointIndex x = 0; x < static_cast<geom::PointIndex>(basis->size()); ++x) big.insert(x);
    CHECK(code([&] { interpolate_vanishing(big, 1, PointSet::of(s), 0, basis); }) == Errc::infeasible_count);
    big.erase(0);
    CHECK_FALSE(interpolate_vanishing(big, 1, PointSet::of(s), 0, basis).is_zero());
}

TEST_CASE("restriction multiplicity dominates point multiplicity") {
    for (auto q : {3u, 5u, 7u}) {
        const auto f = Field::of_order(q);
        const auto basis = MonomialBasis::capped(f, 3, Rational(2));
        Rng rng(q, 3);
        for (int i = 0; i < 30; ++i) {
            const auto g = MultiPoly::random(basis, rng);
            geom::Point a{}, b{};
            for (int j = 0; j < 3; ++j) {
                a[j] = static_cast<Elem>(rng.below(q));
                b[j] = static_cast<Elem>(rng.below(q));
            }
            if (b == geom::Point{0, 0, 0}) b[0] = 1;
            const auto r = restrict_to_line(g, a, b);
            for (Elem t = 0; t < q; ++t) {
                geom::Point x;
                for (int j = 0; j < 3; ++j) x[j] = f.add(a[j], f.mul(t, b[j]));
                REQUIRE(r.evaluate(f, t) == g.evaluate(x));
                REQUIRE(multiplicity_at(g, x) <= r.multiplicity_at(f, t));
            }
        }
    }
}

TEST_CASE("kernel solver finds a vector in the nullspace") {
    const auto f = Field::of_order(7);
    KernelSolver k(f, 3);
    k.add_row({1, 2, 3});
    k.add_row({2, 4, 6});
    CHECK(k.rank() == 1);
    k.add_row({0, 1, 1});
    const auto v = k.kernel_vector();
    REQUIRE(v.has_value());
    CHECK(f.add(f.add((*v)[0], f.mul(2, (*v)[1])), f.mul(3, (*v)[2])) == 0);
    CHECK(f.add((*v)[1], (*v)[2]) == 0);
    k.add_row({1, 0, 0});
    CHECK_FALSE(k.kernel_vector().has_value());
}

TEST_CASE("top homogeneous part") {
    const auto f = Field::of_order(5);
    const auto basis = MonomialBasis::capped(f, 3, Rational(2));
    const auto g = to_poly(basis, {{{0, 0, 0}, 3}, {{1, 1, 0}, 2}, {{0, 0, 2}, 4}, {{1, 0, 0}, 1}});
    const auto top = homogeneous_top(g);
    CHECK(top.degree() == 2);
    CHECK(top.coeff(*basis->index_of({1, 1, 0})) == 2);
    CHECK(top.coeff(*basis->index_of({0, 0, 2})) == 4);
    CHECK(top.coeff(*basis->index_of({1, 0, 0})) == 0);
    CHECK_THROWS_AS(homogeneous_top(MultiPoly(basis)), Error);
}

TEST_CASE("small multiplicity and zero-test examples") {
    const auto f = Field::of_order(3);
    const auto basis = MonomialBasis::capped(f, 3, Rational(3));
    CHECK(multiplicity_at(to_poly(basis, {{{1, 1, 0}, 1}}), {0, 0, 0}) == 2);
    CHECK(multiplicity_at(to_poly(basis, {{{1, 1, 0}, 1}, {{0, 0, 0}, 2}}), {0, 0, 0}) == 0);
    for (Elem c = 0; c < 3; ++c) {
        // (x - c)^2 = x^2 - 2c x + c^2
        const auto g = to_poly(basis, {{{2, 0, 0}, 1}, {{1, 0, 0}, f.neg(f.mul(2, c))}, {{0, 0, 0}, f.mul(c, c)}});
        CHECK(multiplicity_at(g, {c, 0, 0}) == 2);
        CHECK(multiplicity_via_hasse(g, {c, 0, 0}) == 2);
    }
    // x^(q-1) - 1 is -1 on the hyperplane x = 0.
    const auto h = to_poly(basis, {{{2, 0, 0}, 1}, {{0, 0, 0}, f.neg(1)}});
    CHECK_FALSE(is_identically_zero_on_space(h));
    CHECK(h.evaluate({0, 1, 2}) == f.neg(1));
    // x^2 + y has top part x^2.
    const auto top = homogeneous_top(to_poly(basis, {{{2, 0, 0}, 1}, {{0, 1, 0}, 1}}));
    CHECK(top.coeff(*basis->index_of({2, 0, 0})) == 1);
    CHECK(top.coeff(*basis->index_of({0, 1, 0})) == 0);
}

TEST_CASE("restriction of a homogeneous form through the origin is g(b) t^d") {
    const auto f = Field::of_order(5);
    const auto basis = MonomialBasis::capped(f, 3, Rational(2));
    const auto g = to_poly(basis, {{{2, 1, 0}, 3}, {{0, 1, 2}, 1}, {{1, 1, 1}, 4}});
    for (geom::Point b : {geom::Point{1, 2, 3}, geom::Point{0, 1, 4}, geom::Point{4, 4, 0}}) {
        const auto r = restrict_to_line(g, {0, 0, 0}, b);
        const Elem gb = g.evaluate(b);
        if (gb == 0) {
            CHECK(r.is_zero());
        } else {
            CHECK(r.degree() == 3);
            CHECK(r.coeffs()[3] == gb);
            CHECK(r.multiplicity_at(f, 0) == 3);
        }
    }
}

TEST_CASE("one point in Dvir degree range, and the count boundary") {
    const AffineSpace s(Field::of_order(5), 3);
    auto one = PointSet::of(s);
    one.insert(31);
    const auto g = interpolate_vanishing(one, 1, PointSet::of(s), 0, Rational(1));
    CHECK_FALSE(g.is_zero());
    CHECK(g.degree() < 5);
    CHECK(g.evaluate(s.point(31)) == 0);
    const auto n = count_capped_monomials(3, 5, Rational(1));
    auto full = PointSet::of(s);
    for (geom::PointIndex x = 0; x < n; ++x) full.insert(x);
    CHECK_THROWS_AS(interpolate_vanishing(full, 1, PointSet::of(s), 0, Rational(1)), Error);
}

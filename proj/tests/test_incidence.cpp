#include <doctest.h>

#include <cmath>

#include "ffgeom/error.hpp"
#include "ffgeom/incidence.hpp"
#include "ffgeom/nikodym.hpp"

using namespace ffgeom;
using namespace ffgeom::incidence;
using gf::Field;

namespace {

std::uint64_t brute_incidences(const AffineSpace& s, const PointSet& p, const LineFamily& l) {
    std::uint64_t c = 0;
    for (const auto& line : l)
        for (geom::PointIndex x = 0; x < s.num_points(); ++x) c += p.contains(x) && s.contains(line, x);
    return c;
}

PointSet random_points(const AffineSpace& s, std::size_t n, Rng& rng) {
    auto p = PointSet::of(s);
    while (p.size() < n) p.insert(static_cast<geom::PointIndex>(rng.below(s.num_points())));
    return p;
}

// Floating reference for the exact mixing bound.
double reference_bound(double np, double nl, double q) {
    const double pts = q * q * q, lines = q * q * q * q + q * q * q + q * q, e = q * lines;
    const double a = np / pts, b = nl / lines, lambda = std::sqrt((q + 1) / (q * q + q + 1));
    return e * (a * b + lambda * std::sqrt(a * b * (1 - a) * (1 - b)));
}

}  // namespace

TEST_CASE("incidence count agrees with brute force") {
    for (auto q : {2u, 3u, 4u}) {
        const AffineSpace s(Field::of_order(q), 3);
        Rng rng(q, 5);
        for (int i = 0; i < 10; ++i) {
            const auto p = random_points(s, 1 + rng.below(s.num_points()), rng);
            const auto l = random_lines(s, 1 + rng.below(s.num_lines()), rng);
            REQUIRE(count_incidences(s, p, l).incidences == brute_incidences(s, p, l));
        }
    }
}

TEST_CASE("incidence examples") {
    const AffineSpace s(Field::of_order(3), 3);
    const auto all = geom::enumerate_lines(s);
    CHECK(count_incidences(s, PointSet::full(3, 3), all).incidences == 3 * 117);
    const auto line = s.canonical(0, s.directions()[2]);
    auto on = PointSet::of(s);
    for (auto p : s.points_of(line)) on.insert(p);
    CHECK(count_incidences(s, on, LineFamily(s, {line})).incidences == 3);
    CHECK(count_incidences(s, PointSet::of(s), all).incidences == 0);
    CHECK_THROWS_AS(count_incidences(s, PointSet::full(2, 3), all), Error);
}

TEST_CASE("spectrum closed form and numeric cross-check") {
    const auto s2 = incidence_spectrum(2);
    CHECK(s2.sigma1 == doctest::Approx(std::sqrt(14.0)));
    CHECK(s2.sigma2 == doctest::Approx(std::sqrt(6.0)));
    CHECK(std::abs(s2.numeric_sigma1 - std::sqrt(14.0)) < 1e-8);
    CHECK(std::abs(s2.numeric_sigma2 - std::sqrt(6.0)) < 1e-8);
    const auto s3 = incidence_spectrum(3);
    CHECK(std::abs(s3.numeric_sigma1 - std::sqrt(39.0)) < 1e-8);
    CHECK(std::abs(s3.numeric_sigma2 - std::sqrt(12.0)) < 1e-8);
    CHECK(s3.point_degree == 13);
    CHECK(s3.line_degree == 3);
    CHECK(incidence_spectrum(101, false).sigma2 / 101 == doctest::Approx(std::sqrt(1 + 1.0 / 101)));
    CHECK_THROWS_AS(incidence_spectrum(11, true), Error);
}

TEST_CASE("Gram identity and biregularity") {
    for (auto q : {2u, 3u, 4u}) {
        const AffineSpace s(Field::of_order(q), 3);
        const auto g = verify_gram_identity(s);
        CHECK(g.holds);
        CHECK(g.mismatches == 0);
        const auto all = geom::enumerate_lines(s);
        std::vector<std::uint32_t> deg(s.num_points(), 0);
        for (const auto& l : all)
            for (auto p : s.points_of(l)) ++deg[p];
        for (auto d : deg) REQUIRE(d == q * q + q + 1);
    }
}

TEST_CASE("mixing bound values") {
    CHECK(mixing_incidence_bound(125, 300, 5).bound == doctest::Approx(5.0 * 300));
    CHECK(mixing_incidence_bound(60, 0, 5).bound == 0);
    CHECK(mixing_incidence_bound(60, 200, 5).bound == doctest::Approx(reference_bound(60, 200, 5)));
    CHECK_THROWS_AS(mixing_incidence_bound(126, 1, 5), Error);
    CHECK(mixing_bound_admits(5 * 300, 125, 300, 5));
    CHECK_FALSE(mixing_bound_admits(5 * 300 + 1, 125, 300, 5));
}

TEST_CASE("exact bound dominates measured incidences at q=3, |P|=10, |L|=20") {
    const AffineSpace s(Field::of_order(3), 3);
    const double bound = mixing_incidence_bound(10, 20, 3).bound;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed, 9);
        const auto p = random_points(s, 10, rng);
        const auto l = random_lines(s, 20, rng);
        const auto i = brute_incidences(s, p, l);
        REQUIRE(static_cast<double>(i) <= bound);
        REQUIRE(mixing_bound_admits(i, 10, 20, 3));
    }
}

TEST_CASE("two-sided mixing inequality on random and structured families") {
    for (auto q : {2u, 3u, 4u}) {
        const AffineSpace s(Field::of_order(q), 3);
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            Rng rng(seed, q);
            const auto p = random_points(s, rng.below(s.num_points() + 1), rng);
            const auto l = random_lines(s, rng.below(s.num_lines() + 1), rng);
            const auto r = mixing_discrepancy_check(s, p, l);
            REQUIRE(r.holds);
            REQUIRE(r.lhs <= r.rhs + 1e-12);
        }
        const auto pl = s.plane(1);
        auto pts = PointSet::of(s);
        for (auto x : s.points_of(pl)) pts.insert(x);
        CHECK(mixing_discrepancy_check(s, pts, geom::lines_in_plane(s, pl)).holds);
        CHECK(mixing_discrepancy_check(s, PointSet::of(s), geom::lines_in_plane(s, pl)).holds);
    }
}

TEST_CASE("covering bound for planes and lines") {
    const AffineSpace s5(Field::of_order(5), 3);
    Rng rng(2, 0);
    const auto axis = s5.canonical(0, s5.directions()[0]);
    const auto pencil = line_pencil_planes(s5, 10, axis, rng);
    CHECK(pencil.size() == 10);
    for (int i = 0; i < 6; ++i) CHECK(s5.line_in_plane(axis, pencil[i]));
    const auto r = cover_fraction_check(s5, pencil);
    CHECK(r.bound == Rational(125, 3));
    CHECK(r.holds);
    CHECK(r.covered >= 42);

    std::vector<geom::Plane> every;
    for (std::uint32_t i = 0; i < s5.num_planes(); ++i) every.push_back(s5.plane(i));
    const auto all = cover_fraction_check(s5, every);
    CHECK(all.covered == 125);
    CHECK(all.holds);

    const AffineSpace s7(Field::of_order(7), 3);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng r7(seed, 1);
        REQUIRE(cover_fraction_check(s7, random_planes(s7, 21, r7)).holds);
    }
    CHECK_THROWS_AS(cover_fraction_check(s7, random_planes(s7, 7, rng)), Error);

    const AffineSpace a2(Field::of_order(7), 2);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng r2(seed, 2);
        REQUIRE(cover_fraction_check(a2, random_lines(a2, 14, r2)).holds);
    }
    CHECK(cover_fraction_check(a2, parallel_class_lines(a2, 14)).holds);
}

TEST_CASE("plane generators return distinct planes") {
    const AffineSpace s(Field::of_order(4), 3);
    for (const std::string g : {"random", "point-pencil", "line-pencil", "parallel"}) {
        Rng rng(1, 1);
        auto planes = make_planes(s, g, 12, rng);
        CHECK(planes.size() == 12);
        std::sort(planes.begin(), planes.end());
        CHECK(std::adjacent_find(planes.begin(), planes.end()) == planes.end());
    }
    Rng rng(1, 1);
    CHECK_THROWS_AS(make_planes(s, "bogus", 5, rng), Error);
}

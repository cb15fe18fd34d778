#include <doctest.h>

#include <map>
#include <set>

#include "ffgeom/geom.hpp"
#include "ffgeom/projective.hpp"

using namespace ffgeom;
using namespace ffgeom::geom;

TEST_CASE("AG(n,q) sizes and lexicographic indexing") {
    for (unsigned n : {2u, 3u})
        for (auto q : {2u, 3u, 4u, 5u}) {
            const AffineSpace s(Field::of_order(q), n);
            std::uint32_t pts = 1;
            for (unsigned i = 0; i < n; ++i) pts *= q;
            CHECK(s.num_points() == pts);
            CHECK(s.num_directions() == (pts - 1) / (q - 1));
            for (PointIndex i = 0; i < pts; ++i) REQUIRE(s.index(s.point(i)) == i);
            CHECK(s.point(1)[n - 1] == 1);
            CHECK(s.point(q)[n - 2] == 1);
        }
}

TEST_CASE("line counts: 28 at q=2, 117 at q=3") {
    CHECK(enumerate_lines(AffineSpace(Field::of_order(2), 3)).size() == 28);
    CHECK(enumerate_lines(AffineSpace(Field::of_order(3), 3)).size() == 117);
    CHECK(enumerate_lines(AffineSpace(Field::of_order(3), 2)).size() == 12);
}

TEST_CASE("every line has q points, every point lies on (q^n-1)/(q-1) lines") {
    for (unsigned n : {2u, 3u})
        for (auto q : {2u, 3u, 4u}) {
            const AffineSpace s(Field::of_order(q), n);
            const auto lines = enumerate_lines(s);
            CHECK(lines.size() == s.num_lines());
            std::vector<std::uint32_t> degree(s.num_points(), 0);
            std::set<std::vector<PointIndex>> distinct;
            for (const auto& l : lines) {
                auto pts = s.points_of(l);
                REQUIRE(pts.size() == q);
                for (auto p : pts) ++degree[p];
                std::sort(pts.begin(), pts.end());
                distinct.insert(pts);
            }
            CHECK(distinct.size() == lines.size());
            for (auto d : degree) REQUIRE(d == s.num_directions());
        }
}

TEST_CASE("two distinct points determine exactly one line") {
    const AffineSpace s(Field::of_order(4), 3);
    std::map<std::pair<PointIndex, PointIndex>, int> through;
    for (const auto& l : enumerate_lines(s)) {
        const auto pts = s.points_of(l);
        for (auto a : pts)
            for (auto b : pts)
                if (a < b) ++through[{a, b}];
    }
    CHECK(through.size() == s.num_points() * (s.num_points() - 1) / 2);
    for (const auto& [pair, c] : through) REQUIRE(c == 1);
    const Line l = s.line_through_points(5, 40);
    CHECK(s.contains(l, 5));
    CHECK(s.contains(l, 40));
}

TEST_CASE("canonical form is independent of the representative") {
    const AffineSpace s(Field::of_order(5), 3);
    for (const auto& l : enumerate_lines(s)) {
        for (auto p : s.points_of(l)) REQUIRE(s.canonical(p, l.dir) == l);
        const auto scaled = s.index(s.scale(3, s.point(l.dir)));
        REQUIRE(s.canonical(l.base, s.normalize_direction(s.point(scaled))) == l);
    }
}

TEST_CASE("planes: indexing, q^2 points, q(q+1) lines, q+1 planes through a line") {
    for (auto q : {2u, 3u, 4u}) {
        const AffineSpace s(Field::of_order(q), 3);
        CHECK(s.num_planes() == q * (q * q + q + 1));
        const Plane z0 = s.plane(0);
        for (PointIndex x = 0; x < s.num_points(); ++x) CHECK(s.on_plane(z0, x) == (s.point(x)[2] == 0));
        for (std::uint32_t i = 0; i < s.num_planes(); ++i) {
            const auto pl = s.plane(i);
            REQUIRE(s.plane_index(pl) == i);
            REQUIRE(s.points_of(pl).size() == q * q);
            REQUIRE(lines_in_plane(s, pl).size() == q * (q + 1));
        }
        for (const auto& l : enumerate_lines(s)) {
            const auto pls = s.planes_containing(l);
            REQUIRE(pls.size() == q + 1);
            for (const auto& pl : pls) REQUIRE(s.line_in_plane(l, pl));
        }
    }
}

TEST_CASE("point sets and plane occupancy") {
    const AffineSpace s(Field::of_order(3), 3);
    auto set = PointSet::of(s);
    CHECK(set.insert(4));
    CHECK_FALSE(set.insert(4));
    set.insert(26);
    CHECK(set.size() == 2);
    CHECK(set.popcount() == 2);
    CHECK(set.complement().size() == 25);
    CHECK(set.members() == std::vector<PointIndex>{4, 26});

    const auto z0 = s.plane(0);
    LineFamily fam(s, lines_in_plane(s, z0).lines());
    CHECK(fam.occupancy(s, z0) == 12);
    CHECK(fam.max_occupancy(s).second == 12);
    CHECK(fam.recount_occupancy(s) == fam.occupancy_table());
    CHECK(fam.would_exceed(s, s.canonical(0, s.directions()[1]), 12) == (s.line_in_plane(s.canonical(0, s.directions()[1]), z0)));
}

TEST_CASE("PG(n,q) counts and lines") {
    for (auto q : {2u, 3u, 4u}) {
        const ProjectiveSpace pg(Field::of_order(q), 3);
        CHECK(pg.num_points() == (q * q * q * q - 1) / (q - 1));
        const auto lines = pg.lines();
        CHECK(lines.size() == pg.num_lines());
        CHECK(lines.size() == (q * q + 1) * (q * q + q + 1));
        std::vector<int> degree(pg.num_points(), 0);
        for (const auto& l : lines) {
            const auto pts = pg.points_on(l);
            REQUIRE(pts.size() == q + 1);
            for (auto p : pts) ++degree[p];
        }
        for (auto d : degree) REQUIRE(d == static_cast<int>(q * q + q + 1));
    }
}

TEST_CASE("conic dual lines: q+1 lines with no point on three of them") {
    for (auto q : {3u, 4u, 5u, 7u, 9u}) {
        const auto f = Field::of_order(q);
        const ProjectiveSpace plane(f, 2);
        const auto lines = conic_dual_lines(f);
        CHECK(lines.size() == q + 1);
        std::uint32_t worst = 0;
        for (std::uint32_t x = 0; x < plane.num_points(); ++x) {
            std::uint32_t c = 0;
            for (const auto& l : lines) c += plane.dot(l, plane.point(x)) == 0;
            worst = std::max(worst, c);
        }
        CHECK(worst == 2);
        CHECK(max_concurrency(plane, lines) == worst);
    }
}

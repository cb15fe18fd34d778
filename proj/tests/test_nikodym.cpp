#include <doctest.h>

#include <cmath>
#include <set>

#include "ffgeom/error.hpp"
#include "ffgeom/nikodym.hpp"

using namespace ffgeom;
using namespace ffgeom::nikodym;
using gf::Field;

namespace {

// x passes iff some line through x has every other point in N.
bool oracle_point(const AffineSpace& s, const PointSet& n, PointIndex x) {
    for (const auto& l : geom::enumerate_lines(s)) {
        if (!s.contains(l, x)) continue;
        bool ok = true;
        for (auto p : s.points_of(l)) ok = ok && (p == x || n.contains(p));
        if (ok) return true;
    }
    return false;
}

std::vector<PointIndex> oracle_failing(const AffineSpace& s, const PointSet& n) {
    std::vector<PointIndex> out;
    for (PointIndex x = 0; x < s.num_points(); ++x)
        if (!oracle_point(s, n, x)) out.push_back(x);
    return out;
}

}  // namespace

TEST_CASE("verify_nikodym matches the line oracle on random sets") {
    for (auto q : {2u, 3u, 4u}) {
        for (unsigned n : {2u, 3u}) {
            const AffineSpace s(Field::of_order(q), n);
            for (std::uint64_t seed = 0; seed < 6; ++seed) {
                Rng rng(seed, q * 10 + n);
                auto set = PointSet::full(q, n);
                const auto removals = rng.below(s.num_points() / 2 + 1);
                for (std::uint64_t i = 0; i < removals; ++i) set.erase(static_cast<PointIndex>(rng.below(s.num_points())));
                const auto check = verify_nikodym(s, set);
                const auto expected = oracle_failing(s, set);
                REQUIRE(check.failing == expected);
                REQUIRE(check.is_nikodym == expected.empty());
                if (check.is_nikodym) {
                    REQUIRE(check.witness.has_value());
                    CHECK(assignment_valid(s, *check.witness));
                    CHECK(check.witness->assignment.size() == s.num_points() - set.size());
                }
            }
        }
    }
}

TEST_CASE("Nikodym examples") {
    const AffineSpace s(Field::of_order(3), 3);
    const auto full = verify_nikodym(s, PointSet::full(3, 3));
    CHECK(full.is_nikodym);
    CHECK(full.witness->assignment.empty());
    auto minus_one = PointSet::full(3, 3);
    minus_one.erase(13);
    CHECK(verify_nikodym(s, minus_one).is_nikodym);
    CHECK(verify_nikodym(s, PointSet::of(s)).failing.size() == 27);
}

TEST_CASE("witness incidences are exactly (q-1)|complement|") {
    for (auto q : {3u, 4u, 5u}) {
        const AffineSpace s(Field::of_order(q), 3);
        Rng rng(2, q);
        auto set = PointSet::full(q, 3);
        for (int i = 0; i < 4; ++i) set.erase(static_cast<PointIndex>(rng.below(s.num_points())));
        const auto check = verify_nikodym(s, set);
        REQUIRE(check.is_nikodym);
        const auto lines = assignment_lines(s, *check.witness);
        const auto comp = s.num_points() - set.size();
        CHECK(lines.size() == comp);
        CHECK(incidence::count_incidences(s, set, lines).incidences == (q - 1) * comp);
        const auto r = nikodym_complement_bound_check(s, set);
        CHECK(r.incidences_exact);
        CHECK(r.mixing_admits);
        CHECK(r.discrepancy.holds);
        CHECK(coplanar_line_bound_check(s, *check.witness).holds);
    }
    const AffineSpace s(Field::of_order(3), 3);
    CHECK_THROWS_AS(nikodym_complement_bound_check(s, PointSet::of(s)), Error);
}

TEST_CASE("a tampered assignment is rejected") {
    const AffineSpace s(Field::of_order(3), 3);
    auto set = PointSet::full(3, 3);
    set.erase(0);
    set.erase(26);
    auto w = *verify_nikodym(s, set).witness;
    REQUIRE(w.assignment.size() == 2);
    w.assignment[1].second = w.assignment[0].second;
    CHECK_FALSE(assignment_valid(s, w));
}

TEST_CASE("union of lines sizes") {
    const AffineSpace s(Field::of_order(5), 3);
    const auto a = s.canonical(0, s.directions()[0]);
    const auto b = s.canonical(0, s.directions()[5]);
    CHECK(union_of_lines(s, LineFamily(s, {a})).size() == 5);
    CHECK(union_of_lines(s, LineFamily(s, {a, b})).size() == 9);
    CHECK(union_of_lines(s, geom::enumerate_lines(s)).size() == 125);
    CHECK(union_of_lines(s, LineFamily(5, 3)).size() == 0);
}

TEST_CASE("union bound: measured size is at least the implied bound") {
    const AffineSpace s(Field::of_order(7), 3);
    Rng rng(1, 0);
    const auto lines = incidence::random_lines(s, static_cast<std::size_t>(std::ceil(0.62 * 343)), rng);
    const auto r = union_lower_bound_check(s, lines);
    CHECK(r.measured_at_least_implied);
    CHECK(r.covered >= r.implied_lower);
    CHECK(r.incidences == 7 * lines.size());
    // The implied bound is the least |P| the exact bound admits.
    CHECK(incidence::mixing_bound_admits(r.incidences, r.implied_lower, r.lines, 7));
    if (r.implied_lower > 0) CHECK_FALSE(incidence::mixing_bound_admits(r.incidences, r.implied_lower - 1, r.lines, 7));
    const auto whole = union_lower_bound_check(s, geom::enumerate_lines(s));
    CHECK(whole.covered == 343);
    CHECK_THROWS_AS(union_lower_bound_check(s, incidence::random_lines(s, 10, rng)), Error);
}

TEST_CASE("conic-dual family identities") {
    for (auto q : {5u, 7u, 9u, 13u}) {
        const AffineSpace s(Field::of_order(q), 3);
        const auto fam = build_conic_dual_line_family(s);
        const auto& r = fam.report;
        const std::int64_t np = static_cast<std::int64_t>(std::floor(0.62 * q)), qq = q;
        const std::int64_t pairs = np * (np - 1) / 2;
        CAPTURE(q);
        CHECK(r.planes == np);
        CHECK(static_cast<std::int64_t>(r.lines) == np * qq * (qq + 1) - pairs);
        CHECK(static_cast<std::int64_t>(r.covered) == 1 + np * (qq * qq - 1) - (qq - 1) * pairs);
        CHECK(static_cast<std::int64_t>(r.covered) <= np * qq * qq - (qq - 1) * pairs);
        CHECK(r.max_line_coincidence == 2);
        CHECK(union_of_lines(s, fam.lines).size() == r.covered);
        // Independent coincidence recount over the chosen planes.
        for (const auto& l : fam.lines) {
            int in = 0;
            for (const auto& pl : fam.planes) in += s.line_in_plane(l, pl);
            REQUIRE(in >= 1);
            REQUIRE(in <= 2);
        }
    }
    CHECK_THROWS_AS(build_conic_dual_line_family(AffineSpace(Field::of_order(4), 3)), Error);
}

TEST_CASE("golden-ratio threshold") {
    const double root = golden_ratio_threshold();
    CHECK(std::abs(root - (std::sqrt(5.0) - 1) / 2) < 1e-8);
    CHECK(limit_inequality_holds(0.6));
    CHECK_FALSE(limit_inequality_holds(0.62));
    CHECK(limit_inequality_holds(root - 1e-9));
}

TEST_CASE("conjecture harness records") {
    HarnessConfig cfg;
    cfg.q = 5;
    cfg.trials = 3;
    cfg.seed = 4;
    cfg.line_count = 40;
    for (const std::string g : {"uniform-random", "plane-capped-random"}) {
        cfg.generator = g;
        const auto recs = conjecture_harness(cfg);
        REQUIRE(recs.size() == 3);
        for (const auto& r : recs) {
            CHECK(r.lines == 40);
            CHECK(r.cap == static_cast<std::uint32_t>(std::floor(std::pow(5.0, 1.5) / 2)));
            CHECK(r.cap_respected);
            CHECK(r.max_plane_occupancy <= r.cap);
            CHECK(r.ratio == doctest::Approx(r.covered / 125.0));
        }
        CHECK(conjecture_harness(cfg).at(2).covered == recs[2].covered);
    }
    cfg.generator = "hermitian-tangent";
    cfg.q = 4;
    cfg.trials = 1;
    const auto h = conjecture_harness(cfg);
    REQUIRE(h.size() == 1);
    CHECK(h[0].covered <= 64);
    cfg.generator = "uniform-random";
    cfg.line_count = 0;
    cfg.q = 3;
    CHECK(conjecture_harness(cfg).at(0).covered == 0);
    cfg.line_count = 10000;
    CHECK_THROWS_AS(conjecture_harness(cfg), Error);
}

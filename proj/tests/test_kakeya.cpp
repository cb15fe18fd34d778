#include <doctest.h>

#include <cmath>

#include "ffgeom/error.hpp"
#include "ffgeom/kakeya.hpp"
#include "ffgeom/poly.hpp"

using namespace ffgeom;
using namespace ffgeom::kakeya;
using gf::Field;

namespace {

// Direction d covered iff some base point b has b + t d in the set for all t.
std::vector<PointIndex> uncovered_directions(const AffineSpace& s, const PointSet& set) {
    std::vector<PointIndex> out;
    const auto& f = s.field();
    for (auto d : s.directions()) {
        bool found = false;
        for (PointIndex b = 0; b < s.num_points() && !found; ++b) {
            bool all = true;
            for (gf::Elem t = 0; t < s.q() && all; ++t)
                all = set.contains(s.index(s.add(s.point(b), s.scale(t, s.point(d)))));
            found = all;
        }
        if (!found) out.push_back(d);
        (void)f;
    }
    return out;
}

Errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::internal;
}

}  // namespace

TEST_CASE("verify_kakeya agrees with the brute-force direction oracle") {
    for (auto q : {2u, 3u, 4u}) {
        const AffineSpace s(Field::of_order(q), 3);
        Rng rng(q, 7);
        for (int trial = 0; trial < 8; ++trial) {
            auto set = PointSet::full(q, 3);
            const auto removals = 1 + rng.below(q * q);
            for (std::uint64_t i = 0; i < removals; ++i) set.erase(static_cast<PointIndex>(rng.below(s.num_points())));
            const auto check = verify_kakeya(s, set);
            CHECK(check.missing == uncovered_directions(s, set));
            CHECK(check.is_kakeya == check.missing.empty());
            if (check.is_kakeya) {
                REQUIRE(check.witness.lines.size() == s.num_directions());
                for (std::size_t o = 0; o < check.witness.lines.size(); ++o) {
                    const auto& l = check.witness.lines[o];
                    CHECK(l.dir == s.directions()[o]);
                    for (auto p : s.points_of(l)) REQUIRE(set.contains(p));
                }
            }
        }
    }
}

TEST_CASE("verify_kakeya trivial cases") {
    const AffineSpace s(Field::of_order(3), 3);
    CHECK(verify_kakeya(s, PointSet::full(3, 3)).is_kakeya);
    CHECK(verify_kakeya(s, PointSet::of(s)).missing.size() == 13);
    auto minus_line = PointSet::full(3, 3);
    const auto l = s.canonical(0, s.directions()[4]);
    for (auto p : s.points_of(l)) minus_line.erase(p);
    CHECK(verify_kakeya(s, minus_line).is_kakeya);
}

TEST_CASE("quadratic residue set is Kakeya with the corrected size") {
    for (auto q : {3u, 5u, 7u, 9u, 11u, 13u}) {
        const AffineSpace s(Field::of_order(q), 3);
        const auto set = build_quadratic_residue_set(s);
        CAPTURE(q);
        CHECK(verify_kakeya(s, set).is_kakeya);
        const auto size = static_cast<std::int64_t>(set.size());
        CHECK(size == quadratic_residue_size_exact(q));
        CHECK(size <= quadratic_residue_size_bound(q));
        CHECK(size >= integer_multiplicity_bound(q, 3, 2));
    }
    CHECK(build_quadratic_residue_set(AffineSpace(Field::of_order(3), 3)).size() == 17);
    CHECK(quadratic_residue_size_bound(3) == 21);
    CHECK(quadratic_residue_size_bound(13) == 806);
    CHECK(quadratic_residue_size_exact(13) == 757);
    CHECK(code_of([] { build_quadratic_residue_set(AffineSpace(Field::of_order(4), 3)); }) == Errc::even_field_unsupported);
}

TEST_CASE("quadratic residue membership matches its definition") {
    const AffineSpace s(Field::of_order(7), 3);
    const auto& f = s.field();
    const auto set = build_quadratic_residue_set(s);
    auto ok = [&](gf::Elem v) { return v == 0 || f.is_square(v); };
    for (PointIndex i = 0; i < s.num_points(); ++i) {
        const auto x = s.point(i);
        const gf::Elem t2 = f.mul(x[2], x[2]);
        const bool expected = x[2] == 0 || (ok(f.add(x[0], t2)) && ok(f.add(x[1], t2)));
        REQUIRE(set.contains(i) == expected);
    }
}

TEST_CASE("integer multiplicity bound examples") {
    CHECK(integer_multiplicity_bound(3, 3, 2) == 7);
    CHECK(integer_multiplicity_bound(5, 3, 1) == 35);
    for (auto q : {101u, 211u}) {
        const double ratio = static_cast<double>(integer_multiplicity_bound(q, 3, 2)) / std::pow(q, 3);
        CHECK(std::abs(ratio - 5.0 / 24) < 0.05 * 5.0 / 24);
        const double n = static_cast<double>(poly::count_capped_monomials(3, q, Rational(2))) / std::pow(q, 3);
        CHECK(std::abs(n - 5.0 / 6) < 0.05 * 5.0 / 6);
    }
}

TEST_CASE("fractional parameters") {
    FractionalParams p{5, 1, Rational(1, 5)};
    CHECK_NOTHROW(p.validate());
    const double delta = std::cbrt(1.0 / 5);
    CHECK(p.m().approx() == doctest::Approx(0.2 * (1 - delta) + (0.8 - 0.2 * delta) * 2).epsilon(1e-12));
    CHECK(p.max_total_degree() == static_cast<std::int64_t>(std::ceil(p.m().approx() * 5)) - 1);
    FractionalParams zero{7, 2, Rational(0)};
    CHECK(zero.m().compare(Rational(3)) == 0);
    FractionalParams bad{5, 1, Rational(4, 5)};
    CHECK(code_of([&] { bad.validate(); }) == Errc::out_of_range);
    FractionalParams bad_u{5, 3, Rational(1, 2)};
    CHECK(code_of([&] { bad_u.validate(); }) == Errc::out_of_range);
}

TEST_CASE("sampler: accepted samples satisfy both windows") {
    const AffineSpace s(Field::of_order(7), 3);
    const auto set = build_quadratic_residue_set(s);
    const auto w = verify_kakeya(s, set).witness;
    const auto sample = sample_fractional_subset(s, set, w, Rational(1, 2), 1);
    CHECK(sample.size == sample.subset.size());
    CHECK(sample_within_tolerance(s, set, w, Rational(1, 2), sample.subset));
    const double delta = std::cbrt(1.0 / 7), alpha = 0.5;
    CHECK(std::abs(static_cast<double>(sample.size) - alpha * set.size()) < delta * alpha * set.size());
    for (std::size_t o = 0; o < w.lines.size(); ++o) {
        std::uint32_t c = 0;
        for (auto p : s.points_of(w.lines[o])) {
            c += sample.subset.contains(p);
            REQUIRE((!sample.subset.contains(p) || set.contains(p)));
        }
        CHECK(c == sample.line_counts[o]);
        CHECK(std::abs(c - alpha * 7) < delta * alpha * 7);
    }
    const auto again = sample_fractional_subset(s, set, w, Rational(1, 2), 1);
    CHECK(again.subset == sample.subset);
}

TEST_CASE("sampler: alpha = 1 returns K, empty windows exhaust retries") {
    const AffineSpace s(Field::of_order(3), 3);
    const auto set = build_quadratic_residue_set(s);
    const auto w = verify_kakeya(s, set).witness;
    CHECK(sample_fractional_subset(s, set, w, Rational(1), 4).subset == set);
    // Window (q alpha (1 - delta), q alpha (1 + delta)) = (0.153, 0.847) holds no integer.
    CHECK(code_of([&] { sample_fractional_subset(s, set, w, Rational(1, 6), 1, {50, false}); }) == Errc::retry_exhausted);
    CHECK(code_of([&] { sample_fractional_subset(s, set, w, Rational(0), 1); }) == Errc::alpha_out_of_range);
    CHECK(code_of([&] { sample_fractional_subset(s, set, w, Rational(3, 2), 1); }) == Errc::alpha_out_of_range);
}

TEST_CASE("pipeline on the quadratic residue set stops at the counting stage") {
    for (auto q : {3u, 5u, 7u}) {
        const auto rep = fractional_pipeline({q, 1, Rational(1, 5)}, 1);
        CHECK(rep.stage == PipelineStage::counting_not_in_paradox_regime);
        CHECK(static_cast<double>(rep.monomials) <= rep.regime_rhs);
    }
    const auto u2 = fractional_pipeline({5, 2, Rational(0)}, 1);
    CHECK(u2.stage == PipelineStage::counting_not_in_paradox_regime);
    CHECK(stage_name(PipelineStage::top_form_vanishes) == "TopFormVanishes");
}

TEST_CASE("forcing past the counting stage on the witness union") {
    const AffineSpace s(Field::of_order(5), 3);
    const auto qr = build_quadratic_residue_set(s);
    const auto w = verify_kakeya(s, qr).witness;
    const auto set = witness_union(s, w);
    CHECK(set.size() <= qr.size());
    CHECK(verify_kakeya(s, set).is_kakeya);
    const auto rep = fractional_pipeline(s, set, w, {5, 1, Rational(1, 5)}, 1, {50, true});
    CHECK(rep.stage != PipelineStage::counting_not_in_paradox_regime);
    CHECK_FALSE(rep.detail.empty());
    const auto unforced = fractional_pipeline(s, set, w, {5, 1, Rational(1, 5)}, 1, {50, false});
    CHECK(unforced.stage == PipelineStage::counting_not_in_paradox_regime);
}

TEST_CASE("restriction analysis counts imposed zeros") {
    const AffineSpace s(Field::of_order(5), 3);
    const auto qr = build_quadratic_residue_set(s);
    const auto w = verify_kakeya(s, qr).witness;
    KakeyaWitness one{{w.lines[3]}};
    auto subset = PointSet::of(s);
    const auto pts = s.points_of(one.lines[0]);
    subset.insert(pts[0]);
    auto rest = PointSet::of(s);
    for (std::size_t i = 1; i < pts.size(); ++i) rest.insert(pts[i]);
    const auto g = poly::interpolate_vanishing(subset, 1, rest, 2, Rational(3));
    const auto a = analyze_restrictions(s, g, one, subset, 1);
    REQUIRE(a.records.size() == 1);
    CHECK(a.records[0].guaranteed_zeros == 1 + 2 * 4);
    CHECK(a.records[0].line == one.lines[0]);
}

TEST_CASE("optimizer constants") {
    const auto best = optimize_fractional_bound();
    CHECK(best.branch == 1);
    CHECK(std::abs(best.m_star - (9 + std::sqrt(33.0)) / 8) < 1e-9);
    CHECK(std::abs(best.coefficient - 0.21076) < 5e-5);
    CHECK(std::abs(fractional_coefficient_u1(1.84) - 0.21076) < 5e-5);
    CHECK(fractional_coefficient_u1(2) == doctest::Approx(5.0 / 24));
    CHECK(fractional_coefficient_u2(2) == doctest::Approx(5.0 / 24));
    CHECK(best.u2_best_coefficient <= 5.0 / 24 + 1e-12);
    CHECK(leading_term_Nq3(Rational(2)) == Rational(5, 6));
    CHECK(leading_term_Nq3(Rational(1)) == Rational(1, 6));
    CHECK(code_of([] { leading_term_Nq3(Rational(5, 2)); }) == Errc::out_of_range);
    // Brute-force scan of the u = 1 branch.
    double scan = 0;
    for (int i = 0; i <= 100000; ++i) scan = std::max(scan, fractional_coefficient_u1(1 + i / 100000.0));
    CHECK(std::abs(scan - best.coefficient) < 1e-9);
}

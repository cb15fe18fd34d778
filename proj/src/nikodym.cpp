#include "ffgeom/nikodym.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ffgeom/error.hpp"
#include "ffgeom/hermitian.hpp"
#include "ffgeom/parallel.hpp"
#include "ffgeom/projective.hpp"
#include "ffgeom/rng.hpp"

namespace ffgeom::nikodym {

namespace {

// First line through p (canonical order) whose other points all lie in the set.
std::optional<Line> qualifying_line(const AffineSpace& space, const PointSet& set, PointIndex p) {
    auto lines = space.lines_through(p);
    std::sort(lines.begin(), lines.end());
    for (const auto& l : lines) {
        bool ok = true;
        for (auto x : space.points_of(l))
            if (x != p && !set.contains(x)) {
                ok = false;
                break;
            }
        if (ok) return l;
    }
    return std::nullopt;
}

}  // namespace

NikodymCheck verify_nikodym(const AffineSpace& space, const PointSet& set) {
    if (space.n() != 2 && space.n() != 3) throw Error(Errc::out_of_range, "Nikodym sets live in AG(2,q) or AG(3,q)");
    if (set.q() != space.q() || set.n() != space.n()) throw Error(Errc::mismatched_field, "set does not live in this space");
    std::vector<std::optional<Line>> found(space.num_points());
    parallel_for(space.num_points(), [&](std::size_t p) {
        found[p] = qualifying_line(space, set, static_cast<PointIndex>(p));
    });
    NikodymCheck out;
    for (PointIndex p = 0; p < space.num_points(); ++p)
        if (!found[p]) out.failing.push_back(p);
    out.is_nikodym = out.failing.empty();
    if (!out.is_nikodym) return out;

    NikodymWitness w{set, {}};
    std::set<Line> used;
    for (PointIndex p = 0; p < space.num_points(); ++p) {
        if (set.contains(p)) continue;
        if (!used.insert(*found[p]).second)
            throw Error(Errc::assignment_not_injective, "complement points share an assigned line");
        w.assignment.emplace_back(p, *found[p]);
    }
    out.witness = std::move(w);
    return out;
}

bool assignment_valid(const AffineSpace& space, const NikodymWitness& w) {
    std::set<Line> used;
    std::set<PointIndex> seen;
    for (const auto& [p, l] : w.assignment) {
        if (w.set.contains(p) || !space.contains(l, p)) return false;
        if (!used.insert(space.canonical(l)).second || !seen.insert(p).second) return false;
        for (auto x : space.points_of(l))
            if (x != p && !w.set.contains(x)) return false;
    }
    return seen.size() == w.set.universe() - w.set.size();
}

LineFamily assignment_lines(const AffineSpace& space, const NikodymWitness& w) {
    std::vector<Line> ls;
    for (const auto& [p, l] : w.assignment) ls.push_back(l);
    return LineFamily(space, std::move(ls));
}

PointSet union_of_lines(const AffineSpace& space, const LineFamily& lines) {
    PointSet s = PointSet::of(space);
    for (const auto& l : lines)
        for (auto x : space.points_of(l)) s.insert(x);
    return s;
}

UnionBoundReport union_lower_bound_check(const AffineSpace& space, const LineFamily& lines, const Rational& fraction) {
    const std::int64_t q = space.q();
    if (Rational(static_cast<std::int64_t>(lines.size())) < fraction * (q * q * q))
        throw Error(Errc::too_few_lines, "need at least " + to_string(fraction) + " q^3 lines");
    UnionBoundReport r;
    r.q = space.q();
    r.lines = lines.size();
    r.covered = union_of_lines(space, lines).size();
    r.incidences = static_cast<std::uint64_t>(q) * r.lines;
    const auto universe = space.num_points();
    r.implied_lower = universe + 1;
    for (std::uint64_t p = 0; p <= universe; ++p)
        if (incidence::mixing_bound_admits(r.incidences, p, r.lines, space.q())) {
            r.implied_lower = p;
            break;
        }
    r.bound_at_measured = incidence::mixing_incidence_bound(r.covered, r.lines, space.q()).bound;
    r.measured_at_least_implied = r.covered >= r.implied_lower;
    return r;
}

ConicFamily build_conic_dual_line_family(const AffineSpace& space, const Rational& fraction) {
    const std::int64_t q = space.q();
    if (space.n() != 3) throw Error(Errc::out_of_range, "the family lives in AG(3,q)");
    const std::int64_t np = floor_of(fraction * q);
    if (q < 5 || np < 3 || np > q + 1) throw Error(Errc::unsupported_field, "need q >= 5 and 3 <= floor(fraction q) <= q + 1");
    const auto& f = space.field();
    const auto duals = geom::conic_dual_lines(f);

    ConicFamily fam{{}, LineFamily(space.q(), 3), {}};
    for (std::int64_t i = 0; i < np; ++i) {
        const auto& c = duals[static_cast<std::size_t>(i)];
        fam.planes.push_back({space.normalize_direction({c[0], c[1], c[2]}), 0});
    }
    std::vector<Line> all;
    for (const auto& pl : fam.planes) {
        const auto ls = geom::lines_in_plane(space, pl);
        all.insert(all.end(), ls.begin(), ls.end());
    }
    fam.lines = LineFamily(space, std::move(all));

    auto& r = fam.report;
    r.q = space.q();
    r.planes = static_cast<std::uint32_t>(np);
    r.lines = fam.lines.size();
    r.covered = union_of_lines(space, fam.lines).size();
    const std::int64_t pairs = binomial(np, 2);
    r.lines_lower_bound = np * q * (q + 1) - pairs;
    r.points_expression = (np * q * q - 1) - (q - 1) * pairs + 1;
    r.points_exact = 1 + np * (q * q - 1) - (q - 1) * pairs;
    for (const auto& l : fam.lines) {
        std::uint32_t c = 0;
        for (const auto& pl : fam.planes) c += space.line_in_plane(l, pl);
        r.max_line_coincidence = std::max(r.max_line_coincidence, c);
    }
    r.max_plane_occupancy = fam.lines.max_occupancy(space).second;
    r.ratio = static_cast<double>(r.covered) / static_cast<double>(q * q * q);
    return fam;
}

CoplanarReport coplanar_line_bound_check(const AffineSpace& space, const NikodymWitness& w) {
    if (space.n() != 3) throw Error(Errc::out_of_range, "coplanar check is for AG(3,q)");
    if (!assignment_valid(space, w)) throw Error(Errc::assignment_not_injective, "witness assignment is not valid");
    const auto fam = assignment_lines(space, w);
    CoplanarReport r;
    if (!fam.empty()) std::tie(r.max_plane, r.max_count) = fam.max_occupancy(space);
    const std::int64_t q = space.q();
    r.bound = std::pow(static_cast<double>(q), 1.5) + 1 + static_cast<double>(q);
    // count <= q^(3/2) + 1 + q  <=>  count - 1 - q <= 0 or (count - 1 - q)^2 <= q^3
    const std::int64_t excess = static_cast<std::int64_t>(r.max_count) - 1 - q;
    r.holds = excess <= 0 || excess * excess <= q * q * q;
    return r;
}

bool limit_inequality_holds(double x) { return x <= (1 - x) * x + x * std::sqrt(1 - x); }

double golden_ratio_threshold() {
    double lo = 0, hi = 1;   // sqrt(1 - x) - x is positive at 0, negative at 1
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = (lo + hi) / 2;
        if (std::sqrt(1 - mid) - mid > 0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return (lo + hi) / 2;
}

ComplementReport nikodym_complement_bound_check(const AffineSpace& space, const PointSet& set) {
    if (space.n() != 3) throw Error(Errc::out_of_range, "complement bound is for AG(3,q)");
    const auto check = verify_nikodym(space, set);
    if (!check.is_nikodym) throw Error(Errc::not_nikodym, std::to_string(check.failing.size()) + " points have no qualifying line");
    const auto& w = *check.witness;
    const auto lines = assignment_lines(space, w);
    ComplementReport r;
    r.q = space.q();
    r.complement = w.assignment.size();
    r.ratio = static_cast<double>(r.complement) / space.num_points();
    r.threshold = golden_ratio_threshold();
    r.discrepancy = incidence::mixing_discrepancy_check(space, set, lines);
    r.incidences = r.discrepancy.stats.incidences;
    r.incidences_exact = r.incidences == static_cast<std::uint64_t>(space.q() - 1) * r.complement;
    r.mixing_bound = incidence::mixing_incidence_bound(set.size(), lines.size(), space.q()).bound;
    r.mixing_admits = incidence::mixing_bound_admits(r.incidences, set.size(), lines.size(), space.q());
    return r;
}

namespace {

ConjectureRecord measure(const AffineSpace& space, const LineFamily& lines, const HarnessConfig& cfg, std::uint32_t trial,
                         std::uint32_t cap) {
    ConjectureRecord r;
    r.q = space.q();
    r.generator = cfg.generator;
    r.seed = cfg.seed;
    r.trial = trial;
    r.lines = lines.size();
    r.max_plane_occupancy = lines.empty() ? 0 : lines.max_occupancy(space).second;
    r.cap = cap;
    r.cap_respected = r.max_plane_occupancy <= cap;
    r.covered = union_of_lines(space, lines).size();
    r.ratio = static_cast<double>(r.covered) / space.num_points();
    r.alarm = r.ratio < cfg.alarm_ratio;
    return r;
}

LineFamily uniform_capped(const AffineSpace& space, std::uint64_t count, std::uint32_t cap, Rng& rng) {
    LineFamily fam(space.q(), 3);
    if (count > space.num_lines()) throw Error(Errc::generator_infeasible, "more lines requested than exist");
    const std::uint64_t budget = 50 * count + 1000;
    for (std::uint64_t attempt = 0; attempt < budget && fam.size() < count; ++attempt) {
        const auto p = static_cast<PointIndex>(rng.below(space.num_points()));
        const auto d = space.directions()[rng.below(space.num_directions())];
        const auto l = space.canonical(p, d);
        if (fam.contains(l) || fam.would_exceed(space, l, cap)) continue;
        fam.insert(space, l);
    }
    if (fam.size() < count)
        throw Error(Errc::generator_infeasible, "uniform sampling reached " + std::to_string(fam.size()) + " of " + std::to_string(count) + " lines under the cap");
    return fam;
}

LineFamily greedy_capped(const AffineSpace& space, std::uint64_t count, std::uint32_t cap, Rng& rng) {
    auto all = geom::enumerate_lines(space).lines();
    rng.shuffle(all);
    LineFamily fam(space.q(), 3);
    for (const auto& l : all) {
        if (fam.size() == count) break;
        if (!fam.would_exceed(space, l, cap)) fam.insert(space, l);
    }
    if (fam.size() < count)
        throw Error(Errc::generator_infeasible, "greedy fill reached " + std::to_string(fam.size()) + " of " + std::to_string(count) + " lines under the cap");
    return fam;
}

}  // namespace

std::vector<ConjectureRecord> conjecture_harness(const HarnessConfig& cfg) {
    const auto field = gf::Field::of_order(cfg.q);
    const AffineSpace space(field, 3);
    const std::uint32_t cap =
        cfg.cap ? cfg.cap : static_cast<std::uint32_t>(std::floor(std::pow(static_cast<double>(cfg.q), 1.5) / 2));
    std::vector<ConjectureRecord> out;
    for (std::uint32_t trial = 0; trial < cfg.trials; ++trial) {
        Rng rng(cfg.seed, trial);
        if (cfg.generator == "uniform-random") {
            out.push_back(measure(space, uniform_capped(space, cfg.line_count, cap, rng), cfg, trial, cap));
        } else if (cfg.generator == "plane-capped-random") {
            out.push_back(measure(space, greedy_capped(space, cfg.line_count, cap, rng), cfg, trial, cap));
        } else if (cfg.generator == "hermitian-tangent") {
            if (field.k() != 2) throw Error(Errc::non_square_field, "hermitian-tangent needs q = p^2");
            const hermitian::HermitianVariety v(field, hermitian::HermitianMatrix::identity(3));
            const auto fam = hermitian::build_tangent_line_family(v, cfg.alpha, cfg.seed + trial);
            out.push_back(measure(space, fam.affine, cfg, trial, cap));
        } else if (cfg.generator == "conic-dual") {
            out.push_back(measure(space, build_conic_dual_line_family(space, cfg.fraction).lines, cfg, trial, cap));
        } else {
            throw Error(Errc::parse_error, "unknown generator '" + cfg.generator + "'");
        }
    }
    return out;
}

}  // namespace ffgeom::nikodym

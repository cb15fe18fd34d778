#include "ffgeom/kakeya.hpp"

#include <cmath>

#include "ffgeom/error.hpp"
#include "ffgeom/parallel.hpp"
#include "ffgeom/rng.hpp"

namespace ffgeom::kakeya {

using gf::Elem;

KakeyaCheck verify_kakeya(const AffineSpace& space, const PointSet& set) {
    if (set.q() != space.q() || set.n() != space.n()) throw Error(Errc::mismatched_field, "set does not live in this space");
    const auto& dirs = space.directions();
    std::vector<std::optional<Line>> found(dirs.size());
    parallel_for(dirs.size(), [&](std::size_t d) {
        for (const auto& l : space.lines_in_direction(dirs[d])) {
            bool inside = true;
            for (auto x : space.points_of(l))
                if (!set.contains(x)) {
                    inside = false;
                    break;
                }
            if (inside) {
                found[d] = l;
                return;
            }
        }
    });
    KakeyaCheck out;
    for (std::size_t d = 0; d < dirs.size(); ++d)
        if (!found[d]) out.missing.push_back(dirs[d]);
    out.is_kakeya = out.missing.empty();
    if (out.is_kakeya)
        for (auto& l : found) out.witness.lines.push_back(*l);
    return out;
}

PointSet build_quadratic_residue_set(const AffineSpace& space) {
    const auto& f = space.field();
    if (f.p() == 2) throw Error(Errc::even_field_unsupported, "quadratic residue construction needs odd q");
    if (space.n() != 3) throw Error(Errc::out_of_range, "construction lives in AG(3,q)");
    const auto q = space.q();
    std::vector<Elem> squares;
    for (Elem a = 0; a < q; ++a)
        if (a == 0 || f.is_square(a)) squares.push_back(a);
    PointSet k = PointSet::of(space);
    for (Elem t = 0; t < q; ++t) {
        const Elem t2 = f.mul(t, t);
        for (auto s1 : squares)
            for (auto s2 : squares) k.insert(space.index({f.sub(s1, t2), f.sub(s2, t2), t}));
    }
    for (Elem x = 0; x < q; ++x)
        for (Elem y = 0; y < q; ++y) k.insert(space.index({x, y, 0}));
    return k;
}

std::int64_t quadratic_residue_size_bound(std::int64_t q) {
    const std::int64_t h = (q + 1) / 2;
    return q * h * h + q * q;
}

std::int64_t quadratic_residue_size_exact(std::int64_t q) {
    const std::int64_t h = (q + 1) / 2;
    return (q - 1) * h * h + q * q;
}

std::int64_t integer_multiplicity_bound(std::uint32_t q, unsigned n, std::uint32_t m) {
    if (m < 1) throw Error(Errc::out_of_range, "multiplicity must be at least 1");
    const auto count = poly::count_capped_monomials(n, q, Rational(m));
    const auto per_point = binomial(static_cast<std::int64_t>(m) + n - 1, n);
    return (count + per_point - 1) / per_point;
}

// ---------------------------------------------------------------------------

void FractionalParams::validate() const {
    if (u != 1 && u != 2) throw Error(Errc::out_of_range, "u must be 1 or 2");
    if (alpha < 0 || alpha > 1) throw Error(Errc::alpha_out_of_range, "alpha must lie in [0, 1]");
    if (q < 2) throw Error(Errc::out_of_range, "q must be at least 2");
    const auto mm = m();
    if (mm.sign() <= 0 || mm.compare(Rational(3)) > 0) throw Error(Errc::out_of_range, "m = " + std::to_string(mm.approx()) + " outside (0, 3]");
}

CubeRootSurd FractionalParams::m() const {
    const Rational a = Rational(static_cast<std::int64_t>(u) + 1) - alpha;
    const Rational b = -alpha * static_cast<std::int64_t>(2 * u + 1);
    return CubeRootSurd(a, b, q);
}

std::int64_t FractionalParams::max_total_degree() const { return (m() * Rational(q)).strict_floor(); }

namespace {

// |count - center| < delta * width, with delta = q^(-1/3)
bool within(std::int64_t q, const Rational& count, const Rational& center, const Rational& width) {
    const CubeRootSurd upper(center - count, width, q);   // center + delta width - count
    const CubeRootSurd lower(count - center, width, q);   // count - (center - delta width)
    return upper.sign() > 0 && lower.sign() > 0;
}

std::uint32_t count_on_line(const AffineSpace& space, const Line& l, const PointSet& s) {
    std::uint32_t c = 0;
    for (auto x : space.points_of(l)) c += s.contains(x);
    return c;
}

std::vector<Line> contained_lines(const AffineSpace& space, const PointSet& set) {
    std::vector<Line> out;
    for (auto dir : space.directions())
        for (const auto& l : space.lines_in_direction(dir)) {
            bool inside = true;
            for (auto x : space.points_of(l))
                if (!set.contains(x)) {
                    inside = false;
                    break;
                }
            if (inside) out.push_back(l);
        }
    return out;
}

bool lines_within(const AffineSpace& space, const std::vector<Line>& lines, const Rational& alpha, const PointSet& subset) {
    const std::int64_t q = space.q();
    for (const auto& l : lines)
        if (!within(q, Rational(count_on_line(space, l, subset)), alpha * q, alpha * q)) return false;
    return true;
}

}  // namespace

bool sample_within_tolerance(const AffineSpace& space, const PointSet& set, const KakeyaWitness& witness,
                             const Rational& alpha, const PointSet& subset) {
    const auto k = static_cast<std::int64_t>(set.size());
    if (!within(space.q(), Rational(static_cast<std::int64_t>(subset.size())), alpha * k, alpha * k)) return false;
    return lines_within(space, witness.lines, alpha, subset);
}

SubsetSample sample_fractional_subset(const AffineSpace& space, const PointSet& set, const KakeyaWitness& witness,
                                      const Rational& alpha, std::uint64_t seed, const SampleOptions& opts) {
    if (alpha <= 0 || alpha > 1) throw Error(Errc::alpha_out_of_range, "sampling needs 0 < alpha <= 1");
    if (witness.lines.size() != space.num_directions()) throw Error(Errc::out_of_range, "witness must have one line per direction");
    const std::vector<Line> extra = opts.all_contained_lines ? contained_lines(space, set) : std::vector<Line>{};
    const auto members = set.members();
    Rng rng(seed, 0x5eed);
    for (std::uint32_t attempt = 1; attempt <= opts.retry_cap; ++attempt) {
        PointSet s = PointSet::of(space);
        for (auto x : members)
            if (rng.bernoulli(alpha)) s.insert(x);
        if (!sample_within_tolerance(space, set, witness, alpha, s)) continue;
        if (!lines_within(space, extra, alpha, s)) continue;
        SubsetSample out{s, {}, s.size(), attempt};
        for (const auto& l : witness.lines) out.line_counts.push_back(count_on_line(space, l, s));
        return out;
    }
    throw Error(Errc::retry_exhausted, "no subset within tolerance after " + std::to_string(opts.retry_cap) + " samples");
}

std::string stage_name(PipelineStage s) {
    switch (s) {
    case PipelineStage::counting_not_in_paradox_regime: return "CountingNotInParadoxRegime";
    case PipelineStage::sample_retry_exhausted: return "SampleRetryExhausted";
    case PipelineStage::interpolation_infeasible: return "InterpolationInfeasible";
    case PipelineStage::restriction_shortfall: return "RestrictionShortfall";
    case PipelineStage::top_form_vanishes: return "TopFormVanishes";
    }
    return "Unknown";
}

RestrictionAnalysis analyze_restrictions(const AffineSpace& space, const poly::MultiPoly& g, const KakeyaWitness& witness,
                                         const PointSet& subset, unsigned u) {
    const auto& f = space.field();
    RestrictionAnalysis out;
    out.records.resize(witness.lines.size());
    parallel_for(witness.lines.size(), [&](std::size_t i) {
        const auto& l = witness.lines[i];
        const auto base = space.point(l.base), dir = space.point(l.dir);
        const auto r = poly::restrict_to_line(g, base, dir);
        RestrictionRecord rec;
        rec.direction = l.dir;
        rec.line = l;
        rec.restriction_degree = r.degree();
        rec.identically_zero = r.is_zero();
        std::uint64_t measured = 0;
        for (Elem t = 0; t < f.q(); ++t) {
            const auto x = space.point_on(l, t);
            rec.guaranteed_zeros += subset.contains(x) ? u : u + 1;
            if (!rec.identically_zero) measured += r.multiplicity_at(f, t);
        }
        if (!rec.identically_zero && measured < rec.guaranteed_zeros)
            throw Error(Errc::internal, "restriction has fewer zeros than the imposed multiplicities");
        out.records[i] = rec;
    });
    for (const auto& rec : out.records)
        if (!rec.identically_zero) {
            out.first_shortfall = rec;
            break;
        }
    if (!out.first_shortfall && !g.is_zero()) {
        const auto top = poly::homogeneous_top(g);
        bool all = true;
        for (auto d : space.directions())
            if (top.evaluate(space.point(d)) != 0) all = false;
        out.top_form_vanishes_on_directions = all;
    }
    return out;
}

PointSet witness_union(const AffineSpace& space, const KakeyaWitness& witness) {
    PointSet s = PointSet::of(space);
    for (const auto& l : witness.lines)
        for (auto x : space.points_of(l)) s.insert(x);
    return s;
}

PipelineReport fractional_pipeline(const AffineSpace& space, const PointSet& set, const KakeyaWitness& witness,
                                   const FractionalParams& params, std::uint64_t seed, const PipelineOptions& opts) {
    params.validate();
    if (params.q != space.q() || space.n() != 3) throw Error(Errc::mismatched_field, "parameters do not match the space");
    PipelineReport rep;
    rep.params = params;
    rep.seed = seed;
    const auto m = params.m();
    rep.m_approx = m.approx();
    rep.max_total_degree = params.max_total_degree();
    rep.monomials = poly::count_capped_monomials_upto(3, params.q, rep.max_total_degree);
    rep.set_size = set.size();

    const std::int64_t k = static_cast<std::int64_t>(set.size());
    const std::int64_t low = binomial(2 + params.u, 3), high = binomial(3 + params.u, 3);
    const Rational& a = params.alpha;
    // (alpha + delta alpha) low |K| + (1 - alpha + delta alpha) high |K|
    const CubeRootSurd rhs((a * low + (1 - a) * high) * k, a * (low + high) * k, params.q);
    rep.regime_rhs = rhs.approx();
    if (!opts.force_past_counting && rhs.compare(Rational(rep.monomials)) >= 0) {
        rep.stage = PipelineStage::counting_not_in_paradox_regime;
        rep.detail = "N_q(3,m) = " + std::to_string(rep.monomials) + " does not exceed the constraint bound";
        return rep;
    }

    PointSet subset = PointSet::of(space);
    if (a > 0) {
        try {
            auto sample = sample_fractional_subset(space, set, witness, a, seed, {opts.retry_cap, false});
            subset = std::move(sample.subset);
            rep.sample_attempts = sample.attempts;
        } catch (const Error& e) {
            if (e.code() != Errc::retry_exhausted) throw;
            rep.stage = PipelineStage::sample_retry_exhausted;
            rep.detail = e.what();
            return rep;
        }
    }
    rep.subset_size = subset.size();

    PointSet rest = PointSet::of(space);
    for (auto x : set.members())
        if (!subset.contains(x)) rest.insert(x);
    rep.constraints = static_cast<std::int64_t>(subset.size()) * poly::constraints_per_point(3, params.u) +
                      static_cast<std::int64_t>(rest.size()) * poly::constraints_per_point(3, params.u + 1);

    const auto field = space.field();
    const auto basis = poly::MonomialBasis::capped_total(field, 3, rep.max_total_degree);
    std::optional<poly::MultiPoly> g;
    try {
        g = poly::interpolate_vanishing(subset, params.u, rest, params.u + 1, basis);
    } catch (const Error& e) {
        if (e.code() != Errc::infeasible_count) throw;
        rep.stage = PipelineStage::interpolation_infeasible;
        rep.detail = e.what();
        return rep;
    }
    rep.degree = g->degree();

    const auto analysis = analyze_restrictions(space, *g, witness, subset, params.u);
    if (analysis.first_shortfall) {
        rep.stage = PipelineStage::restriction_shortfall;
        rep.shortfall = analysis.first_shortfall;
        rep.detail = "restriction of degree " + std::to_string(analysis.first_shortfall->restriction_degree) + " with " +
                     std::to_string(analysis.first_shortfall->guaranteed_zeros) + " imposed zeros";
        return rep;
    }
    if (!analysis.top_form_vanishes_on_directions)
        throw Error(Errc::internal, "all restrictions vanish but the top form does not");
    // A nonzero top form vanishing on every direction vanishes on all of F_q^3; the zero test
    // reports that disagreement as an internal error.
    poly::is_identically_zero_on_space(poly::homogeneous_top(*g));
    rep.stage = PipelineStage::top_form_vanishes;
    rep.detail = "top homogeneous part vanishes on every direction";
    return rep;
}

PipelineReport fractional_pipeline(const FractionalParams& params, std::uint64_t seed, const PipelineOptions& opts) {
    params.validate();
    const AffineSpace space(gf::Field::of_order(params.q), 3);
    const auto set = build_quadratic_residue_set(space);
    const auto check = verify_kakeya(space, set);
    if (!check.is_kakeya) throw Error(Errc::internal, "quadratic residue set failed verification");
    return fractional_pipeline(space, set, check.witness, params, seed, opts);
}

// ---------------------------------------------------------------------------

double fractional_coefficient_u1(double m) { return (-2 * m * m * m + 9 * m * m - 9 * m + 3) / (6 * (3 * m - 2)); }

double fractional_coefficient_u2(double m) {
    const double s = 3 - m;
    return (1 - s * s * s / 6) / (6 * m - 8);
}

namespace {

template <class Fn>
double golden_max(Fn&& fn, double lo, double hi) {
    const double r = (std::sqrt(5.0) - 1) / 2;
    double a = lo, b = hi;
    double c = b - r * (b - a), d = a + r * (b - a);
    for (int i = 0; i < 200 && b - a > 1e-13; ++i) {
        if (fn(c) >= fn(d)) {
            b = d;
        } else {
            a = c;
        }
        c = b - r * (b - a);
        d = a + r * (b - a);
    }
    const double mid = (a + b) / 2;
    if (fn(lo) >= fn(mid) && fn(lo) >= fn(hi)) return lo;
    if (fn(hi) >= fn(mid)) return hi;
    return mid;
}

}  // namespace

FractionalOptimum optimize_fractional_bound() {
    FractionalOptimum out;
    // d/dm of the u = 1 coefficient vanishes where (m - 1)(4m^2 - 9m + 3) = 0
    out.m_star = (9 + std::sqrt(33.0)) / 8;
    out.coefficient = fractional_coefficient_u1(out.m_star);
    out.branch = 1;
    out.u2_best_m = golden_max(fractional_coefficient_u2, 2.0, 3.0);
    out.u2_best_coefficient = fractional_coefficient_u2(out.u2_best_m);
    if (out.u2_best_coefficient > out.coefficient) {
        out.m_star = out.u2_best_m;
        out.coefficient = out.u2_best_coefficient;
        out.branch = 2;
    }
    if (!(out.coefficient > 5.0 / 24)) throw Error(Errc::internal, "fractional optimum does not beat 5/24");
    return out;
}

Rational leading_term_Nq3(const Rational& m) {
    if (m < 1 || m > 2) throw Error(Errc::out_of_range, "leading term formula holds for m in [1, 2]");
    return (m * m * m * -2 + m * m * 9 - m * 9 + 3) / 6;
}

}  // namespace ffgeom::kakeya

#include "ffgeom/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ffgeom/error.hpp"
#include "ffgeom/parallel.hpp"

namespace ffgeom::hermitian {

HermitianMatrix HermitianMatrix::identity(unsigned n) {
    HermitianMatrix m;
    m.n = n;
    for (unsigned i = 0; i <= n; ++i) m.h[i][i] = 1;
    return m;
}

HermitianMatrix HermitianMatrix::random(const Field& f, unsigned n, Rng& rng) {
    if (f.k() != 2) throw Error(Errc::non_square_field, "Hermitian matrices need GF(p^2)");
    HermitianMatrix m;
    m.n = n;
    for (unsigned i = 0; i <= n; ++i) {
        m.h[i][i] = static_cast<Elem>(rng.below(f.p()));   // prime subfield = fixed field
        for (unsigned j = i + 1; j <= n; ++j) {
            m.h[i][j] = static_cast<Elem>(rng.below(f.q()));
            m.h[j][i] = f.conjugate(m.h[i][j]);
        }
    }
    return m;
}

bool is_hermitian(const Field& f, const HermitianMatrix& m) {
    for (unsigned i = 0; i <= m.n; ++i)
        for (unsigned j = 0; j <= m.n; ++j)
            if (m.h[i][j] != f.conjugate(m.h[j][i])) return false;
    return true;
}

unsigned matrix_rank(const Field& f, const HermitianMatrix& m) {
    auto a = m.h;
    const unsigned size = m.n + 1;
    unsigned rank = 0;
    for (unsigned col = 0; col < size && rank < size; ++col) {
        unsigned piv = rank;
        while (piv < size && a[piv][col] == 0) ++piv;
        if (piv == size) continue;
        std::swap(a[piv], a[rank]);
        const Elem s = f.inv(a[rank][col]);
        for (unsigned k = 0; k < size; ++k) a[rank][k] = f.mul(s, a[rank][k]);
        for (unsigned r = 0; r < size; ++r) {
            if (r == rank || a[r][col] == 0) continue;
            const Elem factor = a[r][col];
            for (unsigned k = 0; k < size; ++k) a[r][k] = f.sub(a[r][k], f.mul(factor, a[rank][k]));
        }
        ++rank;
    }
    return rank;
}

Elem sesquilinear(const Field& f, const HermitianMatrix& m, const ProjPoint& x, const ProjPoint& y) {
    Elem total = 0;
    for (unsigned i = 0; i <= m.n; ++i) {
        if (x[i] == 0) continue;
        Elem row = 0;
        for (unsigned j = 0; j <= m.n; ++j) row = f.add(row, f.mul(m.h[i][j], f.conjugate(y[j])));
        total = f.add(total, f.mul(x[i], row));
    }
    return total;
}

HermitianVariety::HermitianVariety(const Field& field, const HermitianMatrix& m)
    : space_(field, m.n), matrix_(m) {
    if (field.k() != 2) throw Error(Errc::non_square_field, "Hermitian varieties need q = p^2");
    if (m.n < 1 || m.n > 3) throw Error(Errc::out_of_range, "dimension must be 1..3");
    if (!is_hermitian(field, m)) throw Error(Errc::not_hermitian, "matrix is not conjugate-symmetric");
    rank_ = matrix_rank(field, m);
    member_.assign(space_.num_points(), false);
    for (std::uint32_t i = 0; i < space_.num_points(); ++i) {
        const auto x = space_.point(i);
        if (sesquilinear(field, m, x, x) == 0) {
            member_[i] = true;
            points_.push_back(i);
        }
        bool singular = true;
        for (unsigned j = 0; j <= m.n && singular; ++j) {
            Elem s = 0;
            for (unsigned k = 0; k <= m.n; ++k) s = field.add(s, field.mul(x[k], m.h[k][j]));
            singular = s == 0;
        }
        if (singular) singular_.push_back(i);
    }
}

bool HermitianVariety::satisfies(const ProjPoint& x) const { return sesquilinear(field(), matrix_, x, x) == 0; }

namespace {

std::int64_t ipow(std::int64_t b, int e) {
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

std::int64_t isqrt_exact(std::int64_t q) {
    auto s = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(q))));
    while (s * s > q) --s;
    while ((s + 1) * (s + 1) <= q) ++s;
    if (s * s != q) throw Error(Errc::non_square_field, "q must be a square");
    return s;
}

}  // namespace

std::int64_t phi(int n, std::int64_t q) {
    if (n < 0) throw Error(Errc::out_of_range, "n must be nonnegative");
    const std::int64_t s = isqrt_exact(q);
    const std::int64_t sign1 = (n + 1) % 2 == 0 ? 1 : -1;   // (-1)^(n+1)
    const std::int64_t sign2 = n % 2 == 0 ? 1 : -1;         // (-1)^n
    // q^(n/2) = s^n
    return (ipow(s, n + 1) - sign1) * (ipow(s, n) - sign2) / (q - 1);
}

std::int64_t degenerate_count(int n, std::int64_t q, int r) {
    if (r < 1 || r > n + 1) throw Error(Errc::out_of_range, "rank must lie in 1..n+1");
    const std::int64_t big = ipow(q, n - r + 1) - 1;
    const std::int64_t inner = phi(r - 1, q);
    return big * inner + big / (q - 1) + inner;
}

const char* line_class_name(LineClass c) {
    switch (c) {
    case LineClass::tangent: return "tangent";
    case LineClass::secant: return "secant";
    case LineClass::contained: return "contained";
    }
    return "unknown";
}

LineIntersection classify_line(const HermitianVariety& v, const ProjLine& l) {
    std::uint32_t size = 0;
    for (auto x : v.space().points_on(l)) size += v.contains(x);
    const std::uint32_t q = v.field().q(), s = v.root_q();
    if (size == 1) return {LineClass::tangent, size};
    if (size == s + 1) return {LineClass::secant, size};
    if (size == q + 1) return {LineClass::contained, size};
    throw Error(Errc::internal, "line meets the variety in " + std::to_string(size) + " points");
}

TangentSpace tangent_space(const HermitianVariety& v, std::uint32_t c) {
    if (!v.contains(c)) throw Error(Errc::out_of_range, "point is not on the variety");
    const auto& f = v.field();
    const auto& m = v.matrix();
    const auto cp = v.space().point(c);
    ProjPoint h{};
    for (unsigned i = 0; i <= m.n; ++i)
        for (unsigned j = 0; j <= m.n; ++j) h[i] = f.add(h[i], f.mul(m.h[i][j], f.conjugate(cp[j])));
    TangentSpace t;
    if (v.space().is_zero(h)) {
        t.whole_space = true;
        return t;
    }
    t.hyperplane = v.space().normalize(h);
    return t;
}

std::vector<ProjLine> tangent_lines_at(const HermitianVariety& v, std::uint32_t c) {
    const auto t = tangent_space(v, c);
    if (t.whole_space) throw Error(Errc::out_of_range, "singular point has no tangent hyperplane");
    std::vector<ProjLine> out;
    for (const auto& l : v.space().lines_through_in_hyperplane(c, t.hyperplane))
        if (classify_line(v, l).kind == LineClass::tangent) out.push_back(l);
    return out;
}

TangentSection analyze_tangent_section(const HermitianVariety& v, std::uint32_t c) {
    if (v.n() != 3) throw Error(Errc::out_of_range, "tangent sections are analyzed for surfaces in PG(3,q)");
    const auto t = tangent_space(v, c);
    if (t.whole_space) throw Error(Errc::out_of_range, "singular point has no tangent hyperplane");
    const auto& pg = v.space();
    TangentSection s;
    std::set<std::uint32_t> section;
    for (auto x : pg.points_on_hyperplane(t.hyperplane))
        if (v.contains(x)) section.insert(x);
    s.points = static_cast<std::uint32_t>(section.size());

    std::vector<std::uint32_t> hits(pg.num_points(), 0);
    for (const auto& l : pg.lines_through_in_hyperplane(c, t.hyperplane)) {
        ++s.lines_through;
        const auto k = classify_line(v, l);
        if (k.kind == LineClass::contained) {
            ++s.contained;
            for (auto x : pg.points_on(l)) ++hits[x];
        } else if (k.kind == LineClass::tangent) {
            ++s.tangent;
        }
    }
    bool ok = hits[c] == s.contained;
    for (auto x : section)
        if (x != c && hits[x] != 1) ok = false;
    std::uint32_t covered = 0;
    for (std::uint32_t x = 0; x < pg.num_points(); ++x) covered += hits[x] > 0;
    s.concurrent_lines = ok && covered == section.size() && s.contained == v.root_q() + 1;
    return s;
}

std::optional<geom::Line> to_affine(const geom::AffineSpace& space, const ProjectiveSpace& pg, const ProjLine& l) {
    std::vector<geom::PointIndex> affine;
    for (auto x : pg.points_on(l)) {
        const auto p = pg.point(x);
        if (p[0] == 0) continue;   // normalized, so p[0] == 1 here
        affine.push_back(space.index({p[1], p[2], p[3]}));
        if (affine.size() == 2) break;
    }
    if (affine.size() < 2) return std::nullopt;
    return space.line_through_points(affine[0], affine[1]);
}

TangentLineFamily build_tangent_line_family(const HermitianVariety& v, const Rational& alpha, std::uint64_t seed) {
    if (alpha <= 0 || alpha > 1) throw Error(Errc::alpha_out_of_range, "alpha must lie in (0, 1]");
    if (v.n() != 3 || !v.non_degenerate()) throw Error(Errc::out_of_range, "needs a non-degenerate surface in PG(3,q)");
    const auto& pg = v.space();
    const auto& f = v.field();
    TangentLineFamily fam;
    fam.alpha = alpha;
    fam.seed = seed;

    std::vector<std::uint32_t> pts = v.points();
    Rng rng(seed, 0x4e);
    rng.shuffle(pts);
    const auto take = static_cast<std::size_t>(floor_of(alpha * static_cast<std::int64_t>(pts.size())));
    fam.chosen.assign(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(take));

    std::vector<std::vector<ProjLine>> per_point(fam.chosen.size());
    parallel_for(fam.chosen.size(), [&](std::size_t i) { per_point[i] = tangent_lines_at(v, fam.chosen[i]); });
    for (auto& ls : per_point) fam.lines.insert(fam.lines.end(), ls.begin(), ls.end());

    auto& rep = fam.report;
    rep.variety_points = v.points().size();
    rep.chosen_points = fam.chosen.size();
    rep.lines = fam.lines.size();
    std::set<ProjLine> distinct(fam.lines.begin(), fam.lines.end());
    rep.lines_distinct = distinct.size() == fam.lines.size();
    if (!rep.lines_distinct) throw Error(Errc::internal, "a line is tangent at two points");

    std::vector<bool> covered(pg.num_points(), false);
    rep.lines_meet_variety_once = true;
    for (const auto& l : fam.lines) {
        std::uint32_t on_v = 0;
        for (auto x : pg.points_on(l)) {
            covered[x] = true;
            on_v += v.contains(x);
        }
        if (on_v != 1) rep.lines_meet_variety_once = false;
    }
    rep.projective_covered = static_cast<std::uint64_t>(std::count(covered.begin(), covered.end(), true));
    std::vector<bool> chosen(pg.num_points(), false);
    for (auto c : fam.chosen) chosen[c] = true;
    rep.outside_points_uncovered = true;
    for (auto x : v.points()) {
        if (chosen[x]) continue;
        ++rep.variety_points_outside_p;
        if (covered[x]) rep.outside_points_uncovered = false;
    }

    const geom::AffineSpace space(f, 3);
    std::vector<geom::Line> affine;
    for (const auto& l : fam.lines)
        if (auto a = to_affine(space, pg, l)) affine.push_back(*a);
    fam.affine = geom::LineFamily(space, std::move(affine));
    rep.affine_lines = fam.affine.size();
    geom::PointSet cov = geom::PointSet::of(space);
    for (const auto& l : fam.affine)
        for (auto x : space.points_of(l)) cov.insert(x);
    rep.affine_covered = cov.size();
    rep.max_plane_occupancy = fam.affine.empty() ? 0 : fam.affine.max_occupancy(space).second;
    rep.occupancy_reference = to_double(alpha) * std::pow(static_cast<double>(f.q()), 1.5);
    return fam;
}

}  // namespace ffgeom::hermitian

#include "ffgeom/incidence.hpp"

#include <cmath>
#include <numeric>
#include <set>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <boost/multiprecision/cpp_int.hpp>

#include "ffgeom/error.hpp"
#include "ffgeom/parallel.hpp"

namespace ffgeom::incidence {

using boost::multiprecision::cpp_int;
using geom::Line;
using geom::PointIndex;

IncidenceStats count_incidences(const AffineSpace& space, const PointSet& points, const LineFamily& lines) {
    if (points.q() != space.q() || lines.q() != space.q() || points.n() != space.n() || lines.n() != space.n())
        throw Error(Errc::mismatched_field, "points, lines and space must share q and n");
    const auto& ls = lines.lines();
    std::vector<std::uint64_t> per_line(ls.size(), 0);
    parallel_for(ls.size(), [&](std::size_t i) {
        for (auto x : space.points_of(ls[i])) per_line[i] += points.contains(x);
    });
    IncidenceStats s;
    s.q = space.q();
    s.points = points.size();
    s.lines = ls.size();
    s.incidences = std::accumulate(per_line.begin(), per_line.end(), std::uint64_t{0});
    return s;
}

SpectrumReport incidence_spectrum(std::uint32_t q, bool numeric) {
    SpectrumReport r;
    r.q = q;
    const double qd = q;
    r.point_degree = static_cast<std::uint64_t>(q) * q + q + 1;
    r.line_degree = q;
    r.sigma1 = std::sqrt(qd * (qd * qd + qd + 1));
    r.sigma2 = std::sqrt(qd * qd + qd);
    r.lambda = r.sigma2 / r.sigma1;
    if (!numeric) return r;
    if (q > 9) throw Error(Errc::field_too_large, "numeric spectrum limited to q <= 9");

    const AffineSpace space(gf::Field::of_order(q), 3);
    const auto lines = geom::enumerate_lines(space);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(lines.size() * q);
    int col = 0;
    for (const auto& l : lines) {
        for (auto x : space.points_of(l)) trips.emplace_back(static_cast<int>(x), col, 1.0);
        ++col;
    }
    Eigen::SparseMatrix<double> n(static_cast<int>(space.num_points()), col);
    n.setFromTriplets(trips.begin(), trips.end());
    const Eigen::MatrixXd gram = Eigen::MatrixXd(n * n.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();   // ascending
    const auto count = ev.size();
    r.numeric_sigma1 = std::sqrt(std::max(0.0, ev(count - 1)));
    r.numeric_sigma2 = std::sqrt(std::max(0.0, ev(count - 2)));
    r.max_deviation = std::max(std::abs(r.numeric_sigma1 - r.sigma1), std::abs(r.numeric_sigma2 - r.sigma2));
    // every eigenvalue but the top one equals q^2 + q
    for (Eigen::Index i = 0; i + 1 < count; ++i)
        r.max_deviation = std::max(r.max_deviation, std::abs(std::sqrt(std::max(0.0, ev(i))) - r.sigma2));
    r.numeric_checked = true;
    return r;
}

GramCheck verify_gram_identity(const AffineSpace& space) {
    const std::uint64_t np = space.num_points();
    std::vector<std::uint32_t> gram(np * np, 0);
    const auto lines = geom::enumerate_lines(space);
    for (const auto& l : lines) {
        const auto pts = space.points_of(l);
        for (auto a : pts)
            for (auto b : pts) ++gram[a * np + b];
    }
    const std::uint32_t q = space.q();
    const std::uint32_t diag = q * q + q + 1;
    GramCheck c;
    c.entries = np * np;
    for (std::uint64_t a = 0; a < np; ++a)
        for (std::uint64_t b = 0; b < np; ++b)
            if (gram[a * np + b] != (a == b ? diag : 1u)) ++c.mismatches;
    c.holds = c.mismatches == 0;
    return c;
}

namespace {

struct Totals {
    cpp_int q, u, v;
};

Totals totals(std::uint32_t q) {
    const cpp_int qq = q;
    return {qq, qq * qq * qq, qq * qq * qq * qq + qq * qq * qq + qq * qq};
}

void check_sizes(std::uint64_t np, std::uint64_t nl, std::uint32_t q) {
    const auto t = totals(q);
    if (cpp_int(np) > t.u || cpp_int(nl) > t.v) throw Error(Errc::out_of_range, "more points or lines than AG(3,q) has");
}

// Sign of (U I - q P L) and whether (q^2+q+1)(U I - q P L)^2 <= q^2 (q+1) P L (U-P)(V-L).
std::pair<int, bool> discrepancy_within(std::uint64_t incidences, std::uint64_t np, std::uint64_t nl, std::uint32_t q) {
    const auto t = totals(q);
    const cpp_int p = np, l = nl;
    const cpp_int dev = t.u * cpp_int(incidences) - t.q * p * l;
    const cpp_int lhs = (t.q * t.q + t.q + 1) * dev * dev;
    const cpp_int rhs = t.q * t.q * (t.q + 1) * p * l * (t.u - p) * (t.v - l);
    return {dev > 0 ? 1 : (dev < 0 ? -1 : 0), lhs <= rhs};
}

}  // namespace

MixingBound mixing_incidence_bound(std::uint64_t np, std::uint64_t nl, std::uint32_t q) {
    check_sizes(np, nl, q);
    const double qd = q, u = qd * qd * qd, v = u * qd + u + qd * qd;
    const double p = static_cast<double>(np), l = static_cast<double>(nl);
    const double lambda = std::sqrt((qd + 1) / (qd * qd + qd + 1));
    MixingBound b;
    b.bound = (qd * p * l + qd * lambda * std::sqrt(p * l * (u - p) * (v - l))) / u;
    b.asymptotic_form = p * l / (qd * qd) + qd * std::sqrt(std::max(0.0, p * l * (1 - p / u) * (1 - l / (u * qd))));
    return b;
}

bool mixing_bound_admits(std::uint64_t incidences, std::uint64_t np, std::uint64_t nl, std::uint32_t q) {
    check_sizes(np, nl, q);
    const auto [sign, within] = discrepancy_within(incidences, np, nl, q);
    return sign <= 0 || within;
}

DiscrepancyReport mixing_discrepancy_check(const AffineSpace& space, const PointSet& points, const LineFamily& lines) {
    if (space.n() != 3) throw Error(Errc::out_of_range, "mixing check is for AG(3,q)");
    DiscrepancyReport r;
    r.stats = count_incidences(space, points, lines);
    const double qd = space.q(), u = qd * qd * qd, v = u * qd + u + qd * qd;
    const double a = static_cast<double>(r.stats.points) / u, b = static_cast<double>(r.stats.lines) / v;
    const double lambda = std::sqrt((qd + 1) / (qd * qd + qd + 1));
    r.lhs = std::abs(static_cast<double>(r.stats.incidences) / (qd * v) - a * b);
    r.rhs = lambda * std::sqrt(a * b * (1 - a) * (1 - b));
    r.holds = discrepancy_within(r.stats.incidences, r.stats.points, r.stats.lines, space.q()).second;
    return r;
}

namespace {

CoverReport cover_report(std::uint32_t q, std::size_t count, std::uint64_t covered, std::uint64_t universe, const char* what) {
    CoverReport r;
    r.q = q;
    r.count = count;
    r.k = Rational(static_cast<std::int64_t>(count), q);
    if (r.k <= 1) throw Error(Errc::too_few_planes, std::string("need more than q ") + what);
    r.covered = covered;
    const Rational km1 = r.k - 1;
    r.bound = Rational(static_cast<std::int64_t>(universe)) * km1 * km1 / (r.k * r.k - r.k + 1);
    r.holds = Rational(static_cast<std::int64_t>(covered)) >= r.bound;
    return r;
}

}  // namespace

CoverReport cover_fraction_check(const AffineSpace& space, const std::vector<Plane>& planes) {
    if (space.n() != 3) throw Error(Errc::out_of_range, "plane covering is for AG(3,q)");
    std::set<Plane> distinct(planes.begin(), planes.end());
    PointSet cov = PointSet::of(space);
    for (const auto& pl : distinct)
        for (auto x : space.points_of(pl)) cov.insert(x);
    return cover_report(space.q(), distinct.size(), cov.size(), space.num_points(), "planes");
}

CoverReport cover_fraction_check(const AffineSpace& plane, const LineFamily& lines) {
    if (plane.n() != 2 || lines.n() != 2) throw Error(Errc::out_of_range, "line covering is for AG(2,q)");
    PointSet cov = PointSet::of(plane);
    for (const auto& l : lines)
        for (auto x : plane.points_of(l)) cov.insert(x);
    return cover_report(plane.q(), lines.size(), cov.size(), plane.num_points(), "lines");
}

namespace {

void fill_random_planes(const AffineSpace& space, std::size_t count, Rng& rng, std::vector<Plane>& out) {
    if (count > space.num_planes()) throw Error(Errc::out_of_range, "more planes requested than exist");
    std::set<std::uint32_t> taken;
    for (const auto& pl : out) taken.insert(space.plane_index(pl));
    std::vector<std::uint32_t> pool;
    for (std::uint32_t i = 0; i < space.num_planes(); ++i)
        if (!taken.count(i)) pool.push_back(i);
    rng.shuffle(pool);
    for (std::size_t i = 0; out.size() < count; ++i) out.push_back(space.plane(pool[i]));
}

}  // namespace

std::vector<Plane> random_planes(const AffineSpace& space, std::size_t count, Rng& rng) {
    std::vector<Plane> out;
    fill_random_planes(space, count, rng, out);
    return out;
}

std::vector<Plane> point_pencil_planes(const AffineSpace& space, std::size_t count, PointIndex center, Rng& rng) {
    std::vector<Plane> out;
    const auto c = space.point(center);
    for (auto normal : space.directions()) {
        if (out.size() == count) break;
        out.push_back({normal, space.dot(space.point(normal), c)});
    }
    fill_random_planes(space, count, rng, out);
    return out;
}

std::vector<Plane> line_pencil_planes(const AffineSpace& space, std::size_t count, const Line& axis, Rng& rng) {
    std::vector<Plane> out;
    for (const auto& pl : space.planes_containing(axis)) {
        if (out.size() == count) break;
        out.push_back(pl);
    }
    fill_random_planes(space, count, rng, out);
    return out;
}

std::vector<Plane> parallel_class_planes(const AffineSpace& space, std::size_t count) {
    if (count > space.num_planes()) throw Error(Errc::out_of_range, "more planes requested than exist");
    std::vector<Plane> out;
    for (std::uint32_t i = 0; i < count; ++i) out.push_back(space.plane(i));
    return out;
}

std::vector<Plane> make_planes(const AffineSpace& space, const std::string& generator, std::size_t count, Rng& rng) {
    if (generator == "random") return random_planes(space, count, rng);
    if (generator == "point-pencil") return point_pencil_planes(space, count, 0, rng);
    if (generator == "line-pencil") return line_pencil_planes(space, count, space.canonical(0, space.directions().front()), rng);
    if (generator == "parallel") return parallel_class_planes(space, count);
    throw Error(Errc::parse_error, "unknown plane generator '" + generator + "'");
}

LineFamily random_lines(const AffineSpace& space, std::size_t count, Rng& rng) {
    auto all = geom::enumerate_lines(space).lines();
    if (count > all.size()) throw Error(Errc::out_of_range, "more lines requested than exist");
    for (std::size_t i = 0; i < count; ++i) std::swap(all[i], all[i + rng.below(all.size() - i)]);
    all.resize(count);
    return LineFamily(space, std::move(all));
}

LineFamily point_pencil_lines(const AffineSpace& space, std::size_t count, PointIndex center, Rng& rng) {
    std::vector<Line> out;
    for (const auto& l : space.lines_through(center)) {
        if (out.size() == count) break;
        out.push_back(l);
    }
    if (out.size() < count) {
        auto all = geom::enumerate_lines(space).lines();
        std::erase_if(all, [&](const Line& l) { return space.contains(l, center); });
        rng.shuffle(all);
        for (std::size_t i = 0; out.size() < count; ++i) {
            if (i >= all.size()) throw Error(Errc::out_of_range, "more lines requested than exist");
            out.push_back(all[i]);
        }
    }
    return LineFamily(space, std::move(out));
}

LineFamily parallel_class_lines(const AffineSpace& space, std::size_t count) {
    std::vector<Line> out;
    for (auto dir : space.directions())
        for (const auto& l : space.lines_in_direction(dir)) {
            if (out.size() == count) return LineFamily(space, std::move(out));
            out.push_back(l);
        }
    if (out.size() < count) throw Error(Errc::out_of_range, "more lines requested than exist");
    return LineFamily(space, std::move(out));
}

}  // namespace ffgeom::incidence

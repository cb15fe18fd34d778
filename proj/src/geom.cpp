#include "ffgeom/geom.hpp"

#include <algorithm>
#include <string>

#include "ffgeom/error.hpp"

namespace ffgeom::geom {

AffineSpace::AffineSpace(Field field, unsigned n) : field_(std::move(field)), n_(n), q_(field_.q()) {
    if (n != 2 && n != 3) throw Error(Errc::out_of_range, "affine dimension must be 2 or 3, got " + std::to_string(n));
    std::uint64_t total = 1;
    for (unsigned i = 0; i < n; ++i) total *= q_;
    if (total > (std::uint64_t{1} << 31)) throw Error(Errc::unsupported_field, "AG(" + std::to_string(n) + "," + std::to_string(q_) + ") too large");
    num_points_ = static_cast<std::uint32_t>(total);

    direction_ordinal_.assign(num_points_, UINT32_MAX);
    for (PointIndex i = 1; i < num_points_; ++i) {
        const Point x = point(i);
        unsigned j = 0;
        while (x[j] == 0) ++j;
        if (x[j] == 1) {
            direction_ordinal_[i] = static_cast<std::uint32_t>(directions_.size());
            directions_.push_back(i);
        }
    }
}

Point AffineSpace::point(PointIndex i) const {
    Point x{0, 0, 0};
    for (unsigned c = n_; c-- > 0;) {
        x[c] = i % q_;
        i /= q_;
    }
    return x;
}

PointIndex AffineSpace::index(const Point& x) const {
    PointIndex i = 0;
    for (unsigned c = 0; c < n_; ++c) i = i * q_ + x[c];
    return i;
}

Point AffineSpace::add(const Point& a, const Point& b) const {
    Point r{0, 0, 0};
    for (unsigned c = 0; c < n_; ++c) r[c] = field_.add(a[c], b[c]);
    return r;
}

Point AffineSpace::scale(Elem s, const Point& a) const {
    Point r{0, 0, 0};
    for (unsigned c = 0; c < n_; ++c) r[c] = field_.mul(s, a[c]);
    return r;
}

Elem AffineSpace::dot(const Point& a, const Point& b) const {
    Elem r = 0;
    for (unsigned c = 0; c < n_; ++c) r = field_.add(r, field_.mul(a[c], b[c]));
    return r;
}

std::uint32_t AffineSpace::direction_ordinal(PointIndex dir) const {
    if (dir >= num_points_ || direction_ordinal_[dir] == UINT32_MAX)
        throw Error(Errc::out_of_range, "point " + std::to_string(dir) + " is not a normalized direction");
    return direction_ordinal_[dir];
}

PointIndex AffineSpace::normalize_direction(const Point& v) const {
    unsigned j = 0;
    while (j < n_ && v[j] == 0) ++j;
    if (j == n_) throw Error(Errc::out_of_range, "zero vector has no direction");
    return index(scale(field_.inv(v[j]), v));
}

unsigned AffineSpace::pivot(PointIndex dir) const {
    const Point d = point(dir);
    unsigned j = 0;
    while (j < n_ && d[j] == 0) ++j;
    return j;
}

Line AffineSpace::canonical(PointIndex any_point, PointIndex dir) const {
    const Point d = point(dir);
    const Point x = point(any_point);
    const unsigned j = pivot(dir);
    // the least point on the line is the one whose pivot coordinate vanishes
    return Line{index(add(x, scale(field_.neg(x[j]), d))), dir};
}

Line AffineSpace::line_through_points(PointIndex a, PointIndex b) const {
    if (a == b) throw Error(Errc::out_of_range, "two distinct points needed");
    const Point pa = point(a), pb = point(b);
    Point diff{0, 0, 0};
    for (unsigned c = 0; c < n_; ++c) diff[c] = field_.sub(pb[c], pa[c]);
    return canonical(a, normalize_direction(diff));
}

PointIndex AffineSpace::point_on(const Line& l, Elem t) const {
    return index(add(point(l.base), scale(t, point(l.dir))));
}

std::vector<PointIndex> AffineSpace::points_of(const Line& l) const {
    std::vector<PointIndex> out;
    out.reserve(q_);
    const Point b = point(l.base), d = point(l.dir);
    for (Elem t = 0; t < q_; ++t) out.push_back(index(add(b, scale(t, d))));
    return out;
}

bool AffineSpace::contains(const Line& l, PointIndex x) const { return canonical(x, l.dir) == l; }

std::vector<Line> AffineSpace::lines_in_direction(PointIndex dir) const {
    const unsigned j = pivot(dir);
    std::vector<Line> out;
    out.reserve(num_points_ / q_);
    for (PointIndex x = 0; x < num_points_; ++x)
        if (point(x)[j] == 0) out.push_back(Line{x, dir});
    return out;
}

std::vector<Line> AffineSpace::lines_through(PointIndex x) const {
    std::vector<Line> out;
    out.reserve(directions_.size());
    for (auto d : directions_) out.push_back(canonical(x, d));
    return out;
}

std::uint32_t AffineSpace::plane_index(const Plane& pl) const {
    return direction_ordinal(pl.normal) * q_ + pl.offset;
}

Plane AffineSpace::plane(std::uint32_t index) const {
    return Plane{directions_.at(index / q_), index % q_};
}

bool AffineSpace::on_plane(const Plane& pl, PointIndex x) const {
    return dot(point(pl.normal), point(x)) == pl.offset;
}

bool AffineSpace::line_in_plane(const Line& l, const Plane& pl) const {
    const Point nrm = point(pl.normal);
    return dot(nrm, point(l.dir)) == 0 && dot(nrm, point(l.base)) == pl.offset;
}

std::vector<PointIndex> AffineSpace::normals_orthogonal_to(PointIndex dir) const {
    if (n_ != 3) throw Error(Errc::out_of_range, "planes need n = 3");
    const Point d = point(dir);
    const unsigned j = pivot(dir);
    Point u{0, 0, 0}, v{0, 0, 0};
    unsigned others[2];
    for (unsigned c = 0, k = 0; c < 3; ++c)
        if (c != j) others[k++] = c;
    u[others[0]] = 1;
    u[j] = field_.neg(d[others[0]]);
    v[others[1]] = 1;
    v[j] = field_.neg(d[others[1]]);
    std::vector<PointIndex> out;
    out.reserve(q_ + 1);
    out.push_back(normalize_direction(v));
    for (Elem t = 0; t < q_; ++t) out.push_back(normalize_direction(add(u, scale(t, v))));
    return out;
}

std::vector<Plane> AffineSpace::planes_containing(const Line& l) const {
    const Point b = point(l.base);
    std::vector<Plane> out;
    for (auto nrm : normals_orthogonal_to(l.dir)) out.push_back(Plane{nrm, dot(point(nrm), b)});
    return out;
}

std::vector<PointIndex> AffineSpace::points_of(const Plane& pl) const {
    std::vector<PointIndex> out;
    out.reserve(static_cast<std::size_t>(q_) * q_);
    for (PointIndex x = 0; x < num_points_; ++x)
        if (on_plane(pl, x)) out.push_back(x);
    return out;
}

// ---------------------------------------------------------------------------

PointSet::PointSet(std::uint32_t q, unsigned n) : q_(q), n_(n) {
    std::uint64_t u = 1;
    for (unsigned i = 0; i < n; ++i) u *= q;
    universe_ = static_cast<std::uint32_t>(u);
    words_.assign((universe_ + 63) / 64, 0);
}

PointSet PointSet::full(std::uint32_t q, unsigned n) {
    PointSet s(q, n);
    for (PointIndex x = 0; x < s.universe_; ++x) s.insert(x);
    return s;
}

bool PointSet::insert(PointIndex x) {
    if (x >= universe_) throw Error(Errc::out_of_range, "point index " + std::to_string(x));
    auto& w = words_[x >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (x & 63);
    if (w & bit) return false;
    w |= bit;
    ++count_;
    return true;
}

bool PointSet::erase(PointIndex x) {
    if (x >= universe_) throw Error(Errc::out_of_range, "point index " + std::to_string(x));
    auto& w = words_[x >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (x & 63);
    if (!(w & bit)) return false;
    w &= ~bit;
    --count_;
    return true;
}

std::vector<PointIndex> PointSet::members() const {
    std::vector<PointIndex> out;
    out.reserve(count_);
    for (PointIndex x = 0; x < universe_; ++x)
        if (contains(x)) out.push_back(x);
    return out;
}

PointSet PointSet::complement() const {
    PointSet c(q_, n_);
    for (PointIndex x = 0; x < universe_; ++x)
        if (!contains(x)) c.insert(x);
    return c;
}

std::size_t PointSet::popcount() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
}

// ---------------------------------------------------------------------------

LineFamily::LineFamily(std::uint32_t q, unsigned n) : q_(q), n_(n) {
    if (n == 3) occupancy_.assign(static_cast<std::size_t>(q * q + q + 1) * q, 0);
}

LineFamily::LineFamily(const AffineSpace& space, std::vector<Line> lines) : LineFamily(space.q(), space.n()) {
    for (auto& l : lines) l = space.canonical(l);
    std::sort(lines.begin(), lines.end());
    lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
    lines_ = std::move(lines);
    if (n_ == 3)
        for (const auto& l : lines_) bump(space, l);
}

bool LineFamily::contains(const Line& l) const { return std::binary_search(lines_.begin(), lines_.end(), l); }

bool LineFamily::insert(const AffineSpace& space, const Line& l) {
    auto it = std::lower_bound(lines_.begin(), lines_.end(), l);
    if (it != lines_.end() && *it == l) return false;
    lines_.insert(it, l);
    if (n_ == 3) bump(space, l);
    return true;
}

void LineFamily::bump(const AffineSpace& space, const Line& l) {
    for (const auto& pl : space.planes_containing(l)) ++occupancy_[space.plane_index(pl)];
}

std::uint32_t LineFamily::occupancy(const AffineSpace& space, const Plane& pl) const {
    return occupancy_.at(space.plane_index(pl));
}

std::pair<Plane, std::uint32_t> LineFamily::max_occupancy(const AffineSpace& space) const {
    if (n_ != 3) throw Error(Errc::out_of_range, "plane occupancy needs n = 3");
    std::uint32_t best = 0, best_count = 0;
    for (std::uint32_t i = 0; i < occupancy_.size(); ++i)
        if (occupancy_[i] > best_count) {
            best = i;
            best_count = occupancy_[i];
        }
    return {space.plane(best), best_count};
}

bool LineFamily::would_exceed(const AffineSpace& space, const Line& l, std::uint32_t cap) const {
    for (const auto& pl : space.planes_containing(l))
        if (occupancy_[space.plane_index(pl)] + 1 > cap) return true;
    return false;
}

std::vector<std::uint32_t> LineFamily::recount_occupancy(const AffineSpace& space) const {
    std::vector<std::uint32_t> table(space.num_planes(), 0);
    for (std::uint32_t i = 0; i < table.size(); ++i) {
        const Plane pl = space.plane(i);
        for (const auto& l : lines_)
            if (space.line_in_plane(l, pl)) ++table[i];
    }
    return table;
}

LineFamily enumerate_lines(const AffineSpace& space) {
    std::vector<Line> all;
    all.reserve(space.num_lines());
    for (auto d : space.directions()) {
        auto ls = space.lines_in_direction(d);
        all.insert(all.end(), ls.begin(), ls.end());
    }
    return LineFamily(space, std::move(all));
}

LineFamily lines_in_plane(const AffineSpace& space, const Plane& pl) {
    const auto pts = space.points_of(pl);
    std::vector<Line> out;
    for (auto d : space.normals_orthogonal_to(pl.normal)) {
        const unsigned j = space.pivot(d);
        for (auto x : pts)
            if (space.point(x)[j] == 0) out.push_back(Line{x, d});
    }
    return LineFamily(space, std::move(out));
}

}  // namespace ffgeom::geom

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <utility>
#include <vector>

#include "ffgeom/gf.hpp"

namespace ffgeom::geom {

using gf::Elem;
using gf::Field;

/// Affine coordinates; the third entry is 0 when n == 2.
using Point = std::array<Elem, 3>;
/// Lexicographic rank of a point: index(x) = x_0 q^(n-1) + ... + x_(n-1).
using PointIndex = std::uint32_t;

/// Affine line in canonical form: `dir` is the index of the direction vector scaled so that its
/// first nonzero coordinate is 1, and `base` is the lexicographically least point on the line.
struct Line {
    PointIndex base = 0;
    PointIndex dir = 0;
    auto operator<=>(const Line&) const = default;
};

/// Affine plane {x : <normal, x> = offset} of AG(3,q); `normal` is a normalized direction index.
struct Plane {
    PointIndex normal = 0;
    Elem offset = 0;
    auto operator<=>(const Plane&) const = default;
};

/// AG(n,q) for n in {2,3}: point and line enumeration, canonical forms, incidence predicates.
class AffineSpace {
public:
    AffineSpace(Field field, unsigned n);

    const Field& field() const { return field_; }
    unsigned n() const { return n_; }
    std::uint32_t q() const { return q_; }
    std::uint32_t num_points() const { return num_points_; }

    Point point(PointIndex i) const;
    PointIndex index(const Point& x) const;

    Point add(const Point& a, const Point& b) const;
    Point scale(Elem s, const Point& a) const;
    Elem dot(const Point& a, const Point& b) const;

    /// Normalized direction vectors (as point indices), ascending; (q^n - 1)/(q - 1) of them.
    const std::vector<PointIndex>& directions() const { return directions_; }
    std::uint32_t num_directions() const { return static_cast<std::uint32_t>(directions_.size()); }
    /// Position of a normalized direction in directions(); throws for non-normalized input.
    std::uint32_t direction_ordinal(PointIndex dir) const;
    /// Scales a nonzero vector so its first nonzero coordinate is 1.
    PointIndex normalize_direction(const Point& v) const;
    /// Coordinate holding the leading 1 of a normalized direction.
    unsigned pivot(PointIndex dir) const;

    std::uint64_t num_lines() const { return static_cast<std::uint64_t>(num_directions()) * (num_points_ / q_); }

    Line canonical(PointIndex any_point, PointIndex dir) const;
    Line canonical(const Line& l) const { return canonical(l.base, l.dir); }
    Line line_through_points(PointIndex a, PointIndex b) const;
    PointIndex point_on(const Line& l, Elem t) const;
    /// Points base + t dir for t = 0, 1, ..., q-1 in element order.
    std::vector<PointIndex> points_of(const Line& l) const;
    bool contains(const Line& l, PointIndex x) const;

    /// Every canonical line in the given direction, ascending by base.
    std::vector<Line> lines_in_direction(PointIndex dir) const;
    /// Every line through x, one per direction, in direction order.
    std::vector<Line> lines_through(PointIndex x) const;

    // Planes exist only for n == 3.
    std::uint32_t num_planes() const { return num_directions() * q_; }
    std::uint32_t plane_index(const Plane& pl) const;
    Plane plane(std::uint32_t index) const;
    bool on_plane(const Plane& pl, PointIndex x) const;
    bool line_in_plane(const Line& l, const Plane& pl) const;
    /// The q+1 normalized normals orthogonal to a direction, in PG(1,q) order of the pencil.
    std::vector<PointIndex> normals_orthogonal_to(PointIndex dir) const;
    /// The q+1 planes containing the line.
    std::vector<Plane> planes_containing(const Line& l) const;
    std::vector<PointIndex> points_of(const Plane& pl) const;

private:
    Field field_;
    unsigned n_;
    std::uint32_t q_;
    std::uint32_t num_points_;
    std::vector<PointIndex> directions_;
    std::vector<std::uint32_t> direction_ordinal_;
};

/// Dense membership bitmap over the points of AG(n,q) with a cached cardinality.
class PointSet {
public:
    PointSet(std::uint32_t q, unsigned n);
    static PointSet full(std::uint32_t q, unsigned n);
    static PointSet of(const AffineSpace& space) { return PointSet(space.q(), space.n()); }

    std::uint32_t q() const { return q_; }
    unsigned n() const { return n_; }
    std::uint32_t universe() const { return universe_; }
    std::size_t size() const { return count_; }
    bool empty() const { return count_ == 0; }

    bool contains(PointIndex x) const { return (words_[x >> 6] >> (x & 63)) & 1u; }
    /// Returns true when the point was newly added.
    bool insert(PointIndex x);
    bool erase(PointIndex x);

    std::vector<PointIndex> members() const;
    PointSet complement() const;
    /// Recount from the bitmap, independent of the cache.
    std::size_t popcount() const;

    bool operator==(const PointSet& o) const {
        return q_ == o.q_ && n_ == o.n_ && words_ == o.words_;
    }

private:
    std::uint32_t q_;
    unsigned n_;
    std::uint32_t universe_;
    std::size_t count_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Duplicate-free sorted set of canonical lines. For n == 3 it also tracks, for every plane,
/// how many member lines lie in it.
class LineFamily {
public:
    LineFamily(std::uint32_t q, unsigned n);
    /// Canonicalizes, sorts and drops duplicates.
    LineFamily(const AffineSpace& space, std::vector<Line> lines);

    std::uint32_t q() const { return q_; }
    unsigned n() const { return n_; }
    std::size_t size() const { return lines_.size(); }
    bool empty() const { return lines_.empty(); }
    const std::vector<Line>& lines() const { return lines_; }
    auto begin() const { return lines_.begin(); }
    auto end() const { return lines_.end(); }

    bool contains(const Line& l) const;
    /// Adds a canonical line; returns false if it was already present.
    bool insert(const AffineSpace& space, const Line& l);

    /// Number of member lines inside the plane (n == 3).
    std::uint32_t occupancy(const AffineSpace& space, const Plane& pl) const;
    const std::vector<std::uint32_t>& occupancy_table() const { return occupancy_; }
    /// Fullest plane and its count; the lowest plane index wins ties.
    std::pair<Plane, std::uint32_t> max_occupancy(const AffineSpace& space) const;
    /// True if adding the line would put more than `cap` members in some plane.
    bool would_exceed(const AffineSpace& space, const Line& l, std::uint32_t cap) const;
    /// Rebuilds the table from scratch for consistency checks.
    std::vector<std::uint32_t> recount_occupancy(const AffineSpace& space) const;

    bool operator==(const LineFamily& o) const { return q_ == o.q_ && n_ == o.n_ && lines_ == o.lines_; }

private:
    void bump(const AffineSpace& space, const Line& l);

    std::uint32_t q_;
    unsigned n_;
    std::vector<Line> lines_;
    std::vector<std::uint32_t> occupancy_;
};

/// All affine lines of AG(n,q) in canonical order.
LineFamily enumerate_lines(const AffineSpace& space);
/// The q(q+1) lines contained in a plane of AG(3,q).
LineFamily lines_in_plane(const AffineSpace& space, const Plane& pl);

}  // namespace ffgeom::geom

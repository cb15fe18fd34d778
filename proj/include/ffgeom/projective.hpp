#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <utility>
#include <vector>

#include "ffgeom/geom.hpp"
#include "ffgeom/gf.hpp"

namespace ffgeom::geom {

/// Homogeneous coordinates (x_0 : ... : x_n); unused trailing entries are 0.
using ProjPoint = std::array<Elem, 4>;

/// Projective line stored as the reduced row echelon basis of its 2-dimensional span.
struct ProjLine {
    ProjPoint first{};   // pivot row with the smaller pivot column
    ProjPoint second{};  // pivot row with the larger pivot column
    auto operator<=>(const ProjLine&) const = default;
};

/// PG(n,q) for 1 <= n <= 3. Points are normalized so the first nonzero coordinate is 1 and are
/// indexed in lexicographic order of their normalized coordinates.
class ProjectiveSpace {
public:
    ProjectiveSpace(Field field, unsigned n);

    const Field& field() const { return field_; }
    unsigned n() const { return n_; }
    std::uint32_t q() const { return field_.q(); }
    std::uint32_t num_points() const { return num_points_; }

    ProjPoint point(std::uint32_t index) const;
    /// Index of the point spanned by a nonzero vector (any scaling).
    std::uint32_t index(const ProjPoint& x) const;
    ProjPoint normalize(const ProjPoint& x) const;
    bool is_zero(const ProjPoint& x) const;
    Elem dot(const ProjPoint& a, const ProjPoint& b) const;
    ProjPoint add(const ProjPoint& a, const ProjPoint& b) const;
    ProjPoint scale(Elem s, const ProjPoint& a) const;

    /// Line through two distinct points.
    ProjLine line_through(std::uint32_t a, std::uint32_t b) const;
    /// The q+1 point indices of a line in pencil order: second, first + t second.
    std::vector<std::uint32_t> points_on(const ProjLine& l) const;
    /// Every line of PG(n,q) (n >= 2), in echelon enumeration order.
    std::vector<ProjLine> lines() const;
    std::uint64_t num_lines() const;

    /// Points x with <h, x> = 0, ascending.
    std::vector<std::uint32_t> points_on_hyperplane(const ProjPoint& h) const;
    /// Lines through point c lying in the hyperplane <h, x> = 0 (requires <h, c> = 0).
    std::vector<ProjLine> lines_through_in_hyperplane(std::uint32_t c, const ProjPoint& h) const;

private:
    Field field_;
    unsigned n_;
    std::uint32_t num_points_;
};

/// Reduced row echelon form of a 2-row matrix with independent rows.
ProjLine echelon_line(const Field& f, unsigned n, ProjPoint u, ProjPoint v);

/// Dual coordinates of the lines tangent-dual to the conic {(t : t^2 : 1)} u {(0 : 1 : 0)} of PG(2,q):
/// the line with coordinates c is {x : <c, x> = 0}. Returned in conic order (t ascending, then the
/// point at infinity), normalized. No point of PG(2,q) lies on three of them. Needs q >= 3.
std::vector<ProjPoint> conic_dual_lines(const Field& f);

/// Largest number of returned lines through a single point of PG(2,q).
std::uint32_t max_concurrency(const ProjectiveSpace& plane, const std::vector<ProjPoint>& lines);

/// Projection of AG(3,q) from a point: each line through `center` is sent to its direction,
/// read as a point of PG(2,q). Planes through `center` go to the PG(2,q) line with the plane's
/// normal as coordinates.
struct Projection {
    PointIndex center = 0;
    std::vector<std::pair<Line, ProjPoint>> image;
};
Projection project_from_point(const AffineSpace& space, PointIndex center);
ProjPoint project_plane(const AffineSpace& space, const Plane& pl);

}  // namespace ffgeom::geom

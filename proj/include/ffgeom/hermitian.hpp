#pragma once

#include <array>
#include <optional>
#include <cstdint>
#include <vector>

#include "ffgeom/geom.hpp"
#include "ffgeom/projective.hpp"
#include "ffgeom/rational.hpp"
#include "ffgeom/rng.hpp"

namespace ffgeom::hermitian {

using geom::ProjLine;
using geom::ProjPoint;
using geom::ProjectiveSpace;
using gf::Elem;
using gf::Field;

/// (n+1) x (n+1) matrix over GF(p^2); entries beyond n are ignored.
struct HermitianMatrix {
    unsigned n = 0;
    std::array<std::array<Elem, 4>, 4> h{};

    static HermitianMatrix identity(unsigned n);
    /// Diagonal from the fixed field of conjugation, upper triangle uniform, lower triangle conjugated.
    static HermitianMatrix random(const Field& f, unsigned n, Rng& rng);
};

bool is_hermitian(const Field& f, const HermitianMatrix& m);
/// Rank over GF(q).
unsigned matrix_rank(const Field& f, const HermitianMatrix& m);
/// x^T H conj(y).
Elem sesquilinear(const Field& f, const HermitianMatrix& m, const ProjPoint& x, const ProjPoint& y);

class HermitianVariety {
public:
    /// Throws Error(non_square_field) unless k == 2 and Error(not_hermitian) for a non-Hermitian matrix.
    HermitianVariety(const Field& field, const HermitianMatrix& m);

    const ProjectiveSpace& space() const { return space_; }
    const Field& field() const { return space_.field(); }
    const HermitianMatrix& matrix() const { return matrix_; }
    unsigned n() const { return matrix_.n; }
    unsigned rank() const { return rank_; }
    bool non_degenerate() const { return rank_ == matrix_.n + 1; }
    std::uint32_t root_q() const { return field().p(); }

    /// Point indices of PG(n,q) on the variety, ascending.
    const std::vector<std::uint32_t>& points() const { return points_; }
    bool contains(std::uint32_t point) const { return member_[point]; }
    bool satisfies(const ProjPoint& x) const;
    /// Points c with c^T H = 0.
    const std::vector<std::uint32_t>& singular_points() const { return singular_; }

private:
    ProjectiveSpace space_;
    HermitianMatrix matrix_;
    unsigned rank_ = 0;
    std::vector<std::uint32_t> points_;
    std::vector<bool> member_;
    std::vector<std::uint32_t> singular_;
};

/// Point count of a non-degenerate Hermitian variety in PG(n,q), q a square.
std::int64_t phi(int n, std::int64_t q);
/// Point count of a rank-r Hermitian variety in PG(n,q).
std::int64_t degenerate_count(int n, std::int64_t q, int r);

enum class LineClass { tangent, secant, contained };
const char* line_class_name(LineClass c);

struct LineIntersection {
    LineClass kind = LineClass::tangent;
    std::uint32_t size = 0;
};
/// Sizes other than 1, sqrt(q)+1 and q+1 raise Error(internal).
LineIntersection classify_line(const HermitianVariety& v, const ProjLine& l);

struct TangentSpace {
    bool whole_space = false;
    ProjPoint hyperplane{};   // coordinates of H conj(c), normalized; zero when whole_space
};
/// Throws Error(out_of_range) if c is not on the variety.
TangentSpace tangent_space(const HermitianVariety& v, std::uint32_t c);

/// Lines through c inside its tangent hyperplane meeting the variety only at c.
std::vector<ProjLine> tangent_lines_at(const HermitianVariety& v, std::uint32_t c);

struct TangentSection {
    std::uint32_t points = 0;          // |V ∩ tangent plane|
    std::uint32_t lines_through = 0;   // lines through c in the tangent plane
    std::uint32_t contained = 0;
    std::uint32_t tangent = 0;
    /// The section is exactly the union of the contained lines, which meet only at c.
    bool concurrent_lines = false;
};
/// Structure of the tangent-plane section at a non-singular point of a surface in PG(3,q).
TangentSection analyze_tangent_section(const HermitianVariety& v, std::uint32_t c);

struct TangentFamilyReport {
    std::uint64_t variety_points = 0;
    std::uint64_t chosen_points = 0;
    std::uint64_t lines = 0;
    bool lines_distinct = false;
    bool lines_meet_variety_once = false;
    std::uint64_t projective_covered = 0;
    std::uint64_t variety_points_outside_p = 0;
    bool outside_points_uncovered = false;
    std::uint64_t affine_lines = 0;
    std::uint64_t affine_covered = 0;
    std::uint32_t max_plane_occupancy = 0;
    double occupancy_reference = 0;   // alpha q^(3/2), reported only
};

struct TangentLineFamily {
    Rational alpha{0};
    std::uint64_t seed = 0;
    std::vector<std::uint32_t> chosen;   // P, in sample order
    std::vector<ProjLine> lines;
    geom::LineFamily affine{2, 3};       // lines not contained in x_0 = 0, as lines of AG(3,q)
    TangentFamilyReport report;
};

/// All tangent lines at floor(alpha |V|) points drawn by a seeded shuffle.
/// Throws Error(alpha_out_of_range) unless 0 < alpha <= 1, Error(out_of_range) unless V is a
/// non-degenerate surface in PG(3,q).
TangentLineFamily build_tangent_line_family(const HermitianVariety& v, const Rational& alpha, std::uint64_t seed);

/// Affine image of a projective line of PG(3,q) outside x_0 = 0, or nullopt for lines at infinity.
std::optional<geom::Line> to_affine(const geom::AffineSpace& space, const ProjectiveSpace& pg, const ProjLine& l);

}  // namespace ffgeom::hermitian

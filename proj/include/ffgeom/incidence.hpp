#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ffgeom/geom.hpp"
#include "ffgeom/rational.hpp"
#include "ffgeom/rng.hpp"

namespace ffgeom::incidence {

using geom::AffineSpace;
using geom::LineFamily;
using geom::Plane;
using geom::PointSet;

struct IncidenceStats {
    std::uint32_t q = 0;
    std::uint64_t points = 0;
    std::uint64_t lines = 0;
    std::uint64_t incidences = 0;
};

/// Exact I(P, L). Throws Error(mismatched_field) if P, L and the space disagree.
IncidenceStats count_incidences(const AffineSpace& space, const PointSet& points, const LineFamily& lines);

/// Singular values of the point-line incidence matrix of AG(3,q).
struct SpectrumReport {
    std::uint32_t q = 0;
    double sigma1 = 0;
    double sigma2 = 0;
    double lambda = 0;
    std::uint64_t point_degree = 0;   // q^2 + q + 1
    std::uint64_t line_degree = 0;    // q
    bool numeric_checked = false;
    double numeric_sigma1 = 0;
    double numeric_sigma2 = 0;
    double max_deviation = 0;
};

/// Closed form from the Gram identity. With numeric = true also diagonalizes N N^T and
/// records the deviation; throws Error(field_too_large) for q > 9 in that case.
SpectrumReport incidence_spectrum(std::uint32_t q, bool numeric = true);

struct GramCheck {
    bool holds = false;
    std::uint64_t entries = 0;
    std::uint64_t mismatches = 0;
};
/// Checks N N^T = (q^2 + q) I + J entrywise by counting common lines of every point pair.
GramCheck verify_gram_identity(const AffineSpace& space);

struct MixingBound {
    double bound = 0;             // exact finite-q envelope, evaluated in floating point
    double asymptotic_form = 0;   // |P||L|/q^2 + q sqrt(|P||L|(1 - |P|/q^3)(1 - |L|/q^4))
};

/// Upper bound on I(P, L) for |P| = np, |L| = nl from the mixing lemma with exact totals.
/// Throws Error(out_of_range) for sizes beyond q^3 points or q^4 + q^3 + q^2 lines.
MixingBound mixing_incidence_bound(std::uint64_t np, std::uint64_t nl, std::uint32_t q);
/// Exact test of I <= bound, squared over the integers.
bool mixing_bound_admits(std::uint64_t incidences, std::uint64_t np, std::uint64_t nl, std::uint32_t q);

struct DiscrepancyReport {
    IncidenceStats stats;
    double lhs = 0;   // |I/e(G) - alpha beta|
    double rhs = 0;   // lambda sqrt(alpha beta (1 - alpha)(1 - beta))
    bool holds = false;
};
/// Two-sided mixing inequality for (P, L), decided exactly.
DiscrepancyReport mixing_discrepancy_check(const AffineSpace& space, const PointSet& points, const LineFamily& lines);

struct CoverReport {
    std::uint32_t q = 0;
    std::size_t count = 0;
    Rational k{0};
    std::uint64_t covered = 0;
    Rational bound{0};
    bool holds = false;
};

/// Points of AG(3,q) on at least one of the planes, against q^3 (k-1)^2 / (k^2 - k + 1)
/// with k = |planes| / q. Throws Error(too_few_planes) when k <= 1.
CoverReport cover_fraction_check(const AffineSpace& space, const std::vector<Plane>& planes);
/// The same bound in AG(2,q) with q^2 in place of q^3.
CoverReport cover_fraction_check(const AffineSpace& plane, const LineFamily& lines);

// Plane and line families for the covering checks. All return distinct members.
std::vector<Plane> random_planes(const AffineSpace& space, std::size_t count, Rng& rng);
/// Planes through one point first, then random planes.
std::vector<Plane> point_pencil_planes(const AffineSpace& space, std::size_t count, geom::PointIndex center, Rng& rng);
/// The q+1 planes through one line first, then random planes.
std::vector<Plane> line_pencil_planes(const AffineSpace& space, std::size_t count, const geom::Line& axis, Rng& rng);
/// Whole parallel classes in normal order.
std::vector<Plane> parallel_class_planes(const AffineSpace& space, std::size_t count);
std::vector<Plane> make_planes(const AffineSpace& space, const std::string& generator, std::size_t count, Rng& rng);

LineFamily random_lines(const AffineSpace& space, std::size_t count, Rng& rng);
LineFamily point_pencil_lines(const AffineSpace& space, std::size_t count, geom::PointIndex center, Rng& rng);
LineFamily parallel_class_lines(const AffineSpace& space, std::size_t count);

}  // namespace ffgeom::incidence

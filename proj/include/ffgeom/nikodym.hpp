#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ffgeom/geom.hpp"
#include "ffgeom/incidence.hpp"
#include "ffgeom/rational.hpp"

namespace ffgeom::nikodym {

using geom::AffineSpace;
using geom::Line;
using geom::LineFamily;
using geom::Plane;
using geom::PointIndex;
using geom::PointSet;

/// One line per complement point p with every other point of the line in the set.
struct NikodymWitness {
    PointSet set;
    std::vector<std::pair<PointIndex, Line>> assignment;   // complement points ascending
};

struct NikodymCheck {
    bool is_nikodym = false;
    std::vector<PointIndex> failing;          // points with no qualifying line, ascending
    std::optional<NikodymWitness> witness;    // set when is_nikodym
};

/// Checks every point of AG(n,q), n in {2,3}, and extracts the complement assignment in
/// canonical order. Throws Error(assignment_not_injective) if two complement points share a line.
NikodymCheck verify_nikodym(const AffineSpace& space, const PointSet& set);

/// Validates an externally built assignment: each line passes through its point, the rest of the
/// line lies in the set, and no line is used twice.
bool assignment_valid(const AffineSpace& space, const NikodymWitness& w);

LineFamily assignment_lines(const AffineSpace& space, const NikodymWitness& w);

PointSet union_of_lines(const AffineSpace& space, const LineFamily& lines);

struct UnionBoundReport {
    std::uint32_t q = 0;
    std::uint64_t lines = 0;
    std::uint64_t covered = 0;
    std::uint64_t incidences = 0;        // q |L|
    std::uint64_t implied_lower = 0;     // least |P| the exact mixing bound admits
    double bound_at_measured = 0;        // mixing bound on I at |P| = covered
    bool measured_at_least_implied = false;
};
/// Throws Error(too_few_lines) when |L| < fraction q^3.
UnionBoundReport union_lower_bound_check(const AffineSpace& space, const LineFamily& lines,
                                         const Rational& fraction = Rational(62, 100));

struct ConicFamilyReport {
    std::uint32_t q = 0;
    std::uint32_t planes = 0;
    std::uint64_t lines = 0;
    std::uint64_t covered = 0;
    std::int64_t lines_lower_bound = 0;     // np q(q+1) - C(np, 2)
    std::int64_t points_expression = 0;     // (np q^2 - 1) - (q-1) C(np, 2) + 1
    std::int64_t points_exact = 0;          // 1 + np (q^2 - 1) - (q-1) C(np, 2)
    std::uint32_t max_line_coincidence = 0; // most planes of the family sharing one line
    std::uint32_t max_plane_occupancy = 0;
    double ratio = 0;                       // covered / q^3
};

struct ConicFamily {
    std::vector<Plane> planes;
    LineFamily lines;
    ConicFamilyReport report;
};

/// Planes through the origin whose normals are the first floor(fraction q) conic-dual lines;
/// L is every line inside their union. Throws Error(unsupported_field) for q < 5 or when
/// floor(fraction q) is outside [3, q+1].
ConicFamily build_conic_dual_line_family(const AffineSpace& space, const Rational& fraction = Rational(62, 100));

struct CoplanarReport {
    std::uint32_t max_count = 0;
    Plane max_plane;
    double bound = 0;   // q^(3/2) + 1 + q, imported planar constant with affine slack
    bool holds = false;
};
CoplanarReport coplanar_line_bound_check(const AffineSpace& space, const NikodymWitness& w);

/// Root of sqrt(1 - x) = x by bisection on [0, 1].
double golden_ratio_threshold();
/// Large-q limit of the counting inequality for |L| = x q^3: x <= (1 - x) x + x sqrt(1 - x).
bool limit_inequality_holds(double x);

struct ComplementReport {
    std::uint32_t q = 0;
    std::uint64_t complement = 0;
    double ratio = 0;
    double threshold = 0;
    std::uint64_t incidences = 0;          // I(N, assignment lines)
    bool incidences_exact = false;         // == (q - 1) |N^c|
    double mixing_bound = 0;
    bool mixing_admits = false;
    incidence::DiscrepancyReport discrepancy;
};
/// Throws Error(not_nikodym).
ComplementReport nikodym_complement_bound_check(const AffineSpace& space, const PointSet& set);

struct HarnessConfig {
    std::string generator = "uniform-random";   // uniform-random | plane-capped-random | hermitian-tangent | conic-dual
    std::uint32_t q = 0;
    std::uint32_t trials = 1;
    std::uint64_t seed = 0;
    std::uint64_t line_count = 0;   // random generators
    std::uint32_t cap = 0;          // most lines allowed in one plane; 0 means floor(q^(3/2) / 2)
    Rational alpha{1, 2};           // hermitian-tangent
    Rational fraction{62, 100};     // conic-dual
    double alarm_ratio = 0.9;
};

struct ConjectureRecord {
    std::uint32_t q = 0;
    std::string generator;
    std::uint64_t seed = 0;
    std::uint32_t trial = 0;
    std::uint64_t lines = 0;
    std::uint32_t max_plane_occupancy = 0;
    std::uint32_t cap = 0;
    bool cap_respected = false;
    std::uint64_t covered = 0;
    double ratio = 0;
    bool alarm = false;
};

/// Throws Error(generator_infeasible) when a random generator cannot reach line_count under the cap.
std::vector<ConjectureRecord> conjecture_harness(const HarnessConfig& cfg);

}  // namespace ffgeom::nikodym

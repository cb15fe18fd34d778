#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ffgeom/geom.hpp"
#include "ffgeom/poly.hpp"
#include "ffgeom/rational.hpp"

namespace ffgeom::kakeya {

using geom::AffineSpace;
using geom::Line;
using geom::PointIndex;
using geom::PointSet;

/// One contained line per direction, indexed by direction ordinal.
struct KakeyaWitness {
    std::vector<Line> lines;
};

struct KakeyaCheck {
    bool is_kakeya = false;
    KakeyaWitness witness;               // filled only when is_kakeya
    std::vector<PointIndex> missing;     // uncovered normalized directions, ascending
};

/// Looks for a fully contained line in each direction; the first line in canonical order wins.
KakeyaCheck verify_kakeya(const AffineSpace& space, const PointSet& set);

/// {(x, y, t) : x + t^2 and y + t^2 are squares or 0} together with the plane t = 0.
/// Throws Error(even_field_unsupported) for even q.
PointSet build_quadratic_residue_set(const AffineSpace& space);
/// q((q+1)/2)^2 + q^2.
std::int64_t quadratic_residue_size_bound(std::int64_t q);
/// (q-1)((q+1)/2)^2 + q^2: the slice t = 0 is contained in the added plane.
std::int64_t quadratic_residue_size_exact(std::int64_t q);

/// ceil(N_q(n, m) / binom(m + n - 1, n)).
std::int64_t integer_multiplicity_bound(std::uint32_t q, unsigned n, std::uint32_t m);

/// m = (alpha - delta alpha) u + (1 - alpha - delta alpha)(u + 1) with delta = q^(-1/3).
struct FractionalParams {
    std::uint32_t q = 0;
    unsigned u = 1;
    Rational alpha{0};

    /// Throws Error(out_of_range) unless u is 1 or 2, 0 <= alpha <= 1 and 0 < m <= 3.
    void validate() const;
    CubeRootSurd m() const;
    /// Largest total degree allowed in the interpolation basis (degree < m q).
    std::int64_t max_total_degree() const;
};

struct SubsetSample {
    PointSet subset;
    std::vector<std::uint32_t> line_counts;   // |witness line ∩ S| per direction ordinal
    std::size_t size = 0;
    std::uint32_t attempts = 0;
};

struct SampleOptions {
    std::uint32_t retry_cap = 1000;
    /// Also enforce concentration on every line contained in K, not only the witnesses.
    bool all_contained_lines = false;
};

/// | |S| - alpha |K| | < delta alpha |K| and | |L ∩ S| - alpha q | < delta alpha q for every witness
/// line, decided exactly. Throws Error(retry_exhausted) after the cap and Error(alpha_out_of_range)
/// unless 0 < alpha <= 1.
SubsetSample sample_fractional_subset(const AffineSpace& space, const PointSet& set, const KakeyaWitness& witness,
                                      const Rational& alpha, std::uint64_t seed, const SampleOptions& opts = {});
/// The acceptance test used by the sampler, exposed for recounting.
bool sample_within_tolerance(const AffineSpace& space, const PointSet& set, const KakeyaWitness& witness,
                             const Rational& alpha, const PointSet& subset);

enum class PipelineStage {
    counting_not_in_paradox_regime,
    sample_retry_exhausted,
    interpolation_infeasible,
    restriction_shortfall,
    top_form_vanishes,
};
std::string stage_name(PipelineStage s);

struct RestrictionRecord {
    PointIndex direction = 0;
    Line line;
    /// Sum over points of the line of the imposed multiplicity (u on S, u + 1 elsewhere).
    std::uint64_t guaranteed_zeros = 0;
    int restriction_degree = -1;
    bool identically_zero = false;
};

struct RestrictionAnalysis {
    std::vector<RestrictionRecord> records;
    std::optional<RestrictionRecord> first_shortfall;
    /// g0(b) == 0 for every direction b (only meaningful when no shortfall occurred).
    bool top_form_vanishes_on_directions = false;
};

/// Restricts g to every witness line and compares the multiplicity count with the degree.
/// Throws Error(internal) if a restriction has fewer zeros (with multiplicity) than imposed.
RestrictionAnalysis analyze_restrictions(const AffineSpace& space, const poly::MultiPoly& g, const KakeyaWitness& witness,
                                         const PointSet& subset, unsigned u);

struct PipelineReport {
    FractionalParams params;
    std::uint64_t seed = 0;
    double m_approx = 0;
    std::int64_t max_total_degree = 0;
    std::int64_t monomials = 0;            // N_q(3, m)
    double regime_rhs = 0;                 // the counting bound in the regime test
    std::size_t set_size = 0;
    std::size_t subset_size = 0;
    std::uint32_t sample_attempts = 0;
    std::int64_t constraints = 0;
    int degree = -1;
    PipelineStage stage = PipelineStage::counting_not_in_paradox_regime;
    std::optional<RestrictionRecord> shortfall;
    std::string detail;
};

struct PipelineOptions {
    std::uint32_t retry_cap = 1000;
    /// Skip the regime test and go straight to sampling (for small artificial sets).
    bool force_past_counting = false;
};

/// Runs the fractional multiplicity argument on a given Kakeya set with its witness.
PipelineReport fractional_pipeline(const AffineSpace& space, const PointSet& set, const KakeyaWitness& witness,
                                   const FractionalParams& params, std::uint64_t seed, const PipelineOptions& opts = {});
/// Same, with the quadratic residue set for odd q.
PipelineReport fractional_pipeline(const FractionalParams& params, std::uint64_t seed, const PipelineOptions& opts = {});

/// Union of the witness lines only.
PointSet witness_union(const AffineSpace& space, const KakeyaWitness& witness);

/// Coefficient of q^3 in the lower bound for the u = 1 branch, m in [1, 2].
double fractional_coefficient_u1(double m);
/// Same for the u = 2 branch, m in [2, 3].
double fractional_coefficient_u2(double m);

struct FractionalOptimum {
    double m_star = 0;
    double coefficient = 0;
    unsigned branch = 1;
    double u2_best_m = 0;
    double u2_best_coefficient = 0;
};
/// Closed-form stationary point of the u = 1 branch, compared with the best point of the u = 2 branch.
FractionalOptimum optimize_fractional_bound();

/// (-2m^3 + 9m^2 - 9m + 3) / 6 for m in [1, 2]. Throws Error(out_of_range).
Rational leading_term_Nq3(const Rational& m);

}  // namespace ffgeom::kakeya

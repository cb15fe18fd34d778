#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ffgeom/geom.hpp"
#include "ffgeom/gf.hpp"
#include "ffgeom/rational.hpp"
#include "ffgeom/rng.hpp"

namespace ffgeom::poly {

using gf::Elem;
using gf::Field;
using geom::Point;

using Exponent = std::array<std::uint32_t, 3>;

inline constexpr std::uint32_t infinite_multiplicity = std::numeric_limits<std::uint32_t>::max();

/// Number of exponent vectors in n variables with every entry < q and total degree < m q.
/// Exact for rational m, including non-integral m q.
std::int64_t count_capped_monomials(unsigned n, std::uint32_t q, const Rational& m);
/// Same count with the total degree bounded by max_total (inclusive); 0 when max_total < 0.
std::int64_t count_capped_monomials_upto(unsigned n, std::uint32_t q, std::int64_t max_total);
/// The alternating sum with binomial(floor((m - i) q + n - 1), n). Coincides with
/// count_capped_monomials whenever m q is an integer, and undercounts otherwise.
std::int64_t inclusion_exclusion_floor_form(unsigned n, std::uint32_t q, const Rational& m);

/// Exponent vectors with individual degree <= individual_max and total degree <= max_total,
/// in graded order (total degree ascending, then lexicographically descending).
class MonomialBasis {
public:
    MonomialBasis(Field field, unsigned n, std::int64_t max_total, std::uint32_t individual_max);

    /// Individual degree < q and total degree < m q.
    static std::shared_ptr<const MonomialBasis> capped(const Field& field, unsigned n, const Rational& m);
    /// Individual degree < q and total degree <= max_total.
    static std::shared_ptr<const MonomialBasis> capped_total(const Field& field, unsigned n, std::int64_t max_total);

    const Field& field() const { return field_; }
    unsigned n() const { return n_; }
    std::uint32_t q() const { return field_.q(); }
    std::int64_t max_total() const { return max_total_; }
    std::uint32_t individual_max() const { return individual_max_; }
    std::size_t size() const { return exps_.size(); }
    const Exponent& exponent(std::size_t i) const { return exps_[i]; }
    std::uint32_t degree(std::size_t i) const { return exps_[i][0] + exps_[i][1] + exps_[i][2]; }
    std::optional<std::size_t> index_of(const Exponent& e) const;

private:
    Field field_;
    unsigned n_;
    std::int64_t max_total_;
    std::uint32_t individual_max_;
    std::vector<Exponent> exps_;
    std::vector<std::int32_t> lookup_;
};

using BasisPtr = std::shared_ptr<const MonomialBasis>;

/// Polynomial with coefficients aligned to a monomial basis.
class MultiPoly {
public:
    explicit MultiPoly(BasisPtr basis);
    MultiPoly(BasisPtr basis, std::vector<Elem> coeffs);
    static MultiPoly random(BasisPtr basis, Rng& rng);

    const MonomialBasis& basis() const { return *basis_; }
    const BasisPtr& basis_ptr() const { return basis_; }
    const std::vector<Elem>& coeffs() const { return coeffs_; }
    Elem coeff(std::size_t i) const { return coeffs_[i]; }
    void set_coeff(std::size_t i, Elem c) { coeffs_.at(i) = c; }

    bool is_zero() const;
    /// Total degree, or -1 for the zero polynomial.
    int degree() const;
    Elem evaluate(const Point& a) const;

private:
    BasisPtr basis_;
    std::vector<Elem> coeffs_;
};

/// Dense univariate polynomial, coefficients ascending, trailing zeros trimmed.
class UniPoly {
public:
    UniPoly() = default;
    UniPoly(const Field& field, std::vector<Elem> coeffs);

    const std::vector<Elem>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    Elem leading_coefficient() const { return coeffs_.empty() ? 0 : coeffs_.back(); }
    Elem evaluate(const Field& field, Elem t) const;
    /// Largest r with (t - t0)^r dividing the polynomial; infinite_multiplicity for zero.
    std::uint32_t multiplicity_at(const Field& field, Elem t0) const;
    /// Sum over all t of multiplicity_at(t); infinite for the zero polynomial.
    std::uint64_t zeros_with_multiplicity(const Field& field) const;

private:
    std::vector<Elem> coeffs_;
};

/// g(x + a), expanded by multiplying out each (x_i + a_i)^(e_i).
MultiPoly shift(const MultiPoly& g, const Point& a);
/// Largest m such that g(x + a) has no monomial of degree < m; infinite_multiplicity for g == 0.
std::uint32_t multiplicity_at(const MultiPoly& g, const Point& a);

/// Hasse derivative of order j at a: sum over e >= j of c_e prod binom(e_i, j_i) a_i^(e_i - j_i).
Elem hasse_derivative(const MultiPoly& g, const Exponent& j, const Point& a);
/// Multiplicity from Hasse derivatives computed one order at a time; must agree with multiplicity_at.
std::uint32_t multiplicity_via_hasse(const MultiPoly& g, const Point& a);

/// g(a + t b) as a polynomial in t (no reduction modulo t^q - t).
UniPoly restrict_to_line(const MultiPoly& g, const Point& a, const Point& b);

/// Degree-d homogeneous part for d = degree(g). Throws Error(zero_polynomial).
MultiPoly homogeneous_top(const MultiPoly& g);

/// True iff g vanishes on all of F_q^n. Evaluates every point and cross-checks against the
/// coefficient test; a disagreement is reported as Error(internal). Throws
/// Error(degree_cap_violated) if some monomial in the support has an exponent >= q.
bool is_identically_zero_on_space(const MultiPoly& g);

/// Number of homogeneous linear constraints imposed by vanishing to order `mult` at one point.
std::int64_t constraints_per_point(unsigned n, std::uint32_t mult);

/// Nonzero g in the basis vanishing to order m1 on S1 and m2 on S2. Throws
/// Error(sets_not_disjoint) or Error(infeasible_count) when
/// |S1| binom(m1+n-1, n) + |S2| binom(m2+n-1, n) >= |basis|. The result is verified against
/// multiplicity_at at every constrained point.
MultiPoly interpolate_vanishing(const geom::PointSet& s1, std::uint32_t m1, const geom::PointSet& s2,
                                std::uint32_t m2, const BasisPtr& basis);
MultiPoly interpolate_vanishing(const geom::PointSet& s1, std::uint32_t m1, const geom::PointSet& s2,
                                std::uint32_t m2, const Rational& m);

/// Exact nullspace vector of a matrix over F_q by row reduction, or nullopt if the kernel is
/// trivial. The first non-pivot column is set to 1 and the remaining free columns to 0.
class KernelSolver {
public:
    KernelSolver(const Field& field, std::size_t columns);
    void add_row(std::vector<Elem> row);
    std::size_t rank() const { return pivot_rows_.size(); }
    std::size_t rows_seen() const { return rows_seen_; }
    std::optional<std::vector<Elem>> kernel_vector() const;

private:
    const Field& field_;
    std::size_t columns_;
    std::size_t rows_seen_ = 0;
    std::vector<std::int64_t> pivot_of_column_;
    std::vector<std::vector<Elem>> pivot_rows_;
    std::vector<std::size_t> pivot_cols_;
};

}  // namespace ffgeom::poly

#include "ffgeom/poly.hpp"

#include <algorithm>
#include <string>

#include "ffgeom/error.hpp"

namespace ffgeom::poly {

std::int64_t count_capped_monomials_upto(unsigned n, std::uint32_t q, std::int64_t max_total) {
    if (max_total < 0) return 0;
    // inclusion-exclusion over the variables forced to degree >= q
    std::int64_t total = 0;
    for (unsigned i = 0; i <= n; ++i) {
        const std::int64_t rest = max_total - static_cast<std::int64_t>(i) * q;
        const std::int64_t term = binomial(static_cast<std::int64_t>(n), i) * binomial(rest + n, n);
        total += (i % 2 == 0) ? term : -term;
    }
    return total;
}

std::int64_t count_capped_monomials(unsigned n, std::uint32_t q, const Rational& m) {
    if (n < 1 || q < 2 || m <= 0) throw Error(Errc::out_of_range, "count_capped_monomials needs n >= 1, q >= 2, m > 0");
    return count_capped_monomials_upto(n, q, strict_floor(m * static_cast<std::int64_t>(q)));
}

std::int64_t inclusion_exclusion_floor_form(unsigned n, std::uint32_t q, const Rational& m) {
    std::int64_t total = 0;
    for (unsigned i = 0; i <= n; ++i) {
        const Rational arg = (m - static_cast<std::int64_t>(i)) * static_cast<std::int64_t>(q) + static_cast<std::int64_t>(n - 1);
        const std::int64_t term = binomial(static_cast<std::int64_t>(n), i) * binomial(floor_of(arg), n);
        total += (i % 2 == 0) ? term : -term;
    }
    return total;
}

// ---------------------------------------------------------------------------

MonomialBasis::MonomialBasis(Field field, unsigned n, std::int64_t max_total, std::uint32_t individual_max)
    : field_(std::move(field)), n_(n), max_total_(max_total), individual_max_(individual_max) {
    if (n < 1 || n > 3) throw Error(Errc::out_of_range, "monomial bases support 1..3 variables");
    const std::uint64_t side = individual_max + 1;
    std::uint64_t cells = 1;
    for (unsigned i = 0; i < n; ++i) cells *= side;
    if (cells > (1u << 24)) throw Error(Errc::out_of_range, "monomial basis too large");
    lookup_.assign(cells, -1);
    if (max_total < 0) return;

    for (std::uint64_t code = 0; code < cells; ++code) {
        Exponent e{0, 0, 0};
        std::uint64_t v = code;
        std::int64_t deg = 0;
        for (unsigned i = n; i-- > 0;) {
            e[i] = static_cast<std::uint32_t>(v % side);
            v /= side;
            deg += e[i];
        }
        if (deg <= max_total) exps_.push_back(e);
    }
    std::stable_sort(exps_.begin(), exps_.end(), [](const Exponent& a, const Exponent& b) {
        const auto da = a[0] + a[1] + a[2], db = b[0] + b[1] + b[2];
        if (da != db) return da < db;
        return a > b;
    });
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        std::uint64_t code = 0;
        for (unsigned k = 0; k < n; ++k) code = code * side + exps_[i][k];
        lookup_[code] = static_cast<std::int32_t>(i);
    }
}

std::shared_ptr<const MonomialBasis> MonomialBasis::capped(const Field& field, unsigned n, const Rational& m) {
    if (m <= 0) throw Error(Errc::out_of_range, "multiplicity parameter must be positive");
    return capped_total(field, n, strict_floor(m * static_cast<std::int64_t>(field.q())));
}

std::shared_ptr<const MonomialBasis> MonomialBasis::capped_total(const Field& field, unsigned n, std::int64_t max_total) {
    return std::make_shared<const MonomialBasis>(field, n, max_total, field.q() - 1);
}

std::optional<std::size_t> MonomialBasis::index_of(const Exponent& e) const {
    std::uint64_t code = 0;
    for (unsigned k = 0; k < 3; ++k) {
        if (k >= n_) {
            if (e[k] != 0) return std::nullopt;
            continue;
        }
        if (e[k] > individual_max_) return std::nullopt;
        code = code * (individual_max_ + 1) + e[k];
    }
    const auto i = lookup_[code];
    if (i < 0) return std::nullopt;
    return static_cast<std::size_t>(i);
}

// ---------------------------------------------------------------------------

MultiPoly::MultiPoly(BasisPtr basis) : basis_(std::move(basis)), coeffs_(basis_->size(), 0) {}

MultiPoly::MultiPoly(BasisPtr basis, std::vector<Elem> coeffs) : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != basis_->size()) throw Error(Errc::out_of_range, "coefficient count does not match basis");
    for (auto c : coeffs_)
        if (c >= basis_->q()) throw Error(Errc::out_of_range, "coefficient outside the field");
}

MultiPoly MultiPoly::random(BasisPtr basis, Rng& rng) {
    const auto q = basis->q();
    std::vector<Elem> c(basis->size());
    for (auto& x : c) x = static_cast<Elem>(rng.below(q));
    return MultiPoly(std::move(basis), std::move(c));
}

bool MultiPoly::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](Elem c) { return c == 0; });
}

int MultiPoly::degree() const {
    int d = -1;
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        if (coeffs_[i] != 0) d = std::max(d, static_cast<int>(basis_->degree(i)));
    return d;
}

namespace {

// powers[i][e] = a_i^e
std::vector<std::vector<Elem>> power_table(const Field& f, const Point& a, unsigned n, std::uint32_t max_e) {
    std::vector<std::vector<Elem>> pw(n, std::vector<Elem>(max_e + 1, 1));
    for (unsigned i = 0; i < n; ++i)
        for (std::uint32_t e = 1; e <= max_e; ++e) pw[i][e] = f.mul(pw[i][e - 1], a[i]);
    return pw;
}

std::uint32_t max_exponent(const MonomialBasis& b) {
    std::uint32_t m = 0;
    for (std::size_t i = 0; i < b.size(); ++i)
        for (unsigned k = 0; k < b.n(); ++k) m = std::max(m, b.exponent(i)[k]);
    return m;
}

std::vector<Elem> uni_mul(const Field& f, const std::vector<Elem>& a, const std::vector<Elem>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<Elem> r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = f.add(r[i + j], f.mul(a[i], b[j]));
    }
    return r;
}

// expansions[i][e] = coefficients of (c_i + d_i t)^e
std::vector<std::vector<std::vector<Elem>>> linear_power_table(const Field& f, const Point& c, const Point& d,
                                                               unsigned n, std::uint32_t max_e) {
    std::vector<std::vector<std::vector<Elem>>> out(n);
    for (unsigned i = 0; i < n; ++i) {
        out[i].reserve(max_e + 1);
        out[i].push_back({1});
        const std::vector<Elem> lin{c[i], d[i]};
        for (std::uint32_t e = 1; e <= max_e; ++e) out[i].push_back(uni_mul(f, out[i].back(), lin));
    }
    return out;
}

}  // namespace

Elem MultiPoly::evaluate(const Point& a) const {
    const auto& f = basis_->field();
    const auto pw = power_table(f, a, basis_->n(), max_exponent(*basis_));
    Elem r = 0;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0) continue;
        Elem term = coeffs_[i];
        const auto& e = basis_->exponent(i);
        for (unsigned k = 0; k < basis_->n(); ++k) term = f.mul(term, pw[k][e[k]]);
        r = f.add(r, term);
    }
    return r;
}

// ---------------------------------------------------------------------------

UniPoly::UniPoly(const Field& field, std::vector<Elem> coeffs) : coeffs_(std::move(coeffs)) {
    for (auto c : coeffs_)
        if (c >= field.q()) throw Error(Errc::out_of_range, "coefficient outside the field");
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Elem UniPoly::evaluate(const Field& f, Elem t) const {
    Elem r = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = f.add(f.mul(r, t), *it);
    return r;
}

std::uint32_t UniPoly::multiplicity_at(const Field& f, Elem t0) const {
    if (coeffs_.empty()) return infinite_multiplicity;
    std::vector<Elem> cur = coeffs_;
    std::uint32_t mult = 0;
    while (cur.size() > 1) {
        // synthetic division by (t - t0)
        std::vector<Elem> quo(cur.size() - 1);
        Elem carry = 0;
        for (std::size_t i = cur.size(); i-- > 0;) {
            const Elem v = f.add(cur[i], f.mul(carry, t0));
            if (i == 0) {
                if (v != 0) return mult;
            } else {
                quo[i - 1] = v;
            }
            carry = v;
        }
        cur = std::move(quo);
        ++mult;
    }
    return mult;  // nonzero constant left
}

std::uint64_t UniPoly::zeros_with_multiplicity(const Field& f) const {
    if (coeffs_.empty()) return infinite_multiplicity;
    std::uint64_t total = 0;
    for (Elem t = 0; t < f.q(); ++t) total += multiplicity_at(f, t);
    return total;
}

// ---------------------------------------------------------------------------

MultiPoly shift(const MultiPoly& g, const Point& a) {
    const auto& b = g.basis();
    const auto& f = b.field();
    const unsigned n = b.n();
    Point unit{1, 1, 1};
    const auto expand = linear_power_table(f, a, unit, n, max_exponent(b));
    std::vector<Elem> out(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) {
        const Elem c = g.coeff(i);
        if (c == 0) continue;
        const auto& e = b.exponent(i);
        const auto& p0 = expand[0][e[0]];
        const std::vector<Elem> one{1};
        const auto& p1 = n > 1 ? expand[1][e[1]] : one;
        const auto& p2 = n > 2 ? expand[2][e[2]] : one;
        for (std::uint32_t j0 = 0; j0 < p0.size(); ++j0) {
            if (p0[j0] == 0) continue;
            const Elem c0 = f.mul(c, p0[j0]);
            for (std::uint32_t j1 = 0; j1 < p1.size(); ++j1) {
                if (p1[j1] == 0) continue;
                const Elem c1 = f.mul(c0, p1[j1]);
                for (std::uint32_t j2 = 0; j2 < p2.size(); ++j2) {
                    if (p2[j2] == 0) continue;
                    Exponent j{j0, n > 1 ? j1 : 0, n > 2 ? j2 : 0};
                    auto idx = b.index_of(j);
                    if (!idx) throw Error(Errc::internal, "shifted monomial left the basis");
                    out[*idx] = f.add(out[*idx], f.mul(c1, p2[j2]));
                }
            }
        }
    }
    return MultiPoly(g.basis_ptr(), std::move(out));
}

std::uint32_t multiplicity_at(const MultiPoly& g, const Point& a) {
    const MultiPoly s = shift(g, a);
    const int lowest = [&] {
        int low = -1;
        for (std::size_t i = 0; i < s.coeffs().size(); ++i)
            if (s.coeff(i) != 0) {
                const int d = static_cast<int>(s.basis().degree(i));
                if (low < 0 || d < low) low = d;
            }
        return low;
    }();
    return lowest < 0 ? infinite_multiplicity : static_cast<std::uint32_t>(lowest);
}

namespace {

std::vector<std::vector<Elem>> pascal_mod_p(const Field& f, std::uint32_t max_e) {
    std::vector<std::vector<Elem>> c(max_e + 1, std::vector<Elem>(max_e + 1, 0));
    for (std::uint32_t e = 0; e <= max_e; ++e) {
        c[e][0] = 1;
        for (std::uint32_t j = 1; j <= e; ++j) c[e][j] = f.add(c[e - 1][j - 1], j <= e - 1 ? c[e - 1][j] : 0);
    }
    return c;
}

Elem hasse_with_tables(const MultiPoly& g, const Exponent& j, const std::vector<std::vector<Elem>>& binom,
                       const std::vector<std::vector<Elem>>& pw) {
    const auto& b = g.basis();
    const auto& f = b.field();
    Elem r = 0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const Elem c = g.coeff(i);
        if (c == 0) continue;
        const auto& e = b.exponent(i);
        Elem term = c;
        for (unsigned k = 0; k < b.n() && term != 0; ++k) {
            if (e[k] < j[k]) {
                term = 0;
                break;
            }
            term = f.mul(term, f.mul(binom[e[k]][j[k]], pw[k][e[k] - j[k]]));
        }
        r = f.add(r, term);
    }
    return r;
}

}  // namespace

Elem hasse_derivative(const MultiPoly& g, const Exponent& j, const Point& a) {
    const auto me = max_exponent(g.basis());
    for (unsigned k = 0; k < g.basis().n(); ++k)
        if (j[k] > me) return 0;
    return hasse_with_tables(g, j, pascal_mod_p(g.basis().field(), me), power_table(g.basis().field(), a, g.basis().n(), me));
}

std::uint32_t multiplicity_via_hasse(const MultiPoly& g, const Point& a) {
    const auto& b = g.basis();
    const auto me = max_exponent(b);
    const auto binom = pascal_mod_p(b.field(), me);
    const auto pw = power_table(b.field(), a, b.n(), me);
    // orders j range over the same exponent set; the basis is graded so the first hit is minimal
    for (std::size_t i = 0; i < b.size(); ++i)
        if (hasse_with_tables(g, b.exponent(i), binom, pw) != 0) return b.degree(i);
    return infinite_multiplicity;
}

UniPoly restrict_to_line(const MultiPoly& g, const Point& a, const Point& dir) {
    const auto& b = g.basis();
    const auto& f = b.field();
    const unsigned n = b.n();
    const auto expand = linear_power_table(f, a, dir, n, max_exponent(b));
    std::vector<Elem> acc;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const Elem c = g.coeff(i);
        if (c == 0) continue;
        const auto& e = b.exponent(i);
        std::vector<Elem> term{c};
        for (unsigned k = 0; k < n; ++k) term = uni_mul(f, term, expand[k][e[k]]);
        if (term.size() > acc.size()) acc.resize(term.size(), 0);
        for (std::size_t t = 0; t < term.size(); ++t) acc[t] = f.add(acc[t], term[t]);
    }
    return UniPoly(f, std::move(acc));
}

MultiPoly homogeneous_top(const MultiPoly& g) {
    const int d = g.degree();
    if (d < 0) throw Error(Errc::zero_polynomial, "homogeneous part of the zero polynomial");
    std::vector<Elem> c(g.coeffs().size(), 0);
    for (std::size_t i = 0; i < c.size(); ++i)
        if (static_cast<int>(g.basis().degree(i)) == d) c[i] = g.coeff(i);
    return MultiPoly(g.basis_ptr(), std::move(c));
}

bool is_identically_zero_on_space(const MultiPoly& g) {
    const auto& b = g.basis();
    const auto q = b.q();
    for (std::size_t i = 0; i < b.size(); ++i)
        if (g.coeff(i) != 0)
            for (unsigned k = 0; k < b.n(); ++k)
                if (b.exponent(i)[k] >= q)
                    throw Error(Errc::degree_cap_violated, "exponent " + std::to_string(b.exponent(i)[k]) + " >= q");

    std::uint64_t total = 1;
    for (unsigned k = 0; k < b.n(); ++k) total *= q;
    bool vanishes = true;
    for (std::uint64_t code = 0; code < total && vanishes; ++code) {
        Point x{0, 0, 0};
        std::uint64_t v = code;
        for (unsigned k = b.n(); k-- > 0;) {
            x[k] = static_cast<Elem>(v % q);
            v /= q;
        }
        if (g.evaluate(x) != 0) vanishes = false;
    }
    if (vanishes != g.is_zero())
        throw Error(Errc::internal, "polynomial with individual degrees < q vanishes everywhere but has nonzero coefficients");
    return vanishes;
}

std::int64_t constraints_per_point(unsigned n, std::uint32_t mult) {
    if (mult == 0) return 0;
    return binomial(static_cast<std::int64_t>(mult) + n - 1, n);
}

// ---------------------------------------------------------------------------

KernelSolver::KernelSolver(const Field& field, std::size_t columns)
    : field_(field), columns_(columns), pivot_of_column_(columns, -1) {}

void KernelSolver::add_row(std::vector<Elem> row) {
    ++rows_seen_;
    const auto& f = field_;
    for (std::size_t c = 0; c < columns_; ++c) {
        if (row[c] == 0) continue;
        const auto p = pivot_of_column_[c];
        if (p < 0) {
            const Elem s = f.inv(row[c]);
            for (std::size_t k = c; k < columns_; ++k) row[k] = f.mul(s, row[k]);
            pivot_of_column_[c] = static_cast<std::int64_t>(pivot_rows_.size());
            pivot_rows_.push_back(std::move(row));
            pivot_cols_.push_back(c);
            return;
        }
        const auto& pr = pivot_rows_[static_cast<std::size_t>(p)];
        const Elem factor = row[c];
        for (std::size_t k = c; k < columns_; ++k)
            if (pr[k] != 0) row[k] = f.sub(row[k], f.mul(factor, pr[k]));
    }
}

std::optional<std::vector<Elem>> KernelSolver::kernel_vector() const {
    std::size_t free_col = columns_;
    for (std::size_t c = 0; c < columns_; ++c)
        if (pivot_of_column_[c] < 0) {
            free_col = c;
            break;
        }
    if (free_col == columns_) return std::nullopt;
    std::vector<Elem> x(columns_, 0);
    x[free_col] = 1;
    for (std::size_t c = columns_; c-- > 0;) {
        const auto p = pivot_of_column_[c];
        if (p < 0) continue;
        const auto& row = pivot_rows_[static_cast<std::size_t>(p)];
        Elem s = 0;
        for (std::size_t k = c + 1; k < columns_; ++k)
            if (row[k] != 0 && x[k] != 0) s = field_.add(s, field_.mul(row[k], x[k]));
        x[c] = field_.neg(s);
    }
    return x;
}

MultiPoly interpolate_vanishing(const geom::PointSet& s1, std::uint32_t m1, const geom::PointSet& s2,
                                std::uint32_t m2, const BasisPtr& basis) {
    const unsigned n = basis->n();
    if (s1.n() != n || s2.n() != n || s1.q() != basis->q() || s2.q() != basis->q())
        throw Error(Errc::mismatched_field, "point sets do not match the polynomial ring");
    for (auto x : s1.members())
        if (s2.contains(x)) throw Error(Errc::sets_not_disjoint, "point " + std::to_string(x) + " is in both sets");

    const std::int64_t constraints = static_cast<std::int64_t>(s1.size()) * constraints_per_point(n, m1) +
                                     static_cast<std::int64_t>(s2.size()) * constraints_per_point(n, m2);
    const auto unknowns = static_cast<std::int64_t>(basis->size());
    if (constraints >= unknowns)
        throw Error(Errc::infeasible_count, std::to_string(constraints) + " constraints for " + std::to_string(unknowns) + " unknowns");

    const auto& f = basis->field();
    geom::AffineSpace coords(f, n == 1 ? 2 : n);  // point decoding only
    auto decode = [&](geom::PointIndex x) {
        if (n == 1) return Point{x, 0, 0};
        return coords.point(x);
    };
    std::uint32_t me = 0;
    for (std::size_t i = 0; i < basis->size(); ++i)
        for (unsigned k = 0; k < n; ++k) me = std::max(me, basis->exponent(i)[k]);
    const auto binom = pascal_mod_p(f, me);

    KernelSolver solver(f, basis->size());
    auto impose = [&](const geom::PointSet& s, std::uint32_t mult) {
        if (mult == 0) return;
        for (auto x : s.members()) {
            const Point a = decode(x);
            const auto pw = power_table(f, a, n, me);
            // every Hasse derivative of order |j| < mult must vanish at a
            for (std::uint32_t j0 = 0; j0 < mult; ++j0)
                for (std::uint32_t j1 = 0; j1 < (n > 1 ? mult - j0 : 1); ++j1)
                    for (std::uint32_t j2 = 0; j2 < (n > 2 ? mult - j0 - j1 : 1); ++j2) {
                        const Exponent j{j0, j1, j2};
                        std::vector<Elem> row(basis->size(), 0);
                        for (std::size_t i = 0; i < basis->size(); ++i) {
                            const auto& e = basis->exponent(i);
                            Elem v = 1;
                            for (unsigned k = 0; k < n && v != 0; ++k) {
                                if (e[k] < j[k]) {
                                    v = 0;
                                    break;
                                }
                                v = f.mul(v, f.mul(binom[e[k]][j[k]], pw[k][e[k] - j[k]]));
                            }
                            row[i] = v;
                        }
                        solver.add_row(std::move(row));
                    }
        }
    };
    impose(s1, m1);
    impose(s2, m2);

    auto kernel = solver.kernel_vector();
    if (!kernel) throw Error(Errc::internal, "constraint matrix has full column rank despite the count");
    MultiPoly g(basis, std::move(*kernel));

    auto verify = [&](const geom::PointSet& s, std::uint32_t mult) {
        for (auto x : s.members())
            if (multiplicity_at(g, decode(x)) < mult)
                throw Error(Errc::internal, "interpolated polynomial misses a multiplicity constraint");
    };
    verify(s1, m1);
    verify(s2, m2);
    return g;
}

MultiPoly interpolate_vanishing(const geom::PointSet& s1, std::uint32_t m1, const geom::PointSet& s2,
                                std::uint32_t m2, const Rational& m) {
    const auto field = gf::Field::of_order(s1.q());
    return interpolate_vanishing(s1, m1, s2, m2, MonomialBasis::capped(field, s1.n(), m));
}

}  // namespace ffgeom::poly

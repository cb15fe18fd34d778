#include "ffgeom/projective.hpp"

#include <string>

#include "ffgeom/error.hpp"

namespace ffgeom::geom {

ProjectiveSpace::ProjectiveSpace(Field field, unsigned n) : field_(std::move(field)), n_(n) {
    if (n < 1 || n > 3) throw Error(Errc::out_of_range, "projective dimension must be 1..3, got " + std::to_string(n));
    std::uint64_t total = 0, pw = 1;
    for (unsigned i = 0; i <= n; ++i) {
        total += pw;
        pw *= field_.q();
    }
    num_points_ = static_cast<std::uint32_t>(total);
}

ProjPoint ProjectiveSpace::point(std::uint32_t idx) const {
    const auto q = field_.q();
    // block for pivot j holds q^(n-j) points; blocks ordered by decreasing j
    std::uint64_t block = 1;
    for (int j = static_cast<int>(n_); j >= 0; --j) {
        if (idx < block) {
            ProjPoint x{0, 0, 0, 0};
            x[static_cast<unsigned>(j)] = 1;
            for (unsigned c = n_; c > static_cast<unsigned>(j); --c) {
                x[c] = idx % q;
                idx /= q;
            }
            return x;
        }
        idx -= static_cast<std::uint32_t>(block);
        block *= q;
    }
    throw Error(Errc::out_of_range, "projective point index out of range");
}

ProjPoint ProjectiveSpace::normalize(const ProjPoint& x) const {
    unsigned j = 0;
    while (j <= n_ && x[j] == 0) ++j;
    if (j > n_) throw Error(Errc::out_of_range, "zero vector is not a projective point");
    return scale(field_.inv(x[j]), x);
}

bool ProjectiveSpace::is_zero(const ProjPoint& x) const {
    for (unsigned c = 0; c <= n_; ++c)
        if (x[c] != 0) return false;
    return true;
}

std::uint32_t ProjectiveSpace::index(const ProjPoint& raw) const {
    const ProjPoint x = normalize(raw);
    const auto q = field_.q();
    unsigned j = 0;
    while (x[j] == 0) ++j;
    std::uint64_t offset = 0, block = 1;
    for (unsigned jj = n_; jj > j; --jj) {
        offset += block;
        block *= q;
    }
    std::uint64_t v = 0;
    for (unsigned c = j + 1; c <= n_; ++c) v = v * q + x[c];
    return static_cast<std::uint32_t>(offset + v);
}

Elem ProjectiveSpace::dot(const ProjPoint& a, const ProjPoint& b) const {
    Elem r = 0;
    for (unsigned c = 0; c <= n_; ++c) r = field_.add(r, field_.mul(a[c], b[c]));
    return r;
}

ProjPoint ProjectiveSpace::add(const ProjPoint& a, const ProjPoint& b) const {
    ProjPoint r{0, 0, 0, 0};
    for (unsigned c = 0; c <= n_; ++c) r[c] = field_.add(a[c], b[c]);
    return r;
}

ProjPoint ProjectiveSpace::scale(Elem s, const ProjPoint& a) const {
    ProjPoint r{0, 0, 0, 0};
    for (unsigned c = 0; c <= n_; ++c) r[c] = field_.mul(s, a[c]);
    return r;
}

ProjLine echelon_line(const Field& f, unsigned n, ProjPoint u, ProjPoint v) {
    std::array<ProjPoint, 2> rows{u, v};
    unsigned r = 0;
    std::array<unsigned, 2> piv{0, 0};
    for (unsigned c = 0; c <= n && r < 2; ++c) {
        unsigned pr = r;
        while (pr < 2 && rows[pr][c] == 0) ++pr;
        if (pr == 2) continue;
        std::swap(rows[r], rows[pr]);
        const Elem s = f.inv(rows[r][c]);
        for (unsigned k = 0; k <= n; ++k) rows[r][k] = f.mul(s, rows[r][k]);
        for (unsigned o = 0; o < 2; ++o) {
            if (o == r || rows[o][c] == 0) continue;
            const Elem m = rows[o][c];
            for (unsigned k = 0; k <= n; ++k) rows[o][k] = f.sub(rows[o][k], f.mul(m, rows[r][k]));
        }
        piv[r] = c;
        ++r;
    }
    if (r < 2) throw Error(Errc::out_of_range, "points do not span a line");
    (void)piv;
    return ProjLine{rows[0], rows[1]};
}

ProjLine ProjectiveSpace::line_through(std::uint32_t a, std::uint32_t b) const {
    if (a == b) throw Error(Errc::out_of_range, "two distinct points needed");
    return echelon_line(field_, n_, point(a), point(b));
}

std::vector<std::uint32_t> ProjectiveSpace::points_on(const ProjLine& l) const {
    std::vector<std::uint32_t> out;
    out.reserve(q() + 1);
    out.push_back(index(l.second));
    for (Elem t = 0; t < q(); ++t) out.push_back(index(add(l.first, scale(t, l.second))));
    return out;
}

std::uint64_t ProjectiveSpace::num_lines() const {
    // Gaussian binomial [n+1 choose 2]_q
    const std::uint64_t qq = q();
    std::uint64_t a = 1, b = 1;
    for (unsigned i = 0; i < n_ + 1; ++i) a *= qq;
    for (unsigned i = 0; i < n_; ++i) b *= qq;
    return (a - 1) * (b - 1) / ((qq * qq - 1) * (qq - 1));
}

std::vector<ProjLine> ProjectiveSpace::lines() const {
    if (n_ < 2) return {ProjLine{ProjPoint{1, 0, 0, 0}, ProjPoint{0, 1, 0, 0}}};
    const auto qq = q();
    std::vector<ProjLine> out;
    for (unsigned p0 = 0; p0 <= n_; ++p0) {
        for (unsigned p1 = p0 + 1; p1 <= n_; ++p1) {
            // free slots: first row at columns > p0 except p1; second row at columns > p1
            std::vector<std::pair<unsigned, unsigned>> slots;
            for (unsigned c = p0 + 1; c <= n_; ++c)
                if (c != p1) slots.push_back({0, c});
            for (unsigned c = p1 + 1; c <= n_; ++c) slots.push_back({1, c});
            std::uint64_t combos = 1;
            for (std::size_t i = 0; i < slots.size(); ++i) combos *= qq;
            for (std::uint64_t code = 0; code < combos; ++code) {
                ProjLine l{};
                l.first[p0] = 1;
                l.second[p1] = 1;
                std::uint64_t v = code;
                for (auto it = slots.rbegin(); it != slots.rend(); ++it) {
                    auto& row = it->first == 0 ? l.first : l.second;
                    row[it->second] = static_cast<Elem>(v % qq);
                    v /= qq;
                }
                out.push_back(l);
            }
        }
    }
    return out;
}

std::vector<std::uint32_t> ProjectiveSpace::points_on_hyperplane(const ProjPoint& h) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < num_points_; ++i)
        if (dot(h, point(i)) == 0) out.push_back(i);
    return out;
}

std::vector<ProjLine> ProjectiveSpace::lines_through_in_hyperplane(std::uint32_t c, const ProjPoint& h) const {
    const ProjPoint cp = point(c);
    if (dot(h, cp) != 0) throw Error(Errc::out_of_range, "point not on hyperplane");
    std::vector<ProjLine> out;
    std::vector<bool> seen(num_points_, false);
    seen[c] = true;
    for (auto x : points_on_hyperplane(h)) {
        if (seen[x]) continue;
        ProjLine l = line_through(c, x);
        for (auto y : points_on(l)) seen[y] = true;
        out.push_back(l);
    }
    return out;
}

std::vector<ProjPoint> conic_dual_lines(const Field& f) {
    if (f.q() < 3) throw Error(Errc::unsupported_field, "conic dual family needs q >= 3");
    ProjectiveSpace plane(f, 2);
    std::vector<ProjPoint> out;
    out.reserve(f.q() + 1);
    for (Elem t = 0; t < f.q(); ++t) out.push_back(plane.normalize(ProjPoint{t, f.mul(t, t), 1, 0}));
    out.push_back(ProjPoint{0, 1, 0, 0});
    return out;
}

std::uint32_t max_concurrency(const ProjectiveSpace& plane, const std::vector<ProjPoint>& lines) {
    std::uint32_t best = 0;
    for (std::uint32_t i = 0; i < plane.num_points(); ++i) {
        const ProjPoint x = plane.point(i);
        std::uint32_t c = 0;
        for (const auto& l : lines)
            if (plane.dot(l, x) == 0) ++c;
        best = std::max(best, c);
    }
    return best;
}

Projection project_from_point(const AffineSpace& space, PointIndex center) {
    if (space.n() != 3) throw Error(Errc::out_of_range, "projection needs AG(3,q)");
    Projection proj;
    proj.center = center;
    for (auto d : space.directions()) {
        const Point v = space.point(d);
        proj.image.push_back({space.canonical(center, d), ProjPoint{v[0], v[1], v[2], 0}});
    }
    return proj;
}

ProjPoint project_plane(const AffineSpace& space, const Plane& pl) {
    const Point v = space.point(pl.normal);
    return ProjPoint{v[0], v[1], v[2], 0};
}

}  // namespace ffgeom::geom

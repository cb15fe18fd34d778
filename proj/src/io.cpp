#include "ffgeom/io.hpp"

#include <atomic>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ffgeom/error.hpp"
#include "ffgeom/parallel.hpp"

namespace ffgeom {

namespace {
std::atomic<unsigned> g_workers{1};
}

void set_workers(unsigned n) { g_workers = n == 0 ? 1 : n; }
unsigned workers() { return g_workers; }

}  // namespace ffgeom

namespace ffgeom::io {

using gf::Elem;
using gf::Field;

namespace {

std::uint32_t parse_uint(std::string_view s) {
    if (s.empty() || s.size() > 9) throw Error(Errc::parse_error, "bad integer '" + std::string(s) + "'");
    std::uint32_t v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') throw Error(Errc::parse_error, "bad integer '" + std::string(s) + "'");
        v = v * 10 + static_cast<std::uint32_t>(c - '0');
    }
    return v;
}

struct Header {
    std::uint32_t q;
    unsigned n;
};

Header read_header(std::istream& in, std::string_view kind) {
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string q, n, k;
        if (!(ss >> q >> n >> k) || k != kind)
            throw Error(Errc::parse_error, "expected header 'q n " + std::string(kind) + "'");
        const Header h{parse_uint(q), parse_uint(n)};
        if (h.n < 2 || h.n > 3) throw Error(Errc::parse_error, "dimension must be 2 or 3");
        return h;
    }
    throw Error(Errc::parse_error, "missing header");
}

std::vector<std::string> row_tokens(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string t;
    while (ss >> t) out.push_back(t);
    return out;
}

}  // namespace

std::string format_element(const Field& f, Elem a) {
    if (f.k() == 1) return std::to_string(a);
    const auto d = f.digits(a);
    std::string out;
    for (std::size_t i = d.size(); i-- > 0;) {
        if (f.p() > 10 && i + 1 != d.size()) out += ':';
        out += std::to_string(d[i]);
    }
    return out;
}

Elem parse_element(const Field& f, std::string_view text) {
    if (f.k() == 1) {
        const auto v = parse_uint(text);
        if (v >= f.q()) throw Error(Errc::parse_error, "element out of range: " + std::string(text));
        return v;
    }
    std::vector<std::uint32_t> msd_first;
    if (f.p() <= 10) {
        for (char c : text) msd_first.push_back(parse_uint(std::string_view(&c, 1)));
    } else {
        std::size_t start = 0;
        while (true) {
            const auto colon = text.find(':', start);
            msd_first.push_back(parse_uint(text.substr(start, colon - start)));
            if (colon == std::string_view::npos) break;
            start = colon + 1;
        }
    }
    if (msd_first.size() != f.k()) throw Error(Errc::parse_error, "element needs " + std::to_string(f.k()) + " digits: " + std::string(text));
    for (auto d : msd_first)
        if (d >= f.p()) throw Error(Errc::parse_error, "digit out of range: " + std::string(text));
    std::vector<std::uint32_t> lsd(msd_first.rbegin(), msd_first.rend());
    return f.from_digits(lsd);
}

void write_points(std::ostream& out, const Field& f, const geom::PointSet& s) {
    geom::AffineSpace space(f, s.n());
    out << s.q() << ' ' << s.n() << " points\n";
    for (auto x : s.members()) {
        const auto p = space.point(x);
        for (unsigned i = 0; i < s.n(); ++i) out << (i ? " " : "") << format_element(f, p[i]);
        out << '\n';
    }
}

geom::PointSet read_points(std::istream& in) {
    const auto h = read_header(in, "points");
    const auto f = Field::of_order(h.q);
    geom::AffineSpace space(f, h.n);
    geom::PointSet s(h.q, h.n);
    std::string line;
    while (std::getline(in, line)) {
        const auto tok = row_tokens(line);
        if (tok.empty() || tok[0][0] == '#') continue;
        if (tok.size() != h.n) throw Error(Errc::parse_error, "point row needs " + std::to_string(h.n) + " coordinates");
        geom::Point p{0, 0, 0};
        for (unsigned i = 0; i < h.n; ++i) p[i] = parse_element(f, tok[i]);
        s.insert(space.index(p));
    }
    return s;
}

void write_lines(std::ostream& out, const geom::AffineSpace& space, const geom::LineFamily& l) {
    const auto& f = space.field();
    out << space.q() << ' ' << space.n() << " lines\n";
    for (const auto& ln : l) {
        const auto b = space.point(ln.base), d = space.point(ln.dir);
        for (unsigned i = 0; i < space.n(); ++i) out << (i ? " " : "") << format_element(f, b[i]);
        for (unsigned i = 0; i < space.n(); ++i) out << ' ' << format_element(f, d[i]);
        out << '\n';
    }
}

geom::LineFamily read_lines(std::istream& in) {
    const auto h = read_header(in, "lines");
    const auto f = Field::of_order(h.q);
    geom::AffineSpace space(f, h.n);
    std::vector<geom::Line> lines;
    std::string line;
    while (std::getline(in, line)) {
        const auto tok = row_tokens(line);
        if (tok.empty() || tok[0][0] == '#') continue;
        if (tok.size() != 2 * h.n) throw Error(Errc::parse_error, "line row needs " + std::to_string(2 * h.n) + " coordinates");
        geom::Point b{0, 0, 0}, d{0, 0, 0};
        for (unsigned i = 0; i < h.n; ++i) {
            b[i] = parse_element(f, tok[i]);
            d[i] = parse_element(f, tok[h.n + i]);
        }
        if (d == geom::Point{0, 0, 0}) throw Error(Errc::parse_error, "zero direction");
        lines.push_back(space.canonical(space.index(b), space.normalize_direction(d)));
    }
    return geom::LineFamily(space, std::move(lines));
}

void write_poly(std::ostream& out, const poly::MultiPoly& g) {
    const auto& b = g.basis();
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (g.coeff(i) == 0) continue;
        const auto& e = b.exponent(i);
        out << format_element(b.field(), g.coeff(i)) << ' ' << e[0] << ' ' << e[1] << ' ' << e[2] << '\n';
    }
}

poly::MultiPoly read_poly(std::istream& in, const poly::BasisPtr& basis) {
    poly::MultiPoly g(basis);
    const auto& f = basis->field();
    std::string line;
    while (std::getline(in, line)) {
        const auto tok = row_tokens(line);
        if (tok.empty() || tok[0][0] == '#') continue;
        if (tok.size() != 4) throw Error(Errc::parse_error, "monomial row must be 'coeff e1 e2 e3'");
        const poly::Exponent e{parse_uint(tok[1]), parse_uint(tok[2]), parse_uint(tok[3])};
        const auto idx = basis->index_of(e);
        if (!idx) throw Error(Errc::degree_cap_violated, "monomial " + tok[1] + " " + tok[2] + " " + tok[3] + " outside the basis");
        g.set_coeff(*idx, f.add(g.coeff(*idx), parse_element(f, tok[0])));
    }
    return g;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::parse_error, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::parse_error, "cannot write " + path);
    out << content;
}

}  // namespace ffgeom::io

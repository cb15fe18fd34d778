#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "ffgeom/geom.hpp"
#include "ffgeom/poly.hpp"

namespace ffgeom::io {

/// k == 1: decimal. k > 1: the k base-p digits, most significant first, concatenated when
/// p <= 10 and joined by ':' otherwise.
std::string format_element(const gf::Field& f, gf::Elem a);
gf::Elem parse_element(const gf::Field& f, std::string_view text);

/// Header `q n points`, then one row of n coordinates per member point, ascending.
void write_points(std::ostream& out, const gf::Field& f, const geom::PointSet& s);
geom::PointSet read_points(std::istream& in);

/// Header `q n lines`, then one row per line: n base coordinates followed by n direction
/// coordinates. Lines are canonicalized on read.
void write_lines(std::ostream& out, const geom::AffineSpace& space, const geom::LineFamily& l);
geom::LineFamily read_lines(std::istream& in);

/// One nonzero monomial per line, `coeff e1 e2 e3`, in basis order.
void write_poly(std::ostream& out, const poly::MultiPoly& g);
/// Throws Error(degree_cap_violated) for a monomial outside the basis.
poly::MultiPoly read_poly(std::istream& in, const poly::BasisPtr& basis);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace ffgeom::io

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace ffgeom {

using Rational = boost::rational<std::int64_t>;

/// Parses "3", "-2", "0.62", "7/4" exactly. Throws Error(parse_error).
Rational parse_rational(std::string_view text);

std::int64_t floor_of(const Rational& r);
std::int64_t ceil_of(const Rational& r);
double to_double(const Rational& r);
std::string to_string(const Rational& r);

/// Numbers of the form a + b * q^(-1/3) with rational a, b and a fixed integer q >= 2.
/// Every comparison is decided exactly by cubing.
class CubeRootSurd {
public:
    CubeRootSurd(Rational a, Rational b, std::int64_t q) : a_(a), b_(b), q_(q) {}

    const Rational& rational_part() const { return a_; }
    const Rational& surd_part() const { return b_; }
    std::int64_t base() const { return q_; }

    /// -1, 0 or +1.
    int sign() const;
    int compare(const Rational& other) const;
    CubeRootSurd operator+(const CubeRootSurd& o) const;
    CubeRootSurd operator-(const CubeRootSurd& o) const;
    CubeRootSurd operator*(const Rational& k) const;
    /// Largest integer strictly below the value.
    std::int64_t strict_floor() const;
    double approx() const;

private:
    Rational a_;
    Rational b_;
    std::int64_t q_;
};

/// Largest integer strictly less than x (i.e. ceil(x) - 1).
std::int64_t strict_floor(const Rational& x);

std::int64_t binomial(std::int64_t t, std::int64_t k);

}  // namespace ffgeom

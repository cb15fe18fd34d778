#include "ffgeom/error.hpp"
#include "ffgeom/rational.hpp"

#include <cmath>
#include <cstdlib>

#include <boost/multiprecision/cpp_int.hpp>

namespace ffgeom {

using boost::multiprecision::cpp_int;

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
    case Errc::non_prime: return "NonPrime";
    case Errc::degree_too_large: return "DegreeTooLarge";
    case Errc::no_irreducible_found: return "NoIrreducibleFound";
    case Errc::wrong_degree: return "WrongDegree";
    case Errc::unsupported_field: return "UnsupportedField";
    case Errc::sets_not_disjoint: return "SetsNotDisjoint";
    case Errc::infeasible_count: return "InfeasibleCount";
    case Errc::zero_polynomial: return "ZeroPolynomial";
    case Errc::degree_cap_violated: return "DegreeCapViolated";
    case Errc::even_field_unsupported: return "EvenFieldUnsupported";
    case Errc::retry_exhausted: return "RetryExhausted";
    case Errc::too_few_lines: return "TooFewLines";
    case Errc::too_few_planes: return "TooFewPlanes";
    case Errc::not_nikodym: return "NotNikodym";
    case Errc::assignment_not_injective: return "AssignmentNotInjective";
    case Errc::generator_infeasible: return "GeneratorInfeasible";
    case Errc::not_hermitian: return "NotHermitian";
    case Errc::non_square_field: return "NonSquareField";
    case Errc::alpha_out_of_range: return "AlphaOutOfRange";
    case Errc::field_too_large: return "FieldTooLarge";
    case Errc::out_of_range: return "OutOfRange";
    case Errc::mismatched_field: return "MismatchedField";
    case Errc::parse_error: return "ParseError";
    case Errc::internal: return "InternalError";
    }
    return "Unknown";
}

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
    if (s.empty()) throw Error(Errc::parse_error, "bad number '" + std::string(whole) + "'");
    std::int64_t v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') throw Error(Errc::parse_error, "bad number '" + std::string(whole) + "'");
        v = v * 10 + (c - '0');
        if (v > (std::int64_t{1} << 50)) throw Error(Errc::parse_error, "number too large '" + std::string(whole) + "'");
    }
    return v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    Rational r;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        auto den = parse_int(s.substr(slash + 1), text);
        if (den == 0) throw Error(Errc::parse_error, "zero denominator in '" + std::string(text) + "'");
        r = Rational(parse_int(s.substr(0, slash), text), den);
    } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
        auto ip = s.substr(0, dot);
        auto fp = s.substr(dot + 1);
        if (fp.size() > 12) throw Error(Errc::parse_error, "too many decimals in '" + std::string(text) + "'");
        std::int64_t scale = 1;
        for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
        std::int64_t whole = ip.empty() ? 0 : parse_int(ip, text);
        std::int64_t frac = fp.empty() ? 0 : parse_int(fp, text);
        if (ip.empty() && fp.empty()) throw Error(Errc::parse_error, "bad number '" + std::string(text) + "'");
        r = Rational(whole * scale + frac, scale);
    } else {
        r = Rational(parse_int(s, text));
    }
    return negative ? -r : r;
}

std::int64_t floor_of(const Rational& r) {
    auto n = r.numerator();
    auto d = r.denominator();  // always positive
    auto q = n / d;
    if (n % d != 0 && n < 0) --q;
    return q;
}

std::int64_t ceil_of(const Rational& r) { return -floor_of(-r); }

std::int64_t strict_floor(const Rational& x) { return ceil_of(x) - 1; }

double to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

std::string to_string(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::int64_t binomial(std::int64_t t, std::int64_t k) {
    if (k < 0 || t < k) return 0;
    if (k > t - k) k = t - k;
    std::int64_t r = 1;
    for (std::int64_t i = 1; i <= k; ++i) r = r * (t - k + i) / i;
    return r;
}

int CubeRootSurd::sign() const {
    const int sa = a_ > 0 ? 1 : (a_ < 0 ? -1 : 0);
    const int sb = b_ > 0 ? 1 : (b_ < 0 ? -1 : 0);
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb ? sb : sa;
    // opposite signs: compare |a|^3 * q with |b|^3
    cpp_int an = abs(a_.numerator()), ad = a_.denominator();
    cpp_int bn = abs(b_.numerator()), bd = b_.denominator();
    cpp_int lhs = an * an * an * bd * bd * bd * q_;
    cpp_int rhs = bn * bn * bn * ad * ad * ad;
    if (lhs > rhs) return sa;
    if (lhs < rhs) return sb;
    return 0;
}

int CubeRootSurd::compare(const Rational& other) const {
    return CubeRootSurd(a_ - other, b_, q_).sign();
}

CubeRootSurd CubeRootSurd::operator+(const CubeRootSurd& o) const {
    return CubeRootSurd(a_ + o.a_, b_ + o.b_, q_);
}

CubeRootSurd CubeRootSurd::operator-(const CubeRootSurd& o) const {
    return CubeRootSurd(a_ - o.a_, b_ - o.b_, q_);
}

CubeRootSurd CubeRootSurd::operator*(const Rational& k) const {
    return CubeRootSurd(a_ * k, b_ * k, q_);
}

std::int64_t CubeRootSurd::strict_floor() const {
    auto k = static_cast<std::int64_t>(std::floor(approx()));
    while (compare(Rational(k)) <= 0) --k;
    while (compare(Rational(k + 1)) > 0) ++k;
    return k;
}

double CubeRootSurd::approx() const {
    return to_double(a_) + to_double(b_) * std::pow(static_cast<double>(q_), -1.0 / 3.0);
}

}  // namespace ffgeom

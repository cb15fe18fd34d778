#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ffgeom {

enum class Errc {
    non_prime,
    degree_too_large,
    no_irreducible_found,
    wrong_degree,
    unsupported_field,
    sets_not_disjoint,
    infeasible_count,
    zero_polynomial,
    degree_cap_violated,
    even_field_unsupported,
    retry_exhausted,
    too_few_lines,
    too_few_planes,
    not_nikodym,
    assignment_not_injective,
    generator_infeasible,
    not_hermitian,
    non_square_field,
    alpha_out_of_range,
    field_too_large,
    out_of_range,
    mismatched_field,
    parse_error,
    internal,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace ffgeom

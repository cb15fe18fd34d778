#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ffgeom::gf {

/// Canonical element encoding: sum c_i p^i for the residue sum c_i x^i modulo the field modulus.
/// 0 and 1 are the additive and multiplicative identities; elements of the prime subfield
/// are exactly the values below p.
using Elem = std::uint32_t;

bool is_prime(std::uint64_t n);

/// Prime factors of n without repetition, ascending.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

/// Exact arithmetic in GF(p^k) for prime p, 1 <= k <= 4 and p^k <= 2^20.
/// Immutable after construction; every method is a pure function of its operands.
class Field {
public:
    static constexpr std::uint32_t max_order = 1u << 20;
    static constexpr unsigned max_degree = 4;

    /// Throws Error(non_prime | degree_too_large).
    static Field make(std::uint32_t p, unsigned k);

    /// Field of order q, which must be a prime power within the supported range.
    /// Throws Error(unsupported_field) otherwise.
    static Field of_order(std::uint32_t q);

    std::uint32_t p() const { return p_; }
    unsigned k() const { return k_; }
    std::uint32_t q() const { return q_; }
    std::uint32_t order() const { return q_; }

    /// Monic modulus, coefficients c_0 .. c_k (c_k == 1). For k == 1 this is x.
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }
    Elem generator() const { return generator_; }

    Elem add(Elem a, Elem b) const {
        if (k_ == 1) {
            Elem s = a + b;
            return s >= p_ ? s - p_ : s;
        }
        if (p_ == 2) return a ^ b;
        if (!add_table_.empty()) return add_table_[a * q_ + b];
        return add_digits(a, b);
    }
    Elem neg(Elem a) const { return neg_[a]; }
    Elem sub(Elem a, Elem b) const { return add(a, neg_[b]); }
    Elem mul(Elem a, Elem b) const {
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    }
    /// Throws Error(out_of_range) for a == 0.
    Elem inv(Elem a) const;
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
    Elem pow(Elem a, std::uint64_t e) const;

    /// Image of an integer under Z -> GF(p).
    Elem from_int(std::int64_t v) const;

    /// x -> x^p, an automorphism for every k.
    Elem frobenius(Elem a) const {
        if (a == 0) return 0;
        return exp_[(static_cast<std::uint64_t>(log_[a]) * p_) % (q_ - 1)];
    }
    /// Involutive conjugation of GF(p^2). Throws Error(wrong_degree) unless k == 2.
    Elem conjugate(Elem a) const;

    bool is_square(Elem a) const;
    /// Discrete logarithm to the base generator(); a != 0.
    std::uint32_t log(Elem a) const { return log_[a]; }

    std::vector<std::uint32_t> digits(Elem a) const;
    Elem from_digits(std::span<const std::uint32_t> digits) const;

    /// Schoolbook product reduced by the modulus, independent of the log tables.
    Elem mul_reference(Elem a, Elem b) const;

    bool operator==(const Field& o) const { return p_ == o.p_ && k_ == o.k_; }

private:
    Field() = default;
    Elem add_digits(Elem a, Elem b) const;

    std::uint32_t p_ = 0;
    unsigned k_ = 0;
    std::uint32_t q_ = 0;
    std::vector<std::uint32_t> modulus_;
    Elem generator_ = 0;
    std::vector<std::uint32_t> log_;
    std::vector<Elem> exp_;
    std::vector<Elem> neg_;
    std::vector<Elem> add_table_;
};

}  // namespace ffgeom::gf
